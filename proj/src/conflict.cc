#include "jia/conflict.h"

#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "jia/error.h"

namespace jia {

namespace {

const LabelSchema& schema() { return LabelSchema::Default(); }

std::string_view polarity_name(Polarity p) {
  switch (p) {
    case Polarity::kPositive: return "positive";
    case Polarity::kNegative: return "negative";
    case Polarity::kUnknown: break;
  }
  return "unknown";
}

std::string_view order_name(MarriageOrder o) {
  switch (o) {
    case MarriageOrder::kFirstMarriage: return "first marriage";
    case MarriageOrder::kRemarriage: return "remarriage";
    case MarriageOrder::kUnknown: break;
  }
  return "unknown";
}

// Wealth ownership stance from the presence of Is-Common / Is-Personal.
enum class Ownership { kCommon, kPersonal, kUnknown };

Ownership ownership_of(const EventMention& m) {
  bool common = m.has_role("Is-Common");
  bool personal = m.has_role("Is-Personal");
  if (common == personal) return Ownership::kUnknown;
  return common ? Ownership::kCommon : Ownership::kPersonal;
}

std::string_view ownership_name(Ownership o) {
  switch (o) {
    case Ownership::kCommon: return "common";
    case Ownership::kPersonal: return "personal";
    case Ownership::kUnknown: break;
  }
  return "unknown";
}

class Comparer {
 public:
  Comparer(const AlignedPair& pair, const AlignContext& ctx)
      : pair_(pair), ctx_(ctx) {}

  void role(const std::string& name) {
    auto a = attribute_of(pair_.left, name);
    auto b = attribute_of(pair_.right, name);
    if (!attribute_equal(attribute_kind(pair_.left.type, name), a, b, ctx_)) {
      reasons_.push_back({name, a.joined(), b.joined()});
    }
  }

  void polarity() {
    const auto& lex = ctx_.lexicons.polarity;
    Polarity a = mention_polarity(pair_.left, lex);
    Polarity b = mention_polarity(pair_.right, lex);
    if (a != Polarity::kUnknown && b != Polarity::kUnknown && a != b) {
      reasons_.push_back({"Polarity", std::string(polarity_name(a)),
                          std::string(polarity_name(b))});
    }
  }

  void aspect(const std::string& name, std::string_view a, std::string_view b,
              bool differs) {
    if (differs) reasons_.push_back({name, std::string(a), std::string(b)});
  }

  std::vector<Mismatch> take() { return std::move(reasons_); }

 private:
  const AlignedPair& pair_;
  const AlignContext& ctx_;
  std::vector<Mismatch> reasons_;
};

}  // namespace

std::string_view verdict_name(Verdict v) {
  return v == Verdict::kContradictory ? "Contradictory" : "Entailment";
}

Polarity mention_polarity(const EventMention& m, const PolarityLexicon& lex) {
  if (!m.has_role("Polarity")) return Polarity::kUnknown;
  return lex.polarity_of_text(m.role_text("Polarity"));
}

PairVerdict classify_pair(const AlignedPair& pair, const AlignContext& ctx) {
  const EventMention& l = pair.left;
  const EventMention& r = pair.right;
  if (l.type != r.type) throw std::invalid_argument("pair mixes event types");
  if (l.party == r.party) throw std::invalid_argument("pair from one party");
  if (!co_referent(l, r, ctx)) {
    throw std::invalid_argument("non-unique pair is not aligned");
  }
  const auto& aux = ctx.lexicons.aux;
  Comparer c(pair, ctx);
  using E = EventType;
  switch (l.type) {
    case E::kKnow:
    case E::kBeInLove:
      c.role("Time");
      c.polarity();
      break;
    case E::kMarry:
    case E::kDomesticViolence:
    case E::kBadHabit:
    case E::kDerailed:
      c.polarity();
      break;
    case E::kRemarry: {
      c.polarity();
      auto a = aux.marriage_order_of(l.trigger.text);
      auto b = aux.marriage_order_of(r.trigger.text);
      c.aspect("Trigger", order_name(a), order_name(b),
               a != MarriageOrder::kUnknown && b != MarriageOrder::kUnknown &&
                   a != b);
      break;
    }
    case E::kBeBorn:
      c.role("Time");
      c.role("Gender");
      c.role("Age");
      c.polarity();
      break;
    case E::kFamilyConflict: {
      bool a = aux.is_positive_emotion(l.trigger.text);
      bool b = aux.is_positive_emotion(r.trigger.text);
      c.aspect("Trigger", a ? "positive" : "negative", b ? "positive" : "negative",
               a != b);
      c.polarity();
      break;
    }
    case E::kSeparation:
      c.role("Begin-Time");
      c.role("End-Time");
      c.polarity();
      break;
    case E::kDivorceLawsuit:
      c.role("Court");
      c.role("Sentence-Time");
      c.role("Court-Verdict");
      c.role("Result");
      c.polarity();
      break;
    case E::kWealth: {
      Ownership a = ownership_of(l);
      Ownership b = ownership_of(r);
      c.aspect("Ownership", ownership_name(a), ownership_name(b),
               a != Ownership::kUnknown && b != Ownership::kUnknown && a != b);
      if (a == Ownership::kPersonal && b == Ownership::kPersonal) c.role("Whose");
      c.role("Value");
      c.polarity();
      break;
    }
    case E::kDebt:
      c.role("Value");
      c.polarity();
      break;
  }
  PairVerdict v;
  v.pair = pair;
  v.reasons = c.take();
  v.label = v.reasons.empty() ? Verdict::kEntailment : Verdict::kContradictory;
  return v;
}

std::size_t DisputeReport::pair_count() const {
  std::size_t n = 0;
  for (const auto& s : sections) n += s.verdicts.size();
  return n;
}

std::size_t DisputeReport::contradiction_count() const {
  std::size_t n = 0;
  for (const auto& s : sections) {
    for (const auto& v : s.verdicts) n += v.label == Verdict::kContradictory;
  }
  return n;
}

std::size_t DisputeReport::entailment_count() const {
  return pair_count() - contradiction_count();
}

DisputeReport detect_disputes(const std::string& case_id,
                              const std::vector<EventMention>& mentions,
                              const AlignContext& ctx) {
  DisputeReport report;
  report.case_id = case_id;
  for (const auto& info : schema().event_types()) {
    TypeSection sec;
    sec.type = info.type;
    for (const auto& m : mentions) {
      if (m.case_id != case_id || m.type != info.type) continue;
      (m.party == Party::kPlaintiff ? sec.plaintiff : sec.defendant).push_back(m);
    }
    if (sec.plaintiff.empty() && sec.defendant.empty()) continue;
    for (const auto& pair : align_events(sec.plaintiff, sec.defendant, ctx)) {
      sec.verdicts.push_back(classify_pair(pair, ctx));
    }
    report.sections.push_back(std::move(sec));
  }
  return report;
}

std::vector<DisputeReport> detect_all(const std::vector<EventMention>& mentions,
                                      const AlignContext& ctx) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const auto& m : mentions) {
    if (seen.insert(m.case_id).second) order.push_back(m.case_id);
  }
  std::vector<DisputeReport> out;
  for (const auto& id : order) out.push_back(detect_disputes(id, mentions, ctx));
  return out;
}

namespace {

using nlohmann::json;

json mention_json(const EventMention& m) {
  json roles = json::object();
  for (const auto& [role, spans] : m.roles) {
    json arr = json::array();
    for (const auto& s : spans) arr.push_back(s.text);
    roles[role] = arr;
  }
  return json{{"doc_id", m.doc_id},
              {"sentence", m.sentence},
              {"trigger", m.trigger.text},
              {"roles", roles}};
}

std::string mention_text(const EventMention& m) {
  std::string out = "\"" + m.trigger.text + "\"";
  for (const auto& [role, spans] : m.roles) {
    out += " " + role + "=";
    std::string joined;
    for (const auto& s : spans) joined += (joined.empty() ? "" : " ") + s.text;
    out += joined;
  }
  return out;
}

}  // namespace

std::string reports_to_json(const std::vector<DisputeReport>& reports) {
  json cases = json::array();
  std::size_t pairs = 0;
  std::size_t conflicts = 0;
  for (const auto& r : reports) {
    json sections = json::array();
    for (const auto& s : r.sections) {
      json pl = json::array();
      json df = json::array();
      for (const auto& m : s.plaintiff) pl.push_back(mention_json(m));
      for (const auto& m : s.defendant) df.push_back(mention_json(m));
      json verdicts = json::array();
      for (const auto& v : s.verdicts) {
        json reasons = json::array();
        for (const auto& x : v.reasons) {
          reasons.push_back(
              {{"attribute", x.attribute}, {"plaintiff", x.left}, {"defendant", x.right}});
        }
        verdicts.push_back({{"plaintiff", v.pair.left_index},
                            {"defendant", v.pair.right_index},
                            {"basis", std::string(basis_name(v.pair.basis))},
                            {"label", std::string(verdict_name(v.label))},
                            {"reasons", reasons}});
      }
      sections.push_back({{"type", schema().info(s.type).abbr},
                          {"plaintiff", pl},
                          {"defendant", df},
                          {"verdicts", verdicts}});
    }
    pairs += r.pair_count();
    conflicts += r.contradiction_count();
    cases.push_back({{"case_id", r.case_id},
                     {"sections", sections},
                     {"summary",
                      {{"pairs", r.pair_count()},
                       {"contradictory", r.contradiction_count()},
                       {"entailment", r.entailment_count()}}}});
  }
  json doc = {{"format", "JIA-REPORT v1"},
              {"cases", cases},
              {"summary",
               {{"cases", reports.size()},
                {"pairs", pairs},
                {"contradictory", conflicts},
                {"entailment", pairs - conflicts}}}};
  return doc.dump(2) + "\n";
}

std::string reports_to_text(const std::vector<DisputeReport>& reports) {
  std::ostringstream out;
  out << "JIA-REPORT v1\n";
  for (const auto& r : reports) {
    out << "\ncase " << r.case_id << ": " << r.pair_count() << " aligned pairs, "
        << r.contradiction_count() << " contradictory\n";
    for (const auto& s : r.sections) {
      const auto& info = schema().info(s.type);
      out << "  " << info.display_name << " (plaintiff " << s.plaintiff.size()
          << ", defendant " << s.defendant.size() << ")\n";
      for (const auto& v : s.verdicts) {
        out << "    " << (v.label == Verdict::kContradictory ? "CONFLICT  " : "entailed  ")
            << "P: " << mention_text(v.pair.left) << " | D: "
            << mention_text(v.pair.right) << "\n";
        for (const auto& x : v.reasons) {
          out << "      " << x.attribute << ": \"" << x.left << "\" vs \"" << x.right
              << "\"\n";
        }
      }
    }
  }
  return out.str();
}

std::vector<VerdictRecord> parse_report_json(std::string_view text) {
  std::vector<VerdictRecord> out;
  try {
    json doc = json::parse(text);
    if (doc.value("format", "") != "JIA-REPORT v1") {
      throw ValidationError("not a JIA-REPORT v1 document");
    }
    for (const auto& c : doc.at("cases")) {
      std::string id = c.at("case_id").get<std::string>();
      for (const auto& s : c.at("sections")) {
        auto type = schema().event_by_abbr(s.at("type").get<std::string>());
        if (!type) throw ValidationError("unknown event type in report");
        for (const auto& v : s.at("verdicts")) {
          VerdictRecord rec;
          rec.case_id = id;
          rec.type = *type;
          rec.left_index = v.at("plaintiff").get<std::size_t>();
          rec.right_index = v.at("defendant").get<std::size_t>();
          rec.label = v.at("label").get<std::string>() == "Contradictory"
                          ? Verdict::kContradictory
                          : Verdict::kEntailment;
          out.push_back(rec);
        }
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("report: ") + e.what());
  }
  return out;
}

}  // namespace jia
