#include "doctest.h"
#include "jia/conflict.h"
#include "jia/error.h"

using namespace jia;

namespace {

Lexicons test_lexicons() {
  Lexicons lex;
  lex.polarity = PolarityLexicon({"indeed", "really"}, {"no", "not", "never"});
  lex.aux.first_person = {"i", "me", "my"};
  lex.aux.third_person = {"he", "him", "his", "she", "her"};
  lex.aux.positive_emotion_triggers = {"harmonious", "got along well"};
  lex.aux.marriage_order = {{"first marriage", MarriageOrder::kFirstMarriage},
                            {"remarried", MarriageOrder::kRemarriage}};
  return lex;
}

EventMention mention(EventType type, Party party, const std::string& trigger,
                     std::map<std::string, std::string> roles = {}) {
  EventMention m;
  m.case_id = "c";
  m.doc_id = party == Party::kPlaintiff ? "c-p" : "c-d";
  m.party = party;
  m.type = type;
  m.trigger = {0, 1, trigger};
  std::size_t pos = 2;
  for (auto& [role, text] : roles) {
    m.roles[role].push_back({pos, pos + 1, text});
    pos += 2;
  }
  return m;
}

AlignedPair pair_of(EventMention l, EventMention r) {
  AlignedPair p;
  p.left = std::move(l);
  p.right = std::move(r);
  p.basis = LabelSchema::Default().info(p.left.type).unique
                ? AlignBasis::kUniqueType
                : AlignBasis::kKeyAttributes;
  return p;
}

constexpr Party P = Party::kPlaintiff;
constexpr Party D = Party::kDefendant;
using E = EventType;

}  // namespace

TEST_CASE("classify_pair examples") {
  auto lex = test_lexicons();
  AlignContext ctx{lex};
  auto know = classify_pair(
      pair_of(mention(E::kKnow, P, "met", {{"Time", "2001"}, {"Polarity", "indeed"}}),
              mention(E::kKnow, D, "met", {{"Time", "2001"}, {"Polarity", "really"}})),
      ctx);
  CHECK(know.label == Verdict::kEntailment);
  CHECK(know.reasons.empty());

  auto sep = classify_pair(
      pair_of(mention(E::kSeparation, P, "separated", {{"Begin-Time", "2015-01"}}),
              mention(E::kSeparation, D, "separated", {{"Begin-Time", "2015-06"}})),
      ctx);
  CHECK(sep.label == Verdict::kContradictory);
  REQUIRE(sep.reasons.size() == 1);
  CHECK(sep.reasons[0] == Mismatch{"Begin-Time", "2015-01", "2015-06"});

  auto wealth = classify_pair(
      pair_of(mention(E::kWealth, P, "house", {{"Is-Common", "common"}}),
              mention(E::kWealth, D, "house", {{"Is-Personal", "personal"}})),
      ctx);
  CHECK(wealth.label == Verdict::kContradictory);
  CHECK(wealth.reasons[0].attribute == "Ownership");

  auto owners = classify_pair(
      pair_of(mention(E::kWealth, P, "house",
                      {{"Is-Personal", "personal"}, {"Whose", "my"}}),
              mention(E::kWealth, D, "house",
                      {{"Is-Personal", "personal"}, {"Whose", "my"}})),
      ctx);
  CHECK(owners.label == Verdict::kContradictory);
  CHECK(owners.reasons[0].attribute == "Whose");
}

TEST_CASE("polarity contradiction needs two resolved values") {
  auto lex = test_lexicons();
  AlignContext ctx{lex};
  auto plain = mention(E::kDerailed, P, "lived together", {{"Derailed-Person", "he"}});
  auto denied = mention(E::kDerailed, D, "improper relationship",
                        {{"Derailed-Person", "I"}, {"Polarity", "no"}});
  CHECK(classify_pair(pair_of(plain, denied), ctx).label == Verdict::kEntailment);
  auto asserted = plain;
  asserted.roles["Polarity"] = {{5, 6, "indeed"}};
  auto v = classify_pair(pair_of(asserted, denied), ctx);
  CHECK(v.label == Verdict::kContradictory);
  CHECK(v.reasons == std::vector<Mismatch>{{"Polarity", "positive", "negative"}});
}

TEST_CASE("trigger meaning rules") {
  auto lex = test_lexicons();
  AlignContext ctx{lex};
  CHECK(classify_pair(pair_of(mention(E::kFamilyConflict, P, "harmonious"),
                              mention(E::kFamilyConflict, D, "inharmonious")),
                      ctx)
            .label == Verdict::kContradictory);
  CHECK(classify_pair(pair_of(mention(E::kFamilyConflict, P, "quarreled"),
                              mention(E::kFamilyConflict, D, "quarrel")),
                      ctx)
            .label == Verdict::kEntailment);
  CHECK(classify_pair(pair_of(mention(E::kRemarry, P, "remarried"),
                              mention(E::kRemarry, D, "first marriage")),
                      ctx)
            .label == Verdict::kContradictory);
}

TEST_CASE("preconditions") {
  auto lex = test_lexicons();
  AlignContext ctx{lex};
  CHECK_THROWS_AS(classify_pair(pair_of(mention(E::kKnow, P, "met"),
                                        mention(E::kBeInLove, D, "dating")),
                                ctx),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      classify_pair(pair_of(mention(E::kKnow, P, "met"), mention(E::kKnow, P, "met")),
                    ctx),
      std::invalid_argument);
  CHECK_THROWS_AS(
      classify_pair(pair_of(mention(E::kMarry, P, "married", {{"Time", "2001"}}),
                            mention(E::kMarry, D, "married", {{"Time", "2002"}})),
                    ctx),
      std::invalid_argument);
}

TEST_CASE("every type is handled and classification is symmetric") {
  auto lex = test_lexicons();
  AlignContext ctx{lex};
  const auto& schema = LabelSchema::Default();
  for (const auto& info : schema.event_types()) {
    std::map<std::string, std::string> a, b;
    for (const auto& role : info.roles) {
      a[role] = role == "Polarity" ? "indeed" : "x";
      b[role] = role == "Polarity" ? "not" : "x";
    }
    auto l = mention(info.type, P, "t", a);
    auto r = mention(info.type, D, "t", b);
    auto v = classify_pair(pair_of(l, r), ctx);
    CHECK(v.label == Verdict::kContradictory);
    auto swapped = classify_pair(pair_of(r, l), ctx);
    CHECK(swapped.label == v.label);
    r.roles["Polarity"] = {{9, 10, "really"}};
    CHECK(classify_pair(pair_of(l, r), ctx).label == Verdict::kEntailment);
  }
}

TEST_CASE("detect_disputes counts") {
  auto lex = test_lexicons();
  AlignContext ctx{lex};
  std::vector<EventMention> ms = {
      // Contradictory: Know time, Debt value, Divorce-Lawsuit court.
      mention(E::kKnow, P, "met", {{"Time", "2001"}}),
      mention(E::kKnow, D, "met", {{"Time", "2002"}}),
      mention(E::kDebt, P, "borrowed", {{"Debtor", "he"}, {"Value", "5000 yuan"}}),
      mention(E::kDebt, D, "borrowed", {{"Debtor", "I"}, {"Value", "3000 yuan"}}),
      mention(E::kDivorceLawsuit, P, "sued", {{"Sue-Time", "2010"}, {"Court", "Haidian court"}}),
      mention(E::kDivorceLawsuit, D, "sued", {{"Sue-Time", "2010"}, {"Court", "Chaoyang court"}}),
      // Entailed: Marry, Bad-Habit.
      mention(E::kMarry, P, "married", {{"Time", "2003"}}),
      mention(E::kMarry, D, "married", {{"Time", "2003"}}),
      mention(E::kBadHabit, P, "gambling", {{"Participant", "he"}}),
      mention(E::kBadHabit, D, "gambling", {{"Participant", "I"}}),
      // Unaligned.
      mention(E::kDomesticViolence, P, "beat", {{"Time", "2004"}}),
  };
  auto report = detect_disputes("c", ms, ctx);
  CHECK(report.contradiction_count() == 3);
  CHECK(report.entailment_count() == 2);
  CHECK(report.sections.size() == 6);

  auto none = detect_disputes("c", {mention(E::kKnow, P, "met")}, ctx);
  CHECK(none.pair_count() == 0);

  auto json = reports_to_json({report});
  CHECK(json.find("JIA-REPORT v1") != std::string::npos);
  auto recs = parse_report_json(json);
  CHECK(recs.size() == 5);
  std::size_t conflicts = 0;
  for (const auto& r : recs) conflicts += r.label == Verdict::kContradictory;
  CHECK(conflicts == 3);
  auto text = reports_to_text({report});
  std::size_t flagged = 0;
  for (auto p = text.find("CONFLICT"); p != std::string::npos;
       p = text.find("CONFLICT", p + 1)) {
    ++flagged;
  }
  CHECK(flagged == 3);
  CHECK_THROWS_AS(parse_report_json("{}"), ValidationError);
}

TEST_CASE("detect_all groups by case") {
  auto lex = test_lexicons();
  AlignContext ctx{lex};
  auto a = mention(E::kKnow, P, "met");
  auto b = mention(E::kKnow, D, "met");
  auto c = a;
  c.case_id = "other";
  auto reports = detect_all({a, c, b}, ctx);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].case_id == "c");
  CHECK(reports[0].pair_count() == 1);
  CHECK(reports[1].pair_count() == 0);
}
