#include "jia/align.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>
#include <regex>
#include <set>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

namespace jia {

namespace {

const LabelSchema& schema() { return LabelSchema::Default(); }

constexpr std::array<std::string_view, 12> kMonths = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::optional<int> month_number(const std::string& word) {
  for (std::size_t i = 0; i < kMonths.size(); ++i) {
    if (word == kMonths[i] || (word.size() >= 3 && kMonths[i].starts_with(word) &&
                               word.size() <= kMonths[i].size())) {
      return static_cast<int>(i) + 1;
    }
  }
  return std::nullopt;
}

std::optional<NormalizedTime> checked(int y, std::optional<int> m,
                                      std::optional<int> d) {
  if (m && (*m < 1 || *m > 12)) return std::nullopt;
  if (d && (!m || *d < 1 || *d > 31)) return std::nullopt;
  return NormalizedTime{y, m, d};
}

std::u32string code_points(std::string_view s) {
  std::u32string out;
  for (std::size_t i = 0; i < s.size();) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3
                                                   : (c >> 3) == 0x1E ? 4 : 1;
    len = std::min(len, s.size() - i);
    char32_t cp = len == 1 ? c : c & (0xFF >> (len + 1));
    for (std::size_t k = 1; k < len; ++k) {
      cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

using Day = std::tuple<int, int, int>;

Day lower_bound_of(const NormalizedTime& t) {
  return {*t.year, t.month.value_or(1), t.day.value_or(1)};
}

Day upper_bound_of(const NormalizedTime& t) {
  return {*t.year, t.month.value_or(12), t.day.value_or(31)};
}

bool parties_only(EventType type, std::string_view role) {
  using E = EventType;
  if (role == "Participant") return true;  // K, BIL, R, BH
  if (type == E::kDerailed && role == "Derailed-Person") return true;
  if (type == E::kDivorceLawsuit && role == "Initiator") return true;
  if (type == E::kWealth && role == "Whose") return true;
  return false;
}

std::set<NormalizedParticipant> participant_set(const AttributeValue& v,
                                                const AuxLexicons& aux) {
  std::set<NormalizedParticipant> out;
  for (const auto& s : v.spans) out.insert(normalize_participant(s, v.speaker, aux));
  return out;
}

}  // namespace

std::optional<NormalizedTime> parse_time(std::string_view text) {
  std::string s = lower(text);
  // Tokenized text may carry spaces around separators and stray commas.
  s = std::regex_replace(s, std::regex(R"(\s*([-/.]|年|月|日)\s*)"), "$1");
  s = std::regex_replace(s, std::regex(R"(\s*,\s*)"), " ");
  s = std::regex_replace(s, std::regex(R"(^\s+|\s+$)"), "");
  std::smatch m;
  auto num = [&](std::size_t i) -> std::optional<int> {
    if (!m[i].matched) return std::nullopt;
    return std::stoi(m[i].str());
  };
  static const std::regex numeric(R"(^(\d{4})(?:[-/.](\d{1,2})(?:[-/.](\d{1,2}))?)?$)");
  static const std::regex cjk(R"(^(\d{4})年(?:(\d{1,2})月(?:(\d{1,2})日)?)?$)");
  static const std::regex month_first(R"(^([a-z]+)\.?(?:\s+(\d{1,2}))?\s+(\d{4})$)");
  static const std::regex day_first(R"(^(\d{1,2})\s+([a-z]+)\.?\s+(\d{4})$)");
  if (std::regex_match(s, m, numeric) || std::regex_match(s, m, cjk)) {
    return checked(*num(1), num(2), num(3));
  }
  if (std::regex_match(s, m, month_first)) {
    auto month = month_number(m[1].str());
    if (!month) return std::nullopt;
    return checked(*num(3), month, num(2));
  }
  if (std::regex_match(s, m, day_first)) {
    auto month = month_number(m[2].str());
    if (!month) return std::nullopt;
    return checked(*num(3), month, num(1));
  }
  return std::nullopt;
}

bool time_equal(std::string_view a, std::string_view b) {
  auto ta = parse_time(a);
  auto tb = parse_time(b);
  if (!ta || !tb) return a == b;
  auto same = [](const std::optional<int>& x, const std::optional<int>& y) {
    return !x || !y || *x == *y;
  };
  return same(ta->year, tb->year) && same(ta->month, tb->month) &&
         same(ta->day, tb->day);
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::u32string x = code_points(a);
  std::u32string y = code_points(b);
  std::vector<std::size_t> row(y.size() + 1);
  for (std::size_t j = 0; j <= y.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diag + (x[i - 1] == y[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[y.size()];
}

double normalized_similarity(std::string_view a, std::string_view b) {
  std::size_t n = std::max(code_points(a).size(), code_points(b).size());
  if (n == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(n);
}

NormalizedParticipant normalize_participant(std::string_view text, Party speaker,
                                            const AuxLexicons& aux) {
  using K = NormalizedParticipant::Kind;
  std::string low = lower(text);
  auto p = low.find("plaintiff");
  auto d = low.find("defendant");
  if (p != std::string::npos || d != std::string::npos) {
    return {p < d ? K::kPlaintiff : K::kDefendant, {}};
  }
  auto as_kind = [](Party party) {
    return party == Party::kPlaintiff ? K::kPlaintiff : K::kDefendant;
  };
  for (const auto& tok : split_phrase(low)) {
    if (aux.first_person.contains(tok)) return {as_kind(speaker), {}};
    if (aux.third_person.contains(tok)) return {as_kind(opposite(speaker)), {}};
  }
  return {K::kOther, std::string(text)};
}

AttributeKind attribute_kind(EventType type, std::string_view role) {
  if (role == kTriggerAttribute) {
    switch (type) {
      case EventType::kFamilyConflict: return AttributeKind::kFamilyConflictTrigger;
      case EventType::kWealth: return AttributeKind::kWealthTrigger;
      case EventType::kBadHabit: return AttributeKind::kBadHabitTrigger;
      default: return AttributeKind::kText;
    }
  }
  if (!schema().has_role(type, role)) {
    throw std::invalid_argument("no attribute " + std::string(role) + " for " +
                                schema().info(type).display_name);
  }
  const std::string& transition = schema().role_to_transition(type, role);
  if (transition == "Time") return AttributeKind::kTime;
  if (transition == "Person") {
    return parties_only(type, role) ? AttributeKind::kPartiesParticipant
                                    : AttributeKind::kOpenParticipant;
  }
  return AttributeKind::kText;
}

std::string AttributeValue::joined() const {
  std::string out;
  for (const auto& s : spans) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

AttributeValue attribute_of(const EventMention& m, std::string_view role) {
  AttributeValue v;
  v.speaker = m.party;
  if (role == kTriggerAttribute) {
    v.spans.push_back(m.trigger.text);
    return v;
  }
  auto it = m.roles.find(std::string(role));
  if (it != m.roles.end()) {
    for (const auto& s : it->second) v.spans.push_back(s.text);
  }
  return v;
}

bool attribute_equal(AttributeKind kind, const AttributeValue& a,
                     const AttributeValue& b, const AlignContext& ctx) {
  if (a.absent() || b.absent()) return true;
  const auto& aux = ctx.lexicons.aux;
  switch (kind) {
    case AttributeKind::kTime:
      return time_equal(a.joined(), b.joined());
    case AttributeKind::kFamilyConflictTrigger:
      return normalized_similarity(a.joined(), b.joined()) >=
             ctx.family_conflict_threshold;
    case AttributeKind::kWealthTrigger:
      return normalized_similarity(a.joined(), b.joined()) >= ctx.wealth_threshold;
    case AttributeKind::kBadHabitTrigger: {
      auto ca = aux.habit_category_of(a.joined());
      auto cb = aux.habit_category_of(b.joined());
      if (ca && cb) return *ca == *cb;
      return a.joined() == b.joined();
    }
    case AttributeKind::kPartiesParticipant:
    case AttributeKind::kOpenParticipant:
      return participant_set(a, aux) == participant_set(b, aux);
    case AttributeKind::kText:
      return a.joined() == b.joined();
  }
  throw std::invalid_argument("unknown attribute kind");
}

bool separation_overlap(const EventMention& a, const EventMention& b) {
  constexpr Day kMin{std::numeric_limits<int>::min(), 0, 0};
  constexpr Day kMax{std::numeric_limits<int>::max(), 0, 0};
  auto bounds = [&](const EventMention& m) {
    auto begin = parse_time(m.role_text("Begin-Time"));
    auto end = parse_time(m.role_text("End-Time"));
    return std::pair{begin ? lower_bound_of(*begin) : kMin,
                     end ? upper_bound_of(*end) : kMax};
  };
  auto [alo, ahi] = bounds(a);
  auto [blo, bhi] = bounds(b);
  return alo <= bhi && blo <= ahi;
}

std::string_view basis_name(AlignBasis b) {
  return b == AlignBasis::kUniqueType ? "unique-type" : "key-attributes";
}

std::optional<AlignBasis> co_referent(const EventMention& a,
                                      const EventMention& b,
                                      const AlignContext& ctx) {
  if (a.type != b.type || a.party == b.party) return std::nullopt;
  const auto& info = schema().info(a.type);
  if (info.unique) return AlignBasis::kUniqueType;
  if (a.type == EventType::kSeparation) {
    if (separation_overlap(a, b)) return AlignBasis::kKeyAttributes;
    return std::nullopt;
  }
  for (const auto& key : info.key_attributes) {
    if (!attribute_equal(attribute_kind(a.type, key), attribute_of(a, key),
                         attribute_of(b, key), ctx)) {
      return std::nullopt;
    }
  }
  return AlignBasis::kKeyAttributes;
}

std::vector<AlignedPair> align_events(const std::vector<EventMention>& plaintiff,
                                      const std::vector<EventMention>& defendant,
                                      const AlignContext& ctx) {
  std::vector<AlignedPair> out;
  for (std::size_t i = 0; i < plaintiff.size(); ++i) {
    for (std::size_t j = 0; j < defendant.size(); ++j) {
      if (auto basis = co_referent(plaintiff[i], defendant[j], ctx)) {
        out.push_back({i, j, plaintiff[i], defendant[j], *basis});
      }
    }
  }
  return out;
}

std::string alignment_to_json(const std::vector<AlignedPair>& pairs) {
  using nlohmann::json;
  auto ref = [](const EventMention& m, std::size_t index) {
    return json{{"index", index},
                {"doc_id", m.doc_id},
                {"sentence", m.sentence},
                {"trigger", {{"s", m.trigger.begin},
                             {"e", m.trigger.end},
                             {"text", m.trigger.text}}}};
  };
  json arr = json::array();
  for (const auto& p : pairs) {
    arr.push_back({{"case_id", p.left.case_id},
                   {"type", schema().info(p.left.type).abbr},
                   {"basis", std::string(basis_name(p.basis))},
                   {"plaintiff", ref(p.left, p.left_index)},
                   {"defendant", ref(p.right, p.right_index)}});
  }
  return arr.dump(2) + "\n";
}

}  // namespace jia
