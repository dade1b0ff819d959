#include "jia/lexicons.h"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "jia/error.h"
#include "jia/io.h"

namespace jia {

Phrase split_phrase(std::string_view text) {
  Phrase out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string join_phrase(const Phrase& phrase) {
  std::string out;
  for (std::size_t i = 0; i < phrase.size(); ++i) {
    if (i) out += ' ';
    out += phrase[i];
  }
  return out;
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Calls fn(section, line, lineno) for every content line.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    fn(section, line, lineno);
  }
}

std::pair<std::string, std::string> split_tab(const std::string& line,
                                              std::size_t lineno) {
  auto tab = line.find('\t');
  if (tab == std::string::npos) {
    throw ValidationError("lexicon line " + std::to_string(lineno) +
                          ": expected <TAB>-separated fields");
  }
  return {trim(line.substr(0, tab)), trim(line.substr(tab + 1))};
}

// Longest common contiguous token run; ties go to the lexicographically
// smallest run.
Phrase longest_common_run(const Phrase& a, const Phrase& b) {
  Phrase best;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::size_t k = 0;
      while (i + k < a.size() && j + k < b.size() && a[i + k] == b[j + k]) ++k;
      if (k == 0) continue;
      Phrase run(a.begin() + i, a.begin() + i + k);
      if (run.size() > best.size() || (run.size() == best.size() && run < best)) {
        best = std::move(run);
      }
    }
  }
  return best;
}

}  // namespace

TriggerLexicon::TriggerLexicon(
    std::initializer_list<std::pair<std::string_view, EventType>> entries) {
  for (const auto& [text, type] : entries) add(split_phrase(text), type);
}

void TriggerLexicon::add(Phrase phrase, EventType type) {
  if (phrase.empty()) throw ValidationError("empty trigger phrase");
  entries_.insert({std::move(phrase), type});
}

bool TriggerLexicon::contains(const Phrase& phrase, EventType type) const {
  return entries_.contains({phrase, type});
}

TriggerLexicon TriggerLexicon::parse(std::string_view tsv) {
  TriggerLexicon lex;
  const auto& schema = LabelSchema::Default();
  for_each_line(tsv, [&](const std::string&, const std::string& line,
                         std::size_t lineno) {
    auto [phrase, type_name] = split_tab(line, lineno);
    auto type = schema.event_by_any_name(type_name);
    if (!type) {
      throw ValidationError("trigger lexicon line " + std::to_string(lineno) +
                            ": unknown event type " + type_name);
    }
    lex.add(split_phrase(phrase), *type);
  });
  return lex;
}

TriggerLexicon TriggerLexicon::load(const std::string& path) {
  return parse(read_file(path));
}

std::string TriggerLexicon::to_tsv() const {
  const auto& schema = LabelSchema::Default();
  std::string out;
  for (const auto& e : entries_) {
    out += join_phrase(e.phrase);
    out += '\t';
    out += schema.info(e.type).abbr;
    out += '\n';
  }
  return out;
}

TriggerLexicon merge_triggers(const TriggerLexicon& lexicon,
                              int min_overlap_tokens) {
  if (min_overlap_tokens < 1) {
    throw ValidationError("min_overlap_tokens must be >= 1");
  }
  const std::size_t min_len = static_cast<std::size_t>(min_overlap_tokens);
  TriggerLexicon out;
  for (int t = 0; t < kNumEventTypes; ++t) {
    auto type = static_cast<EventType>(t);
    std::set<Phrase> phrases;
    for (const auto& e : lexicon.entries()) {
      if (e.type == type) phrases.insert(e.phrase);
    }
    for (;;) {
      // (run, a, b) of the best qualifying pair.
      std::optional<std::tuple<Phrase, Phrase, Phrase>> best;
      for (auto a = phrases.begin(); a != phrases.end(); ++a) {
        for (auto b = std::next(a); b != phrases.end(); ++b) {
          Phrase run = longest_common_run(*a, *b);
          if (run.size() < min_len) continue;
          if (!best || run.size() > std::get<0>(*best).size() ||
              (run.size() == std::get<0>(*best).size() &&
               run < std::get<0>(*best))) {
            best.emplace(std::move(run), *a, *b);
          }
        }
      }
      if (!best) break;
      phrases.erase(std::get<1>(*best));
      phrases.erase(std::get<2>(*best));
      phrases.insert(std::get<0>(*best));
    }
    for (const auto& p : phrases) out.add(p, type);
  }
  return out;
}

std::vector<Candidate> scan_candidates(std::span<const Token> tokens,
                                       const TriggerLexicon& lexicon) {
  std::vector<Candidate> out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t best_len = 0;
    EventType best_type = EventType::kKnow;
    for (const auto& e : lexicon.entries()) {
      std::size_t len = e.phrase.size();
      if (len < best_len || i + len > tokens.size()) continue;
      bool match = true;
      for (std::size_t k = 0; k < len && match; ++k) {
        match = tokens[i + k].text == e.phrase[k];
      }
      if (!match) continue;
      if (len > best_len || e.type < best_type) {
        best_len = len;
        best_type = e.type;
      }
    }
    if (best_len == 0) {
      ++i;
      continue;
    }
    out.push_back({i, i + best_len, best_type});
    i += best_len;
  }
  return out;
}

PolarityLexicon::PolarityLexicon(std::set<std::string> positive,
                                 std::set<std::string> negative)
    : positive_(std::move(positive)), negative_(std::move(negative)) {
  for (const auto& w : positive_) {
    if (negative_.contains(w)) {
      throw ValidationError("polarity entry is both positive and negative: " +
                            w);
    }
  }
}

Polarity PolarityLexicon::polarity_of(std::string_view word) const {
  std::string w(word);
  if (negative_.contains(w)) return Polarity::kNegative;
  if (positive_.contains(w)) return Polarity::kPositive;
  return Polarity::kUnknown;
}

Polarity PolarityLexicon::polarity_of_text(std::string_view text) const {
  Polarity whole = polarity_of(text);
  if (whole != Polarity::kUnknown) return whole;
  bool positive = false;
  for (const auto& tok : split_phrase(text)) {
    Polarity p = polarity_of(tok);
    if (p == Polarity::kNegative) return p;
    positive = positive || p == Polarity::kPositive;
  }
  return positive ? Polarity::kPositive : Polarity::kUnknown;
}

std::size_t PolarityLexicon::max_phrase_tokens() const {
  std::size_t n = 0;
  for (const auto* set : {&positive_, &negative_}) {
    for (const auto& w : *set) n = std::max(n, split_phrase(w).size());
  }
  return n;
}

PolarityLexicon PolarityLexicon::parse(std::string_view text) {
  std::set<std::string> pos;
  std::set<std::string> neg;
  for_each_line(text, [&](const std::string& section, const std::string& line,
                          std::size_t lineno) {
    std::string entry = join_phrase(split_phrase(line));
    if (section == "positive") {
      pos.insert(entry);
    } else if (section == "negative") {
      neg.insert(entry);
    } else {
      throw ValidationError("polarity lexicon line " + std::to_string(lineno) +
                            ": entry outside [positive]/[negative]");
    }
  });
  return PolarityLexicon(std::move(pos), std::move(neg));
}

namespace {
constexpr std::string_view kHabitNames[kNumHabitCategories] = {
    "alcohol", "whoring",  "gambling",      "drug", "pyramid-selling",
    "theft",   "fighting", "net-addiction", "fraud"};
}  // namespace

std::string_view habit_category_name(HabitCategory c) {
  return kHabitNames[static_cast<int>(c)];
}

std::optional<HabitCategory> habit_category_from_name(std::string_view s) {
  for (int i = 0; i < kNumHabitCategories; ++i) {
    if (kHabitNames[i] == s) return static_cast<HabitCategory>(i);
  }
  return std::nullopt;
}

MarriageOrder AuxLexicons::marriage_order_of(std::string_view word) const {
  auto it = marriage_order.find(std::string(word));
  return it == marriage_order.end() ? MarriageOrder::kUnknown : it->second;
}

std::optional<HabitCategory> AuxLexicons::habit_category_of(
    std::string_view phrase) const {
  auto it = bad_habit_categories.find(join_phrase(split_phrase(phrase)));
  if (it != bad_habit_categories.end()) return it->second;
  for (const auto& tok : split_phrase(phrase)) {
    auto jt = bad_habit_categories.find(tok);
    if (jt != bad_habit_categories.end()) return jt->second;
  }
  return std::nullopt;
}

bool AuxLexicons::is_positive_emotion(std::string_view trigger) const {
  return positive_emotion_triggers.contains(join_phrase(split_phrase(trigger)));
}

AuxLexicons AuxLexicons::parse(std::string_view text) {
  AuxLexicons aux;
  for_each_line(text, [&](const std::string& section, const std::string& line,
                          std::size_t lineno) {
    if (section == "first-marriage") {
      aux.marriage_order[join_phrase(split_phrase(line))] =
          MarriageOrder::kFirstMarriage;
    } else if (section == "remarriage") {
      aux.marriage_order[join_phrase(split_phrase(line))] =
          MarriageOrder::kRemarriage;
    } else if (section == "positive-emotion") {
      aux.positive_emotion_triggers.insert(join_phrase(split_phrase(line)));
    } else if (section == "bad-habit") {
      auto [phrase, cat] = split_tab(line, lineno);
      auto c = habit_category_from_name(cat);
      if (!c) {
        throw ValidationError("aux lexicon line " + std::to_string(lineno) +
                              ": unknown bad-habit category " + cat);
      }
      aux.bad_habit_categories[join_phrase(split_phrase(phrase))] = *c;
    } else if (section == "currency") {
      aux.currency_units.insert(line);
    } else if (section == "first-person") {
      aux.first_person.insert(line);
    } else if (section == "third-person") {
      aux.third_person.insert(line);
    } else if (section == "pos") {
      auto [word, tag] = split_tab(line, lineno);
      aux.pos[word] = tag;
    } else {
      throw ValidationError("aux lexicon line " + std::to_string(lineno) +
                            ": unknown section [" + section + "]");
    }
  });
  return aux;
}

Lexicons Lexicons::load(const std::string& dir, int min_overlap_tokens) {
  Lexicons lex;
  lex.triggers = merge_triggers(TriggerLexicon::load(dir + "/triggers.tsv"),
                                min_overlap_tokens);
  lex.polarity = PolarityLexicon::parse(read_file(dir + "/polarity.txt"));
  lex.aux = AuxLexicons::parse(read_file(dir + "/aux.txt"));
  return lex;
}

}  // namespace jia
