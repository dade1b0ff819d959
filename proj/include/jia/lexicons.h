// Dictionaries that drive candidate filtering, pattern adjustment and the
// conflict rules.
//
// File formats (UTF-8):
//   triggers.tsv  "phrase<TAB>event_type" per line; phrase tokens are
//                 space-separated; event_type is an abbreviation or name.
//   polarity.txt  sections [positive] and [negative], one entry per line.
//   aux.txt       sections [first-marriage], [remarriage],
//                 [positive-emotion], [bad-habit] ("phrase<TAB>category"),
//                 [currency], [first-person], [third-person], [pos]
//                 ("word<TAB>tag").
// Blank lines and lines starting with '#' are ignored.

#ifndef JIA_LEXICONS_H_
#define JIA_LEXICONS_H_

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jia/corpus.h"
#include "jia/schema.h"
#include "jia/tokenizer.h"

namespace jia {

using Phrase = std::vector<std::string>;

Phrase split_phrase(std::string_view text);
std::string join_phrase(const Phrase& phrase);

struct TriggerEntry {
  Phrase phrase;
  EventType type;

  friend auto operator<=>(const TriggerEntry&, const TriggerEntry&) = default;
};

class TriggerLexicon {
 public:
  TriggerLexicon() = default;
  TriggerLexicon(std::initializer_list<std::pair<std::string_view, EventType>>
                     entries);

  // Ignores duplicates. Throws ValidationError on an empty phrase.
  void add(Phrase phrase, EventType type);
  const std::set<TriggerEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool contains(const Phrase& phrase, EventType type) const;

  static TriggerLexicon parse(std::string_view tsv);
  static TriggerLexicon load(const std::string& path);
  std::string to_tsv() const;

 private:
  std::set<TriggerEntry> entries_;
};

// Within each event type, repeatedly replaces the pair of phrases with the
// longest common contiguous token run (at least min_overlap_tokens long) by
// that run, until no pair qualifies. Ties go to the lexicographically
// smallest run, then the smallest pair. The result is a fixed point.
TriggerLexicon merge_triggers(const TriggerLexicon& lexicon,
                              int min_overlap_tokens = 1);

struct Candidate {
  std::size_t begin = 0;
  std::size_t end = 0;
  EventType type = EventType::kKnow;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

// Leftmost-longest, non-overlapping phrase matches sorted by start. When one
// phrase is listed under several types the lowest type wins. An empty
// result means the sentence cannot hold a target event.
std::vector<Candidate> scan_candidates(std::span<const Token> tokens,
                                       const TriggerLexicon& lexicon);

enum class Polarity { kPositive, kNegative, kUnknown };

class PolarityLexicon {
 public:
  // Throws ValidationError when an entry is listed as both.
  PolarityLexicon(std::set<std::string> positive,
                  std::set<std::string> negative);
  PolarityLexicon() = default;

  Polarity polarity_of(std::string_view word) const;
  // Whole-text lookup first, then per token: any negative token makes the
  // chunk negative, else any positive token makes it positive.
  Polarity polarity_of_text(std::string_view text) const;

  const std::set<std::string>& positive() const { return positive_; }
  const std::set<std::string>& negative() const { return negative_; }
  // Longest entry length in tokens.
  std::size_t max_phrase_tokens() const;

  static PolarityLexicon parse(std::string_view text);

 private:
  std::set<std::string> positive_;
  std::set<std::string> negative_;
};

enum class MarriageOrder { kFirstMarriage, kRemarriage, kUnknown };

enum class HabitCategory {
  kAlcohol,
  kWhoring,
  kGambling,
  kDrug,
  kPyramidSelling,
  kTheft,
  kFighting,
  kNetAddiction,
  kFraud,
};

inline constexpr int kNumHabitCategories = 9;

std::string_view habit_category_name(HabitCategory c);
std::optional<HabitCategory> habit_category_from_name(std::string_view s);

struct AuxLexicons {
  std::map<std::string, MarriageOrder> marriage_order;
  std::set<std::string> positive_emotion_triggers;
  std::map<std::string, HabitCategory> bad_habit_categories;
  std::set<std::string> currency_units;
  std::set<std::string> first_person;
  std::set<std::string> third_person;
  PosLexicon pos;

  MarriageOrder marriage_order_of(std::string_view word) const;
  // Whole-phrase lookup, then the first token with a known category.
  std::optional<HabitCategory> habit_category_of(std::string_view phrase) const;
  bool is_positive_emotion(std::string_view trigger) const;

  static AuxLexicons parse(std::string_view text);
};

struct Lexicons {
  TriggerLexicon triggers;  // merged
  PolarityLexicon polarity;
  AuxLexicons aux;

  // Reads triggers.tsv, polarity.txt and aux.txt from dir and merges the
  // trigger dictionary. Throws IoError / ValidationError.
  static Lexicons load(const std::string& dir, int min_overlap_tokens = 1);
};

}  // namespace jia

#endif  // JIA_LEXICONS_H_
