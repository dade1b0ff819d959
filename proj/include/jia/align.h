// Cross-party event alignment.
//
// Know and Be-In-Love mentions align with every mention of the same type on
// the other side. Other types align when every key attribute compares
// equal, except Separation, which aligns on overlapping intervals.

#ifndef JIA_ALIGN_H_
#define JIA_ALIGN_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jia/extract.h"
#include "jia/lexicons.h"
#include "jia/schema.h"

namespace jia {

struct NormalizedTime {
  std::optional<int> year;
  std::optional<int> month;
  std::optional<int> day;

  friend bool operator==(const NormalizedTime&, const NormalizedTime&) = default;
};

// Accepts YYYY, YYYY-MM, YYYY-MM-DD (also with '/' or '.'), "March 2007",
// "March 12 2007", "12 March 2007" and the 年/月/日 forms. Returns nullopt
// for anything else.
std::optional<NormalizedTime> parse_time(std::string_view text);

// Componentwise comparison where a component missing on either side
// matches. Unparseable values fall back to exact text comparison.
bool time_equal(std::string_view a, std::string_view b);

// Edit distance over Unicode code points.
std::size_t levenshtein(std::string_view a, std::string_view b);
// 1 - levenshtein / longer length; 1.0 when both are empty.
double normalized_similarity(std::string_view a, std::string_view b);

struct NormalizedParticipant {
  enum class Kind { kPlaintiff, kDefendant, kOther };
  Kind kind = Kind::kOther;
  std::string text;  // set for kOther only

  friend bool operator==(const NormalizedParticipant&,
                         const NormalizedParticipant&) = default;
  friend auto operator<=>(const NormalizedParticipant&,
                          const NormalizedParticipant&) = default;
};

// A chunk naming "plaintiff" or "defendant" is that party; first-person
// pronouns are the speaker and third-person ones the opposite party.
NormalizedParticipant normalize_participant(std::string_view text, Party speaker,
                                            const AuxLexicons& aux);

enum class AttributeKind {
  kTime,
  kFamilyConflictTrigger,
  kWealthTrigger,
  kBadHabitTrigger,
  kPartiesParticipant,  // can only be one of the two parties
  kOpenParticipant,     // may be a third person
  kText,
};

// Kind of a role, or of the trigger when `role` is "Trigger". Throws
// std::invalid_argument for a role outside the type's schema row.
AttributeKind attribute_kind(EventType type, std::string_view role);

// An attribute value as it appears in one mention: its spans (empty when
// absent) and who said it.
struct AttributeValue {
  std::vector<std::string> spans;
  Party speaker = Party::kPlaintiff;

  bool absent() const { return spans.empty(); }
  std::string joined() const;
};

AttributeValue attribute_of(const EventMention& m, std::string_view role);

struct AlignContext {
  const Lexicons& lexicons;
  double family_conflict_threshold = 0.5;
  double wealth_threshold = 0.75;
};

// Absent on either side is equal; otherwise the kind's comparison applies.
bool attribute_equal(AttributeKind kind, const AttributeValue& a,
                     const AttributeValue& b, const AlignContext& ctx);

// Separation intervals from Begin-Time to End-Time share at least one day.
// A missing or unparseable bound is open.
bool separation_overlap(const EventMention& a, const EventMention& b);

enum class AlignBasis { kUniqueType, kKeyAttributes };
std::string_view basis_name(AlignBasis b);

struct AlignedPair {
  std::size_t left_index = 0;   // into the plaintiff list
  std::size_t right_index = 0;  // into the defendant list
  EventMention left;
  EventMention right;
  AlignBasis basis = AlignBasis::kUniqueType;
};

// Whether two mentions of opposite parties refer to the same event.
std::optional<AlignBasis> co_referent(const EventMention& a,
                                      const EventMention& b,
                                      const AlignContext& ctx);

// Pairs in plaintiff order, then defendant order. A mention may appear in
// several pairs.
std::vector<AlignedPair> align_events(const std::vector<EventMention>& plaintiff,
                                      const std::vector<EventMention>& defendant,
                                      const AlignContext& ctx);

std::string alignment_to_json(const std::vector<AlignedPair>& pairs);

}  // namespace jia

#endif  // JIA_ALIGN_H_
