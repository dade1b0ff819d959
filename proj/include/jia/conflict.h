// Contradiction detection between aligned plaintiff and defendant events.

#ifndef JIA_CONFLICT_H_
#define JIA_CONFLICT_H_

#include <cstddef>
#include <string>
#include <vector>

#include "jia/align.h"
#include "jia/extract.h"

namespace jia {

enum class Verdict { kContradictory, kEntailment };
std::string_view verdict_name(Verdict v);

struct Mismatch {
  std::string attribute;  // role name, "Trigger" or a derived aspect
  std::string left;
  std::string right;

  friend bool operator==(const Mismatch&, const Mismatch&) = default;
};

struct PairVerdict {
  AlignedPair pair;
  Verdict label = Verdict::kEntailment;
  std::vector<Mismatch> reasons;  // empty exactly for entailment
};

// Polarity of a mention's Polarity role; kUnknown when absent.
Polarity mention_polarity(const EventMention& m, const PolarityLexicon& lex);

// Compares the non-key attributes of the pair's event type. Throws
// std::invalid_argument when the mentions differ in type, come from the
// same party, or are non-unique and not co-referent.
PairVerdict classify_pair(const AlignedPair& pair, const AlignContext& ctx);

struct TypeSection {
  EventType type = EventType::kKnow;
  std::vector<EventMention> plaintiff;
  std::vector<EventMention> defendant;
  std::vector<PairVerdict> verdicts;
};

struct DisputeReport {
  std::string case_id;
  std::vector<TypeSection> sections;  // schema order, types with mentions only

  std::size_t pair_count() const;
  std::size_t contradiction_count() const;
  std::size_t entailment_count() const;
};

DisputeReport detect_disputes(const std::string& case_id,
                              const std::vector<EventMention>& mentions,
                              const AlignContext& ctx);

// One report per case_id, in order of first appearance.
std::vector<DisputeReport> detect_all(const std::vector<EventMention>& mentions,
                                      const AlignContext& ctx);

// "JIA-REPORT v1" JSON document covering a list of case reports.
std::string reports_to_json(const std::vector<DisputeReport>& reports);
// Plain-text rendering; contradictory pairs are flagged CONFLICT.
std::string reports_to_text(const std::vector<DisputeReport>& reports);

// Verdict records read back from a report file: (case, type, plaintiff
// index, defendant index, verdict).
struct VerdictRecord {
  std::string case_id;
  EventType type = EventType::kKnow;
  std::size_t left_index = 0;
  std::size_t right_index = 0;
  Verdict label = Verdict::kEntailment;
};
std::vector<VerdictRecord> parse_report_json(std::string_view text);

}  // namespace jia

#endif  // JIA_CONFLICT_H_
