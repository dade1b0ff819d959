// Two-round event extraction.
//
// Round one tags every token with a trigger type or one of the coarse
// transition labels. Pattern adjustment then adds Polarity and Money chunks
// the tagger missed. Round two runs once per trigger chunk and refines the
// transition chunks into roles of that trigger's event type. Shared-trigger
// rules finally split Be-Born and Divorce-Lawsuit triggers that stand for
// several event instances.

#ifndef JIA_EXTRACT_H_
#define JIA_EXTRACT_H_

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "jia/bio.h"
#include "jia/corpus.h"
#include "jia/crf/crf.h"
#include "jia/lexicons.h"
#include "jia/schema.h"

namespace jia {

struct ArgSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string text;

  friend bool operator==(const ArgSpan&, const ArgSpan&) = default;
  friend auto operator<=>(const ArgSpan&, const ArgSpan&) = default;
};

struct EventMention {
  std::string case_id;
  std::string doc_id;
  Party party = Party::kPlaintiff;
  std::size_t sentence = 0;
  EventType type = EventType::kKnow;
  ArgSpan trigger;
  // Role name (e.g. "Sue-Time") to its argument spans in token order.
  std::map<std::string, std::vector<ArgSpan>> roles;

  // Joined text of a role's spans, empty when the role is absent.
  std::string role_text(const std::string& role) const;
  bool has_role(const std::string& role) const { return roles.contains(role); }

  friend bool operator==(const EventMention&, const EventMention&) = default;
};

// Throws std::logic_error when a role is outside the event type's schema
// row, the trigger is empty, or a span overlaps the trigger.
void check_mention(const EventMention& m, std::size_t sentence_length);

// Trigger chunk of a tag sequence together with its event type.
struct TriggerChunk {
  Chunk chunk;
  EventType type = EventType::kKnow;
};

std::vector<TriggerChunk> trigger_chunks(const std::vector<std::string>& tags);

struct RoundOneResult {
  std::size_t sentence = 0;
  std::vector<std::string> tags;
  std::vector<Candidate> candidates;
};

// Feature groups that can be switched off for ablation runs.
struct FeatureToggles {
  bool pos = true;
  bool trigger = true;   // candidate-trigger channels
  bool position = true;  // round-two positional channels
};

std::vector<std::string> round_one_templates(const FeatureToggles& t = {});
std::vector<std::string> round_two_templates(const FeatureToggles& t = {});

crf::FeatureInput round_one_input(const Sentence& s,
                                  const std::vector<Candidate>& candidates);
crf::FeatureInput round_two_input(const Sentence& s,
                                  const std::vector<std::string>& r1_tags,
                                  const TriggerChunk& concerned);

// Final tags a token may take in the decode for `concerned`: O for O tokens
// and other triggers, the trigger tag on the concerned chunk, and O plus the
// matching roles of the concerned type on transition chunks.
std::vector<std::vector<std::string>> round_two_allowed_tags(
    const std::vector<std::string>& r1_tags, const TriggerChunk& concerned);

// Fresh models over the first-round and final vocabularies with BIO
// constraints installed.
crf::CrfModel new_round_one_model(const FeatureToggles& t = {},
                                  double l2 = 1e-4);
crf::CrfModel new_round_two_model(const FeatureToggles& t = {},
                                  double l2 = 1e-4);

class RoundOneTagger {
 public:
  virtual ~RoundOneTagger() = default;
  virtual std::vector<std::string> tag(
      const Sentence& s, const std::vector<Candidate>& candidates) const = 0;
};

class RoundTwoTagger {
 public:
  virtual ~RoundTwoTagger() = default;
  // Final-tag sequence for the event of `concerned`.
  virtual std::vector<std::string> tag(const Sentence& s,
                                       const std::vector<std::string>& r1_tags,
                                       const TriggerChunk& concerned) const = 0;
};

class CrfRoundOne : public RoundOneTagger {
 public:
  explicit CrfRoundOne(const crf::CrfModel& model) : model_(model) {}
  std::vector<std::string> tag(
      const Sentence& s, const std::vector<Candidate>& candidates) const override;

 private:
  const crf::CrfModel& model_;
};

class CrfRoundTwo : public RoundTwoTagger {
 public:
  explicit CrfRoundTwo(const crf::CrfModel& model) : model_(model) {}
  std::vector<std::string> tag(const Sentence& s,
                               const std::vector<std::string>& r1_tags,
                               const TriggerChunk& concerned) const override;

 private:
  const crf::CrfModel& model_;
};

// Reads the gold annotation back; used for oracle runs and teacher forcing.
class OracleRoundOne : public RoundOneTagger {
 public:
  std::vector<std::string> tag(
      const Sentence& s, const std::vector<Candidate>& candidates) const override;
};

class OracleRoundTwo : public RoundTwoTagger {
 public:
  std::vector<std::string> tag(const Sentence& s,
                               const std::vector<std::string>& r1_tags,
                               const TriggerChunk& concerned) const override;
};

// Nearest-chunk matching instead of a second CRF. Know, Be-In-Love and
// Marry take the nearest preceding Person and Time chunks, Remarry the
// nearest preceding Person. Other types take the nearest chunk of each
// label, preceding chunks first, and fill roles sharing a label in textual
// order. Polarity takes the nearest chunk on either side.
class RuleRoundTwo : public RoundTwoTagger {
 public:
  std::vector<std::string> tag(const Sentence& s,
                               const std::vector<std::string>& r1_tags,
                               const TriggerChunk& concerned) const override;
};

// Transition tags of the gold labels. Throws ValidationError when the
// sentence has no gold labels.
std::vector<std::string> gold_round_one_tags(const Sentence& s);
// Union of the gold event sequences whose trigger is `trigger`, restricted
// to what round two can express.
std::vector<std::string> gold_round_two_target(const Sentence& s,
                                               const TriggerChunk& trigger);

// Candidates are scanned here; the sentence must already be truncated.
RoundOneResult first_round(const Sentence& s, std::size_t sentence_index,
                           const RoundOneTagger& tagger,
                           const TriggerLexicon& triggers);

// Turns O tokens that match the polarity lexicon into Polarity chunks and O
// runs of the form digits[.digits] [currency unit] into Money chunks.
// Tokens that already carry a tag are left alone.
RoundOneResult adjust_patterns(RoundOneResult r1, const Sentence& s,
                               const PolarityLexicon& polarity,
                               const std::set<std::string>& currency_units);

struct RoundTwoDecode {
  TriggerChunk trigger;
  std::vector<std::string> tags;  // final tags
};

// One decode per trigger chunk of r1.
std::vector<RoundTwoDecode> second_round(const RoundOneResult& r1,
                                         const Sentence& s,
                                         const RoundTwoTagger& tagger);

// An event before its spans are materialized as text.
struct EventSkeleton {
  EventType type = EventType::kKnow;
  Chunk trigger;
  std::map<std::string, std::vector<Chunk>> roles;

  friend bool operator==(const EventSkeleton&, const EventSkeleton&) = default;
};

EventSkeleton skeleton_from_decode(const RoundTwoDecode& d);

// Be-Born and Divorce-Lawsuit triggers that stand for several instances.
// Returns the replacement skeletons for every trigger where a rule fired;
// triggers not mentioned keep their ordinary decode. `decodes` supplies the
// non-unique roles and tells which Time chunks other events claimed; it may
// be empty.
std::vector<EventSkeleton> apply_shared_trigger_rules(
    const std::vector<std::string>& r1_tags,
    const std::vector<RoundTwoDecode>& decodes = {});

struct SentenceTrace {
  RoundOneResult round_one;
  std::vector<RoundTwoDecode> decodes;
};

struct ExtractionResult {
  std::vector<EventMention> mentions;
  std::vector<SentenceTrace> traces;  // sentences that had candidates
  std::vector<std::string> errors;    // per-sentence failures
};

ExtractionResult extract_document(const Document& doc,
                                  const RoundOneTagger& r1,
                                  const RoundTwoTagger& r2,
                                  const Lexicons& lexicons);

// Gold mentions from the per-event annotation of every sentence.
std::vector<EventMention> gold_mentions(const Document& doc);

// Training examples. Sentences without candidates are skipped, as at
// extraction time. With `grow` unseen features are interned into the model.
std::vector<crf::Example> round_one_examples(const std::vector<Document>& docs,
                                             const TriggerLexicon& triggers,
                                             crf::CrfModel& model, bool grow);
std::vector<crf::Example> round_two_examples(const std::vector<Document>& docs,
                                             const TriggerLexicon& triggers,
                                             crf::CrfModel& model, bool grow);

// One JSON object per line.
std::string mentions_to_jsonl(const std::vector<EventMention>& mentions);
std::vector<EventMention> parse_mentions_jsonl(std::string_view text);

}  // namespace jia

#endif  // JIA_EXTRACT_H_
