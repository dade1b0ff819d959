// Metrics, cross-validation folds and the end-to-end evaluation driver.
//
// Precision is correct / predicted and recall correct / gold. A zero
// denominator yields 0 and appends a warning.

#ifndef JIA_EVAL_H_
#define JIA_EVAL_H_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "jia/conflict.h"
#include "jia/crf/crf.h"
#include "jia/extract.h"

namespace jia {

using Warnings = std::vector<std::string>;

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Harmonic mean; 0 when both are 0.
double f1_of(double precision, double recall);

// S_t gold chunks, S_p predicted chunks, S correct.
PRF chunk_prf(std::size_t gold, std::size_t predicted, std::size_t correct,
              Warnings* warnings = nullptr);

struct LabelCounts {
  std::size_t gold = 0;
  std::size_t predicted = 0;
  std::size_t correct = 0;

  LabelCounts& operator+=(const LabelCounts& o);
};

struct LabelPRF {
  std::map<std::string, PRF> per_label;
  std::map<std::string, LabelCounts> counts;
  LabelCounts total;
  PRF micro;  // from the summed counts
  PRF macro;  // mean over labels present in gold or prediction
};

LabelPRF label_prf(const std::map<std::string, LabelCounts>& counts,
                   Warnings* warnings = nullptr);

struct ChunkItem {
  std::string doc_id;
  std::size_t sentence = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string label;

  friend auto operator<=>(const ChunkItem&, const ChunkItem&) = default;
};

// Per-label counts; items match as multisets.
std::map<std::string, LabelCounts> count_items(const std::vector<ChunkItem>& gold,
                                               const std::vector<ChunkItem>& predicted);

// Trigger chunk and every role span of each mention, labelled with the
// trigger tag name or the role label.
std::vector<ChunkItem> event_items(const std::vector<EventMention>& mentions);

// Non-O chunks of a tag sequence.
std::vector<ChunkItem> tag_items(const std::string& doc_id, std::size_t sentence,
                                 const std::vector<std::string>& tags);

// Rows are gold, columns prediction, in the order Contradictory,
// Entailment, Non-aligned.
struct PairConfusion {
  std::array<std::array<std::size_t, 3>, 3> cells{};

  static constexpr std::size_t kContradictory = 0;
  static constexpr std::size_t kEntailment = 1;
  static constexpr std::size_t kNonAligned = 2;

  PairConfusion& operator+=(const PairConfusion& o);
};

struct PairMetrics {
  std::size_t correctly_aligned = 0;  // gold and predicted both C or E
  std::size_t predicted_aligned = 0;  // predicted C or E
  std::size_t should_align = 0;       // gold C or E
  PRF alignment;
  PRF contradictory;
  PRF entailment;
};

PairMetrics pair_metrics(const PairConfusion& m, Warnings* warnings = nullptr);

// Confusion over every cross-party same-type pair of mentions in a case.
// Mentions are identified by document, sentence, type, trigger span and
// their ordinal among mentions sharing those. Labels come from the
// conflict engine run on each side's mentions.
PairConfusion pair_confusion(const std::vector<EventMention>& gold,
                             const std::vector<EventMention>& predicted,
                             const AlignContext& ctx);

// Size band of a case from its larger statement: below 3 KB, below 6 KB,
// or above.
int size_band(std::size_t bytes);

// Case ids per fold. Cases are grouped by size band; each band is shuffled
// with `seed` and cut into k contiguous pieces, and fold i takes piece i of
// every band. Throws ValidationError when k < 2 or a fold would be empty.
std::vector<std::vector<std::string>> stratified_folds(
    const std::vector<Document>& docs, std::size_t k, std::uint64_t seed);

struct PipelineOptions {
  crf::TrainConfig train;
  FeatureToggles toggles;
  bool rule_round_two = false;
  double family_conflict_threshold = 0.5;
  double wealth_threshold = 0.75;
};

crf::CrfModel train_round_one(const std::vector<Document>& docs,
                              const TriggerLexicon& triggers,
                              const PipelineOptions& options,
                              crf::TrainReport* report = nullptr);
crf::CrfModel train_round_two(const std::vector<Document>& docs,
                              const TriggerLexicon& triggers,
                              const PipelineOptions& options,
                              crf::TrainReport* report = nullptr);

struct PipelineEval {
  std::size_t documents = 0;
  std::map<std::string, LabelCounts> round_one_counts;
  std::map<std::string, LabelCounts> event_counts;
  PairConfusion confusion;
  std::size_t extraction_errors = 0;

  PipelineEval& operator+=(const PipelineEval& o);
};

// Runs extraction on docs and scores it against their gold annotation.
// Throws ValidationError when docs is empty.
PipelineEval evaluate_pipeline(const std::vector<Document>& docs,
                               const RoundOneTagger& r1, const RoundTwoTagger& r2,
                               const Lexicons& lexicons, const AlignContext& ctx);

struct EvalSummary {
  LabelPRF round_one;
  LabelPRF events;
  PairMetrics pairs;
  PairConfusion confusion;
  std::size_t documents = 0;
  std::size_t extraction_errors = 0;
  Warnings warnings;
};

EvalSummary summarize(const PipelineEval& e);

// Trains both rounds on `train` and evaluates on `test`.
PipelineEval run_fold(const std::vector<Document>& train,
                      const std::vector<Document>& test, const Lexicons& lexicons,
                      const PipelineOptions& options);

struct CrossValidation {
  std::vector<EvalSummary> folds;
  EvalSummary pooled;  // counts summed over folds
};

// k-fold cross-validation over stratified case folds.
CrossValidation cross_validate(const std::vector<Document>& docs, std::size_t k,
                               std::uint64_t fold_seed, const Lexicons& lexicons,
                               const PipelineOptions& options);

// Documents of the given cases, in corpus order.
std::vector<Document> select_cases(const std::vector<Document>& docs,
                                   const std::vector<std::string>& case_ids,
                                   bool include);

// "JIA-EVAL v1" JSON with every metric family and the raw confusion matrix.
std::string eval_report_json(const EvalSummary& summary,
                             const std::vector<EvalSummary>& folds = {});

}  // namespace jia

#endif  // JIA_EVAL_H_
