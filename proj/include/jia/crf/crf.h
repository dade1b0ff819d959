// Linear-chain conditional random field.
//
// Scores are sums of start, transition and emission weights. Forbidden
// transitions, forbidden start tags and per-position tag restrictions
// (ObservationSequence::allowed) score -inf both in decoding and in the
// partition function.
//
// Weights live in one flat vector laid out as
//   [start (L) | transition (L*L, row = previous tag) | emission (F*L)]
// so that the emission block can grow as features are interned.

#ifndef JIA_CRF_CRF_H_
#define JIA_CRF_CRF_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jia/crf/features.h"

namespace jia::crf {

class CrfModel {
 public:
  CrfModel() = default;
  // tags[0] must be "O" for BIO tag sets; tag order is fixed for life.
  CrfModel(std::vector<std::string> tags, std::vector<std::string> templates,
           double l2_lambda = 1e-4);

  std::size_t num_tags() const { return tags_.size(); }
  const std::vector<std::string>& tags() const { return tags_; }
  std::optional<int> tag_id(const std::string& tag) const;

  const std::vector<std::string>& template_names() const {
    return template_names_;
  }
  const std::vector<FeatureTemplate>& templates() const { return templates_; }
  FeatureTable& features() { return features_; }
  const FeatureTable& features() const { return features_; }

  double l2_lambda() const { return l2_lambda_; }
  void set_l2_lambda(double v) { l2_lambda_ = v; }

  // Grows the emission block to cover every interned feature.
  void sync_weights();
  std::vector<double>& weights() { return weights_; }
  const std::vector<double>& weights() const { return weights_; }

  std::size_t start_index(int tag) const { return tag; }
  std::size_t transition_index(int from, int to) const {
    return num_tags() + static_cast<std::size_t>(from) * num_tags() + to;
  }
  std::size_t emission_index(int feature, int tag) const {
    return num_tags() + num_tags() * num_tags() +
           static_cast<std::size_t>(feature) * num_tags() + tag;
  }

  void forbid_transition(int from, int to);
  void forbid_start(int tag);
  bool transition_forbidden(int from, int to) const {
    return forbidden_[static_cast<std::size_t>(from) * num_tags() + to] != 0;
  }
  bool start_forbidden(int tag) const { return forbidden_start_[tag] != 0; }
  // Forbids every I_X not preceded by B_X or I_X, and I_X at the start.
  void forbid_illegal_bio();

  // "JIA-CRF v1" text format. Saving then loading restores the exact
  // model, weights included bit for bit. load throws ValidationError.
  void save(std::ostream& out) const;
  static CrfModel load(std::istream& in);
  void save_file(const std::string& path) const;
  static CrfModel load_file(const std::string& path);

  friend bool operator==(const CrfModel& a, const CrfModel& b);

 private:
  std::vector<std::string> tags_;
  std::vector<std::string> template_names_;
  std::vector<FeatureTemplate> templates_;
  FeatureTable features_;
  std::vector<double> weights_;
  std::vector<std::uint8_t> forbidden_;
  std::vector<std::uint8_t> forbidden_start_;
  double l2_lambda_ = 1e-4;
};

// Score of one tag sequence; -inf when it is illegal.
double sequence_score(const ObservationSequence& obs,
                      std::span<const int> tags, const CrfModel& model);

// log of the summed exp-score of every legal tag sequence. Throws
// std::invalid_argument on an empty sequence.
double log_partition(const ObservationSequence& obs, const CrfModel& model);

struct Marginals {
  double log_z = 0.0;
  // node[t * L + y] = p(y_t = y)
  std::vector<double> node;
  // Expected transition counts summed over positions, L*L.
  std::vector<double> edge;
  // Expected start-tag probabilities, L.
  std::vector<double> start;
};

Marginals forward_backward(const ObservationSequence& obs,
                           const CrfModel& model);

// Highest-scoring legal sequence; among equal scores the one with the
// lowest tag at the earliest differing position. Throws std::runtime_error
// when every sequence is forbidden, std::invalid_argument when empty.
std::vector<int> viterbi_decode(const ObservationSequence& obs,
                                const CrfModel& model);

struct Example {
  ObservationSequence obs;
  std::vector<int> gold;
};

struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> gradient;
};

// -sum log p(gold | obs) + l2_scale * lambda * |w|^2 / 2 and its gradient.
// Throws std::invalid_argument on a gold tag outside the tag set or a gold
// sequence the constraints make impossible.
LossAndGradient nll_and_gradient(std::span<const Example* const> batch,
                                 const CrfModel& model, double l2_scale = 1.0);
LossAndGradient nll_and_gradient(std::span<const Example> batch,
                                 const CrfModel& model, double l2_scale = 1.0);

struct TrainConfig {
  int epochs = 15;
  int batch_size = 64;
  double learning_rate = 0.1;
  double l2_lambda = 1e-4;
  std::uint64_t seed = 1;
};

struct TrainReport {
  std::vector<double> epoch_losses;
};

// Mini-batch SGD on the mean batch gradient. Each batch carries
// |batch|/N of the L2 penalty so that one epoch sums to the full objective.
// Examples are reshuffled per epoch from `seed`. Throws std::runtime_error
// when the loss becomes non-finite.
CrfModel train(const std::vector<Example>& examples, CrfModel init,
               const TrainConfig& config, TrainReport* report = nullptr);

}  // namespace jia::crf

#endif  // JIA_CRF_CRF_H_
