// Declarative feature templates over token observations.
//
// A template name is a '|'-joined conjunction of atoms:
//   bias          always fires
//   w[k]          token text at offset k
//   pos[k]        POS tag at offset k
//   shape[k]      character-class shape of the token at offset k
//   ch.NAME[k]    value of per-token channel NAME at offset k
// e.g. "w[-1]", "ch.r1[0]|ch.rel[0]". An atom whose channel value is empty
// suppresses the whole template at that position. Offsets outside the
// sentence read as "<S>" / "</S>".

#ifndef JIA_CRF_FEATURES_H_
#define JIA_CRF_FEATURES_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace jia::crf {

struct FeatureInput {
  std::vector<std::string> words;
  std::vector<std::string> pos;
  std::map<std::string, std::vector<std::string>> channels;

  std::size_t size() const { return words.size(); }
};

std::string word_shape(std::string_view word);

class FeatureTemplate {
 public:
  // Throws ValidationError on a malformed name.
  static FeatureTemplate parse(std::string_view name);

  const std::string& name() const { return name_; }
  std::optional<std::string> extract(const FeatureInput& input,
                                     std::size_t position) const;

 private:
  enum class Kind { kBias, kWord, kPos, kShape, kChannel };
  struct Atom {
    Kind kind = Kind::kBias;
    std::string channel;
    int offset = 0;
  };

  std::string name_;
  std::vector<Atom> atoms_;
};

std::vector<FeatureTemplate> parse_templates(
    const std::vector<std::string>& names);

// Stable string-keyed interning of feature strings; ids are dense and
// assigned in first-seen order.
class FeatureTable {
 public:
  int find(const std::string& feature) const;  // -1 when absent
  int intern(const std::string& feature);
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> ids_;
};

// Per-position active feature ids plus optional per-position tag
// restrictions (empty list = every tag allowed).
struct ObservationSequence {
  std::vector<std::vector<int>> features;
  std::vector<std::vector<int>> allowed;

  std::size_t size() const { return features.size(); }
};

// Applies templates at every position. With `table_grows` unseen features
// are interned; otherwise they are dropped.
ObservationSequence extract_observation(
    const FeatureInput& input, const std::vector<FeatureTemplate>& templates,
    FeatureTable& table, bool table_grows);
// Frozen-table variant: unseen features are dropped.
ObservationSequence extract_observation(
    const FeatureInput& input, const std::vector<FeatureTemplate>& templates,
    const FeatureTable& table);

}  // namespace jia::crf

#endif  // JIA_CRF_FEATURES_H_
