// BIO tag sequences: validation, chunking, and the final-to-transition
// label mapping used to derive first-round training targets.

#ifndef JIA_BIO_H_
#define JIA_BIO_H_

#include <cstddef>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "jia/schema.h"

namespace jia {

struct BioViolation {
  std::size_t index;
  std::string tag;
  std::string reason;
};

struct BioReport {
  bool valid = true;
  std::vector<BioViolation> violations;
};

// Reports every position whose tag is outside `vocabulary` or whose I_X
// tag lacks an immediately preceding B_X or I_X.
BioReport bio_validate(std::span<const std::string> tags,
                       const std::unordered_set<std::string>& vocabulary);

// A maximal B/I run: tokens [begin, end) labelled `label`.
struct Chunk {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string label;

  friend bool operator==(const Chunk&, const Chunk&) = default;
  friend auto operator<=>(const Chunk&, const Chunk&) = default;
};

// Orphan I_ tags open a new chunk, so the result covers every non-O tag.
std::vector<Chunk> chunks_of(std::span<const std::string> tags);

// Writes chunks back as tags over a sequence of length n.
std::vector<std::string> tags_from_chunks(std::size_t n,
                                          std::span<const Chunk> chunks);

// Trigger tags pass through; role tags become their transition label with
// the same B/I prefix. Throws std::logic_error on a role missing from the
// schema.
std::vector<std::string> to_transition_tags(
    std::span<const std::string> final_tags, const LabelSchema& schema);

}  // namespace jia

#endif  // JIA_BIO_H_
