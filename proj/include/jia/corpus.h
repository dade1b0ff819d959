// Documents, sentences and tokens, and the line-delimited JSON corpus
// format:
//
//   {"doc_id": ..., "case_id": ..., "party": "plaintiff"|"defendant",
//    "sentences": [{"tokens": [{"t": ..., "pos": ...}, ...],
//                   "labels": [...],              // optional
//                   "events": [[...], [...]]}]}   // optional
//
// "labels" holds one BIO tag per token. A token can carry only one tag, so
// arguments shared by several events are annotated once there; "events"
// optionally holds one full final-label sequence per gold event, which is
// what the second labeling round and the evaluation need.

#ifndef JIA_CORPUS_H_
#define JIA_CORPUS_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "jia/schema.h"

namespace jia {

inline constexpr std::size_t kMaxSequenceLength = 55;

struct Token {
  std::string text;
  std::string pos = "UNK";

  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::optional<std::vector<std::string>> gold_labels;
  // One final-label sequence per gold event mention.
  std::vector<std::vector<std::string>> gold_events;

  std::size_t size() const { return tokens.size(); }
  std::string text(std::size_t begin, std::size_t end) const;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Document {
  std::string doc_id;
  std::string case_id;
  Party party = Party::kPlaintiff;
  std::vector<Sentence> sentences;

  // Tokens joined by single spaces, sentences by newlines.
  std::string raw_text() const;

  friend bool operator==(const Document&, const Document&) = default;
};

// Copy of s cut to at most max_len tokens; labels and event sequences are
// cut alongside.
Sentence truncate_sentence(const Sentence& s,
                           std::size_t max_len = kMaxSequenceLength);

// Throws ValidationError naming the 1-based line number on malformed JSON,
// unknown party, empty token text, label/token length mismatch, BIO
// violations, or duplicate doc_id.
std::vector<Document> parse_corpus(std::istream& in);
void serialize_corpus(const std::vector<Document>& docs, std::ostream& out);

std::vector<Document> read_corpus_file(const std::string& path);
void write_corpus_file(const std::vector<Document>& docs,
                       const std::string& path);

}  // namespace jia

#endif  // JIA_CORPUS_H_
