#ifndef JIA_TOKENIZER_H_
#define JIA_TOKENIZER_H_

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "jia/corpus.h"

namespace jia {

using PosLexicon = std::unordered_map<std::string, std::string>;

// Rule-based sentence splitter and tokenizer for UTF-8 text. Sentences end
// after any of 。！？!?.; ('.' between two digits is a decimal point, not a
// terminator) and keep the terminator as their last token. Tokens are
// whitespace-separated, with punctuation detached into single tokens. POS
// comes from `pos_lexicon` when present, else "UNK".
std::vector<Sentence> split_and_tokenize(std::string_view raw_text,
                                         const PosLexicon& pos_lexicon = {});

}  // namespace jia

#endif  // JIA_TOKENIZER_H_
