#include "jia/tokenizer.h"

#include <array>
#include <cctype>

namespace jia {

namespace {

// Length of the UTF-8 sequence starting with byte c.
std::size_t utf8_len(unsigned char c) {
  if (c < 0x80) return 1;
  if ((c >> 5) == 0x6) return 2;
  if ((c >> 4) == 0xE) return 3;
  if ((c >> 3) == 0x1E) return 4;
  return 1;
}

constexpr std::array<std::string_view, 4> kCjkTerminators = {"。", "！", "？",
                                                             "；"};
constexpr std::array<std::string_view, 10> kCjkPunct = {
    "，", "、", "：", "（", "）", "“", "”", "‘", "’", "《"};

bool is_cjk_terminator(std::string_view cp) {
  for (auto t : kCjkTerminators) {
    if (cp == t) return true;
  }
  return false;
}

bool is_cjk_punct(std::string_view cp) {
  if (cp == "》") return true;
  for (auto t : kCjkPunct) {
    if (cp == t) return true;
  }
  return false;
}

bool is_ascii_punct(char c) {
  switch (c) {
    case ',': case '.': case ';': case ':': case '!': case '?':
    case '(': case ')': case '"': case '[': case ']':
      return true;
    default:
      return false;
  }
}

bool is_ascii_terminator(char c) {
  return c == '.' || c == '!' || c == '?' || c == ';';
}

bool is_digit(std::string_view text, std::size_t i) {
  return i < text.size() &&
         std::isdigit(static_cast<unsigned char>(text[i])) != 0;
}

}  // namespace

std::vector<Sentence> split_and_tokenize(std::string_view raw,
                                         const PosLexicon& pos_lexicon) {
  std::vector<Sentence> sentences;
  Sentence current;
  std::string word;

  auto flush_word = [&]() {
    if (word.empty()) return;
    Token t;
    t.text = word;
    auto it = pos_lexicon.find(word);
    if (it != pos_lexicon.end()) t.pos = it->second;
    current.tokens.push_back(std::move(t));
    word.clear();
  };
  auto flush_sentence = [&]() {
    flush_word();
    if (!current.tokens.empty()) sentences.push_back(std::move(current));
    current = Sentence{};
  };
  auto push_punct = [&](std::string_view p) {
    flush_word();
    Token t;
    t.text = std::string(p);
    auto it = pos_lexicon.find(t.text);
    if (it != pos_lexicon.end()) t.pos = it->second;
    current.tokens.push_back(std::move(t));
  };

  std::size_t i = 0;
  while (i < raw.size()) {
    unsigned char c = static_cast<unsigned char>(raw[i]);
    std::size_t len = std::min(utf8_len(c), raw.size() - i);
    std::string_view cp = raw.substr(i, len);
    if (len == 1 && std::isspace(c)) {
      flush_word();
    } else if (len == 1 && is_ascii_punct(raw[i])) {
      bool decimal_point = raw[i] == '.' && i > 0 && is_digit(raw, i - 1) &&
                           is_digit(raw, i + 1) && !word.empty();
      if (decimal_point) {
        word += raw[i];
      } else {
        push_punct(cp);
        if (is_ascii_terminator(raw[i])) flush_sentence();
      }
    } else if (is_cjk_terminator(cp)) {
      push_punct(cp);
      flush_sentence();
    } else if (is_cjk_punct(cp)) {
      push_punct(cp);
    } else {
      word += cp;
    }
    i += len;
  }
  flush_sentence();
  return sentences;
}

}  // namespace jia
