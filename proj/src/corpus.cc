#include "jia/corpus.h"

#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

#include "jia/bio.h"
#include "jia/error.h"
#include "jia/io.h"

namespace jia {

using nlohmann::json;

std::string Sentence::text(std::size_t begin, std::size_t end) const {
  std::string out;
  for (std::size_t i = begin; i < end && i < tokens.size(); ++i) {
    if (i > begin) out += ' ';
    out += tokens[i].text;
  }
  return out;
}

std::string Document::raw_text() const {
  std::string out;
  for (const auto& s : sentences) {
    out += s.text(0, s.size());
    out += '\n';
  }
  return out;
}

Sentence truncate_sentence(const Sentence& s, std::size_t max_len) {
  if (s.size() <= max_len) return s;
  Sentence out;
  out.tokens.assign(s.tokens.begin(), s.tokens.begin() + max_len);
  if (s.gold_labels) {
    out.gold_labels.emplace(s.gold_labels->begin(),
                            s.gold_labels->begin() + max_len);
  }
  for (const auto& ev : s.gold_events) {
    out.gold_events.emplace_back(ev.begin(), ev.begin() + max_len);
  }
  return out;
}

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ValidationError("corpus line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> read_tags(const json& j, std::size_t n,
                                   std::size_t line, const char* what) {
  if (!j.is_array()) fail(line, std::string(what) + " must be an array");
  std::vector<std::string> tags;
  for (const auto& t : j) {
    if (!t.is_string()) fail(line, std::string(what) + " must be strings");
    tags.push_back(t.get<std::string>());
  }
  if (tags.size() != n) {
    fail(line, std::string(what) + " length " + std::to_string(tags.size()) +
                   " does not match " + std::to_string(n) + " tokens");
  }
  BioReport report = bio_validate(tags, LabelSchema::Default().any_vocabulary());
  if (!report.valid) {
    const auto& v = report.violations.front();
    fail(line, std::string(what) + " invalid at index " +
                   std::to_string(v.index) + " (" + v.tag + "): " + v.reason);
  }
  return tags;
}

Document document_from_json(const json& j, std::size_t line) {
  if (!j.is_object()) fail(line, "document must be a JSON object");
  Document doc;
  try {
    doc.doc_id = j.at("doc_id").get<std::string>();
    doc.case_id = j.at("case_id").get<std::string>();
    auto party = party_from_name(j.at("party").get<std::string>());
    if (!party) fail(line, "unknown party");
    doc.party = *party;
    for (const auto& js : j.at("sentences")) {
      Sentence s;
      for (const auto& jt : js.at("tokens")) {
        Token t;
        t.text = jt.at("t").get<std::string>();
        if (jt.contains("pos")) t.pos = jt.at("pos").get<std::string>();
        if (t.text.empty()) fail(line, "empty token text");
        s.tokens.push_back(std::move(t));
      }
      if (js.contains("labels")) {
        s.gold_labels = read_tags(js.at("labels"), s.size(), line, "labels");
      }
      if (js.contains("events")) {
        for (const auto& je : js.at("events")) {
          s.gold_events.push_back(read_tags(je, s.size(), line, "events"));
        }
      }
      doc.sentences.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    fail(line, e.what());
  }
  return doc;
}

json document_to_json(const Document& doc) {
  json j;
  j["doc_id"] = doc.doc_id;
  j["case_id"] = doc.case_id;
  j["party"] = party_name(doc.party);
  json sentences = json::array();
  for (const auto& s : doc.sentences) {
    json js;
    json tokens = json::array();
    for (const auto& t : s.tokens) tokens.push_back({{"t", t.text}, {"pos", t.pos}});
    js["tokens"] = std::move(tokens);
    if (s.gold_labels) js["labels"] = *s.gold_labels;
    if (!s.gold_events.empty()) js["events"] = s.gold_events;
    sentences.push_back(std::move(js));
  }
  j["sentences"] = std::move(sentences);
  return j;
}

}  // namespace

std::vector<Document> parse_corpus(std::istream& in) {
  std::vector<Document> docs;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(lineno, std::string("malformed JSON: ") + e.what());
    }
    Document doc = document_from_json(j, lineno);
    if (!ids.insert(doc.doc_id).second) {
      fail(lineno, "duplicate doc_id " + doc.doc_id);
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

void serialize_corpus(const std::vector<Document>& docs, std::ostream& out) {
  for (const auto& doc : docs) out << document_to_json(doc).dump() << '\n';
}

std::vector<Document> read_corpus_file(const std::string& path) {
  std::istringstream in(read_file(path));
  return parse_corpus(in);
}

void write_corpus_file(const std::vector<Document>& docs,
                       const std::string& path) {
  std::ostringstream out;
  serialize_corpus(docs, out);
  write_file_atomic(path, out.str());
}

}  // namespace jia
