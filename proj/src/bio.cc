#include "jia/bio.h"

#include <stdexcept>

namespace jia {

BioReport bio_validate(std::span<const std::string> tags,
                       const std::unordered_set<std::string>& vocabulary) {
  BioReport report;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const std::string& tag = tags[i];
    if (!vocabulary.contains(tag)) {
      report.violations.push_back({i, tag, "unknown tag"});
      continue;
    }
    ParsedTag cur = parse_tag(tag);
    if (cur.prefix != 'I') continue;
    if (i == 0) {
      report.violations.push_back({i, tag, "I_ tag at sequence start"});
      continue;
    }
    ParsedTag prev = parse_tag(tags[i - 1]);
    if (prev.prefix == 'O') {
      report.violations.push_back({i, tag, "I_ tag after O"});
    } else if (prev.label != cur.label) {
      report.violations.push_back({i, tag, "I_ tag continues a different label"});
    }
  }
  report.valid = report.violations.empty();
  return report;
}

std::vector<Chunk> chunks_of(std::span<const std::string> tags) {
  std::vector<Chunk> out;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    ParsedTag t = parse_tag(tags[i]);
    if (t.prefix == 'O') continue;
    bool extend = t.prefix == 'I' && !out.empty() && out.back().end == i &&
                  out.back().label == t.label;
    if (extend) {
      out.back().end = i + 1;
    } else {
      out.push_back({i, i + 1, t.label});
    }
  }
  return out;
}

std::vector<std::string> tags_from_chunks(std::size_t n,
                                          std::span<const Chunk> chunks) {
  std::vector<std::string> tags(n, "O");
  for (const auto& c : chunks) {
    for (std::size_t i = c.begin; i < c.end && i < n; ++i) {
      tags[i] = make_tag(i == c.begin ? 'B' : 'I', c.label);
    }
  }
  return tags;
}

std::vector<std::string> to_transition_tags(
    std::span<const std::string> final_tags, const LabelSchema& schema) {
  std::vector<std::string> out;
  out.reserve(final_tags.size());
  for (const auto& tag : final_tags) {
    ParsedTag t = parse_tag(tag);
    if (t.prefix == 'O') {
      out.push_back("O");
      continue;
    }
    if (schema.event_by_tag_name(t.label)) {
      out.push_back(tag);
      continue;
    }
    auto role = schema.parse_role_label(t.label);
    if (!role) {
      throw std::logic_error("tag has no transition mapping: " + tag);
    }
    out.push_back(
        make_tag(t.prefix, schema.role_to_transition(role->first, role->second)));
  }
  return out;
}

}  // namespace jia
