#include "jia/crf/features.h"

#include <cctype>
#include <charconv>

#include "jia/error.h"

namespace jia::crf {

std::string word_shape(std::string_view word) {
  std::string shape;
  for (unsigned char c : word) {
    char s;
    if (std::isdigit(c)) {
      s = 'd';
    } else if (std::isupper(c)) {
      s = 'X';
    } else if (std::islower(c)) {
      s = 'x';
    } else if (c >= 0x80) {
      s = 'c';
    } else {
      s = static_cast<char>(c);
    }
    // Letter and non-ASCII runs collapse; digit runs keep their length.
    if (s != 'd' && !shape.empty() && shape.back() == s) continue;
    shape += s;
  }
  return shape;
}

FeatureTemplate FeatureTemplate::parse(std::string_view name) {
  FeatureTemplate t;
  t.name_ = std::string(name);
  std::size_t start = 0;
  while (start <= name.size()) {
    std::size_t bar = name.find('|', start);
    std::string_view atom_text =
        name.substr(start, bar == std::string_view::npos ? name.size() - start
                                                         : bar - start);
    Atom atom;
    if (atom_text == "bias") {
      atom.kind = Kind::kBias;
    } else {
      auto lb = atom_text.find('[');
      if (lb == std::string_view::npos || atom_text.back() != ']') {
        throw ValidationError("bad feature template: " + t.name_);
      }
      std::string_view head = atom_text.substr(0, lb);
      std::string_view off = atom_text.substr(lb + 1, atom_text.size() - lb - 2);
      auto res = std::from_chars(off.data(), off.data() + off.size(), atom.offset);
      if (res.ec != std::errc() || res.ptr != off.data() + off.size()) {
        throw ValidationError("bad offset in feature template: " + t.name_);
      }
      if (head == "w") {
        atom.kind = Kind::kWord;
      } else if (head == "pos") {
        atom.kind = Kind::kPos;
      } else if (head == "shape") {
        atom.kind = Kind::kShape;
      } else if (head.starts_with("ch.") && head.size() > 3) {
        atom.kind = Kind::kChannel;
        atom.channel = std::string(head.substr(3));
      } else {
        throw ValidationError("unknown feature atom in template: " + t.name_);
      }
    }
    t.atoms_.push_back(std::move(atom));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return t;
}

std::optional<std::string> FeatureTemplate::extract(const FeatureInput& input,
                                                    std::size_t position) const {
  std::string value;
  const long n = static_cast<long>(input.size());
  for (std::size_t a = 0; a < atoms_.size(); ++a) {
    const Atom& atom = atoms_[a];
    if (a) value += '|';
    if (atom.kind == Kind::kBias) {
      value += '1';
      continue;
    }
    long i = static_cast<long>(position) + atom.offset;
    if (i < 0) {
      value += "<S>";
      continue;
    }
    if (i >= n) {
      value += "</S>";
      continue;
    }
    switch (atom.kind) {
      case Kind::kWord:
        value += input.words[i];
        break;
      case Kind::kPos:
        value += i < static_cast<long>(input.pos.size()) ? input.pos[i] : "UNK";
        break;
      case Kind::kShape:
        value += word_shape(input.words[i]);
        break;
      case Kind::kChannel: {
        auto it = input.channels.find(atom.channel);
        if (it == input.channels.end() ||
            i >= static_cast<long>(it->second.size()) || it->second[i].empty()) {
          return std::nullopt;
        }
        value += it->second[i];
        break;
      }
      case Kind::kBias:
        break;
    }
  }
  return value;
}

std::vector<FeatureTemplate> parse_templates(
    const std::vector<std::string>& names) {
  std::vector<FeatureTemplate> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(FeatureTemplate::parse(n));
  return out;
}

int FeatureTable::find(const std::string& feature) const {
  auto it = ids_.find(feature);
  return it == ids_.end() ? -1 : it->second;
}

int FeatureTable::intern(const std::string& feature) {
  auto [it, inserted] = ids_.try_emplace(feature, static_cast<int>(names_.size()));
  if (inserted) names_.push_back(feature);
  return it->second;
}

namespace {

template <typename Lookup>
ObservationSequence extract_with(const FeatureInput& input,
                                 const std::vector<FeatureTemplate>& templates,
                                 Lookup&& lookup) {
  ObservationSequence obs;
  obs.features.resize(input.size());
  obs.allowed.resize(input.size());
  std::string key;
  for (std::size_t i = 0; i < input.size(); ++i) {
    for (const auto& t : templates) {
      auto v = t.extract(input, i);
      if (!v) continue;
      key = t.name();
      key += '=';
      key += *v;
      int id = lookup(key);
      if (id >= 0) obs.features[i].push_back(id);
    }
  }
  return obs;
}

}  // namespace

ObservationSequence extract_observation(
    const FeatureInput& input, const std::vector<FeatureTemplate>& templates,
    const FeatureTable& table) {
  return extract_with(input, templates,
                      [&](const std::string& k) { return table.find(k); });
}

ObservationSequence extract_observation(
    const FeatureInput& input, const std::vector<FeatureTemplate>& templates,
    FeatureTable& table, bool table_grows) {
  if (table_grows) {
    return extract_with(input, templates,
                        [&](const std::string& k) { return table.intern(k); });
  }
  return extract_with(input, templates,
                      [&](const std::string& k) { return table.find(k); });
}

}  // namespace jia::crf
