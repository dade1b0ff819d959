#include "jia/extract.h"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "jia/error.h"

namespace jia {

using nlohmann::json;

namespace {

const LabelSchema& schema() { return LabelSchema::Default(); }

bool is_trigger_label(const std::string& label) {
  return schema().event_by_tag_name(label).has_value();
}

std::string bucket(long v, long lo, long hi) {
  return std::to_string(std::clamp(v, lo, hi));
}

// Signed token distance from a chunk to a span: negative when the chunk
// lies left of it.
long offset_to(const Chunk& c, std::size_t begin, std::size_t end) {
  if (c.end <= begin) return -static_cast<long>(begin - c.end + 1);
  if (c.begin >= end) return static_cast<long>(c.begin - end + 1);
  return 0;
}

long gap(const Chunk& a, const Chunk& b) {
  return std::labs(offset_to(a, b.begin, b.end));
}

std::vector<std::string> sorted_abbrs(const std::vector<Candidate>& cands) {
  std::set<std::string> s;
  for (const auto& c : cands) s.insert(schema().info(c.type).abbr);
  return {s.begin(), s.end()};
}

std::vector<int> tag_ids(const crf::CrfModel& model,
                         const std::vector<std::string>& tags) {
  std::vector<int> ids;
  ids.reserve(tags.size());
  for (const auto& t : tags) {
    auto id = model.tag_id(t);
    if (!id) throw ValidationError("tag outside the model's tag set: " + t);
    ids.push_back(*id);
  }
  return ids;
}

std::vector<std::string> tag_names(const crf::CrfModel& model,
                                   const std::vector<int>& ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (int i : ids) out.push_back(model.tags()[i]);
  return out;
}

std::vector<std::vector<int>> allowed_ids(
    const crf::CrfModel& model,
    const std::vector<std::vector<std::string>>& allowed) {
  std::vector<std::vector<int>> out(allowed.size());
  for (std::size_t t = 0; t < allowed.size(); ++t) {
    out[t] = tag_ids(model, allowed[t]);
  }
  return out;
}

bool numeric_token(const std::string& s) {
  std::size_t i = 0;
  auto digits = [&] {
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    return i > start;
  };
  if (!digits()) return false;
  if (i == s.size()) return true;
  if (s[i] != '.') return false;
  ++i;
  return digits() && i == s.size();
}

}  // namespace

std::string EventMention::role_text(const std::string& role) const {
  auto it = roles.find(role);
  if (it == roles.end()) return {};
  std::string out;
  for (const auto& span : it->second) {
    if (!out.empty()) out += ' ';
    out += span.text;
  }
  return out;
}

void check_mention(const EventMention& m, std::size_t sentence_length) {
  if (m.trigger.begin >= m.trigger.end || m.trigger.end > sentence_length) {
    throw std::logic_error("mention trigger span is empty or out of range");
  }
  for (const auto& [role, spans] : m.roles) {
    if (!schema().has_role(m.type, role)) {
      throw std::logic_error("role " + role + " is not part of " +
                             schema().info(m.type).display_name);
    }
    for (const auto& s : spans) {
      if (s.begin >= s.end || s.end > sentence_length) {
        throw std::logic_error("argument span out of range");
      }
      if (s.begin < m.trigger.end && m.trigger.begin < s.end) {
        throw std::logic_error("argument overlaps the trigger");
      }
    }
  }
}

std::vector<TriggerChunk> trigger_chunks(const std::vector<std::string>& tags) {
  std::vector<TriggerChunk> out;
  for (auto& c : chunks_of(tags)) {
    if (auto t = schema().event_by_tag_name(c.label)) out.push_back({c, *t});
  }
  return out;
}

std::vector<std::string> round_one_templates(const FeatureToggles& t) {
  std::vector<std::string> v = {
      "bias",        "w[-2]",       "w[-1]", "w[0]", "w[1]", "w[2]",
      "w[-1]|w[0]",  "w[0]|w[1]",   "shape[0]",
  };
  if (t.pos) {
    for (const char* s : {"pos[-2]", "pos[-1]", "pos[0]", "pos[1]", "pos[2]",
                          "pos[-1]|pos[0]", "pos[0]|pos[1]"}) {
      v.push_back(s);
    }
  }
  if (t.trigger) {
    for (const char* s :
         {"ch.cand[-1]", "ch.cand[0]", "ch.cand[1]", "ch.cand[0]|ch.ctype[0]",
          "ch.near[0]", "ch.near[0]|ch.dist[0]", "ch.near[0]|w[0]",
          "ch.near[0]|shape[0]", "ch.stypes[0]|w[0]"}) {
      v.push_back(s);
    }
  }
  return v;
}

std::vector<std::string> round_two_templates(const FeatureToggles& t) {
  std::vector<std::string> v = {
      "ch.r1[0]",
      "ch.r1[0]|ch.ctype[0]",
      "ch.conc[0]",
      "ch.conc[0]|ch.r1[0]",
      "w[0]|ch.r1[0]",
      "w[-1]|ch.r1[0]",
      "w[1]|ch.r1[0]",
      "w[0]|ch.r1[0]|ch.ctype[0]",
      "ch.r1[-1]|ch.r1[0]",
      "ch.r1[0]|ch.r1[1]",
  };
  if (t.pos) {
    v.push_back("pos[0]|ch.r1[0]");
    v.push_back("pos[-1]|ch.r1[0]");
  }
  if (t.position) {
    for (const char* s :
         {"ch.r1[0]|ch.rel[0]", "ch.r1[0]|ch.ctype[0]|ch.rel[0]",
          "ch.r1[0]|ch.ctype[0]|ch.side[0]",
          "ch.r1[0]|ch.ctype[0]|ch.side[0]|ch.shadow[0]",
          "ch.r1[0]|ch.ctype[0]|ch.side[0]|ch.inter[0]",
          "ch.r1[0]|ch.ctype[0]|ch.otype[0]|ch.side[0]",
          "ch.r1[0]|ch.ctype[0]|ch.closer[0]",
          "ch.r1[0]|ch.ctype[0]|ch.side[0]|ch.closer[0]|ch.inter[0]"}) {
      v.push_back(s);
    }
  }
  return v;
}

crf::FeatureInput round_one_input(const Sentence& s,
                                  const std::vector<Candidate>& candidates) {
  const std::size_t n = s.size();
  crf::FeatureInput in;
  for (const auto& tok : s.tokens) {
    in.words.push_back(tok.text);
    in.pos.push_back(tok.pos);
  }
  auto& cand = in.channels["cand"];
  auto& ctype = in.channels["ctype"];
  auto& near = in.channels["near"];
  auto& dist = in.channels["dist"];
  auto& stypes = in.channels["stypes"];
  cand.assign(n, "0");
  ctype.assign(n, "");
  near.assign(n, "");
  dist.assign(n, "");
  std::string joined;
  for (const auto& a : sorted_abbrs(candidates)) {
    if (!joined.empty()) joined += '+';
    joined += a;
  }
  stypes.assign(n, joined.empty() ? "-" : joined);
  for (const auto& c : candidates) {
    for (std::size_t i = c.begin; i < c.end; ++i) {
      cand[i] = i == c.begin ? "B" : "I";
      ctype[i] = schema().info(c.type).abbr;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (cand[i] != "0") continue;
    long best = -1;
    const Candidate* which = nullptr;
    for (const auto& c : candidates) {
      long d = std::labs(offset_to(Chunk{i, i + 1, ""}, c.begin, c.end));
      // Ties go to the candidate on the right, which is scanned later.
      if (best < 0 || d <= best) {
        best = d;
        which = &c;
      }
    }
    if (!which) continue;
    near[i] = schema().info(which->type).abbr + (which->begin > i ? ">" : "<");
    dist[i] = bucket(best, 1, 4);
  }
  return in;
}

crf::FeatureInput round_two_input(const Sentence& s,
                                  const std::vector<std::string>& r1_tags,
                                  const TriggerChunk& concerned) {
  const std::size_t n = s.size();
  crf::FeatureInput in;
  for (const auto& tok : s.tokens) {
    in.words.push_back(tok.text);
    in.pos.push_back(tok.pos);
  }
  const Chunk& tc = concerned.chunk;
  in.channels["r1"] = r1_tags;
  in.channels["ctype"].assign(n, schema().info(concerned.type).abbr);
  auto& conc = in.channels["conc"];
  auto& rel = in.channels["rel"];
  auto& side = in.channels["side"];
  auto& shadow = in.channels["shadow"];
  auto& inter = in.channels["inter"];
  auto& otype = in.channels["otype"];
  auto& closer = in.channels["closer"];
  conc.assign(n, "0");
  rel.assign(n, "");
  side.assign(n, "");
  shadow.assign(n, "");
  inter.assign(n, "");
  otype.assign(n, "");
  closer.assign(n, "");
  for (std::size_t i = 0; i < n; ++i) {
    long o = offset_to(Chunk{i, i + 1, ""}, tc.begin, tc.end);
    rel[i] = bucket(o, -16, 16);
    if (o == 0) {
      conc[i] = "1";
      side[i] = "T";
    } else {
      side[i] = o < 0 ? "L" : "R";
    }
  }
  auto chunks = chunks_of(r1_tags);
  std::vector<Chunk> triggers;
  for (const auto& c : chunks) {
    if (is_trigger_label(c.label) && c != tc) triggers.push_back(c);
  }
  for (const auto& c : chunks) {
    if (is_trigger_label(c.label)) continue;
    long o = offset_to(c, tc.begin, tc.end);
    std::size_t lo = o < 0 ? c.end : tc.end;
    std::size_t hi = o < 0 ? tc.begin : c.begin;
    long same = 0;
    for (const auto& d : chunks) {
      if (d.label == c.label && d.begin >= lo && d.end <= hi) ++same;
    }
    long between = 0;
    const Chunk* nearest = nullptr;
    for (const auto& t : triggers) {
      if (t.begin >= lo && t.end <= hi) ++between;
      if (!nearest || gap(c, t) < gap(c, *nearest)) nearest = &t;
    }
    std::string ot = "-";
    bool is_closer = true;
    if (nearest) {
      ot = schema().info(*schema().event_by_tag_name(nearest->label)).abbr;
      ot += nearest->begin > c.begin ? ">" : "<";
      is_closer = std::labs(o) <= gap(c, *nearest);
    }
    for (std::size_t i = c.begin; i < c.end; ++i) {
      shadow[i] = bucket(same, 0, 2);
      inter[i] = bucket(between, 0, 2);
      otype[i] = ot;
      closer[i] = is_closer ? "1" : "0";
    }
  }
  return in;
}

std::vector<std::vector<std::string>> round_two_allowed_tags(
    const std::vector<std::string>& r1_tags, const TriggerChunk& concerned) {
  std::vector<std::vector<std::string>> allowed(r1_tags.size(), {"O"});
  const auto& info = schema().info(concerned.type);
  for (const auto& c : chunks_of(r1_tags)) {
    if (is_trigger_label(c.label)) {
      if (c == concerned.chunk) {
        for (std::size_t i = c.begin; i < c.end; ++i) {
          allowed[i] = {make_tag(i == c.begin ? 'B' : 'I', info.tag_name)};
        }
      }
      continue;
    }
    if (!schema().is_transition_label(c.label)) continue;
    auto roles = schema().roles_with_transition(concerned.type, c.label);
    for (std::size_t i = c.begin; i < c.end; ++i) {
      char p = i == c.begin ? 'B' : 'I';
      for (const auto& r : roles) {
        allowed[i].push_back(make_tag(p, schema().role_label(concerned.type, r)));
      }
    }
  }
  return allowed;
}

crf::CrfModel new_round_one_model(const FeatureToggles& t, double l2) {
  crf::CrfModel m(schema().first_round_tags(), round_one_templates(t), l2);
  m.forbid_illegal_bio();
  return m;
}

crf::CrfModel new_round_two_model(const FeatureToggles& t, double l2) {
  crf::CrfModel m(schema().final_tags(), round_two_templates(t), l2);
  m.forbid_illegal_bio();
  return m;
}

std::vector<std::string> CrfRoundOne::tag(
    const Sentence& s, const std::vector<Candidate>& candidates) const {
  auto obs = crf::extract_observation(round_one_input(s, candidates),
                                      model_.templates(), model_.features());
  return tag_names(model_, crf::viterbi_decode(obs, model_));
}

std::vector<std::string> CrfRoundTwo::tag(const Sentence& s,
                                          const std::vector<std::string>& r1,
                                          const TriggerChunk& concerned) const {
  auto obs = crf::extract_observation(round_two_input(s, r1, concerned),
                                      model_.templates(), model_.features());
  obs.allowed = allowed_ids(model_, round_two_allowed_tags(r1, concerned));
  return tag_names(model_, crf::viterbi_decode(obs, model_));
}

std::vector<std::string> OracleRoundOne::tag(
    const Sentence& s, const std::vector<Candidate>&) const {
  return gold_round_one_tags(s);
}

std::vector<std::string> OracleRoundTwo::tag(
    const Sentence& s, const std::vector<std::string>&,
    const TriggerChunk& concerned) const {
  return gold_round_two_target(s, concerned);
}

std::vector<std::string> RuleRoundTwo::tag(const Sentence&,
                                           const std::vector<std::string>& r1,
                                           const TriggerChunk& concerned) const {
  const EventType T = concerned.type;
  const Chunk& tc = concerned.chunk;
  std::vector<std::string> out(r1.size(), "O");
  const auto& info = schema().info(T);
  for (std::size_t i = tc.begin; i < tc.end; ++i) {
    out[i] = make_tag(i == tc.begin ? 'B' : 'I', info.tag_name);
  }
  auto chunks = chunks_of(r1);
  auto assign = [&](const Chunk& c, const std::string& role) {
    std::string label = schema().role_label(T, role);
    for (std::size_t i = c.begin; i < c.end; ++i) {
      out[i] = make_tag(i == c.begin ? 'B' : 'I', label);
    }
  };
  auto preceding = [&](const std::string& label) {
    std::vector<Chunk> v;
    for (const auto& c : chunks) {
      if (c.label == label && c.end <= tc.begin) v.push_back(c);
    }
    std::sort(v.begin(), v.end(),
              [](const Chunk& a, const Chunk& b) { return a.end > b.end; });
    return v;
  };
  auto following = [&](const std::string& label) {
    std::vector<Chunk> v;
    for (const auto& c : chunks) {
      if (c.label == label && c.begin >= tc.end) v.push_back(c);
    }
    return v;
  };

  const bool preceding_only =
      T == EventType::kKnow || T == EventType::kBeInLove ||
      T == EventType::kMarry || T == EventType::kRemarry;
  for (const auto& label : schema().transition_labels()) {
    auto roles = schema().roles_with_transition(T, label);
    if (roles.empty()) continue;
    if (label == "Polarity") {
      auto before = preceding(label);
      auto after = following(label);
      const Chunk* best = before.empty() ? nullptr : &before.front();
      if (!after.empty() &&
          (!best || gap(after.front(), tc) < gap(*best, tc))) {
        best = &after.front();
      }
      if (best) assign(*best, roles.front());
      continue;
    }
    if (preceding_only) {
      if (T == EventType::kRemarry && label != "Person") continue;
      if (label != "Person" && label != "Time") continue;
      auto before = preceding(label);
      if (!before.empty()) assign(before.front(), roles.front());
      continue;
    }
    std::vector<Chunk> picked = preceding(label);
    for (auto& c : following(label)) picked.push_back(c);
    if (picked.size() > roles.size()) picked.resize(roles.size());
    std::sort(picked.begin(), picked.end());
    for (std::size_t k = 0; k < picked.size(); ++k) assign(picked[k], roles[k]);
  }
  return out;
}

std::vector<std::string> gold_round_one_tags(const Sentence& s) {
  if (!s.gold_labels) throw ValidationError("sentence has no gold labels");
  return to_transition_tags(*s.gold_labels, schema());
}

std::vector<std::string> gold_round_two_target(const Sentence& s,
                                               const TriggerChunk& trigger) {
  const std::size_t n = s.size();
  std::vector<std::string> out(n, "O");
  std::vector<std::vector<std::string>> sources;
  for (const auto& ev : s.gold_events) {
    for (const auto& tc : trigger_chunks(ev)) {
      if (tc.chunk == trigger.chunk && tc.type == trigger.type) {
        sources.push_back(ev);
        break;
      }
    }
  }
  if (sources.empty() && s.gold_events.empty() && s.gold_labels) {
    sources.push_back(*s.gold_labels);
  }
  for (const auto& ev : sources) {
    for (const auto& c : chunks_of(ev)) {
      if (out[c.begin] != "O") continue;
      for (std::size_t i = c.begin; i < c.end && i < n; ++i) {
        out[i] = make_tag(i == c.begin ? 'B' : 'I', c.label);
      }
    }
  }
  // Keep only what the decode for this trigger can express.
  std::vector<std::string> r1;
  if (s.gold_labels) {
    r1 = gold_round_one_tags(s);
  } else {
    r1 = to_transition_tags(out, schema());
  }
  auto allowed = round_two_allowed_tags(r1, trigger);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::find(allowed[i].begin(), allowed[i].end(), out[i]) == allowed[i].end()) {
      out[i] = allowed[i].size() == 1 ? allowed[i][0] : "O";
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    ParsedTag p = parse_tag(out[i]);
    if (p.prefix == 'I' && (i == 0 || parse_tag(out[i - 1]).label != p.label)) {
      out[i] = "O";
    }
  }
  return out;
}

RoundOneResult first_round(const Sentence& s, std::size_t sentence_index,
                           const RoundOneTagger& tagger,
                           const TriggerLexicon& triggers) {
  RoundOneResult r;
  r.sentence = sentence_index;
  r.candidates = scan_candidates(s.tokens, triggers);
  r.tags = tagger.tag(s, r.candidates);
  if (r.tags.size() != s.size()) {
    throw std::runtime_error("round-one tagger returned a wrong-length sequence");
  }
  return r;
}

RoundOneResult adjust_patterns(RoundOneResult r1, const Sentence& s,
                               const PolarityLexicon& polarity,
                               const std::set<std::string>& currency_units) {
  auto& tags = r1.tags;
  const std::size_t n = std::min(tags.size(), s.size());
  const std::size_t max_len = std::max<std::size_t>(1, polarity.max_phrase_tokens());
  for (std::size_t i = 0; i < n;) {
    if (tags[i] != "O") {
      ++i;
      continue;
    }
    std::size_t matched = 0;
    for (std::size_t len = std::min(max_len, n - i); len >= 1; --len) {
      bool all_o = true;
      for (std::size_t k = i; k < i + len; ++k) all_o = all_o && tags[k] == "O";
      if (!all_o) continue;
      if (polarity.polarity_of(s.text(i, i + len)) != Polarity::kUnknown) {
        matched = len;
        break;
      }
    }
    if (matched) {
      for (std::size_t k = i; k < i + matched; ++k) {
        tags[k] = make_tag(k == i ? 'B' : 'I', "Polarity");
      }
      i += matched;
      continue;
    }
    if (numeric_token(s.tokens[i].text)) {
      tags[i] = "B_Money";
      if (i + 1 < n && tags[i + 1] == "O" &&
          currency_units.contains(s.tokens[i + 1].text)) {
        tags[i + 1] = "I_Money";
        ++i;
      }
    }
    ++i;
  }
  return r1;
}

std::vector<RoundTwoDecode> second_round(const RoundOneResult& r1,
                                         const Sentence& s,
                                         const RoundTwoTagger& tagger) {
  std::vector<RoundTwoDecode> out;
  for (const auto& tc : trigger_chunks(r1.tags)) {
    RoundTwoDecode d{tc, tagger.tag(s, r1.tags, tc)};
    if (d.tags.size() != s.size()) {
      throw std::runtime_error("round-two tagger returned a wrong-length sequence");
    }
    out.push_back(std::move(d));
  }
  return out;
}

EventSkeleton skeleton_from_decode(const RoundTwoDecode& d) {
  EventSkeleton sk;
  sk.type = d.trigger.type;
  sk.trigger = d.trigger.chunk;
  for (const auto& c : chunks_of(d.tags)) {
    auto parsed = schema().parse_role_label(c.label);
    if (!parsed || parsed->first != sk.type) continue;
    sk.roles[parsed->second].push_back({c.begin, c.end, parsed->second});
  }
  return sk;
}

namespace {

const RoundTwoDecode* decode_for(const std::vector<RoundTwoDecode>& decodes,
                                 const Chunk& trigger) {
  for (const auto& d : decodes) {
    if (d.trigger.chunk == trigger) return &d;
  }
  return nullptr;
}

// Splits the triggers of `type` into instances when some unique role has
// more chunks than there are triggers. `extra` optionally contributes a
// further per-instance role (Divorce-Lawsuit Sue-Time).
void split_shared(EventType type, const std::vector<std::string>& unique_labels,
                  const std::vector<std::string>& r1_tags,
                  const std::vector<RoundTwoDecode>& decodes,
                  const std::string& extra_role,
                  const std::vector<Chunk>& extra_chunks,
                  std::vector<EventSkeleton>& out) {
  std::vector<Chunk> triggers;
  for (const auto& tc : trigger_chunks(r1_tags)) {
    if (tc.type == type) triggers.push_back(tc.chunk);
  }
  if (triggers.empty()) return;
  const std::size_t k = triggers.size();
  auto chunks = chunks_of(r1_tags);
  std::vector<std::pair<std::string, std::vector<Chunk>>> unique;
  std::size_t n = 0;
  for (const auto& label : unique_labels) {
    std::vector<Chunk> v;
    for (const auto& c : chunks) {
      if (c.label == label) v.push_back(c);
    }
    n = std::max(n, v.size());
    unique.emplace_back(label, std::move(v));
  }
  const std::size_t n_extra = extra_chunks.size() > k ? extra_chunks.size() : 0;
  n = std::max(n, n_extra);
  if (n <= k) return;

  std::vector<std::vector<EventSkeleton>> per_trigger(k);
  for (std::size_t i = 0; i < n; ++i) {
    std::map<std::string, std::vector<Chunk>> own;
    const Chunk* anchor = nullptr;
    for (const auto& [label, list] : unique) {
      if (i >= list.size()) continue;
      for (const auto& role : schema().roles_with_transition(type, label)) {
        own[role] = {Chunk{list[i].begin, list[i].end, role}};
      }
      if (!anchor || list[i].begin < anchor->begin) anchor = &list[i];
    }
    if (i < n_extra) {
      own[extra_role] = {Chunk{extra_chunks[i].begin, extra_chunks[i].end, extra_role}};
      if (!anchor) anchor = &extra_chunks[i];
    }
    std::size_t t = 0;
    if (anchor) {
      for (std::size_t j = 1; j < k; ++j) {
        long dj = gap(*anchor, triggers[j]);
        long dt = gap(*anchor, triggers[t]);
        if (dj < dt) t = j;
      }
    }
    EventSkeleton sk;
    sk.type = type;
    sk.trigger = triggers[t];
    if (const auto* d = decode_for(decodes, triggers[t])) {
      for (auto& [role, list] : skeleton_from_decode(*d).roles) {
        bool unique_role = false;
        for (const auto& [label, _] : unique) {
          if (schema().role_to_transition(type, role) == label) unique_role = true;
        }
        if (!unique_role) sk.roles[role] = list;
      }
    }
    for (auto& [role, list] : own) sk.roles[role] = list;
    // A chunk taken as this instance's own role leaves any shared role.
    for (auto& [role, list] : sk.roles) {
      if (own.contains(role)) continue;
      std::erase_if(list, [&](const Chunk& c) {
        for (const auto& [r, l] : own) {
          if (l.front().begin == c.begin && l.front().end == c.end) return true;
        }
        return false;
      });
    }
    std::erase_if(sk.roles, [](const auto& kv) { return kv.second.empty(); });
    per_trigger[t].push_back(std::move(sk));
  }
  for (std::size_t t = 0; t < k; ++t) {
    if (per_trigger[t].empty()) {
      if (const auto* d = decode_for(decodes, triggers[t])) {
        per_trigger[t].push_back(skeleton_from_decode(*d));
      } else {
        per_trigger[t].push_back({type, triggers[t], {}});
      }
    }
    for (auto& sk : per_trigger[t]) out.push_back(std::move(sk));
  }
}

}  // namespace

std::vector<EventSkeleton> apply_shared_trigger_rules(
    const std::vector<std::string>& r1_tags,
    const std::vector<RoundTwoDecode>& decodes) {
  std::vector<EventSkeleton> out;
  split_shared(EventType::kBeBorn, {"Name", "Gender", "Age"}, r1_tags, decodes,
               "", {}, out);

  // Time chunks no other event's decode claimed, on the busier side of a
  // lone Divorce-Lawsuit trigger.
  std::vector<Chunk> free_times;
  std::vector<Chunk> dl;
  for (const auto& tc : trigger_chunks(r1_tags)) {
    if (tc.type == EventType::kDivorceLawsuit) dl.push_back(tc.chunk);
  }
  if (dl.size() == 1) {
    std::vector<Chunk> left, right;
    for (const auto& c : chunks_of(r1_tags)) {
      if (c.label != "Time") continue;
      bool claimed = false;
      for (const auto& d : decodes) {
        if (d.trigger.type == EventType::kDivorceLawsuit) continue;
        if (parse_tag(d.tags[c.begin]).prefix == 'B' &&
            schema().parse_role_label(parse_tag(d.tags[c.begin]).label)) {
          claimed = true;
        }
      }
      if (claimed) continue;
      (c.end <= dl[0].begin ? left : right).push_back(c);
    }
    free_times = left.size() >= right.size() ? left : right;
  }
  split_shared(EventType::kDivorceLawsuit, {"Court", "Document", "Result"},
               r1_tags, decodes, "Sue-Time", free_times, out);
  return out;
}

ExtractionResult extract_document(const Document& doc,
                                  const RoundOneTagger& r1_tagger,
                                  const RoundTwoTagger& r2_tagger,
                                  const Lexicons& lexicons) {
  ExtractionResult result;
  for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
    Sentence s = truncate_sentence(doc.sentences[si]);
    if (scan_candidates(s.tokens, lexicons.triggers).empty()) continue;
    try {
      SentenceTrace trace;
      trace.round_one = adjust_patterns(
          first_round(s, si, r1_tagger, lexicons.triggers), s,
          lexicons.polarity, lexicons.aux.currency_units);
      trace.decodes = second_round(trace.round_one, s, r2_tagger);
      auto shared = apply_shared_trigger_rules(trace.round_one.tags, trace.decodes);
      std::vector<EventSkeleton> skeletons;
      for (const auto& d : trace.decodes) {
        bool replaced = false;
        for (const auto& sk : shared) {
          if (sk.trigger == d.trigger.chunk) {
            replaced = true;
            skeletons.push_back(sk);
          }
        }
        if (!replaced) skeletons.push_back(skeleton_from_decode(d));
      }
      for (const auto& sk : skeletons) {
        EventMention m;
        m.case_id = doc.case_id;
        m.doc_id = doc.doc_id;
        m.party = doc.party;
        m.sentence = si;
        m.type = sk.type;
        m.trigger = {sk.trigger.begin, sk.trigger.end,
                     s.text(sk.trigger.begin, sk.trigger.end)};
        for (const auto& [role, list] : sk.roles) {
          for (const auto& c : list) {
            // Triggers outrank arguments.
            if (c.begin < sk.trigger.end && sk.trigger.begin < c.end) continue;
            m.roles[role].push_back({c.begin, c.end, s.text(c.begin, c.end)});
          }
        }
        std::erase_if(m.roles, [](const auto& kv) { return kv.second.empty(); });
        check_mention(m, s.size());
        result.mentions.push_back(std::move(m));
      }
      result.traces.push_back(std::move(trace));
    } catch (const std::exception& e) {
      result.errors.push_back(doc.doc_id + " sentence " + std::to_string(si) +
                              ": " + e.what());
    }
  }
  return result;
}

std::vector<EventMention> gold_mentions(const Document& doc) {
  std::vector<EventMention> out;
  for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
    Sentence s = truncate_sentence(doc.sentences[si]);
    std::vector<std::vector<std::string>> events = s.gold_events;
    if (events.empty() && s.gold_labels) {
      // Merged labels only: one event per trigger with the roles of its type.
      for (const auto& tc : trigger_chunks(*s.gold_labels)) {
        std::vector<std::string> ev(s.size(), "O");
        for (const auto& c : chunks_of(*s.gold_labels)) {
          auto parsed = schema().parse_role_label(c.label);
          bool mine = c == tc.chunk || (parsed && parsed->first == tc.type);
          if (!mine) continue;
          for (std::size_t i = c.begin; i < c.end; ++i) {
            ev[i] = make_tag(i == c.begin ? 'B' : 'I', c.label);
          }
        }
        events.push_back(std::move(ev));
      }
    }
    for (const auto& ev : events) {
      auto triggers = trigger_chunks(ev);
      if (triggers.empty()) continue;
      EventMention m;
      m.case_id = doc.case_id;
      m.doc_id = doc.doc_id;
      m.party = doc.party;
      m.sentence = si;
      m.type = triggers.front().type;
      const Chunk& t = triggers.front().chunk;
      m.trigger = {t.begin, t.end, s.text(t.begin, t.end)};
      for (const auto& c : chunks_of(ev)) {
        auto parsed = schema().parse_role_label(c.label);
        if (!parsed || parsed->first != m.type) continue;
        m.roles[parsed->second].push_back({c.begin, c.end, s.text(c.begin, c.end)});
      }
      out.push_back(std::move(m));
    }
  }
  return out;
}

std::vector<crf::Example> round_one_examples(const std::vector<Document>& docs,
                                             const TriggerLexicon& triggers,
                                             crf::CrfModel& model, bool grow) {
  std::vector<crf::Example> out;
  for (const auto& doc : docs) {
    for (const auto& raw : doc.sentences) {
      if (!raw.gold_labels) continue;
      Sentence s = truncate_sentence(raw);
      auto cands = scan_candidates(s.tokens, triggers);
      if (cands.empty()) continue;
      crf::Example ex;
      ex.obs = crf::extract_observation(round_one_input(s, cands),
                                        model.templates(), model.features(), grow);
      ex.gold = tag_ids(model, gold_round_one_tags(s));
      out.push_back(std::move(ex));
    }
  }
  model.sync_weights();
  return out;
}

std::vector<crf::Example> round_two_examples(const std::vector<Document>& docs,
                                             const TriggerLexicon& triggers,
                                             crf::CrfModel& model, bool grow) {
  std::vector<crf::Example> out;
  for (const auto& doc : docs) {
    for (const auto& raw : doc.sentences) {
      if (!raw.gold_labels) continue;
      Sentence s = truncate_sentence(raw);
      if (scan_candidates(s.tokens, triggers).empty()) continue;
      auto r1 = gold_round_one_tags(s);
      for (const auto& tc : trigger_chunks(r1)) {
        crf::Example ex;
        ex.obs = crf::extract_observation(round_two_input(s, r1, tc),
                                          model.templates(), model.features(),
                                          grow);
        ex.obs.allowed = allowed_ids(model, round_two_allowed_tags(r1, tc));
        ex.gold = tag_ids(model, gold_round_two_target(s, tc));
        out.push_back(std::move(ex));
      }
    }
  }
  model.sync_weights();
  return out;
}

namespace {

json span_json(const ArgSpan& s) {
  return json{{"s", s.begin}, {"e", s.end}, {"text", s.text}};
}

ArgSpan span_from(const json& j) {
  return {j.at("s").get<std::size_t>(), j.at("e").get<std::size_t>(),
          j.at("text").get<std::string>()};
}

}  // namespace

std::string mentions_to_jsonl(const std::vector<EventMention>& mentions) {
  std::string out;
  for (const auto& m : mentions) {
    json roles = json::object();
    for (const auto& [role, spans] : m.roles) {
      json arr = json::array();
      for (const auto& s : spans) arr.push_back(span_json(s));
      roles[role] = arr;
    }
    json j = {{"case_id", m.case_id},
              {"doc_id", m.doc_id},
              {"party", std::string(party_name(m.party))},
              {"sentence", m.sentence},
              {"type", schema().info(m.type).abbr},
              {"trigger", span_json(m.trigger)},
              {"roles", roles}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<EventMention> parse_mentions_jsonl(std::string_view text) {
  std::vector<EventMention> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fail = [&](const std::string& what) {
      throw ValidationError("mentions line " + std::to_string(lineno) + ": " + what);
    };
    try {
      json j = json::parse(line);
      EventMention m;
      m.case_id = j.at("case_id").get<std::string>();
      m.doc_id = j.at("doc_id").get<std::string>();
      auto party = party_from_name(j.at("party").get<std::string>());
      if (!party) fail("unknown party");
      m.party = *party;
      m.sentence = j.at("sentence").get<std::size_t>();
      auto type = schema().event_by_any_name(j.at("type").get<std::string>());
      if (!type) fail("unknown event type");
      m.type = *type;
      m.trigger = span_from(j.at("trigger"));
      for (const auto& [role, arr] : j.at("roles").items()) {
        if (!schema().has_role(m.type, role)) fail("role " + role + " not in schema");
        for (const auto& s : arr) m.roles[role].push_back(span_from(s));
      }
      out.push_back(std::move(m));
    } catch (const json::exception& e) {
      fail(e.what());
    }
  }
  return out;
}

}  // namespace jia
