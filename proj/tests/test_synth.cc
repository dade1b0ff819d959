#include <map>
#include <sstream>
#include <tuple>

#include "doctest.h"
#include "jia/extract.h"
#include "jia/synth.h"

using namespace jia;

namespace {

std::string dump(const std::vector<Document>& docs) {
  std::ostringstream out;
  serialize_corpus(docs, out);
  return out.str();
}

const Lexicons& shipped() {
  static const Lexicons lex = Lexicons::load(std::string(JIA_DATA_DIR) + "/lexicons");
  return lex;
}

// Sentences whose gold holds a Know and a Be-In-Love trigger sharing a Time.
std::size_t shared_pattern_count(const SyntheticCorpus& c) {
  const auto& schema = LabelSchema::Default();
  std::size_t n = 0;
  for (const auto& d : c.documents) {
    for (const auto& s : d.sentences) {
      bool know = false;
      bool love = false;
      std::set<std::pair<std::size_t, std::size_t>> know_time, love_time;
      for (const auto& ev : s.gold_events) {
        for (const auto& ch : chunks_of(ev)) {
          if (ch.label == schema.info(EventType::kKnow).tag_name) know = true;
          if (ch.label == schema.info(EventType::kBeInLove).tag_name) love = true;
          if (ch.label == "K.Time") know_time.insert({ch.begin, ch.end});
          if (ch.label == "BIL.Time") love_time.insert({ch.begin, ch.end});
        }
      }
      if (know && love && know_time == love_time && !know_time.empty()) ++n;
    }
  }
  return n;
}

}  // namespace

TEST_CASE("generation is deterministic for a seed") {
  SynthConfig cfg;
  cfg.cases = 10;
  cfg.seed = 7;
  auto a = generate_synthetic(cfg);
  auto b = generate_synthetic(cfg);
  CHECK(dump(a.documents) == dump(b.documents));
  CHECK(a.documents.size() == 20);
  cfg.seed = 8;
  CHECK(dump(generate_synthetic(cfg).documents) != dump(a.documents));
}

TEST_CASE("share rate one puts the pattern in every case") {
  SynthConfig cfg;
  cfg.cases = 40;
  cfg.know_love_share_rate = 1.0;
  auto c = generate_synthetic(cfg);
  CHECK(c.know_love_shared == 40);
  CHECK(shared_pattern_count(c) == 40);
}

TEST_CASE("default rates over 3100 cases") {
  SynthConfig cfg;
  cfg.cases = 3100;
  cfg.filler = false;
  auto c = generate_synthetic(cfg);
  auto n = static_cast<double>(shared_pattern_count(c));
  CHECK(n >= 481 * 0.9);
  CHECK(n <= 481 * 1.1);
  CHECK(static_cast<double>(c.twins) >= 124 * 0.9);
  CHECK(static_cast<double>(c.twins) <= 124 * 1.1);
}

TEST_CASE("gold is valid and triggers are lexicon candidates") {
  SynthConfig cfg;
  cfg.cases = 150;
  cfg.seed = 3;
  auto c = generate_synthetic(cfg);
  const auto& schema = LabelSchema::Default();
  const auto& lex = shipped();
  std::size_t filler = 0;
  for (const auto& d : c.documents) {
    CHECK(d.sentences.size() > 0);
    for (const auto& s : d.sentences) {
      REQUIRE(s.gold_labels);
      CHECK(bio_validate(*s.gold_labels, schema.final_vocabulary()).valid);
      auto cands = scan_candidates(s.tokens, lex.triggers);
      if (s.gold_events.empty()) {
        CHECK(cands.empty());
        ++filler;
      }
      for (const auto& ev : s.gold_events) {
        CHECK(bio_validate(ev, schema.final_vocabulary()).valid);
        for (const auto& t : trigger_chunks(ev)) {
          bool found = false;
          for (const auto& k : cands) {
            found = found || (k.begin == t.chunk.begin && k.end == t.chunk.end &&
                              k.type == t.type);
          }
          CHECK_MESSAGE(found, s.text(t.chunk.begin, t.chunk.end));
        }
      }
      for (const auto& m : gold_mentions(d)) check_mention(m, d.sentences[m.sentence].size());
    }
  }
  CHECK(filler > 0);
}

TEST_CASE("document sizes cover three bands") {
  SynthConfig cfg;
  cfg.cases = 60;
  auto c = generate_synthetic(cfg);
  std::array<int, 3> bands{};
  for (const auto& d : c.documents) {
    auto n = d.raw_text().size();
    ++bands[n < 3072 ? 0 : n < 6144 ? 1 : 2];
  }
  for (int b : bands) CHECK(b > 0);
}

TEST_CASE("gold verdicts match the intended labels") {
  SynthConfig cfg;
  cfg.cases = 300;
  cfg.seed = 11;
  auto c = generate_synthetic(cfg);
  AlignContext ctx{shipped()};
  std::vector<EventMention> mentions;
  for (const auto& d : c.documents) {
    for (auto& m : gold_mentions(d)) mentions.push_back(std::move(m));
  }
  using Key = std::tuple<std::string, int, int>;
  std::map<Key, int> engine, intended;
  for (const auto& r : detect_all(mentions, ctx)) {
    for (const auto& s : r.sections) {
      for (const auto& v : s.verdicts) {
        ++engine[{r.case_id, static_cast<int>(s.type), static_cast<int>(v.label)}];
      }
    }
  }
  for (const auto& p : c.intended) {
    ++intended[{p.case_id, static_cast<int>(p.type), static_cast<int>(p.label)}];
  }
  std::size_t contradictions = 0;
  for (const auto& p : c.intended) contradictions += p.label == Verdict::kContradictory;
  CHECK(contradictions > 50);
  for (const auto& [k, n] : intended) {
    CHECK_MESSAGE(engine[k] == n, std::get<0>(k), " type ", std::get<1>(k), " label ",
                  std::get<2>(k));
  }
  for (const auto& [k, n] : engine) {
    CHECK_MESSAGE(intended[k] == n, std::get<0>(k), " type ", std::get<1>(k), " label ",
                  std::get<2>(k));
  }
}
