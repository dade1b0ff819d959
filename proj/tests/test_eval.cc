#include <random>
#include <set>

#include "doctest.h"
#include "jia/error.h"
#include "jia/eval.h"
#include "jia/synth.h"
#include "json.hpp"

using namespace jia;

namespace {

const Lexicons& shipped() {
  static const Lexicons lex = Lexicons::load(std::string(JIA_DATA_DIR) + "/lexicons");
  return lex;
}

PairConfusion table(std::array<std::array<std::size_t, 3>, 3> cells) {
  PairConfusion m;
  m.cells = cells;
  return m;
}

}  // namespace

TEST_CASE("chunk_prf examples") {
  auto p = chunk_prf(4, 5, 3);
  CHECK(p.precision == doctest::Approx(0.6));
  CHECK(p.recall == doctest::Approx(0.75));
  CHECK(p.f1 == doctest::Approx(2.0 / 3.0));

  Warnings w;
  auto none = chunk_prf(4, 0, 0, &w);
  CHECK(none.precision == 0.0);
  CHECK(none.f1 == 0.0);
  CHECK(w.size() == 1);
  CHECK(f1_of(0.0, 0.0) == 0.0);
}

TEST_CASE("micro F1 equals F1 of micro precision and recall") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::map<std::string, LabelCounts> counts;
    for (int l = 0; l < 4; ++l) {
      LabelCounts c;
      c.gold = rng() % 10;
      c.predicted = rng() % 10;
      c.correct = rng() % (std::min(c.gold, c.predicted) + 1);
      counts["L" + std::to_string(l)] = c;
    }
    auto r = label_prf(counts);
    CHECK(r.micro.f1 == doctest::Approx(f1_of(r.micro.precision, r.micro.recall)));
    CHECK(r.macro.f1 >= 0.0);
    CHECK(r.macro.f1 <= 1.0);
  }
}

TEST_CASE("count_items matches multisets") {
  std::vector<ChunkItem> gold = {{"d", 0, 1, 2, "A"}, {"d", 0, 1, 2, "A"}, {"d", 0, 3, 4, "B"}};
  std::vector<ChunkItem> pred = {{"d", 0, 1, 2, "A"}, {"d", 0, 3, 5, "B"}, {"d", 1, 0, 1, "C"}};
  auto c = count_items(gold, pred);
  CHECK(c["A"].gold == 2);
  CHECK(c["A"].correct == 1);
  CHECK(c["B"].correct == 0);
  CHECK(c["C"].predicted == 1);
  auto r = label_prf(c);
  CHECK(r.total.correct == 1);
  CHECK(r.per_label.size() == 3);
}

TEST_CASE("pair metrics on a confusion matrix") {
  auto m = table({{{159, 26, 13}, {22, 216, 39}, {15, 992, 71932}}});
  Warnings w;
  auto r = pair_metrics(m, &w);
  CHECK(w.empty());
  CHECK(r.correctly_aligned == 423);
  CHECK(r.predicted_aligned == 1430);
  CHECK(r.should_align == 475);
  CHECK(r.alignment.precision == doctest::Approx(423.0 / 1430.0));
  CHECK(r.alignment.recall == doctest::Approx(423.0 / 475.0));
  CHECK(r.contradictory.precision == doctest::Approx(159.0 / 196.0));
  CHECK(r.contradictory.recall == doctest::Approx(159.0 / 198.0));
  CHECK(r.alignment.precision * 1430 == doctest::Approx(r.alignment.recall * 475));

  Warnings empty;
  auto z = pair_metrics(PairConfusion{}, &empty);
  CHECK(z.alignment.precision == 0.0);
  CHECK(empty.size() >= 2);
}

TEST_CASE("pair_confusion") {
  auto P = Party::kPlaintiff;
  auto D = Party::kDefendant;
  auto mk = [](Party party, EventType t, const std::string& trig, std::size_t sent,
               std::map<std::string, std::string> roles) {
    EventMention m;
    m.case_id = "c";
    m.doc_id = party == Party::kPlaintiff ? "c-p" : "c-d";
    m.party = party;
    m.sentence = sent;
    m.type = t;
    m.trigger = {0, 1, trig};
    std::size_t pos = 2;
    for (auto& [r, text] : roles) {
      m.roles[r].push_back({pos, pos + 1, text});
      pos += 2;
    }
    return m;
  };
  std::vector<EventMention> gold = {
      mk(P, EventType::kKnow, "met", 0, {{"Time", "2001"}}),
      mk(D, EventType::kKnow, "met", 0, {{"Time", "2002"}}),
      mk(P, EventType::kMarry, "married", 1, {{"Time", "2003"}}),
      mk(D, EventType::kMarry, "married", 1, {{"Time", "2003"}}),
  };
  AlignContext ctx{shipped()};
  auto same = pair_confusion(gold, gold, ctx);
  CHECK(same.cells[0][0] == 1);
  CHECK(same.cells[1][1] == 1);
  std::size_t total = 0;
  for (auto& row : same.cells) {
    for (auto x : row) total += x;
  }
  CHECK(total == 2);

  // Prediction misses the defendant's Know time and adds a spurious Marry.
  auto pred = gold;
  pred[1].roles.clear();
  pred.push_back(mk(D, EventType::kMarry, "married", 4, {{"Time", "2009"}}));
  auto m = pair_confusion(gold, pred, ctx);
  CHECK(m.cells[0][1] == 1);  // contradictory read as entailed
  CHECK(m.cells[1][1] == 1);
  CHECK(m.cells[2][2] == 1);  // plaintiff Marry with the spurious one
}

TEST_CASE("stratified folds") {
  SynthConfig cfg;
  cfg.cases = 90;
  cfg.seed = 5;
  auto c = generate_synthetic(cfg);
  std::map<std::string, int> band;
  for (const auto& d : c.documents) {
    int b = size_band(d.raw_text().size());
    band[d.case_id] = std::max(band[d.case_id], b);
  }
  std::array<std::size_t, 3> per_band{};
  for (auto& [_, b] : band) ++per_band[b];
  for (auto n : per_band) REQUIRE(n >= 10);

  auto folds = stratified_folds(c.documents, 10, 1);
  REQUIRE(folds.size() == 10);
  std::set<std::string> seen;
  for (const auto& f : folds) {
    std::array<std::size_t, 3> got{};
    for (const auto& id : f) {
      CHECK(seen.insert(id).second);
      ++got[band[id]];
    }
    for (int b = 0; b < 3; ++b) {
      CHECK(got[b] >= per_band[b] / 10);
      CHECK(got[b] <= per_band[b] / 10 + 1);
    }
  }
  CHECK(seen.size() == 90);
  CHECK(stratified_folds(c.documents, 10, 1) == folds);

  CHECK(size_band(3071) == 0);
  CHECK(size_band(3072) == 1);
  CHECK(size_band(6144) == 2);
  CHECK_THROWS_AS(stratified_folds(select_cases(c.documents, {"case1", "case2"}, true), 3, 1),
                  ValidationError);
}

TEST_CASE("oracle taggers score perfectly") {
  SynthConfig cfg;
  cfg.cases = 40;
  cfg.seed = 9;
  auto c = generate_synthetic(cfg);
  AlignContext ctx{shipped()};
  auto s = summarize(
      evaluate_pipeline(c.documents, OracleRoundOne{}, OracleRoundTwo{}, shipped(), ctx));
  CHECK(s.events.micro.f1 == 1.0);
  CHECK(s.round_one.micro.f1 == 1.0);
  CHECK(s.pairs.contradictory.f1 == 1.0);
  CHECK(s.extraction_errors == 0);
  CHECK(s.confusion.cells[0][1] + s.confusion.cells[1][0] == 0);

  CHECK_THROWS_AS(evaluate_pipeline({}, OracleRoundOne{}, OracleRoundTwo{}, shipped(), ctx),
                  ValidationError);

  auto json = nlohmann::json::parse(eval_report_json(s));
  CHECK(json["format"] == "JIA-EVAL v1");
  for (const char* key : {"round_one", "events", "alignment", "contradictory", "entailment",
                          "confusion"}) {
    CHECK(json.contains(key));
  }
  CHECK(json["confusion"]["matrix"].size() == 3);
  CHECK(json["events"]["micro"]["f1"] == 1.0);
}

TEST_CASE("cross validation with rule second round") {
  SynthConfig cfg;
  cfg.cases = 30;
  cfg.seed = 4;
  auto c = generate_synthetic(cfg);
  PipelineOptions o;
  o.train.epochs = 3;
  o.train.batch_size = 16;
  o.rule_round_two = true;
  auto cv = cross_validate(c.documents, 3, 1, shipped(), o);
  CHECK(cv.folds.size() == 3);
  std::size_t docs = 0;
  for (const auto& f : cv.folds) docs += f.documents;
  CHECK(docs == c.documents.size());
  CHECK(cv.pooled.documents == c.documents.size());
  CHECK(cv.pooled.events.micro.f1 > 0.5);
}
