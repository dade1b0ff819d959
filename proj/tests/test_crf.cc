#include <cmath>
#include <random>
#include <sstream>

#include "crf_oracle.h"
#include "doctest.h"
#include "jia/bio.h"
#include "jia/crf/crf.h"
#include "jia/error.h"
#include "jia/schema.h"

using namespace jia;
using namespace jia::crf;

namespace {

ObservationSequence blank(std::size_t n) {
  ObservationSequence obs;
  obs.features.resize(n);
  obs.allowed.resize(n);
  return obs;
}

CrfModel plain_model(std::size_t L, double l2 = 0.0) {
  std::vector<std::string> tags;
  for (std::size_t i = 0; i < L; ++i) tags.push_back("t" + std::to_string(i));
  return CrfModel(tags, {"w[0]"}, l2);
}

std::vector<int> random_legal(std::mt19937_64& rng, const oracle::Instance& in) {
  std::vector<std::vector<int>> legal;
  oracle::enumerate(in.obs.size(), in.model.num_tags(),
                    [&](const std::vector<int>& y) {
                      if (!std::isinf(oracle::score(in.obs, y, in.model))) {
                        legal.push_back(y);
                      }
                    });
  return legal[rng() % legal.size()];
}

}  // namespace

TEST_CASE("uniform model partition") {
  auto m = plain_model(4);
  CHECK(log_partition(blank(3), m) == doctest::Approx(3 * std::log(4.0)).epsilon(1e-12));
  auto m2 = plain_model(2);
  CHECK(log_partition(blank(1), m2) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(log_partition(blank(0), m2), std::invalid_argument);
  CHECK_THROWS_AS(viterbi_decode(blank(0), m2), std::invalid_argument);
}

TEST_CASE("zero weights decode to index 0") {
  auto m = plain_model(5);
  CHECK(viterbi_decode(blank(6), m) == std::vector<int>(6, 0));
}

TEST_CASE("partition and viterbi agree with enumeration") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 1 + rng() % 6;
    std::size_t L = 1 + rng() % 5;
    auto inst = oracle::random_instance(rng, n, L, 3, 2.0, trial % 2 == 1);
    double bf = oracle::log_partition(inst.obs, inst.model);
    double lp = log_partition(inst.obs, inst.model);
    CHECK(std::abs(lp - bf) <= 1e-8 * std::max(1.0, std::abs(bf)));
    CHECK(viterbi_decode(inst.obs, inst.model) == oracle::argmax(inst.obs, inst.model));
    // log Z bounds every single legal score.
    auto y = random_legal(rng, inst);
    CHECK(lp >= sequence_score(inst.obs, y, inst.model) - 1e-12);
    CHECK(sequence_score(inst.obs, y, inst.model) ==
          doctest::Approx(oracle::score(inst.obs, y, inst.model)));
  }
}

TEST_CASE("marginals are normalized") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + rng() % 30;
    std::size_t L = 2 + rng() % 8;
    auto inst = oracle::random_instance(rng, n, L, 5, 10.0, trial % 2 == 0);
    auto m = forward_backward(inst.obs, inst.model);
    for (std::size_t t = 0; t < n; ++t) {
      double s = 0.0;
      for (std::size_t y = 0; y < L; ++y) s += m.node[t * L + y];
      CHECK(std::abs(s - 1.0) <= 1e-9);
    }
    double e = 0.0;
    for (double v : m.edge) e += v;
    CHECK(std::abs(e - static_cast<double>(n - 1)) <= 1e-9 * n);
  }
}

TEST_CASE("large weights stay finite") {
  std::mt19937_64 rng(8);
  auto inst = oracle::random_instance(rng, 55, 6, 4, 50.0, true);
  double lz = log_partition(inst.obs, inst.model);
  CHECK(std::isfinite(lz));
  auto m = forward_backward(inst.obs, inst.model);
  for (std::size_t t = 0; t < 55; ++t) {
    double s = 0.0;
    for (std::size_t y = 0; y < 6; ++y) s += m.node[t * 6 + y];
    CHECK(std::abs(s - 1.0) <= 1e-9);
  }
}

TEST_CASE("BIO constraints steer decoding") {
  CrfModel m({"O", "B_Time", "I_Time"}, {"w[0]"}, 0.0);
  m.forbid_illegal_bio();
  int f = m.features().intern("w[0]=x");
  m.sync_weights();
  m.weights()[m.emission_index(f, 2)] = 10.0;
  ObservationSequence obs = blank(2);
  obs.features[0] = {f};
  auto y = viterbi_decode(obs, m);
  CHECK(y[0] != 2);
  CHECK(y == oracle::argmax(obs, m));

  // Decodes under BIO constraints always validate.
  std::mt19937_64 rng(4);
  const auto& schema = LabelSchema::Default();
  std::vector<std::string> tags{"O", "B_Time", "I_Time", "B_Know", "I_Know"};
  CrfModel bio(tags, {"w[0]"}, 0.0);
  bio.forbid_illegal_bio();
  for (int k = 0; k < 3; ++k) bio.features().intern("f" + std::to_string(k));
  bio.sync_weights();
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    for (auto& w : bio.weights()) w = u(rng);
    ObservationSequence o = blank(1 + rng() % 10);
    for (auto& fs : o.features) fs = {static_cast<int>(rng() % 3)};
    auto ids = viterbi_decode(o, bio);
    std::vector<std::string> out;
    for (int i : ids) out.push_back(tags[i]);
    CHECK(bio_validate(out, schema.first_round_vocabulary()).valid);
  }
}

TEST_CASE("fully forbidden decode throws") {
  auto m = plain_model(2);
  m.forbid_start(0);
  m.forbid_start(1);
  CHECK_THROWS_AS(viterbi_decode(blank(2), m), std::runtime_error);
  CHECK(std::isinf(log_partition(blank(2), m)));
}

TEST_CASE("single tag has zero data gradient") {
  std::mt19937_64 rng(1);
  auto inst = oracle::random_instance(rng, 4, 1, 3, 2.0, false);
  Example ex{inst.obs, {0, 0, 0, 0}};
  auto lg = nll_and_gradient(std::span<const Example>(&ex, 1), inst.model);
  CHECK(lg.loss == doctest::Approx(0.0).epsilon(1e-12));
  for (double g : lg.gradient) CHECK(std::abs(g) < 1e-12);
}

TEST_CASE("gradient matches finite differences") {
  std::mt19937_64 rng(99);
  const double h = 1e-5;
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t L = 1 + rng() % 4;
    auto inst = oracle::random_instance(rng, 1 + rng() % 5, L, 3, 1.0, trial % 2);
    inst.model.set_l2_lambda(trial % 3 ? 0.1 : 0.0);
    std::vector<Example> batch;
    for (int b = 0; b < 2; ++b) {
      auto other = inst.obs;
      batch.push_back({other, random_legal(rng, inst)});
    }
    auto lg = nll_and_gradient(std::span<const Example>(batch), inst.model, 0.5);
    CrfModel probe = inst.model;
    for (std::size_t k = 0; k < probe.weights().size(); ++k) {
      double w0 = probe.weights()[k];
      probe.weights()[k] = w0 + h;
      double up = nll_and_gradient(std::span<const Example>(batch), probe, 0.5).loss;
      probe.weights()[k] = w0 - h;
      double down = nll_and_gradient(std::span<const Example>(batch), probe, 0.5).loss;
      probe.weights()[k] = w0;
      double fd = (up - down) / (2 * h);
      double a = lg.gradient[k];
      CHECK(std::abs(a - fd) <= 1e-4 * std::max({std::abs(a), std::abs(fd), 1e-6}));
    }
  }
}

TEST_CASE("large margin drives loss and gradient to zero") {
  CrfModel m({"O", "A", "B"}, {"w[0]"}, 0.0);
  int fa = m.features().intern("w[0]=a");
  int fb = m.features().intern("w[0]=b");
  m.sync_weights();
  m.weights()[m.emission_index(fa, 1)] = 30.0;
  m.weights()[m.emission_index(fb, 2)] = 30.0;
  ObservationSequence obs = blank(3);
  obs.features = {{fa}, {fb}, {fa}};
  Example ex{obs, {1, 2, 1}};
  auto lg = nll_and_gradient(std::span<const Example>(&ex, 1), m);
  CHECK(lg.loss <= 1e-6);
  double norm = 0.0;
  for (double g : lg.gradient) norm += g * g;
  CHECK(std::sqrt(norm) <= 1e-3);
}

TEST_CASE("gold outside the tag set is rejected") {
  auto m = plain_model(2);
  Example ex{blank(2), {0, 5}};
  CHECK_THROWS_AS(nll_and_gradient(std::span<const Example>(&ex, 1), m),
                  std::invalid_argument);
}

namespace {

// Words determine tags: "a*" -> 1, "b*" -> 2, anything else -> 0.
std::vector<Example> separable(CrfModel& model, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto templates = model.templates();
  std::vector<Example> out;
  for (int i = 0; i < n; ++i) {
    FeatureInput in;
    std::vector<int> gold;
    std::size_t len = 3 + rng() % 6;
    for (std::size_t t = 0; t < len; ++t) {
      int c = static_cast<int>(rng() % 3);
      in.words.push_back(std::string(1, "xab"[c]) + std::to_string(rng() % 3));
      in.pos.push_back("UNK");
      gold.push_back(c);
    }
    out.push_back({extract_observation(in, templates, model.features(), true), gold});
  }
  model.sync_weights();
  return out;
}

}  // namespace

TEST_CASE("training fits a separable fixture") {
  CrfModel init({"O", "A", "B"}, {"w[0]", "w[-1]", "bias"}, 1e-4);
  auto data = separable(init, 20, 3);
  TrainConfig cfg;
  cfg.epochs = 15;
  cfg.batch_size = 4;
  cfg.learning_rate = 0.5;
  TrainReport report;
  CrfModel m = train(data, init, cfg, &report);
  CHECK(report.epoch_losses.size() == 15);
  CHECK(report.epoch_losses.back() < report.epoch_losses.front());
  std::size_t right = 0, total = 0;
  for (const auto& ex : data) {
    auto y = viterbi_decode(ex.obs, m);
    for (std::size_t t = 0; t < y.size(); ++t) right += y[t] == ex.gold[t];
    total += y.size();
  }
  CHECK(static_cast<double>(right) / total >= 0.99);

  cfg.epochs = 0;
  CHECK(train(data, init, cfg) == init);

  CHECK_THROWS_AS(train({}, init, cfg), std::invalid_argument);
}

TEST_CASE("small learning rate gives non-increasing epoch loss") {
  CrfModel init({"O", "A", "B"}, {"w[0]"}, 1e-3);
  auto data = separable(init, 20, 5);
  TrainConfig cfg;
  cfg.epochs = 10;
  cfg.batch_size = 20;
  cfg.learning_rate = 0.05;
  TrainReport report;
  train(data, init, cfg, &report);
  for (std::size_t e = 1; e < report.epoch_losses.size(); ++e) {
    CHECK(report.epoch_losses[e] <= report.epoch_losses[e - 1]);
  }
}

TEST_CASE("training is deterministic and models round trip") {
  CrfModel init({"O", "A", "B"}, {"w[0]", "shape[0]"}, 1e-4);
  auto data = separable(init, 30, 8);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 7;
  CrfModel a = train(data, init, cfg);
  CrfModel b = train(data, init, cfg);
  CHECK(a == b);
  CHECK(a.weights() == b.weights());
  a.forbid_transition(1, 2);

  std::stringstream ss;
  a.save(ss);
  std::string text = ss.str();
  CHECK(text.rfind("JIA-CRF v1\n", 0) == 0);
  CrfModel back = CrfModel::load(ss);
  CHECK(back == a);
  CHECK(back.transition_forbidden(1, 2));
  std::stringstream again;
  back.save(again);
  CHECK(again.str() == text);

  std::istringstream junk("JIA-CRF v0\n");
  CHECK_THROWS_AS(CrfModel::load(junk), ValidationError);
  std::istringstream cut(text.substr(0, text.size() / 2));
  CHECK_THROWS_AS(CrfModel::load(cut), ValidationError);
}

TEST_CASE("feature templates") {
  FeatureInput in;
  in.words = {"Married", "in", "2005"};
  in.pos = {"VV", "P", "CD"};
  in.channels["cand"] = {"1", "", "0"};
  CHECK(word_shape("Married") == "Xx");
  CHECK(word_shape("2005") == "dddd");
  auto t = FeatureTemplate::parse("w[-1]|pos[1]");
  CHECK(t.extract(in, 0) == std::optional<std::string>("<S>|P"));
  CHECK(t.extract(in, 2) == std::optional<std::string>("in|</S>"));
  auto c = FeatureTemplate::parse("ch.cand[0]");
  CHECK(c.extract(in, 0) == std::optional<std::string>("1"));
  CHECK_FALSE(c.extract(in, 1).has_value());
  CHECK_THROWS_AS(FeatureTemplate::parse("zz[0]"), ValidationError);
  CHECK_THROWS_AS(FeatureTemplate::parse("w[x]"), ValidationError);

  FeatureTable table;
  auto obs = extract_observation(in, parse_templates({"w[0]", "ch.cand[0]"}), table, true);
  CHECK(obs.features[0].size() == 2);
  CHECK(obs.features[1].size() == 1);
  std::size_t size = table.size();
  FeatureInput other = in;
  other.words[0] = "unseen";
  auto frozen = extract_observation(other, parse_templates({"w[0]"}), table, false);
  CHECK(frozen.features[0].empty());
  CHECK(table.size() == size);
}
