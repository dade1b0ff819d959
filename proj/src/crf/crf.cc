#include "jia/crf/crf.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "jia/error.h"
#include "jia/io.h"
#include "jia/schema.h"

namespace jia::crf {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr const char* kMagic = "JIA-CRF v1";

double log_sum_exp(std::span<const double> xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

// Model-dependent exponentiated transition tables, shared by every
// sequence scored against the same weights.
struct TransitionCache {
  std::size_t L = 0;
  std::vector<double> trans;    // L*L, -inf when forbidden
  std::vector<double> start;    // L, -inf when forbidden
  std::vector<double> col_max;  // max_i trans[i][j]
  std::vector<double> row_max;  // max_j trans[i][j]
  std::vector<double> exp_col;  // exp(trans[i][j] - col_max[j])
  std::vector<double> exp_row;  // exp(trans[i][j] - row_max[i])

  explicit TransitionCache(const CrfModel& model) : L(model.num_tags()) {
    const auto& w = model.weights();
    trans.assign(L * L, kNegInf);
    start.assign(L, kNegInf);
    for (std::size_t y = 0; y < L; ++y) {
      if (!model.start_forbidden(static_cast<int>(y))) start[y] = w[model.start_index(y)];
    }
    for (std::size_t i = 0; i < L; ++i) {
      for (std::size_t j = 0; j < L; ++j) {
        if (!model.transition_forbidden(i, j)) {
          trans[i * L + j] = w[model.transition_index(i, j)];
        }
      }
    }
    col_max.assign(L, kNegInf);
    row_max.assign(L, kNegInf);
    for (std::size_t i = 0; i < L; ++i) {
      for (std::size_t j = 0; j < L; ++j) {
        col_max[j] = std::max(col_max[j], trans[i * L + j]);
        row_max[i] = std::max(row_max[i], trans[i * L + j]);
      }
    }
    exp_col.assign(L * L, 0.0);
    exp_row.assign(L * L, 0.0);
    for (std::size_t i = 0; i < L; ++i) {
      for (std::size_t j = 0; j < L; ++j) {
        double t = trans[i * L + j];
        if (t == kNegInf) continue;
        exp_col[i * L + j] = std::exp(t - col_max[j]);
        exp_row[i * L + j] = std::exp(t - row_max[i]);
      }
    }
  }
};

struct Lattice {
  std::size_t n = 0;
  std::size_t L = 0;
  std::vector<std::vector<int>> active;
  std::vector<double> emit;  // n*L, -inf outside `active`
};

Lattice build_lattice(const ObservationSequence& obs, const CrfModel& model) {
  Lattice lat;
  lat.n = obs.size();
  lat.L = model.num_tags();
  lat.active.resize(lat.n);
  lat.emit.assign(lat.n * lat.L, kNegInf);
  const auto& w = model.weights();
  for (std::size_t t = 0; t < lat.n; ++t) {
    auto& act = lat.active[t];
    if (t < obs.allowed.size() && !obs.allowed[t].empty()) {
      act = obs.allowed[t];
      std::sort(act.begin(), act.end());
      act.erase(std::unique(act.begin(), act.end()), act.end());
      for (int y : act) {
        if (y < 0 || static_cast<std::size_t>(y) >= lat.L) {
          throw std::invalid_argument("allowed tag outside the tag set");
        }
      }
    } else {
      act.resize(lat.L);
      std::iota(act.begin(), act.end(), 0);
    }
    for (int y : act) {
      double s = 0.0;
      for (int f : obs.features[t]) s += w[model.emission_index(f, y)];
      lat.emit[t * lat.L + y] = s;
    }
  }
  return lat;
}

std::vector<double> forward(const Lattice& lat, const TransitionCache& tc) {
  const std::size_t L = lat.L;
  std::vector<double> alpha(lat.n * L, kNegInf);
  for (int y : lat.active[0]) alpha[y] = tc.start[y] + lat.emit[y];
  std::vector<double> a(L, 0.0);
  for (std::size_t t = 1; t < lat.n; ++t) {
    const double* prev = &alpha[(t - 1) * L];
    double m = kNegInf;
    for (int i : lat.active[t - 1]) m = std::max(m, prev[i]);
    if (m == kNegInf) break;
    for (int i : lat.active[t - 1]) a[i] = std::exp(prev[i] - m);
    for (int j : lat.active[t]) {
      double e = lat.emit[t * L + j];
      if (e == kNegInf || tc.col_max[j] == kNegInf) continue;
      double s = 0.0;
      for (int i : lat.active[t - 1]) s += a[i] * tc.exp_col[i * L + j];
      double v;
      if (s > 0.0) {
        v = m + tc.col_max[j] + std::log(s);
      } else {
        // Every contributing term underflowed; fall back to exact terms.
        std::vector<double> terms;
        for (int i : lat.active[t - 1]) terms.push_back(prev[i] + tc.trans[i * L + j]);
        v = log_sum_exp(terms);
      }
      alpha[t * L + j] = v + e;
    }
  }
  return alpha;
}

std::vector<double> backward(const Lattice& lat, const TransitionCache& tc) {
  const std::size_t L = lat.L;
  std::vector<double> beta(lat.n * L, kNegInf);
  for (int y : lat.active[lat.n - 1]) beta[(lat.n - 1) * L + y] = 0.0;
  std::vector<double> b(L, kNegInf);
  std::vector<double> c(L, 0.0);
  for (std::size_t t = lat.n - 1; t-- > 0;) {
    double m = kNegInf;
    for (int j : lat.active[t + 1]) {
      b[j] = lat.emit[(t + 1) * L + j] + beta[(t + 1) * L + j];
      m = std::max(m, b[j]);
    }
    if (m == kNegInf) break;
    for (int j : lat.active[t + 1]) c[j] = std::exp(b[j] - m);
    for (int i : lat.active[t]) {
      if (tc.row_max[i] == kNegInf) continue;
      double s = 0.0;
      for (int j : lat.active[t + 1]) s += tc.exp_row[i * L + j] * c[j];
      if (s > 0.0) {
        beta[t * L + i] = m + tc.row_max[i] + std::log(s);
      } else {
        std::vector<double> terms;
        for (int j : lat.active[t + 1]) terms.push_back(tc.trans[i * L + j] + b[j]);
        beta[t * L + i] = log_sum_exp(terms);
      }
    }
  }
  return beta;
}

double final_log_z(const Lattice& lat, const std::vector<double>& alpha) {
  std::vector<double> last;
  for (int y : lat.active[lat.n - 1]) last.push_back(alpha[(lat.n - 1) * lat.L + y]);
  return log_sum_exp(last);
}

Marginals marginals_from(const Lattice& lat, const TransitionCache& tc) {
  const std::size_t L = lat.L;
  Marginals out;
  std::vector<double> alpha = forward(lat, tc);
  std::vector<double> beta = backward(lat, tc);
  out.log_z = final_log_z(lat, alpha);
  out.node.assign(lat.n * L, 0.0);
  out.edge.assign(L * L, 0.0);
  out.start.assign(L, 0.0);
  if (out.log_z == kNegInf) return out;
  for (std::size_t t = 0; t < lat.n; ++t) {
    for (int y : lat.active[t]) {
      double v = alpha[t * L + y] + beta[t * L + y] - out.log_z;
      out.node[t * L + y] = v == kNegInf ? 0.0 : std::exp(v);
    }
  }
  for (int y : lat.active[0]) out.start[y] = out.node[y];

  std::vector<double> a(L, 0.0);
  std::vector<double> c(L, 0.0);
  std::vector<double> pair;
  for (std::size_t t = 1; t < lat.n; ++t) {
    const auto& prev_act = lat.active[t - 1];
    const auto& cur_act = lat.active[t];
    double ma = kNegInf;
    for (int i : prev_act) ma = std::max(ma, alpha[(t - 1) * L + i]);
    double mc = kNegInf;
    for (int j : cur_act) {
      double v = lat.emit[t * L + j] + beta[t * L + j] + tc.col_max[j];
      c[j] = v;
      mc = std::max(mc, v);
    }
    for (int i : prev_act) a[i] = std::exp(alpha[(t - 1) * L + i] - ma);
    for (int j : cur_act) c[j] = std::exp(c[j] - mc);
    pair.assign(prev_act.size() * cur_act.size(), 0.0);
    double sum = 0.0;
    for (std::size_t ii = 0; ii < prev_act.size(); ++ii) {
      int i = prev_act[ii];
      for (std::size_t jj = 0; jj < cur_act.size(); ++jj) {
        int j = cur_act[jj];
        double p = a[i] * tc.exp_col[i * L + j] * c[j];
        pair[ii * cur_act.size() + jj] = p;
        sum += p;
      }
    }
    if (!(sum > 0.0) || !std::isfinite(sum)) {
      // Direct evaluation when the factored form under/overflows.
      sum = 0.0;
      for (std::size_t ii = 0; ii < prev_act.size(); ++ii) {
        int i = prev_act[ii];
        for (std::size_t jj = 0; jj < cur_act.size(); ++jj) {
          int j = cur_act[jj];
          double v = alpha[(t - 1) * L + i] + tc.trans[i * L + j] +
                     lat.emit[t * L + j] + beta[t * L + j] - out.log_z;
          double p = v == kNegInf ? 0.0 : std::exp(v);
          pair[ii * cur_act.size() + jj] = p;
          sum += p;
        }
      }
      if (!(sum > 0.0)) continue;
    }
    for (std::size_t ii = 0; ii < prev_act.size(); ++ii) {
      int i = prev_act[ii];
      for (std::size_t jj = 0; jj < cur_act.size(); ++jj) {
        out.edge[i * L + cur_act[jj]] += pair[ii * cur_act.size() + jj] / sum;
      }
    }
  }
  return out;
}

void check_nonempty(const ObservationSequence& obs) {
  if (obs.size() == 0) throw std::invalid_argument("empty observation sequence");
}

}  // namespace

CrfModel::CrfModel(std::vector<std::string> tags,
                   std::vector<std::string> templates, double l2_lambda)
    : tags_(std::move(tags)),
      template_names_(std::move(templates)),
      templates_(parse_templates(template_names_)),
      l2_lambda_(l2_lambda) {
  if (tags_.empty()) throw std::invalid_argument("CRF needs at least one tag");
  forbidden_.assign(num_tags() * num_tags(), 0);
  forbidden_start_.assign(num_tags(), 0);
  sync_weights();
}

std::optional<int> CrfModel::tag_id(const std::string& tag) const {
  for (std::size_t i = 0; i < tags_.size(); ++i) {
    if (tags_[i] == tag) return static_cast<int>(i);
  }
  return std::nullopt;
}

void CrfModel::sync_weights() {
  std::size_t want = num_tags() + num_tags() * num_tags() +
                     features_.size() * num_tags();
  if (weights_.size() < want) weights_.resize(want, 0.0);
}

void CrfModel::forbid_transition(int from, int to) {
  forbidden_[static_cast<std::size_t>(from) * num_tags() + to] = 1;
}

void CrfModel::forbid_start(int tag) { forbidden_start_[tag] = 1; }

void CrfModel::forbid_illegal_bio() {
  for (std::size_t j = 0; j < num_tags(); ++j) {
    ParsedTag to = parse_tag(tags_[j]);
    if (to.prefix != 'I') continue;
    forbid_start(static_cast<int>(j));
    for (std::size_t i = 0; i < num_tags(); ++i) {
      ParsedTag from = parse_tag(tags_[i]);
      if (from.prefix == 'O' || from.label != to.label) {
        forbid_transition(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
}

void CrfModel::save(std::ostream& out) const {
  out << kMagic << '\n';
  out << "l2 " << format_double(l2_lambda_) << '\n';
  out << "tags " << tags_.size() << '\n';
  for (const auto& t : tags_) out << t << '\n';
  out << "templates " << template_names_.size() << '\n';
  for (const auto& t : template_names_) out << t << '\n';
  out << "features " << features_.size() << '\n';
  for (const auto& f : features_.names()) out << f << '\n';
  std::size_t nf = std::count(forbidden_.begin(), forbidden_.end(), 1);
  out << "forbidden " << nf << '\n';
  for (std::size_t i = 0; i < num_tags(); ++i) {
    for (std::size_t j = 0; j < num_tags(); ++j) {
      if (transition_forbidden(i, j)) out << i << ' ' << j << '\n';
    }
  }
  std::size_t ns = std::count(forbidden_start_.begin(), forbidden_start_.end(), 1);
  out << "forbidden_start " << ns << '\n';
  for (std::size_t j = 0; j < num_tags(); ++j) {
    if (start_forbidden(j)) out << j << '\n';
  }
  std::size_t nnz = 0;
  for (double w : weights_) nnz += w != 0.0;
  out << "weights " << weights_.size() << ' ' << nnz << '\n';
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] != 0.0) out << i << ' ' << format_double(weights_[i]) << '\n';
  }
  out << "end\n";
}

CrfModel CrfModel::load(std::istream& in) {
  auto fail = [](const std::string& what) -> void {
    throw ValidationError("model file: " + what);
  };
  std::string line;
  if (!std::getline(in, line) || line != kMagic) fail("missing magic \"JIA-CRF v1\"");
  auto header = [&](const std::string& key) {
    if (!std::getline(in, line)) fail("truncated before " + key);
    std::istringstream ls(line);
    std::string k;
    ls >> k;
    if (k != key) fail("expected " + key + ", got " + line);
    return line.substr(key.size());
  };
  auto read_count = [&](const std::string& key) {
    std::istringstream ls(header(key));
    std::size_t n = 0;
    if (!(ls >> n)) fail("bad count for " + key);
    return n;
  };
  auto read_lines = [&](std::size_t n) {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::getline(in, line)) fail("truncated list");
      v.push_back(line);
    }
    return v;
  };

  double l2 = 0.0;
  {
    std::istringstream ls(header("l2"));
    if (!(ls >> l2)) fail("bad l2");
  }
  auto tags = read_lines(read_count("tags"));
  auto templates = read_lines(read_count("templates"));
  CrfModel model(std::move(tags), std::move(templates), l2);
  for (const auto& f : read_lines(read_count("features"))) {
    model.features_.intern(f);
  }
  model.sync_weights();
  const int L = static_cast<int>(model.num_tags());
  std::size_t nf = read_count("forbidden");
  for (std::size_t k = 0; k < nf; ++k) {
    int i = -1, j = -1;
    if (!std::getline(in, line)) fail("truncated forbidden list");
    std::istringstream ls(line);
    if (!(ls >> i >> j) || i < 0 || j < 0 || i >= L || j >= L) fail("bad forbidden pair");
    model.forbid_transition(i, j);
  }
  std::size_t ns = read_count("forbidden_start");
  for (std::size_t k = 0; k < ns; ++k) {
    int j = -1;
    if (!std::getline(in, line)) fail("truncated forbidden_start list");
    std::istringstream ls(line);
    if (!(ls >> j) || j < 0 || j >= L) fail("bad forbidden start tag");
    model.forbid_start(j);
  }
  std::size_t total = 0, nnz = 0;
  {
    std::istringstream ls(header("weights"));
    if (!(ls >> total >> nnz)) fail("bad weights header");
  }
  if (total != model.weights_.size()) fail("weight vector size mismatch");
  for (std::size_t k = 0; k < nnz; ++k) {
    if (!std::getline(in, line)) fail("truncated weights");
    std::istringstream ls(line);
    std::size_t idx = 0;
    std::string value;
    if (!(ls >> idx >> value) || idx >= total) fail("bad weight line");
    try {
      model.weights_[idx] = std::stod(value);
    } catch (const std::exception&) {
      fail("bad weight value");
    }
  }
  if (!std::getline(in, line) || line != "end") fail("missing end marker");
  return model;
}

void CrfModel::save_file(const std::string& path) const {
  std::ostringstream out;
  save(out);
  write_file_atomic(path, out.str());
}

CrfModel CrfModel::load_file(const std::string& path) {
  std::istringstream in(read_file(path));
  return load(in);
}

bool operator==(const CrfModel& a, const CrfModel& b) {
  return a.tags_ == b.tags_ && a.template_names_ == b.template_names_ &&
         a.features_.names() == b.features_.names() &&
         a.weights_ == b.weights_ && a.forbidden_ == b.forbidden_ &&
         a.forbidden_start_ == b.forbidden_start_ &&
         a.l2_lambda_ == b.l2_lambda_;
}

double sequence_score(const ObservationSequence& obs,
                      std::span<const int> tags, const CrfModel& model) {
  check_nonempty(obs);
  if (tags.size() != obs.size()) {
    throw std::invalid_argument("tag sequence length differs from observation");
  }
  const auto& w = model.weights();
  const int L = static_cast<int>(model.num_tags());
  double s = 0.0;
  for (std::size_t t = 0; t < tags.size(); ++t) {
    int y = tags[t];
    if (y < 0 || y >= L) throw std::invalid_argument("tag outside tag set");
    if (t < obs.allowed.size() && !obs.allowed[t].empty() &&
        std::find(obs.allowed[t].begin(), obs.allowed[t].end(), y) ==
            obs.allowed[t].end()) {
      return kNegInf;
    }
    if (t == 0) {
      if (model.start_forbidden(y)) return kNegInf;
      s += w[model.start_index(y)];
    } else {
      if (model.transition_forbidden(tags[t - 1], y)) return kNegInf;
      s += w[model.transition_index(tags[t - 1], y)];
    }
    for (int f : obs.features[t]) s += w[model.emission_index(f, y)];
  }
  return s;
}

double log_partition(const ObservationSequence& obs, const CrfModel& model) {
  check_nonempty(obs);
  TransitionCache tc(model);
  Lattice lat = build_lattice(obs, model);
  return final_log_z(lat, forward(lat, tc));
}

Marginals forward_backward(const ObservationSequence& obs,
                           const CrfModel& model) {
  check_nonempty(obs);
  TransitionCache tc(model);
  return marginals_from(build_lattice(obs, model), tc);
}

std::vector<int> viterbi_decode(const ObservationSequence& obs,
                                const CrfModel& model) {
  check_nonempty(obs);
  TransitionCache tc(model);
  Lattice lat = build_lattice(obs, model);
  const std::size_t L = lat.L;
  const std::size_t n = lat.n;
  // best[t][y]: best score of positions t..n-1 given y at t.
  std::vector<double> best(n * L, kNegInf);
  for (int y : lat.active[n - 1]) best[(n - 1) * L + y] = lat.emit[(n - 1) * L + y];
  for (std::size_t t = n - 1; t-- > 0;) {
    for (int i : lat.active[t]) {
      double e = lat.emit[t * L + i];
      double m = kNegInf;
      for (int j : lat.active[t + 1]) {
        double v = tc.trans[i * L + j] + best[(t + 1) * L + j];
        if (v > m) m = v;
      }
      best[t * L + i] = e + m;
    }
  }
  // Forward pass picks the lowest tag among ties at each position.
  std::vector<int> path(n);
  double top = kNegInf;
  int arg = -1;
  for (int y : lat.active[0]) {
    double v = tc.start[y] + best[y];
    if (v > top) {
      top = v;
      arg = y;
    }
  }
  if (arg < 0 || top == kNegInf) {
    throw std::runtime_error("every tag sequence is forbidden");
  }
  path[0] = arg;
  for (std::size_t t = 1; t < n; ++t) {
    double m = kNegInf;
    int a = -1;
    for (int j : lat.active[t]) {
      double v = tc.trans[path[t - 1] * L + j] + best[t * L + j];
      if (v > m) {
        m = v;
        a = j;
      }
    }
    path[t] = a;
  }
  return path;
}

namespace {

// Adds the data-term gradient of `batch` into g and records every index it
// touches in `touched`. Returns the summed negative log-likelihood.
double accumulate_data_gradient(std::span<const Example* const> batch,
                                const CrfModel& model, const TransitionCache& tc,
                                std::vector<double>& g,
                                std::vector<std::size_t>& touched) {
  const std::size_t L = model.num_tags();
  double loss = 0.0;
  auto add = [&](std::size_t k, double v) {
    if (g[k] == 0.0) touched.push_back(k);
    g[k] += v;
    // A coordinate that cancels to exactly zero is re-pushed later; the
    // duplicate is harmless because the update reads and clears g[k].
  };
  for (const Example* ex : batch) {
    const auto& obs = ex->obs;
    check_nonempty(obs);
    if (ex->gold.size() != obs.size()) {
      throw std::invalid_argument("gold length differs from observation");
    }
    for (int y : ex->gold) {
      if (y < 0 || static_cast<std::size_t>(y) >= L) {
        throw std::invalid_argument("gold tag outside tag set");
      }
    }
    double gold_score = sequence_score(obs, ex->gold, model);
    if (gold_score == kNegInf) {
      throw std::invalid_argument("gold sequence violates the constraints");
    }
    Marginals m = marginals_from(build_lattice(obs, model), tc);
    loss += m.log_z - gold_score;
    for (std::size_t y = 0; y < L; ++y) {
      if (m.start[y] != 0.0) add(model.start_index(y), m.start[y]);
    }
    add(model.start_index(ex->gold[0]), -1.0);
    for (std::size_t i = 0; i < L; ++i) {
      for (std::size_t j = 0; j < L; ++j) {
        double e = m.edge[i * L + j];
        if (e != 0.0) add(model.transition_index(i, j), e);
      }
    }
    for (std::size_t t = 0; t < obs.size(); ++t) {
      if (t > 0) add(model.transition_index(ex->gold[t - 1], ex->gold[t]), -1.0);
      const double* p = &m.node[t * L];
      for (int f : obs.features[t]) {
        std::size_t base = model.emission_index(f, 0);
        for (std::size_t y = 0; y < L; ++y) {
          if (p[y] != 0.0) add(base + y, p[y]);
        }
        add(base + ex->gold[t], -1.0);
      }
    }
  }
  return loss;
}

}  // namespace

LossAndGradient nll_and_gradient(std::span<const Example* const> batch,
                                 const CrfModel& model, double l2_scale) {
  LossAndGradient out;
  out.gradient.assign(model.weights().size(), 0.0);
  std::vector<std::size_t> touched;
  out.loss = accumulate_data_gradient(batch, model, TransitionCache(model),
                                      out.gradient, touched);
  const double lambda = model.l2_lambda() * l2_scale;
  if (lambda != 0.0) {
    const auto& w = model.weights();
    double sq = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      sq += w[k] * w[k];
      out.gradient[k] += lambda * w[k];
    }
    out.loss += 0.5 * lambda * sq;
  }
  return out;
}

LossAndGradient nll_and_gradient(std::span<const Example> batch,
                                 const CrfModel& model, double l2_scale) {
  std::vector<const Example*> ptrs;
  ptrs.reserve(batch.size());
  for (const auto& ex : batch) ptrs.push_back(&ex);
  return nll_and_gradient(std::span<const Example* const>(ptrs), model, l2_scale);
}

CrfModel train(const std::vector<Example>& examples, CrfModel init,
               const TrainConfig& config, TrainReport* report) {
  if (examples.empty()) throw std::invalid_argument("empty training set");
  if (config.epochs < 0 || config.batch_size < 1) {
    throw std::invalid_argument("epochs must be >= 0 and batch_size >= 1");
  }
  CrfModel model = std::move(init);
  model.set_l2_lambda(config.l2_lambda);
  model.sync_weights();
  const std::size_t n = examples.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed);
  std::vector<const Example*> batch;
  std::vector<double> g(model.weights().size(), 0.0);
  std::vector<std::size_t> touched;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    // Fisher-Yates with raw engine output keeps the order identical across
    // standard library implementations.
    for (std::size_t i = n; i > 1; --i) {
      std::swap(order[i - 1], order[rng() % i]);
    }
    double epoch_loss = 0.0;
    for (std::size_t b = 0; b < n; b += config.batch_size) {
      std::size_t e = std::min(n, b + static_cast<std::size_t>(config.batch_size));
      batch.clear();
      for (std::size_t k = b; k < e; ++k) batch.push_back(&examples[order[k]]);
      const double share = static_cast<double>(batch.size()) / static_cast<double>(n);
      const double lambda = model.l2_lambda() * share;
      const double step = config.learning_rate / static_cast<double>(batch.size());
      touched.clear();
      double loss = accumulate_data_gradient(std::span<const Example* const>(batch),
                                             model, TransitionCache(model), g,
                                             touched);
      // The L2 part of the step is a uniform decay; the data part only moves
      // coordinates the batch touched.
      auto& w = model.weights();
      if (lambda != 0.0) {
        double sq = 0.0;
        const double decay = 1.0 - step * lambda;
        for (double& x : w) {
          sq += x * x;
          x *= decay;
        }
        loss += 0.5 * lambda * sq;
      }
      if (!std::isfinite(loss)) {
        throw std::runtime_error("non-finite loss at epoch " +
                                 std::to_string(epoch + 1) + ", batch starting " +
                                 std::to_string(b));
      }
      epoch_loss += loss;
      for (std::size_t k : touched) {
        w[k] -= step * g[k];
        g[k] = 0.0;
      }
    }
    if (report) report->epoch_losses.push_back(epoch_loss);
  }
  return model;
}

}  // namespace jia::crf
