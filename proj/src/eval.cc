#include "jia/eval.h"

#include <algorithm>
#include <random>
#include <set>
#include <tuple>

#include "json.hpp"

#include "jia/error.h"

namespace jia {

namespace {

const LabelSchema& schema() { return LabelSchema::Default(); }

double ratio(std::size_t num, std::size_t den, const char* what, Warnings* warnings) {
  if (den == 0) {
    if (warnings) warnings->push_back(std::string(what) + ": zero denominator, using 0");
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double f1_of(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

PRF chunk_prf(std::size_t gold, std::size_t predicted, std::size_t correct,
              Warnings* warnings) {
  PRF r;
  r.precision = ratio(correct, predicted, "precision", warnings);
  r.recall = ratio(correct, gold, "recall", warnings);
  r.f1 = f1_of(r.precision, r.recall);
  return r;
}

LabelCounts& LabelCounts::operator+=(const LabelCounts& o) {
  gold += o.gold;
  predicted += o.predicted;
  correct += o.correct;
  return *this;
}

LabelPRF label_prf(const std::map<std::string, LabelCounts>& counts,
                   Warnings* warnings) {
  LabelPRF out;
  out.counts = counts;
  double sum_p = 0.0;
  double sum_r = 0.0;
  double sum_f = 0.0;
  std::size_t n = 0;
  for (const auto& [label, c] : counts) {
    out.total += c;
    if (c.gold == 0 && c.predicted == 0) continue;
    // Per-label zero denominators are expected for spurious or missed labels.
    PRF p = chunk_prf(c.gold, c.predicted, c.correct);
    out.per_label[label] = p;
    sum_p += p.precision;
    sum_r += p.recall;
    sum_f += p.f1;
    ++n;
  }
  out.micro = chunk_prf(out.total.gold, out.total.predicted, out.total.correct, warnings);
  if (n > 0) {
    out.macro.precision = sum_p / static_cast<double>(n);
    out.macro.recall = sum_r / static_cast<double>(n);
    out.macro.f1 = sum_f / static_cast<double>(n);
  } else if (warnings) {
    warnings->push_back("macro: no labels, using 0");
  }
  return out;
}

std::map<std::string, LabelCounts> count_items(const std::vector<ChunkItem>& gold,
                                               const std::vector<ChunkItem>& predicted) {
  std::map<std::string, LabelCounts> out;
  std::map<ChunkItem, std::size_t> pool;
  for (const auto& g : gold) {
    ++out[g.label].gold;
    ++pool[g];
  }
  for (const auto& p : predicted) {
    auto& c = out[p.label];
    ++c.predicted;
    auto it = pool.find(p);
    if (it != pool.end() && it->second > 0) {
      --it->second;
      ++c.correct;
    }
  }
  return out;
}

std::vector<ChunkItem> event_items(const std::vector<EventMention>& mentions) {
  std::vector<ChunkItem> out;
  for (const auto& m : mentions) {
    out.push_back({m.doc_id, m.sentence, m.trigger.begin, m.trigger.end,
                   schema().info(m.type).tag_name});
    for (const auto& [role, spans] : m.roles) {
      std::string label = schema().role_label(m.type, role);
      for (const auto& s : spans) out.push_back({m.doc_id, m.sentence, s.begin, s.end, label});
    }
  }
  return out;
}

std::vector<ChunkItem> tag_items(const std::string& doc_id, std::size_t sentence,
                                 const std::vector<std::string>& tags) {
  std::vector<ChunkItem> out;
  for (const auto& c : chunks_of(tags)) out.push_back({doc_id, sentence, c.begin, c.end, c.label});
  return out;
}

PairConfusion& PairConfusion::operator+=(const PairConfusion& o) {
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) cells[i][j] += o.cells[i][j];
  }
  return *this;
}

PairMetrics pair_metrics(const PairConfusion& m, Warnings* warnings) {
  const auto& c = m.cells;
  constexpr auto C = PairConfusion::kContradictory;
  constexpr auto E = PairConfusion::kEntailment;
  PairMetrics r;
  r.correctly_aligned = c[C][C] + c[C][E] + c[E][C] + c[E][E];
  for (std::size_t g = 0; g < 3; ++g) r.predicted_aligned += c[g][C] + c[g][E];
  for (std::size_t p = 0; p < 3; ++p) r.should_align += c[C][p] + c[E][p];
  r.alignment.precision =
      ratio(r.correctly_aligned, r.predicted_aligned, "alignment precision", warnings);
  r.alignment.recall =
      ratio(r.correctly_aligned, r.should_align, "alignment recall", warnings);
  r.alignment.f1 = f1_of(r.alignment.precision, r.alignment.recall);
  auto label = [&](std::size_t k, const char* name) {
    std::size_t col = c[0][k] + c[1][k] + c[2][k];
    std::size_t row = c[k][0] + c[k][1] + c[k][2];
    PRF p;
    p.precision = ratio(c[k][k], col, (std::string(name) + " precision").c_str(), warnings);
    p.recall = ratio(c[k][k], row, (std::string(name) + " recall").c_str(), warnings);
    p.f1 = f1_of(p.precision, p.recall);
    return p;
  };
  r.contradictory = label(C, "contradictory");
  r.entailment = label(E, "entailment");
  return r;
}

namespace {

using MentionKey =
    std::tuple<std::string, std::size_t, int, std::size_t, std::size_t, std::size_t>;

std::vector<MentionKey> keys_of(const std::vector<EventMention>& ms) {
  std::map<MentionKey, std::size_t> seen;
  std::vector<MentionKey> out;
  for (const auto& m : ms) {
    MentionKey base{m.doc_id, m.sentence, static_cast<int>(m.type),
                    m.trigger.begin, m.trigger.end, 0};
    std::get<5>(base) = seen[base]++;
    out.push_back(base);
  }
  return out;
}

struct CasePairs {
  // Per type: plaintiff keys, defendant keys, labels of aligned pairs.
  std::map<int, std::set<MentionKey>> plaintiff;
  std::map<int, std::set<MentionKey>> defendant;
  std::map<std::pair<MentionKey, MentionKey>, Verdict> labels;
};

void collect(const std::string& case_id, const std::vector<EventMention>& ms,
             const AlignContext& ctx, CasePairs& out, bool record_labels) {
  auto report = detect_disputes(case_id, ms, ctx);
  for (const auto& sec : report.sections) {
    int t = static_cast<int>(sec.type);
    auto pk = keys_of(sec.plaintiff);
    auto dk = keys_of(sec.defendant);
    out.plaintiff[t].insert(pk.begin(), pk.end());
    out.defendant[t].insert(dk.begin(), dk.end());
    if (!record_labels) continue;
    for (const auto& v : sec.verdicts) {
      out.labels[{pk[v.pair.left_index], dk[v.pair.right_index]}] = v.label;
    }
  }
}

std::size_t verdict_index(const std::map<std::pair<MentionKey, MentionKey>, Verdict>& labels,
                          const std::pair<MentionKey, MentionKey>& key) {
  auto it = labels.find(key);
  if (it == labels.end()) return PairConfusion::kNonAligned;
  return it->second == Verdict::kContradictory ? PairConfusion::kContradictory
                                               : PairConfusion::kEntailment;
}

std::map<std::string, std::vector<EventMention>> by_case(
    const std::vector<EventMention>& ms) {
  std::map<std::string, std::vector<EventMention>> out;
  for (const auto& m : ms) out[m.case_id].push_back(m);
  return out;
}

}  // namespace

PairConfusion pair_confusion(const std::vector<EventMention>& gold,
                             const std::vector<EventMention>& predicted,
                             const AlignContext& ctx) {
  auto g = by_case(gold);
  auto p = by_case(predicted);
  std::set<std::string> cases;
  for (const auto& [id, _] : g) cases.insert(id);
  for (const auto& [id, _] : p) cases.insert(id);
  PairConfusion out;
  for (const auto& id : cases) {
    CasePairs gp;
    CasePairs pp;
    collect(id, g[id], ctx, gp, true);
    collect(id, p[id], ctx, pp, true);
    std::set<int> types;
    for (auto* side : {&gp.plaintiff, &gp.defendant, &pp.plaintiff, &pp.defendant}) {
      for (const auto& [t, _] : *side) types.insert(t);
    }
    for (int t : types) {
      std::set<MentionKey> left = gp.plaintiff[t];
      left.insert(pp.plaintiff[t].begin(), pp.plaintiff[t].end());
      std::set<MentionKey> right = gp.defendant[t];
      right.insert(pp.defendant[t].begin(), pp.defendant[t].end());
      for (const auto& l : left) {
        for (const auto& r : right) {
          std::pair key{l, r};
          ++out.cells[verdict_index(gp.labels, key)][verdict_index(pp.labels, key)];
        }
      }
    }
  }
  return out;
}

int size_band(std::size_t bytes) {
  if (bytes < 3 * 1024) return 0;
  if (bytes < 6 * 1024) return 1;
  return 2;
}

std::vector<std::vector<std::string>> stratified_folds(
    const std::vector<Document>& docs, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ValidationError("need at least 2 folds");
  std::vector<std::string> order;
  std::map<std::string, std::size_t> size;
  for (const auto& d : docs) {
    auto [it, fresh] = size.try_emplace(d.case_id, 0);
    if (fresh) order.push_back(d.case_id);
    it->second = std::max(it->second, d.raw_text().size());
  }
  std::array<std::vector<std::string>, 3> bands;
  for (const auto& id : order) bands[size_band(size[id])].push_back(id);
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::string>> folds(k);
  for (auto& band : bands) {
    for (std::size_t i = band.size(); i > 1; --i) {
      std::swap(band[i - 1], band[rng() % i]);
    }
    for (std::size_t f = 0; f < k; ++f) {
      std::size_t lo = band.size() * f / k;
      std::size_t hi = band.size() * (f + 1) / k;
      folds[f].insert(folds[f].end(), band.begin() + static_cast<std::ptrdiff_t>(lo),
                      band.begin() + static_cast<std::ptrdiff_t>(hi));
    }
  }
  for (std::size_t f = 0; f < k; ++f) {
    if (folds[f].empty()) {
      throw ValidationError("fold " + std::to_string(f + 1) + " has an empty test set");
    }
  }
  return folds;
}

crf::CrfModel train_round_one(const std::vector<Document>& docs,
                              const TriggerLexicon& triggers,
                              const PipelineOptions& options,
                              crf::TrainReport* report) {
  auto model = new_round_one_model(options.toggles, options.train.l2_lambda);
  auto examples = round_one_examples(docs, triggers, model, true);
  if (examples.empty()) throw ValidationError("no round-one training examples");
  return crf::train(examples, std::move(model), options.train, report);
}

crf::CrfModel train_round_two(const std::vector<Document>& docs,
                              const TriggerLexicon& triggers,
                              const PipelineOptions& options,
                              crf::TrainReport* report) {
  auto model = new_round_two_model(options.toggles, options.train.l2_lambda);
  auto examples = round_two_examples(docs, triggers, model, true);
  if (examples.empty()) throw ValidationError("no round-two training examples");
  return crf::train(examples, std::move(model), options.train, report);
}

PipelineEval& PipelineEval::operator+=(const PipelineEval& o) {
  documents += o.documents;
  for (const auto& [l, c] : o.round_one_counts) round_one_counts[l] += c;
  for (const auto& [l, c] : o.event_counts) event_counts[l] += c;
  confusion += o.confusion;
  extraction_errors += o.extraction_errors;
  return *this;
}

PipelineEval evaluate_pipeline(const std::vector<Document>& docs,
                               const RoundOneTagger& r1, const RoundTwoTagger& r2,
                               const Lexicons& lexicons, const AlignContext& ctx) {
  if (docs.empty()) throw ValidationError("empty test set");
  PipelineEval out;
  out.documents = docs.size();
  std::vector<ChunkItem> gold_r1, pred_r1;
  std::vector<EventMention> gold, pred;
  for (const auto& d : docs) {
    for (std::size_t si = 0; si < d.sentences.size(); ++si) {
      Sentence s = truncate_sentence(d.sentences[si]);
      if (!s.gold_labels) continue;
      auto items = tag_items(d.doc_id, si, gold_round_one_tags(s));
      gold_r1.insert(gold_r1.end(), items.begin(), items.end());
    }
    auto result = extract_document(d, r1, r2, lexicons);
    out.extraction_errors += result.errors.size();
    for (const auto& t : result.traces) {
      auto items = tag_items(d.doc_id, t.round_one.sentence, t.round_one.tags);
      pred_r1.insert(pred_r1.end(), items.begin(), items.end());
    }
    auto g = gold_mentions(d);
    gold.insert(gold.end(), g.begin(), g.end());
    pred.insert(pred.end(), result.mentions.begin(), result.mentions.end());
  }
  out.round_one_counts = count_items(gold_r1, pred_r1);
  out.event_counts = count_items(event_items(gold), event_items(pred));
  out.confusion = pair_confusion(gold, pred, ctx);
  return out;
}

EvalSummary summarize(const PipelineEval& e) {
  EvalSummary s;
  s.documents = e.documents;
  s.extraction_errors = e.extraction_errors;
  s.round_one = label_prf(e.round_one_counts, &s.warnings);
  s.events = label_prf(e.event_counts, &s.warnings);
  s.confusion = e.confusion;
  s.pairs = pair_metrics(e.confusion, &s.warnings);
  return s;
}

PipelineEval run_fold(const std::vector<Document>& train,
                      const std::vector<Document>& test, const Lexicons& lexicons,
                      const PipelineOptions& options) {
  if (test.empty()) throw ValidationError("empty test set");
  AlignContext ctx{lexicons, options.family_conflict_threshold,
                   options.wealth_threshold};
  auto m1 = train_round_one(train, lexicons.triggers, options);
  CrfRoundOne r1(m1);
  if (options.rule_round_two) {
    return evaluate_pipeline(test, r1, RuleRoundTwo{}, lexicons, ctx);
  }
  auto m2 = train_round_two(train, lexicons.triggers, options);
  return evaluate_pipeline(test, r1, CrfRoundTwo(m2), lexicons, ctx);
}

std::vector<Document> select_cases(const std::vector<Document>& docs,
                                   const std::vector<std::string>& case_ids,
                                   bool include) {
  std::set<std::string> ids(case_ids.begin(), case_ids.end());
  std::vector<Document> out;
  for (const auto& d : docs) {
    if (ids.contains(d.case_id) == include) out.push_back(d);
  }
  return out;
}

CrossValidation cross_validate(const std::vector<Document>& docs, std::size_t k,
                               std::uint64_t fold_seed, const Lexicons& lexicons,
                               const PipelineOptions& options) {
  CrossValidation cv;
  PipelineEval pooled;
  for (const auto& fold : stratified_folds(docs, k, fold_seed)) {
    auto e = run_fold(select_cases(docs, fold, false), select_cases(docs, fold, true),
                      lexicons, options);
    cv.folds.push_back(summarize(e));
    pooled += e;
  }
  cv.pooled = summarize(pooled);
  return cv;
}

namespace {

using nlohmann::json;

json prf_json(const PRF& p) {
  return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

json label_json(const LabelPRF& l) {
  json per = json::object();
  for (const auto& [label, p] : l.per_label) {
    const auto& c = l.counts.at(label);
    json entry = prf_json(p);
    entry["gold"] = c.gold;
    entry["predicted"] = c.predicted;
    entry["correct"] = c.correct;
    per[label] = entry;
  }
  return {{"micro", prf_json(l.micro)},
          {"macro", prf_json(l.macro)},
          {"gold", l.total.gold},
          {"predicted", l.total.predicted},
          {"correct", l.total.correct},
          {"per_label", per}};
}

json summary_json(const EvalSummary& s) {
  json matrix = json::array();
  for (const auto& row : s.confusion.cells) matrix.push_back(row);
  return {{"documents", s.documents},
          {"extraction_errors", s.extraction_errors},
          {"round_one", label_json(s.round_one)},
          {"events", label_json(s.events)},
          {"alignment",
           {{"precision", s.pairs.alignment.precision},
            {"recall", s.pairs.alignment.recall},
            {"f1", s.pairs.alignment.f1},
            {"correctly_aligned", s.pairs.correctly_aligned},
            {"predicted_aligned", s.pairs.predicted_aligned},
            {"should_align", s.pairs.should_align}}},
          {"contradictory", prf_json(s.pairs.contradictory)},
          {"entailment", prf_json(s.pairs.entailment)},
          {"confusion",
           {{"rows", "gold"},
            {"columns", "predicted"},
            {"labels", {"Contradictory", "Entailment", "Non-aligned"}},
            {"matrix", matrix}}},
          {"warnings", s.warnings}};
}

}  // namespace

std::string eval_report_json(const EvalSummary& summary,
                             const std::vector<EvalSummary>& folds) {
  json doc = summary_json(summary);
  doc["format"] = "JIA-EVAL v1";
  if (!folds.empty()) {
    json arr = json::array();
    for (const auto& f : folds) arr.push_back(summary_json(f));
    doc["folds"] = arr;
  }
  return doc.dump(2) + "\n";
}

}  // namespace jia
