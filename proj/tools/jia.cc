// Command-line driver: corpus generation, training, extraction, alignment,
// conflict detection and evaluation.

#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "jia/error.h"
#include "jia/eval.h"
#include "jia/io.h"
#include "jia/synth.h"

namespace {

using namespace jia;

struct RunConfig {
  std::string corpus;
  std::string mentions;
  std::string lexicons = "data/lexicons";
  std::string model_dir = "models";
  std::string out;
  std::uint64_t seed = 1;
  int epochs = 15;
  int batch = 64;
  double lr = 0.1;
  double l2 = 1e-4;
  double fc_threshold = 0.5;
  double wealth_threshold = 0.75;
  std::string second_round = "crf";
  std::size_t folds = 0;
  std::size_t cases = 100;
  bool gold = false;
};

std::string describe(const RunConfig& c) {
  std::ostringstream o;
  o << "corpus=" << c.corpus << " mentions=" << c.mentions << " lexicons=" << c.lexicons
    << " model-dir=" << c.model_dir << " out=" << c.out << " seed=" << c.seed
    << " epochs=" << c.epochs << " batch=" << c.batch << " lr=" << format_double(c.lr)
    << " l2=" << format_double(c.l2) << " fc-threshold=" << format_double(c.fc_threshold)
    << " wealth-threshold=" << format_double(c.wealth_threshold)
    << " second-round=" << c.second_round << " folds=" << c.folds << " cases=" << c.cases
    << " gold=" << (c.gold ? "true" : "false");
  return o.str();
}

void validate(const RunConfig& c) {
  auto unit = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValidationError(std::string(name) + " must lie in [0, 1]");
    }
  };
  unit(c.fc_threshold, "fc-threshold");
  unit(c.wealth_threshold, "wealth-threshold");
  if (c.epochs < 0) throw ValidationError("epochs must be >= 0");
  if (c.batch < 1) throw ValidationError("batch must be >= 1");
  if (!(c.lr > 0.0)) throw ValidationError("lr must be > 0");
  if (!(c.l2 >= 0.0)) throw ValidationError("l2 must be >= 0");
  if (c.second_round != "crf" && c.second_round != "rules") {
    throw ValidationError("second-round must be crf or rules");
  }
}

PipelineOptions options_of(const RunConfig& c) {
  PipelineOptions o;
  o.train.epochs = c.epochs;
  o.train.batch_size = c.batch;
  o.train.learning_rate = c.lr;
  o.train.l2_lambda = c.l2;
  o.train.seed = c.seed;
  o.rule_round_two = c.second_round == "rules";
  o.family_conflict_threshold = c.fc_threshold;
  o.wealth_threshold = c.wealth_threshold;
  return o;
}

std::string require(const std::string& value, const char* flag) {
  if (value.empty()) throw ValidationError(std::string("missing --") + flag);
  return value;
}

std::string out_or(const RunConfig& c, const char* fallback) {
  return c.out.empty() ? fallback : c.out;
}

void write_output(const std::string& path, const std::string& content) {
  auto dir = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!dir.empty()) std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_file_atomic(path, content);
  spdlog::info("wrote {}", path);
}

std::string model_path(const RunConfig& c, int round) {
  return (std::filesystem::path(c.model_dir) / ("round" + std::to_string(round) + ".crf"))
      .string();
}

crf::CrfModel load_model(const RunConfig& c, int round) {
  std::string path = model_path(c, round);
  if (!std::filesystem::exists(path)) {
    throw ValidationError("model not found: " + path + " (run train-r" +
                          std::to_string(round) + " first)");
  }
  return crf::CrfModel::load_file(path);
}

std::vector<Document> load_corpus(const RunConfig& c) {
  auto docs = read_corpus_file(require(c.corpus, "corpus"));
  spdlog::info("corpus {}: {} documents", c.corpus, docs.size());
  return docs;
}

Lexicons load_lexicons(const RunConfig& c) {
  return Lexicons::load(require(c.lexicons, "lexicons"));
}

int gen_synthetic(const RunConfig& c) {
  SynthConfig sc;
  sc.cases = c.cases;
  sc.seed = c.seed;
  auto corpus = generate_synthetic(sc);
  std::ostringstream out;
  serialize_corpus(corpus.documents, out);
  write_output(out_or(c, "synthetic.jsonl"), out.str());
  spdlog::info("{} cases, {} documents, {} intended pairs", sc.cases,
               corpus.documents.size(), corpus.intended.size());
  return 0;
}

int train(const RunConfig& c, int round) {
  auto docs = load_corpus(c);
  auto lex = load_lexicons(c);
  crf::TrainReport report;
  auto model = round == 1 ? train_round_one(docs, lex.triggers, options_of(c), &report)
                          : train_round_two(docs, lex.triggers, options_of(c), &report);
  for (std::size_t e = 0; e < report.epoch_losses.size(); ++e) {
    spdlog::debug("epoch {} loss {}", e + 1, report.epoch_losses[e]);
  }
  std::ostringstream out;
  model.save(out);
  write_output(c.out.empty() ? model_path(c, round) : c.out, out.str());
  return 0;
}

std::vector<EventMention> run_extraction(const RunConfig& c,
                                         const std::vector<Document>& docs,
                                         const Lexicons& lex) {
  std::vector<EventMention> mentions;
  if (c.gold) {
    for (const auto& d : docs) {
      auto g = gold_mentions(d);
      mentions.insert(mentions.end(), g.begin(), g.end());
    }
    return mentions;
  }
  auto m1 = load_model(c, 1);
  CrfRoundOne r1(m1);
  std::optional<crf::CrfModel> m2;
  if (c.second_round == "crf") m2 = load_model(c, 2);
  std::unique_ptr<RoundTwoTagger> r2;
  if (m2) {
    r2 = std::make_unique<CrfRoundTwo>(*m2);
  } else {
    r2 = std::make_unique<RuleRoundTwo>();
  }
  for (const auto& d : docs) {
    auto result = extract_document(d, r1, *r2, lex);
    for (const auto& e : result.errors) spdlog::warn("{}", e);
    mentions.insert(mentions.end(), result.mentions.begin(), result.mentions.end());
  }
  return mentions;
}

// Mentions from --mentions, else extracted from --corpus.
std::vector<EventMention> input_mentions(const RunConfig& c, const Lexicons& lex) {
  if (!c.mentions.empty()) {
    auto ms = parse_mentions_jsonl(read_file(c.mentions));
    for (const auto& m : ms) {
      if (m.case_id.empty()) throw ValidationError("mention without case_id in " + c.mentions);
    }
    return ms;
  }
  return run_extraction(c, load_corpus(c), lex);
}

int extract(const RunConfig& c) {
  auto lex = load_lexicons(c);
  auto docs = load_corpus(c);
  auto mentions = run_extraction(c, docs, lex);
  spdlog::info("{} mentions", mentions.size());
  write_output(out_or(c, "mentions.jsonl"), mentions_to_jsonl(mentions));
  return 0;
}

int align(const RunConfig& c) {
  auto lex = load_lexicons(c);
  AlignContext ctx{lex, c.fc_threshold, c.wealth_threshold};
  std::vector<AlignedPair> pairs;
  for (const auto& report : detect_all(input_mentions(c, lex), ctx)) {
    for (const auto& s : report.sections) {
      auto p = align_events(s.plaintiff, s.defendant, ctx);
      pairs.insert(pairs.end(), p.begin(), p.end());
    }
  }
  spdlog::info("{} aligned pairs", pairs.size());
  write_output(out_or(c, "alignment.json"), alignment_to_json(pairs));
  return 0;
}

int detect(const RunConfig& c) {
  auto lex = load_lexicons(c);
  AlignContext ctx{lex, c.fc_threshold, c.wealth_threshold};
  auto reports = detect_all(input_mentions(c, lex), ctx);
  std::size_t conflicts = 0;
  for (const auto& r : reports) conflicts += r.contradiction_count();
  spdlog::info("{} cases, {} contradictory pairs", reports.size(), conflicts);
  std::string out = out_or(c, "report.json");
  write_output(out, reports_to_json(reports));
  write_output(std::filesystem::path(out).replace_extension(".txt").string(),
               reports_to_text(reports));
  return 0;
}

int evaluate(const RunConfig& c) {
  auto docs = load_corpus(c);
  auto lex = load_lexicons(c);
  std::string out = out_or(c, "eval.json");
  EvalSummary summary;
  std::vector<EvalSummary> folds;
  if (c.folds > 0) {
    auto cv = cross_validate(docs, c.folds, c.seed, lex, options_of(c));
    summary = cv.pooled;
    folds = cv.folds;
  } else {
    AlignContext ctx{lex, c.fc_threshold, c.wealth_threshold};
    auto m1 = load_model(c, 1);
    CrfRoundOne r1(m1);
    if (c.second_round == "crf") {
      auto m2 = load_model(c, 2);
      summary = summarize(evaluate_pipeline(docs, r1, CrfRoundTwo(m2), lex, ctx));
    } else {
      summary = summarize(evaluate_pipeline(docs, r1, RuleRoundTwo{}, lex, ctx));
    }
  }
  for (const auto& w : summary.warnings) spdlog::warn("{}", w);
  spdlog::info("events F1 {:.4f}, round one macro F1 {:.4f}, contradictory F1 {:.4f}",
               summary.events.micro.f1, summary.round_one.macro.f1,
               summary.pairs.contradictory.f1);
  write_output(out, eval_report_json(summary, folds));
  return 0;
}

bool set_log_level() {
  const char* env = std::getenv("JIA_LOG");
  std::string level = env ? env : "info";
  static const std::map<std::string, spdlog::level::level_enum> kLevels = {
      {"error", spdlog::level::err},
      {"info", spdlog::level::info},
      {"debug", spdlog::level::debug}};
  auto it = kLevels.find(level);
  spdlog::set_default_logger(spdlog::stderr_color_mt("jia"));
  spdlog::set_pattern("[%l] %v");
  if (it == kLevels.end()) {
    spdlog::error("JIA_LOG must be error, info or debug, got '{}'", level);
    return false;
  }
  spdlog::set_level(it->second);
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (!set_log_level()) return 1;
  RunConfig c;
  CLI::App app{"Two-party event extraction and dispute detection"};
  app.set_config("--config", "", "Flat key=value file; flags take precedence");
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--corpus", c.corpus, "Corpus JSONL");
  app.add_option("--mentions", c.mentions, "Mentions JSONL for align and detect");
  app.add_option("--lexicons", c.lexicons, "Lexicon directory")->capture_default_str();
  app.add_option("--model-dir", c.model_dir, "Model directory")->capture_default_str();
  app.add_option("--out", c.out, "Output file");
  app.add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app.add_option("--epochs", c.epochs, "Training epochs")->capture_default_str();
  app.add_option("--batch", c.batch, "Mini-batch size")->capture_default_str();
  app.add_option("--lr", c.lr, "Learning rate")->capture_default_str();
  app.add_option("--l2", c.l2, "L2 penalty")->capture_default_str();
  app.add_option("--fc-threshold", c.fc_threshold, "Family-Conflict similarity threshold")
      ->capture_default_str();
  app.add_option("--wealth-threshold", c.wealth_threshold, "Wealth similarity threshold")
      ->capture_default_str();
  app.add_option("--second-round", c.second_round, "crf or rules")->capture_default_str();
  app.add_option("--folds", c.folds, "Cross-validation folds for evaluate; 0 uses saved models")
      ->capture_default_str();
  app.add_option("--cases", c.cases, "Cases for gen-synthetic")->capture_default_str();
  app.add_flag("--gold", c.gold, "Use gold annotation instead of trained models");

  std::map<std::string, int (*)(const RunConfig&)> commands = {
      {"train-r1", [](const RunConfig& r) { return train(r, 1); }},
      {"train-r2", [](const RunConfig& r) { return train(r, 2); }},
      {"extract", extract},
      {"align", align},
      {"detect", detect},
      {"evaluate", evaluate},
      {"gen-synthetic", gen_synthetic},
  };
  const std::map<std::string, std::string> help = {
      {"train-r1", "Train the first-round tagger"},
      {"train-r2", "Train the second-round tagger"},
      {"extract", "Extract event mentions from a corpus"},
      {"align", "Align co-referent events across parties"},
      {"detect", "Classify aligned pairs and write the dispute report"},
      {"evaluate", "Score the pipeline against gold annotation"},
      {"gen-synthetic", "Generate an annotated synthetic corpus"},
  };
  for (const auto& [name, _] : commands) app.add_subcommand(name, help.at(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::FileError& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    spdlog::error("{}", e.what());
    return 1;
  }

  try {
    validate(c);
    std::string name = app.get_subcommands().front()->get_name();
    spdlog::info("{}: {}", name, describe(c));
    spdlog::info("seed {}", c.seed);
    return commands.at(name)(c);
  } catch (const ValidationError& e) {
    spdlog::error("{}", e.what());
    return 1;
  } catch (const IoError& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
}
