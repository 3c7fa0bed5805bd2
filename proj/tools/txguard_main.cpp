// txguard: command-line entry point. Each subcommand reads and writes files
// only; stages compose through the artifacts they leave on disk.
#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "txguard/core/grouping.hpp"
#include "txguard/core/ingest.hpp"
#include "txguard/ets/lexicon.hpp"
#include "txguard/ets/reference.hpp"
#include "txguard/eval/ablation.hpp"
#include "txguard/eval/topk.hpp"
#include "txguard/features/pipeline.hpp"
#include "txguard/kernels/kernels.hpp"
#include "txguard/model/artifact.hpp"
#include "txguard/model/folds.hpp"
#include "txguard/service/api.hpp"
#include "txguard/synth/generator.hpp"
#include "txguard/util/error.hpp"
#include "txguard/version.hpp"

namespace fs = std::filesystem;
using namespace txguard;

namespace {

constexpr const char* kFeaturesCsv = "features.csv";
constexpr const char* kFeaturesManifest = "features_manifest.json";

nlohmann::json provenance(const std::string& command, std::optional<std::uint64_t> seed, const std::string& layout_id) {
  return {{"tool", "txguard"},
          {"tool_version", kToolVersion},
          {"command", command},
          {"seed", seed ? nlohmann::json(*seed) : nlohmann::json(nullptr)},
          {"layout_id", layout_id.empty() ? nlohmann::json(nullptr) : nlohmann::json(layout_id)}};
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw IoError("write failed for " + path.string());
}

void require_file(const fs::path& path, const std::string& what) {
  if (!fs::is_regular_file(path)) throw ValidationError(what + " not found: " + path.string());
}

struct WindowArgs {
  std::string month;  // YYYY-MM
  std::string start;
  std::string end;

  void add(CLI::App* app) {
    app->add_option("--month", month, "Calendar month YYYY-MM (alternative to --window-start/--window-end)");
    app->add_option("--window-start", start, "First day of the window, YYYY-MM-DD (UTC)");
    app->add_option("--window-end", end, "Last day of the window, YYYY-MM-DD (UTC)");
  }

  std::optional<WindowConfig> get() const {
    if (!month.empty()) {
      if (!start.empty() || !end.empty()) throw ValidationError("use either --month or --window-start/--window-end");
      return WindowConfig::calendar_month(Date::parse(month + "-01"));
    }
    if (start.empty() != end.empty()) throw ValidationError("--window-start and --window-end go together");
    if (start.empty()) return std::nullopt;
    return WindowConfig::make(Date::parse(start), Date::parse(end));
  }

  WindowConfig require() const {
    auto w = get();
    if (!w) throw ValidationError("a window is required (--month or --window-start/--window-end)");
    return *w;
  }
};

struct BackendArgs {
  std::string kind = "reference";
  std::string command;
  std::string lexicons;
  std::string name = "external";
  std::string version = "unversioned";

  void add(CLI::App* app) {
    app->add_option("--backend", kind, "ETS scorer backend: reference | subprocess")
        ->check(CLI::IsMember({"reference", "subprocess"}));
    app->add_option("--backend-cmd", command, "Shell command for the subprocess backend (see docs/adapter.md)");
    app->add_option("--backend-name", name, "Name recorded for the subprocess backend");
    app->add_option("--backend-version", version, "Version recorded for the subprocess backend");
    app->add_option("--lexicons", lexicons, "Directory of lexicon TSVs for the reference backend");
  }

  std::unique_ptr<ets::ScorerBackend> make() const {
    if (kind == "subprocess") {
      if (command.empty()) throw ValidationError("--backend subprocess needs --backend-cmd");
      return std::make_unique<ets::SubprocessBackend>(name, version, command);
    }
    if (!lexicons.empty()) {
      if (!fs::is_directory(lexicons)) throw ValidationError("lexicon directory not found: " + lexicons);
      return std::make_unique<ets::ReferenceBackend>(ets::load_lexicons(lexicons));
    }
    return std::make_unique<ets::ReferenceBackend>();
  }
};

struct LoadedFeatures {
  features::FeatureTable table;
  std::optional<WindowConfig> window;
};

// features_dir holds features.csv and features_manifest.json; the manifest
// may be overridden explicitly.
LoadedFeatures load_features(const fs::path& features_dir, const std::string& manifest_override) {
  const fs::path csv = features_dir / kFeaturesCsv;
  const fs::path manifest = manifest_override.empty() ? features_dir / kFeaturesManifest : fs::path(manifest_override);
  require_file(csv, "features file");
  require_file(manifest, "feature manifest");
  LoadedFeatures out;
  const auto layout = features::read_manifest(manifest);
  std::ifstream in(csv);
  out.table = features::read_features_csv(in, layout);
  std::ifstream min(manifest);
  const auto j = nlohmann::json::parse(min);
  if (j.contains("window_start") && j.contains("window_end"))
    out.window = WindowConfig::make(Date::parse(j["window_start"].get<std::string>()),
                                    Date::parse(j["window_end"].get<std::string>()));
  return out;
}

// Keeps feature rows that have a label; reports the rest on stderr.
std::vector<features::RelationshipFeatures> labeled_rows(const features::FeatureTable& table,
                                                         const std::vector<LabeledRelationship>& labels) {
  std::set<RelationshipKey> keys;
  for (const auto& l : labels) keys.insert(l.key);
  std::vector<features::RelationshipFeatures> rows;
  for (const auto& r : table.rows)
    if (keys.count(r.key)) rows.push_back(r);
  const std::size_t missing = keys.size() - rows.size();
  if (rows.size() < table.rows.size())
    std::cerr << "note: " << table.rows.size() - rows.size() << " feature rows have no label and are skipped\n";
  if (missing > 0) std::cerr << "warning: " << missing << " labels have no feature row and are ignored\n";
  return rows;
}

// ---- generate ----------------------------------------------------------

struct GenerateArgs {
  std::uint64_t seed = 7;
  std::optional<int> abusive, conversational, normal;
  std::string mode = "balanced_training";
  WindowArgs window;
  std::string out;
};

void cmd_generate(const GenerateArgs& a) {
  auto cfg = synth::GeneratorConfig::defaults(synth::parse_prevalence_mode(a.mode));
  cfg.seed = a.seed;
  if (a.abusive) cfg.n_abusive = *a.abusive;
  if (a.conversational) cfg.n_conversational = *a.conversational;
  if (a.normal) cfg.n_normal = *a.normal;
  if (auto w = a.window.get()) cfg.window = *w;
  const auto corpus = synth::generate(cfg);

  const fs::path dir(a.out);
  ensure_dir(dir);
  {
    std::ofstream out(dir / "transactions.jsonl", std::ios::binary | std::ios::trunc);
    write_transactions(out, corpus.transactions);
  }
  {
    std::ofstream out(dir / "labels.csv", std::ios::binary | std::ios::trunc);
    write_labels(out, corpus.labels);
  }
  nlohmann::json p = provenance("generate", cfg.seed, "");
  p["prevalence_mode"] = synth::to_string(cfg.prevalence_mode);
  p["window_start"] = cfg.window.start.to_string();
  p["window_end"] = cfg.window.end.to_string();
  p["counts"] = {{"abusive", cfg.n_abusive}, {"conversational", cfg.n_conversational}, {"normal", cfg.n_normal}};
  p["n_transactions"] = corpus.transactions.size();
  p["positive_rate"] = synth::positive_rate(corpus.labels);
  write_text(dir / "provenance.json", p.dump(2) + "\n");
  std::cout << "generated " << corpus.labels.size() << " relationships, " << corpus.transactions.size()
            << " transactions -> " << dir.string() << "\n";
}

// ---- featurize ---------------------------------------------------------

struct FeaturizeArgs {
  std::string transactions;
  WindowArgs window;
  BackendArgs backend;
  std::string out;
};

void cmd_featurize(const FeaturizeArgs& a) {
  require_file(a.transactions, "transactions file");
  const WindowConfig window = a.window.require();
  auto backend = a.backend.make();
  const auto parsed = parse_transactions_file(a.transactions);
  for (const auto& w : parsed.warnings) std::cerr << a.transactions << ":" << w.line << ": " << w.message << "\n";
  const auto rels = group_relationships(parsed.transactions, window);
  const auto table = features::build_feature_table(rels, *backend);

  const fs::path dir(a.out);
  ensure_dir(dir);
  {
    std::ofstream out(dir / kFeaturesCsv, std::ios::binary | std::ios::trunc);
    features::write_features_csv(out, table);
  }
  nlohmann::json p = provenance("featurize", std::nullopt, table.layout.layout_id());
  p["backend"] = {{"name", backend->info().name}, {"version", backend->info().version}, {"notes", backend->info().notes}};
  features::write_manifest(dir / kFeaturesManifest, table.layout, p);
  // Window next to the layout so train/evaluate can stamp labels with it.
  {
    std::ifstream in(dir / kFeaturesManifest);
    auto j = nlohmann::json::parse(in);
    j["window_start"] = window.start.to_string();
    j["window_end"] = window.end.to_string();
    write_text(dir / kFeaturesManifest, j.dump(2) + "\n");
  }
  p["window_start"] = window.start.to_string();
  p["window_end"] = window.end.to_string();
  p["n_relationships"] = table.rows.size();
  p["n_transactions"] = parsed.transactions.size();
  p["n_warnings"] = parsed.warnings.size();
  write_text(dir / "provenance.json", p.dump(2) + "\n");
  std::cout << "featurized " << table.rows.size() << " relationships (layout " << table.layout.layout_id() << ") -> "
            << dir.string() << "\n";
}

// ---- train -------------------------------------------------------------

struct ForestArgs {
  int trees = 500;
  int mtry = 0;
  int max_depth = 0;
  int min_node = 1;
  bool unbalanced = false;
  std::uint64_t seed = 7;
  int threads = 0;

  void add(CLI::App* app) {
    app->add_option("--trees", trees, "Number of trees")->check(CLI::PositiveNumber);
    app->add_option("--mtry", mtry, "Candidate features per split (0 = floor(sqrt(p)))")->check(CLI::NonNegativeNumber);
    app->add_option("--max-depth", max_depth, "Maximum tree depth (0 = unlimited)")->check(CLI::NonNegativeNumber);
    app->add_option("--min-node", min_node, "Nodes with at most this many samples become leaves")->check(CLI::PositiveNumber);
    app->add_flag("--no-class-balance", unbalanced, "Plain bootstrap instead of class-balanced sampling");
    app->add_option("--seed", seed, "Random seed");
    app->add_option("--threads", threads, "Training threads (0 = all cores; results do not depend on it)");
  }

  model::ForestConfig get() const {
    model::ForestConfig c;
    c.n_trees = trees;
    c.mtry = mtry;
    c.max_depth = max_depth;
    c.min_node_size = min_node;
    c.class_balanced = !unbalanced;
    c.seed = seed;
    c.n_threads = threads;
    return c;
  }
};

struct TrainArgs {
  std::string features;
  std::string manifest;
  std::string labels;
  std::string combo = "ETS+ST+TRX";
  bool no_reciprocity = false;
  ForestArgs forest;
  WindowArgs window;
  std::string out;
};

void cmd_train(const TrainArgs& a) {
  require_file(a.labels, "labels file");
  const auto combo = eval::parse_combo(a.combo, !a.no_reciprocity);
  auto loaded = load_features(a.features, a.manifest);
  std::optional<WindowConfig> window = a.window.get();
  if (!window) window = loaded.window;
  if (!window) throw ValidationError("feature manifest has no window; pass --month or --window-start/--window-end");
  const auto labels = parse_labels_file(a.labels, *window);
  const auto rows = labeled_rows(loaded.table, labels);
  const auto& layout = loaded.table.layout;
  const auto artifact =
      model::train(rows, labels, layout, a.forest.get(), layout.select(combo.families, combo.reciprocity));
  nlohmann::json p = provenance("train", a.forest.seed, layout.layout_id());
  p["combo"] = combo.name();
  model::save_model(a.out, artifact, p);
  write_text(fs::path(a.out) / "provenance.json", p.dump(2) + "\n");
  std::cout << "trained " << artifact.config.n_trees << " trees on " << rows.size() << " relationships ("
            << artifact.summary.n_positive << " positive) -> " << a.out << "\n";
}

// ---- evaluate ----------------------------------------------------------

struct EvaluateArgs {
  std::string features;
  std::string manifest;
  std::string labels;
  std::string combos = "all";
  std::string reciprocity = "best";
  int k = 5;
  int repeats = 5;
  double threshold = eval::kDefaultThreshold;
  int top_k = 50;
  ForestArgs forest;
  WindowArgs window;
  std::string out;
};

std::vector<eval::Combo> resolve_combos(const std::string& spec, const std::string& reciprocity) {
  std::vector<eval::Combo> base;
  if (spec == "all") {
    base = eval::all_family_combos();
  } else {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) base.push_back(eval::parse_combo(item));
    if (base.empty()) throw ValidationError("--combos lists no feature sets");
  }
  std::vector<eval::Combo> out = base;
  if (reciprocity == "best") {
    // The richest requested combination, with the reverse direction added.
    auto richest = *std::max_element(base.begin(), base.end(), [](const auto& x, const auto& y) {
      return x.families.size() < y.families.size();
    });
    richest.reciprocity = true;
    out.push_back(richest);
  } else if (reciprocity == "all") {
    for (auto c : base) {
      c.reciprocity = true;
      out.push_back(c);
    }
  }
  return out;
}

void cmd_evaluate(const EvaluateArgs& a) {
  require_file(a.labels, "labels file");
  const auto combos = resolve_combos(a.combos, a.reciprocity);
  auto loaded = load_features(a.features, a.manifest);
  std::optional<WindowConfig> window = a.window.get();
  if (!window) window = loaded.window;
  if (!window) throw ValidationError("feature manifest has no window; pass --month or --window-start/--window-end");
  const auto labels = parse_labels_file(a.labels, *window);
  const auto rows = labeled_rows(loaded.table, labels);
  const auto& layout = loaded.table.layout;

  std::vector<RelationshipKey> keys;
  for (const auto& r : rows) keys.push_back(r.key);
  const auto plan = model::make_fold_plan(keys, a.k, a.repeats, a.forest.seed);
  eval::AblationConfig cfg;
  cfg.forest = a.forest.get();
  cfg.threshold = a.threshold;
  const auto results = eval::run_ablation(rows, labels, layout, plan, combos, cfg);

  const fs::path dir(a.out);
  ensure_dir(dir);
  nlohmann::json p = provenance("evaluate", a.forest.seed, layout.layout_id());
  p["k"] = a.k;
  p["repeats"] = a.repeats;
  p["threshold"] = a.threshold;
  p["forest"] = cfg.forest.to_json();
  p["n_relationships"] = rows.size();
  write_text(dir / "metrics.json", nlohmann::json{{"rows", eval::ablation_json(results)}, {"provenance", p}}.dump(2) + "\n");
  write_text(dir / "table.txt", eval::format_table(results));

  // Top-K review simulation on the last row's first-repeat out-of-fold
  // scores: the K highest-scored relationships get their true labels.
  const auto& last = results.back();
  std::map<RelationshipKey, int> by_key;
  for (const auto& l : labels) by_key[l.key] = l.label;
  const int k = std::min<int>(a.top_k, static_cast<int>(rows.size()));
  const auto& scores = last.oof_scores.front();
  std::vector<int> topk_labels;
  for (std::size_t i : eval::topk_order(scores, k)) topk_labels.push_back(by_key.at(rows[i].key));
  const auto curve = eval::topk_curve(scores, topk_labels, k);
  {
    std::ofstream out(dir / "curve.csv", std::ios::binary | std::ios::trunc);
    eval::write_curve_csv(out, curve);
  }
  p["curve"] = {{"row", last.combo.name()}, {"repeat", 0}, {"k", k}};
  write_text(dir / "provenance.json", p.dump(2) + "\n");
  std::cout << eval::format_table(results);
}

// ---- score -------------------------------------------------------------

struct ScoreArgs {
  std::string transactions;
  std::string model;
  WindowArgs window;
  int top_n = service::kDefaultTopN;
  BackendArgs backend;
  std::string out;
  std::string store;
};

void cmd_score(const ScoreArgs& a) {
  require_file(a.transactions, "transactions file");
  const WindowConfig window = a.window.require();
  const auto artifact = model::load_model(a.model);
  auto backend = a.backend.make();
  const auto parsed = parse_transactions_file(a.transactions);
  for (const auto& w : parsed.warnings) std::cerr << a.transactions << ":" << w.line << ": " << w.message << "\n";
  const auto batch = service::run_scoring_batch(parsed.transactions, artifact, window, a.top_n, *backend);
  nlohmann::json j = service::to_json(batch);
  j["provenance"] = provenance("score", artifact.config.seed, artifact.layout_id());
  const fs::path out(a.out);
  if (out.has_parent_path()) ensure_dir(out.parent_path());
  write_text(out, j.dump(2) + "\n");
  if (!a.store.empty()) service::BatchStore(a.store).save(batch);
  std::cout << "batch " << batch.batch_id << ": " << batch.cases.size() << " cases from " << batch.n_scored
            << " relationships -> " << out.string() << "\n";
}

// ---- serve -------------------------------------------------------------

struct ServeArgs {
  std::string store;
  std::vector<std::string> imports;
  std::string host = "127.0.0.1";
  int port = 8080;
};

service::HttpServer* g_server = nullptr;

void cmd_serve(const ServeArgs& a) {
  service::BatchStore batches(a.store);
  for (const auto& path : a.imports) {
    require_file(path, "batch file");
    std::ifstream in(path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("malformed batch file " + path + ": " + e.what());
    }
    batches.save(service::batch_from_json(j));
  }
  service::LabelStore labels(fs::path(a.store) / "labels.events.jsonl");
  service::ReviewApi api(batches, labels);
  service::HttpServer server(api);
  const int port = server.bind(a.host, a.port);
  g_server = &server;
  std::signal(SIGINT, [](int) { if (g_server) g_server->stop(); });
  std::signal(SIGTERM, [](int) { if (g_server) g_server->stop(); });
  std::cout << "serving " << batches.list().size() << " batches on http://" << a.host << ":" << port << std::endl;
  server.run();
  g_server = nullptr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"txguard: abusive-transaction detection pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a synthetic labeled corpus");
  g->add_option("--seed", gen.seed, "Random seed");
  g->add_option("--abusive", gen.abusive, "Abusive relationships")->check(CLI::NonNegativeNumber);
  g->add_option("--conversational", gen.conversational, "Conversational relationships")->check(CLI::NonNegativeNumber);
  g->add_option("--normal", gen.normal, "Normal relationships")->check(CLI::NonNegativeNumber);
  g->add_option("--mode", gen.mode, "Default cohort sizes: balanced_training | monthly_scoring")
      ->check(CLI::IsMember({"balanced_training", "monthly_scoring"}));
  gen.window.add(g);
  g->add_option("--out", gen.out, "Output directory")->required();

  FeaturizeArgs feat;
  auto* f = app.add_subcommand("featurize", "Group, score and aggregate transactions into features.csv");
  f->add_option("--transactions", feat.transactions, "transactions.jsonl")->required();
  feat.window.add(f);
  feat.backend.add(f);
  f->add_option("--out", feat.out, "Output directory")->required();

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "Train a model from features and labels");
  t->add_option("--features", tr.features, "Directory written by featurize")->required();
  t->add_option("--manifest", tr.manifest, "Feature manifest (default: <features>/features_manifest.json)");
  t->add_option("--labels", tr.labels, "labels.csv")->required();
  t->add_option("--combo", tr.combo, "Feature families, e.g. ETS+ST+TRX");
  t->add_flag("--no-reciprocity", tr.no_reciprocity, "Use forward-direction columns only");
  tr.forest.add(t);
  tr.window.add(t);
  t->add_option("--out", tr.out, "Model directory")->required();

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Grouped repeated k-fold ablation, metrics and top-K curve");
  e->add_option("--features", ev.features, "Directory written by featurize")->required();
  e->add_option("--manifest", ev.manifest, "Feature manifest (default: <features>/features_manifest.json)");
  e->add_option("--labels", ev.labels, "labels.csv")->required();
  e->add_option("--combos", ev.combos, "'all' or comma-separated combos, e.g. ETS,ST+TRX");
  e->add_option("--reciprocity", ev.reciprocity, "Reciprocity rows: best | all | none")
      ->check(CLI::IsMember({"best", "all", "none"}));
  e->add_option("--k", ev.k, "Folds")->check(CLI::Range(2, 100));
  e->add_option("--repeats", ev.repeats, "Repeats")->check(CLI::Range(1, 100));
  e->add_option("--threshold", ev.threshold, "Decision threshold for precision/recall/F1")->check(CLI::Range(0.0, 1.0));
  e->add_option("--top-k", ev.top_k, "K for curve.csv")->check(CLI::PositiveNumber);
  ev.forest.add(e);
  ev.window.add(e);
  e->add_option("--out", ev.out, "Output directory")->required();

  ScoreArgs sc;
  auto* s = app.add_subcommand("score", "Score a window and write the ranked case queue");
  s->add_option("--transactions", sc.transactions, "transactions.jsonl")->required();
  s->add_option("--model", sc.model, "Model directory written by train")->required();
  sc.window.add(s);
  s->add_option("--top-n", sc.top_n, "Cases in the queue")->check(CLI::NonNegativeNumber);
  sc.backend.add(s);
  s->add_option("--out", sc.out, "Queue JSON file")->required();
  s->add_option("--store", sc.store, "Also save the batch into this service store directory");

  ServeArgs sv;
  auto* v = app.add_subcommand("serve", "Run the review HTTP API over a batch store");
  v->add_option("--store", sv.store, "Store directory (batches/ and labels.events.jsonl)")->required();
  v->add_option("--batch", sv.imports, "Queue JSON files to import before serving");
  v->add_option("--host", sv.host, "Bind address");
  v->add_option("--port", sv.port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*g) cmd_generate(gen);
    if (*f) cmd_featurize(feat);
    if (*t) cmd_train(tr);
    if (*e) cmd_evaluate(ev);
    if (*s) cmd_score(sc);
    if (*v) cmd_serve(sv);
  } catch (const ValidationError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "fatal: " << err.what() << "\n";
    return 2;
  }
  return 0;
}
