#include "lexmix/cli.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <unordered_map>
#include <unordered_set>

#include <CLI11.hpp>
#include <json.hpp>

#include "lexmix/cluster.h"
#include "lexmix/compose.h"
#include "lexmix/config.h"
#include "lexmix/document.h"
#include "lexmix/errors.h"
#include "lexmix/io.h"
#include "lexmix/lexicon.h"
#include "lexmix/parallel.h"
#include "lexmix/replace.h"
#include "lexmix/rng.h"
#include "lexmix/sha256.h"
#include "lexmix/stats.h"
#include "lexmix/text.h"

namespace lexmix::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw DataError("i/o error writing " + path.string());
}

json input_digests(const std::vector<std::string>& paths) {
  json arr = json::array();
  for (const std::string& p : paths) {
    arr.push_back({{"path", p}, {"sha256", Sha256::hex_file(p)}});
  }
  return arr;
}

json shard_list(const std::vector<ShardInfo>& shards) {
  json arr = json::array();
  for (const ShardInfo& s : shards) {
    arr.push_back({{"name", s.name},
                   {"docs", s.docs},
                   {"tokens", s.tokens},
                   {"bytes", s.bytes},
                   {"sha256", s.sha256}});
  }
  return arr;
}

json manifest_base(const char* command, const PipelineConfig& cfg) {
  json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  j["config"] = cfg.to_json();
  return j;
}

json report_to_json(const ReplacementReport& r) {
  json j;
  j["n_docs"] = r.n_docs;
  j["n_empty_docs"] = r.n_empty_docs;
  j["n_words"] = r.n_words;
  j["n_in_lexicon"] = r.n_in_lexicon;
  j["n_replaced"] = r.n_replaced;
  j["target_ratio"] = r.target_ratio;
  j["mean_actual_ratio"] = r.mean_actual_ratio;
  j["weighted_actual_ratio"] = r.weighted_actual_ratio;
  j["mean_doc_coverage"] = r.mean_doc_coverage;
  j["coverage"] = r.coverage;
  j["histogram_1pp"] = r.histogram;
  j["config_fingerprint"] = r.config_fingerprint;
  return j;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// lexicon

struct LexiconArgs {
  std::vector<std::string> inputs;
  std::string source_lang = "src";
  std::string target_lang = "tgt";
};

int cmd_lexicon(const PipelineConfig& cfg, const LexiconArgs& args) {
  if (args.inputs.empty()) throw UsageError("--in is required");
  for (const std::string& p : args.inputs) {
    if (!fs::exists(p)) throw UsageError("input lexicon not found: " + p);
  }
  if (cfg.out.empty()) throw UsageError("--out is required");

  LoadSummary total;
  BilingualLexicon lex;
  for (size_t i = 0; i < args.inputs.size(); ++i) {
    LoadSummary summary;
    BilingualLexicon part = load_lexicon(args.inputs[i], args.source_lang, args.target_lang, &summary);
    total.pairs_ingested += summary.pairs_ingested;
    total.skipped_lines += summary.skipped_lines;
    if (i == 0) {
      lex = std::move(part);
    } else {
      lex.merge(part);
    }
  }
  total.entries = lex.size();
  total.merged_duplicates = total.pairs_ingested - lex.size();

  if (cfg.lexicon_fraction != 1.0) {
    lex = subsample_lexicon(lex, cfg.lexicon_fraction, cfg.lexicon_seed);
  }

  {
    std::ofstream out(cfg.out, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write lexicon: " + cfg.out);
    lex.serialize(out);
    if (!out) throw DataError("i/o error writing lexicon: " + cfg.out);
  }

  json manifest = manifest_base("lexicon", cfg);
  manifest["inputs"] = input_digests(args.inputs);
  manifest["outputs"] = {{"path", cfg.out},
                         {"entries", lex.size()},
                         {"sha256", Sha256::hex_file(cfg.out)}};
  write_json_file(cfg.out + ".manifest.json", manifest);

  std::cerr << "lexicon: " << total.entries << " entries from " << total.pairs_ingested
            << " pairs (" << total.merged_duplicates << " merged into existing entries, "
            << total.skipped_lines << " lines skipped)";
  if (cfg.lexicon_fraction != 1.0) {
    std::cerr << "; subsampled to " << lex.size() << " entries (fraction "
              << format_double(cfg.lexicon_fraction) << ", seed " << cfg.lexicon_seed << ")";
  }
  std::cerr << "; wrote " << cfg.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// cluster

std::unordered_map<uint64_t, double> load_token_counts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open token count file: " + path);
  std::unordered_map<uint64_t, double> counts;
  std::string line;
  uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError(path + ":" + std::to_string(line_no) + ": expected id<TAB>count");
    }
    counts[std::stoull(line.substr(0, tab))] = std::stod(line.substr(tab + 1));
  }
  return counts;
}

struct ClusterArgs {
  std::string token_counts;
};

int cmd_cluster(const PipelineConfig& cfg, const ClusterArgs& args) {
  if (cfg.embeddings.empty()) throw UsageError("--embeddings is required");
  if (cfg.out.empty()) throw UsageError("--out is required");
  const std::string ids_path =
      cfg.embedding_ids.empty() ? cfg.embeddings + ".ids" : cfg.embedding_ids;
  if (!fs::exists(cfg.embeddings)) throw UsageError("embedding file not found: " + cfg.embeddings);
  if (!fs::exists(ids_path)) throw UsageError("embedding id sidecar not found: " + ids_path);

  const EmbeddingMatrix emb = load_embeddings(cfg.embeddings, ids_path);
  std::cerr << "cluster: fitting k=" << cfg.cluster_k << " over " << emb.rows() << " vectors (dim "
            << emb.dim << ")\n";
  const ClusterModel model = kmeans_fit(emb, cfg.cluster_k, cfg.cluster_seed, cfg.cluster_max_iter,
                                        cfg.cluster_tol, cfg.cluster_restarts, cfg.workers);

  fs::create_directories(cfg.out);
  const fs::path out_dir = cfg.out;
  save_cluster_model(model, (out_dir / "model.bin").string());

  const auto corpus_assignments = assign(emb, model);
  {
    std::ofstream out(out_dir / "assignments.jsonl", std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write assignments");
    for (const auto& [id, cluster] : corpus_assignments) {
      json j;
      j["cluster"] = cluster;
      j["id"] = id;
      out << j.dump() << '\n';
    }
    if (!out) throw DataError("i/o error writing assignments");
  }

  std::vector<uint32_t> labels;
  labels.reserve(corpus_assignments.size());
  for (const auto& [id, cluster] : corpus_assignments) labels.push_back(cluster);

  std::vector<double> weights;
  const bool weighted = !args.token_counts.empty();
  if (weighted) {
    const auto counts = load_token_counts(args.token_counts);
    weights.reserve(emb.ids.size());
    for (const uint64_t id : emb.ids) {
      const auto it = counts.find(id);
      if (it == counts.end()) {
        throw DataError("token count file lacks id " + std::to_string(id));
      }
      weights.push_back(it->second);
    }
  }
  const ClusterHistogram hist =
      cluster_histogram(labels, model.k, weighted ? &weights : nullptr);
  {
    json j;
    j["k"] = model.k;
    j["counts"] = hist.counts;
    j["count_shares"] = hist.count_shares;
    if (hist.has_weights) {
      j["token_totals"] = hist.token_totals;
      j["token_shares"] = hist.token_shares;
    }
    write_json_file(out_dir / "histogram.json", j);
  }

  json manifest = manifest_base("cluster", cfg);
  std::vector<std::string> inputs = {cfg.embeddings, ids_path};

  json domain_report;
  if (!cfg.benchmark_embeddings.empty()) {
    const std::string bench_ids =
        cfg.benchmark_ids.empty() ? cfg.benchmark_embeddings + ".ids" : cfg.benchmark_ids;
    if (!fs::exists(cfg.benchmark_embeddings)) {
      throw UsageError("benchmark embedding file not found: " + cfg.benchmark_embeddings);
    }
    if (!fs::exists(bench_ids)) {
      throw UsageError("benchmark id sidecar not found: " + bench_ids);
    }
    const EmbeddingMatrix bench = load_embeddings(cfg.benchmark_embeddings, bench_ids);
    const auto bench_assignments = assign(bench, model);
    std::vector<uint32_t> bench_labels;
    bench_labels.reserve(bench_assignments.size());
    for (const auto& [id, cluster] : bench_assignments) bench_labels.push_back(cluster);
    const DomainCluster dc = domain_cluster(bench_labels, model.k);
    const ClusterHistogram bench_hist = cluster_histogram(bench_labels, model.k);
    domain_report["domain_cluster"] = dc.cluster;
    domain_report["share"] = dc.share;
    domain_report["benchmark_count"] = bench_labels.size();
    domain_report["benchmark_counts"] = bench_hist.counts;
    write_json_file(out_dir / "domain.json", domain_report);
    inputs.push_back(cfg.benchmark_embeddings);
    inputs.push_back(bench_ids);
    std::cerr << "cluster: domain cluster " << dc.cluster << " holds share "
              << format_double(dc.share) << " of the benchmark\n";
  }
  if (weighted) inputs.push_back(args.token_counts);

  manifest["inputs"] = input_digests(inputs);
  json outputs;
  outputs["model"] = {{"path", (out_dir / "model.bin").string()},
                      {"sha256", Sha256::hex_file((out_dir / "model.bin").string())},
                      {"k", model.k},
                      {"dim", model.dim},
                      {"inertia", model.inertia},
                      {"iterations", model.iterations},
                      {"converged", model.converged},
                      {"tol", model.tol},
                      {"max_iter", model.max_iter},
                      {"restarts", cfg.cluster_restarts},
                      {"seed", model.seed}};
  outputs["assignments"] = {
      {"path", (out_dir / "assignments.jsonl").string()},
      {"sha256", Sha256::hex_file((out_dir / "assignments.jsonl").string())}};
  if (!domain_report.is_null()) outputs["domain"] = domain_report;
  manifest["outputs"] = outputs;
  write_json_file(out_dir / "manifest.json", manifest);

  std::cerr << "cluster: inertia " << format_double(model.inertia) << " after "
            << model.iterations << " iterations"
            << (model.converged ? "" : " (max_iter reached)") << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// intervene

struct InterveneArgs {
  std::string domain_source;  // "", "tags", "assignments"
};

DomainResolver build_resolver(const PipelineConfig& cfg, const InterveneArgs& args) {
  if (args.domain_source == "tags") return resolver_from_doc_tags();
  if (args.domain_source == "assignments") {
    if (cfg.assignments.empty() || cfg.domain_cluster < 0) {
      throw UsageError(
          "--domain-source assignments needs --assignments <file> and --domain-cluster <index>");
    }
    if (!fs::exists(cfg.assignments)) {
      throw UsageError("assignments file not found: " + cfg.assignments);
    }
    std::unordered_set<uint64_t> task;
    std::unordered_set<uint64_t> known;
    std::ifstream in(cfg.assignments);
    std::string line;
    uint64_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::exception& e) {
        throw DataError(cfg.assignments + ":" + std::to_string(line_no) + ": " + e.what());
      }
      const auto id = j.at("id").get<uint64_t>();
      known.insert(id);
      if (j.at("cluster").get<int64_t>() == cfg.domain_cluster) task.insert(id);
    }
    if (in.bad()) throw DataError("i/o error reading " + cfg.assignments);
    return resolver_from_task_ids(std::move(task), std::move(known));
  }
  throw UsageError("strategy '" + std::string(to_string(cfg.policy.strategy)) +
                   "' needs a domain source: pass --domain-source tags (use per-document "
                   "domain fields) or --domain-source assignments with --assignments and "
                   "--domain-cluster from a cluster run");
}

struct InterveneItem {
  std::string line;
  uint64_t index = 0;
};

struct InterveneResult {
  std::string line;
  std::string sidecar;
  uint64_t tokens = 0;
  Route route = Route::untouched_hr;
  uint64_t n_words = 0;
  uint64_t n_in_lexicon = 0;
  uint64_t k_target = 0;
  uint64_t k_actual = 0;
  uint64_t fingerprint = 0;
  bool measured = false;
};

int cmd_intervene(const PipelineConfig& cfg, const InterveneArgs& args) {
  if (cfg.hr_corpus.empty()) throw UsageError("--hr-corpus is required");
  if (cfg.lexicon.empty()) throw UsageError("--lexicon is required");
  if (cfg.out.empty()) throw UsageError("--out is required");
  cfg.validate_paths();
  cfg.policy.validate();

  DomainResolver resolver;
  if (cfg.policy.strategy == Strategy::domain || cfg.policy.strategy == Strategy::non_domain) {
    resolver = build_resolver(cfg, args);
  }

  LoadSummary lex_summary;
  const BilingualLexicon lex = load_lexicon(cfg.lexicon, "src", "tgt", &lex_summary);
  std::cerr << "intervene: lexicon " << lex.size() << " entries; strategy "
            << to_string(cfg.policy.strategy) << ", r=" << format_double(cfg.policy.replacement_ratio)
            << ", m=" << format_double(cfg.policy.mix_ratio) << ", seed " << cfg.policy.global_seed
            << ", workers " << cfg.workers << "\n";

  const double ratio = cfg.policy.replacement_ratio;
  const uint64_t seed = cfg.policy.global_seed;
  const Strategy strategy = cfg.policy.strategy;
  const double mix = cfg.policy.mix_ratio;

  auto process = [&](InterveneItem&& item) -> InterveneResult {
    Document doc;
    try {
      doc = parse_document(item.line);
    } catch (const DataError& e) {
      throw DataError("record " + std::to_string(item.index + 1) + ": " + e.what());
    }
    InterveneResult res;
    switch (strategy) {
      case Strategy::uniform: res.route = route_uniform(doc, mix, seed); break;
      case Strategy::domain: res.route = route_domain(doc, resolver); break;
      case Strategy::non_domain: res.route = route_non_domain(doc, resolver); break;
      case Strategy::none: res.route = doc.role == Role::lr ? Route::lr : Route::untouched_hr; break;
    }
    if (res.route == Route::intervened) {
      ReplacementOutcome outcome = replace(doc, lex, ratio, derive_doc_seed(seed, doc.id));
      res.n_words = outcome.n_words;
      res.n_in_lexicon = outcome.n_in_lexicon;
      res.k_target = outcome.k_target;
      res.k_actual = outcome.k_actual;
      res.fingerprint = outcome.config_fingerprint;
      res.measured = true;
      if (cfg.sidecar) {
        json meta;
        json repls = json::array();
        for (const Replacement& r : outcome.replaced) {
          repls.push_back({{"new", r.substituted}, {"old", r.original}, {"pos", r.word_index}});
        }
        meta["id"] = doc.id;
        meta["k_actual"] = outcome.k_actual;
        meta["k_target"] = outcome.k_target;
        meta["n_words"] = outcome.n_words;
        meta["replacements"] = std::move(repls);
        res.sidecar = meta.dump();
      }
      doc = std::move(outcome.document);
    }
    res.tokens = count_tokens(doc.text);
    res.line = serialize_document(doc);
    return res;
  };

  fs::create_directories(cfg.out);
  const fs::path out_dir = cfg.out;
  ShardWriter shards(cfg.out, "part", cfg.shard_docs);
  std::ofstream sidecar_out;
  if (cfg.sidecar) {
    sidecar_out.open(out_dir / "sidecar.jsonl", std::ios::binary | std::ios::trunc);
    if (!sidecar_out) throw DataError("cannot write sidecar");
  }

  ReportAccumulator acc(ratio);
  uint64_t n_intervened = 0;
  uint64_t n_untouched = 0;
  uint64_t n_lr = 0;
  uint64_t n_seen = 0;

  LineSource lines(cfg.hr_corpus);
  uint64_t index = 0;
  auto next = [&]() -> std::optional<InterveneItem> {
    std::optional<std::string> line = lines.next();
    if (!line) return std::nullopt;
    return InterveneItem{std::move(*line), index++};
  };
  auto sink = [&](InterveneResult&& res) {
    shards.write(res.line, res.tokens);
    switch (res.route) {
      case Route::intervened: ++n_intervened; break;
      case Route::untouched_hr: ++n_untouched; break;
      case Route::lr: ++n_lr; break;
    }
    if (res.measured) {
      acc.add_counts(res.n_words, res.n_in_lexicon, res.k_actual, res.fingerprint);
      if (cfg.sidecar) {
        sidecar_out << res.sidecar << '\n';
        if (!sidecar_out) throw DataError("i/o error writing sidecar");
      }
    }
    if (++n_seen % 200000 == 0) std::cerr << "intervene: " << n_seen << " docs\n";
  };

  ordered_parallel_map<InterveneItem, InterveneResult>(next, process, sink, cfg.workers);

  if (cfg.sidecar) {
    sidecar_out.close();
    if (sidecar_out.fail()) throw DataError("i/o error closing sidecar");
  }
  const std::vector<ShardInfo> shard_infos = shards.finish();
  const ReplacementReport report = acc.finish();

  // Partition law: the three routes must cover every record.
  if (n_intervened + n_untouched + n_lr != n_seen) {
    throw DataError("partition accounting mismatch");
  }

  json report_json = report_to_json(report);
  report_json["partition"] = {
      {"intervened", n_intervened}, {"untouched_hr", n_untouched}, {"lr", n_lr}};
  write_json_file(out_dir / "report.json", report_json);

  json manifest = manifest_base("intervene", cfg);
  std::vector<std::string> inputs = cfg.hr_corpus;
  inputs.push_back(cfg.lexicon);
  if (!cfg.assignments.empty()) inputs.push_back(cfg.assignments);
  manifest["inputs"] = input_digests(inputs);
  manifest["outputs"] = {{"shards", shard_list(shard_infos)},
                         {"docs", shards.total_docs()},
                         {"tokens", shards.total_tokens()},
                         {"partition",
                          {{"intervened", n_intervened},
                           {"untouched_hr", n_untouched},
                           {"lr", n_lr}}},
                         {"sidecar", cfg.sidecar}};
  write_json_file(out_dir / "manifest.json", manifest);

  std::cerr << "intervene: " << n_seen << " docs (" << n_intervened << " intervened, "
            << n_untouched << " untouched hr, " << n_lr << " lr); mean actual ratio "
            << format_double(report.mean_actual_ratio) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// compose

int cmd_compose(const PipelineConfig& cfg) {
  if (cfg.hr_corpus.empty()) throw UsageError("--hr-corpus is required");
  if (cfg.lr_corpus.empty()) throw UsageError("--lr-corpus is required");
  if (cfg.out.empty()) throw UsageError("--out is required");
  if (cfg.token_budget == 0) throw UsageError("--token-budget must be positive");
  cfg.validate_paths();

  fs::create_directories(cfg.out);
  ShardWriter shards(cfg.out, "part", cfg.shard_docs);

  auto hr = jsonl_doc_source(cfg.hr_corpus);
  auto lr_factory = [&]() { return jsonl_doc_source(cfg.lr_corpus); };

  uint64_t emitted = 0;
  const MixSummary summary = budget_mix(
      hr, lr_factory, cfg.policy.hr_share, cfg.token_budget, cfg.policy.global_seed,
      [&](const Document& doc, Role) {
        shards.write(serialize_document(doc), count_tokens(doc.text));
        if (++emitted % 200000 == 0) std::cerr << "compose: " << emitted << " docs\n";
      });

  const std::vector<ShardInfo> shard_infos = shards.finish();

  json manifest = manifest_base("compose", cfg);
  std::vector<std::string> inputs = cfg.hr_corpus;
  inputs.insert(inputs.end(), cfg.lr_corpus.begin(), cfg.lr_corpus.end());
  manifest["inputs"] = input_digests(inputs);
  manifest["outputs"] = {{"shards", shard_list(shard_infos)},
                         {"docs", shards.total_docs()},
                         {"tokens", shards.total_tokens()},
                         {"hr_docs", summary.hr_docs},
                         {"lr_docs", summary.lr_docs},
                         {"hr_tokens", summary.hr_tokens},
                         {"lr_tokens", summary.lr_tokens},
                         {"hr_token_share", summary.hr_token_share()},
                         {"token_budget", cfg.token_budget}};
  write_json_file(fs::path(cfg.out) / "manifest.json", manifest);

  std::cerr << "compose: " << shards.total_tokens() << " tokens in " << shards.total_docs()
            << " docs; hr token share " << format_double(summary.hr_token_share()) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// stats

struct StatsArgs {
  std::vector<double> targets;
};

int cmd_stats(const PipelineConfig& cfg, const StatsArgs& args) {
  if (cfg.hr_corpus.empty()) throw UsageError("--hr-corpus is required");
  if (cfg.lexicon.empty()) throw UsageError("--lexicon is required");
  if (cfg.out.empty()) throw UsageError("--out is required");
  cfg.validate_paths();

  const BilingualLexicon lex = load_lexicon(cfg.lexicon, "src", "tgt");
  const CorpusFactory corpus = [&]() { return jsonl_doc_source(cfg.hr_corpus); };

  bool empty_corpus = false;
  const double cov = coverage(corpus(), lex, &empty_corpus);
  if (empty_corpus) std::cerr << "stats: warning: corpus has no words\n";

  // Aggregate report at the configured ratio, parallel over documents.
  const double ratio = cfg.policy.replacement_ratio;
  const uint64_t seed = cfg.policy.global_seed;
  ReportAccumulator acc(ratio);
  {
    auto docs = corpus();
    auto process = [&](Document&& doc) -> ReplacementOutcome {
      return replace(doc, lex, ratio, derive_doc_seed(seed, doc.id));
    };
    auto sink = [&](ReplacementOutcome&& out) { acc.add(out); };
    ordered_parallel_map<Document, ReplacementOutcome>(
        [&]() { return docs(); }, process, sink, cfg.workers);
  }
  const ReplacementReport report = acc.finish();

  std::vector<double> targets = args.targets;
  if (targets.empty()) {
    for (int i = 1; i <= 10; ++i) targets.push_back(0.1 * i);
  }
  const std::vector<CurvePoint> curve = replacement_curve(corpus, lex, targets, seed);

  fs::create_directories(cfg.out);
  const fs::path out_dir = cfg.out;
  {
    std::ofstream out(out_dir / "curve.csv", std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write curve.csv");
    out << "target,mean_actual\n";
    for (const CurvePoint& p : curve) {
      out << format_double(p.target) << ',' << format_double(p.mean_actual) << '\n';
    }
    if (!out) throw DataError("i/o error writing curve.csv");
  }

  json report_json;
  report_json["coverage"] = cov;
  report_json["report"] = report_to_json(report);
  json curve_json = json::array();
  for (const CurvePoint& p : curve) {
    curve_json.push_back({{"target", p.target},
                          {"mean_actual", p.mean_actual},
                          {"weighted_actual", p.weighted_actual}});
  }
  report_json["curve"] = curve_json;
  write_json_file(out_dir / "report.json", report_json);

  json manifest = manifest_base("stats", cfg);
  std::vector<std::string> inputs = cfg.hr_corpus;
  inputs.push_back(cfg.lexicon);
  manifest["inputs"] = input_digests(inputs);
  manifest["outputs"] = {{"coverage", cov},
                         {"curve", (out_dir / "curve.csv").string()},
                         {"report", (out_dir / "report.json").string()}};
  write_json_file(out_dir / "manifest.json", manifest);

  std::cerr << "stats: coverage " << format_double(cov) << ", mean actual ratio at r="
            << format_double(ratio) << ": " << format_double(report.mean_actual_ratio) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// argument plumbing

// Merges a JSON config file under explicit flags: the file provides the
// baseline, flags win because CLI11 only assigns bound variables when
// the flag is actually present.
PipelineConfig config_baseline(const std::vector<std::string>& args) {
  std::string config_path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    }
  }
  if (config_path.empty()) return {};
  std::ifstream in(config_path);
  if (!in) throw UsageError("config file not found: " + config_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw UsageError("bad config file " + config_path + ": " + e.what());
  }
  return PipelineConfig::from_json(j);
}

void add_common_options(CLI::App* cmd, PipelineConfig& cfg, std::string& config_path,
                        std::string& strategy) {
  cmd->add_option("--config", config_path, "JSON config file; explicit flags override it");
  cmd->add_option("--seed", cfg.policy.global_seed, "global seed");
  cmd->add_option("--workers", cfg.workers, "worker threads");
  cmd->add_option("--out", cfg.out, "output path");
  cmd->add_option("--strategy", strategy, "uniform | domain | non-domain | none");
  cmd->add_option("--replacement-ratio", cfg.policy.replacement_ratio,
                  "target fraction of words to replace per document");
  cmd->add_option("--mix-ratio", cfg.policy.mix_ratio,
                  "fraction of eligible hr documents to intervene on");
  cmd->add_option("--hr-share", cfg.policy.hr_share, "hr token share of the composed mix");
}

}  // namespace

int run(std::vector<std::string> args) {
  try {
    PipelineConfig cfg = config_baseline(args);
    std::string config_path;
    std::string strategy = to_string(cfg.policy.strategy);

    CLI::App app{"deterministic corpus interventions: dictionary-driven lexical substitution, "
                 "embedding-cluster domain targeting, and ratio-controlled corpus mixing"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);

    LexiconArgs lexicon_args;
    CLI::App* lex_cmd = app.add_subcommand(
        "lexicon", "load, validate, subsample and canonicalize a bilingual lexicon");
    add_common_options(lex_cmd, cfg, config_path, strategy);
    lex_cmd->add_option("--in", lexicon_args.inputs, "input TSV file(s), source<TAB>translation");
    lex_cmd->add_option("--source-lang", lexicon_args.source_lang, "source language tag");
    lex_cmd->add_option("--target-lang", lexicon_args.target_lang, "target language tag");
    lex_cmd->add_option("--fraction", cfg.lexicon_fraction, "subsample fraction in (0,1]");
    lex_cmd->add_option("--subsample-seed", cfg.lexicon_seed, "subsample seed");

    ClusterArgs cluster_args;
    CLI::App* cluster_cmd = app.add_subcommand(
        "cluster", "k-means over document embeddings; identify the domain cluster");
    add_common_options(cluster_cmd, cfg, config_path, strategy);
    cluster_cmd->add_option("--embeddings", cfg.embeddings, "embedding file");
    cluster_cmd->add_option("--ids", cfg.embedding_ids, "id sidecar (default: <embeddings>.ids)");
    cluster_cmd->add_option("--benchmark-embeddings", cfg.benchmark_embeddings,
                            "benchmark embedding file for domain identification");
    cluster_cmd->add_option("--benchmark-ids", cfg.benchmark_ids, "benchmark id sidecar");
    cluster_cmd->add_option("--k", cfg.cluster_k, "cluster count");
    cluster_cmd->add_option("--cluster-seed", cfg.cluster_seed, "k-means seed");
    cluster_cmd->add_option("--max-iter", cfg.cluster_max_iter, "Lloyd iteration cap");
    cluster_cmd->add_option("--tol", cfg.cluster_tol, "relative centroid shift tolerance");
    cluster_cmd->add_option("--restarts", cfg.cluster_restarts,
                            "independent k-means++ restarts (0 = auto by instance size)");
    cluster_cmd->add_option("--token-counts", cluster_args.token_counts,
                            "id<TAB>count file for token-weighted histogram");

    InterveneArgs intervene_args;
    CLI::App* intervene_cmd = app.add_subcommand(
        "intervene", "apply the replacement policy to a corpus, writing ordered shards");
    add_common_options(intervene_cmd, cfg, config_path, strategy);
    intervene_cmd->add_option("--hr-corpus", cfg.hr_corpus, "input JSONL file(s)");
    intervene_cmd->add_option("--lexicon", cfg.lexicon, "bilingual lexicon (TSV or canonical)");
    intervene_cmd->add_option("--domain-source", intervene_args.domain_source,
                              "tags | assignments (required for domain strategies)");
    intervene_cmd->add_option("--assignments", cfg.assignments,
                              "assignments.jsonl from a cluster run");
    intervene_cmd->add_option("--domain-cluster", cfg.domain_cluster, "domain cluster index");
    intervene_cmd->add_option("--shard-docs", cfg.shard_docs, "documents per output shard");
    intervene_cmd->add_flag("--sidecar,!--no-sidecar", cfg.sidecar,
                            "write per-document replacement metadata");

    CLI::App* compose_cmd = app.add_subcommand(
        "compose", "interleave hr and lr corpora to a token budget at the configured hr share");
    add_common_options(compose_cmd, cfg, config_path, strategy);
    compose_cmd->add_option("--hr-corpus", cfg.hr_corpus, "hr JSONL file(s)");
    compose_cmd->add_option("--lr-corpus", cfg.lr_corpus, "lr JSONL file(s), cycled on exhaustion");
    compose_cmd->add_option("--token-budget", cfg.token_budget, "tokens to emit");
    compose_cmd->add_option("--shard-docs", cfg.shard_docs, "documents per output shard");

    StatsArgs stats_args;
    CLI::App* stats_cmd = app.add_subcommand(
        "stats", "coverage, replacement report and target-vs-actual curve for a corpus");
    add_common_options(stats_cmd, cfg, config_path, strategy);
    stats_cmd->add_option("--hr-corpus", cfg.hr_corpus, "input JSONL file(s)");
    stats_cmd->add_option("--lexicon", cfg.lexicon, "bilingual lexicon");
    stats_cmd->add_option("--targets", stats_args.targets,
                          "curve targets, ascending in [0,1] (default 0.1..1.0)");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back(kToolName);
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e);
      return code == 0 ? 0 : 2;
    }

    cfg.policy.strategy = strategy_from_string(strategy);
    if (cfg.workers == 0) cfg.workers = std::thread::hardware_concurrency();
    if (cfg.workers == 0) cfg.workers = 1;

    if (lex_cmd->parsed()) return cmd_lexicon(cfg, lexicon_args);
    if (cluster_cmd->parsed()) return cmd_cluster(cfg, cluster_args);
    if (intervene_cmd->parsed()) return cmd_intervene(cfg, intervene_args);
    if (compose_cmd->parsed()) return cmd_compose(cfg);
    if (stats_cmd->parsed()) return cmd_stats(cfg, stats_args);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? argc - 1 : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(std::move(args));
}

}  // namespace lexmix::cli
