#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lexmix/cli.h"
#include "lexmix/cluster.h"
#include "lexmix/config.h"
#include "lexmix/document.h"
#include "lexmix/rng.h"
#include "lexmix/sha256.h"

using namespace lexmix;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) {
    path = fs::temp_directory_path() / ("lexmix_cli_" + name);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& child) const { return (path / child).string(); }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  REQUIRE(out.good());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json read_json(const std::string& path) { return json::parse(read_file(path)); }

// Canonical corpus fixture: ids 0..n-1, hr role, lexicon words mixed
// with out-of-vocabulary fillers.
std::string make_corpus(size_t n_docs, uint64_t id_base = 0) {
  std::string out;
  for (size_t i = 0; i < n_docs; ++i) {
    Document d;
    d.id = id_base + i;
    d.lang = "en";
    d.role = Role::hr;
    d.text = "alpha beta gamma delta filler" + std::to_string(i % 7);
    out += serialize_document(d);
    out += '\n';
  }
  return out;
}

const char* kLexTsv = "alpha\tAlpha\nbeta\tBeta\ngamma\tGamma\n";

int run_cli(std::initializer_list<std::string> args) {
  return cli::run(std::vector<std::string>(args));
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("lexicon: load, determinism, missing input") {
  TempDir dir("lexicon");
  const std::string tsv = dir / "de.tsv";
  write_file(tsv, "Hello\thallo\nhello\tservus\nworld\tWelt\nbad line\n");

  const std::string out1 = dir / "de1.lex";
  CHECK(run_cli({"lexicon", "--in", tsv, "--out", out1}) == 0);
  CHECK(read_file(out1) == "hello\thallo|servus\nworld\tWelt\n");

  // Subsampled run twice: identical output digests; a rerun of the same
  // configuration reproduces the manifest byte for byte.
  const std::string out2 = dir / "half_a.lex";
  const std::string out3 = dir / "half_b.lex";
  CHECK(run_cli({"lexicon", "--in", tsv, "--out", out2, "--fraction", "0.5",
                 "--subsample-seed", "7"}) == 0);
  const std::string manifest_first = read_file(out2 + ".manifest.json");
  CHECK(run_cli({"lexicon", "--in", tsv, "--out", out2, "--fraction", "0.5",
                 "--subsample-seed", "7"}) == 0);
  CHECK(read_file(out2 + ".manifest.json") == manifest_first);
  CHECK(run_cli({"lexicon", "--in", tsv, "--out", out3, "--fraction", "0.5",
                 "--subsample-seed", "7"}) == 0);
  CHECK(Sha256::hex_file(out2) == Sha256::hex_file(out3));

  // Missing input: exit 2, message names the path (checked via manifest absence).
  CHECK(run_cli({"lexicon", "--in", dir / "nope.tsv", "--out", dir / "x.lex"}) == 2);
}

TEST_CASE("cluster: blob fixture, domain share, rerun digest, k too large") {
  TempDir dir("cluster");
  // Two far blobs; benchmark vectors sit inside the second.
  EmbeddingMatrix emb;
  emb.dim = 2;
  SplitMix64 rng(4);
  for (size_t i = 0; i < 60; ++i) {
    emb.ids.push_back(i);
    const bool second = i >= 30;
    emb.data.push_back(static_cast<float>((second ? 100.0 : 0.0) + rng.next_unit()));
    emb.data.push_back(static_cast<float>((second ? 100.0 : 0.0) + rng.next_unit()));
  }
  const std::string emb_path = dir / "docs.emb";
  save_embeddings(emb, emb_path, emb_path + ".ids");

  EmbeddingMatrix bench;
  bench.dim = 2;
  for (size_t i = 0; i < 10; ++i) {
    bench.ids.push_back(1000 + i);
    bench.data.push_back(static_cast<float>(100.0 + rng.next_unit()));
    bench.data.push_back(static_cast<float>(100.0 + rng.next_unit()));
  }
  const std::string bench_path = dir / "bench.emb";
  save_embeddings(bench, bench_path, bench_path + ".ids");

  const std::string out = dir / "cl";
  CHECK(run_cli({"cluster", "--embeddings", emb_path, "--k", "2", "--cluster-seed", "9",
                 "--benchmark-embeddings", bench_path, "--out", out}) == 0);
  const json domain = read_json(out + "/domain.json");
  CHECK(domain.at("share").get<double>() == doctest::Approx(1.0));
  const json hist = read_json(out + "/histogram.json");
  CHECK(hist.at("counts").size() == 2);
  const auto counts = hist.at("counts").get<std::vector<uint64_t>>();
  CHECK(counts[0] + counts[1] == 60);
  CHECK(std::max(counts[0], counts[1]) == 30);

  // The benchmark blob's cluster holds all its members.
  const uint32_t domain_cluster_index = domain.at("domain_cluster").get<uint32_t>();
  const json manifest = read_json(out + "/manifest.json");
  CHECK(manifest.at("outputs").at("model").at("k").get<int>() == 2);

  // Rerun: identical model digest.
  const std::string out2 = dir / "cl2";
  CHECK(run_cli({"cluster", "--embeddings", emb_path, "--k", "2", "--cluster-seed", "9",
                 "--benchmark-embeddings", bench_path, "--out", out2}) == 0);
  CHECK(Sha256::hex_file(out + "/model.bin") == Sha256::hex_file(out2 + "/model.bin"));
  CHECK(read_file(out + "/assignments.jsonl") == read_file(out2 + "/assignments.jsonl"));

  // Validate assignments file references the domain cluster sensibly.
  std::istringstream lines(read_file(out + "/assignments.jsonl"));
  std::string line;
  size_t domain_members = 0;
  while (std::getline(lines, line)) {
    const json j = json::parse(line);
    if (j.at("cluster").get<uint32_t>() == domain_cluster_index) ++domain_members;
  }
  CHECK(domain_members == 30);

  // k larger than the point count: exit 2.
  CHECK(run_cli({"cluster", "--embeddings", emb_path, "--k", "100", "--out", dir / "bad"}) == 2);
}

TEST_CASE("intervene: r=0 identity, worker-count determinism, seed sensitivity") {
  TempDir dir("intervene");
  const std::string corpus = dir / "corpus.jsonl";
  write_file(corpus, make_corpus(500));
  const std::string lex = dir / "lex.tsv";
  write_file(lex, kLexTsv);

  // r=0: byte-identical output.
  const std::string out0 = dir / "r0";
  CHECK(run_cli({"intervene", "--hr-corpus", corpus, "--lexicon", lex, "--strategy", "uniform",
                 "--replacement-ratio", "0", "--mix-ratio", "1", "--seed", "5", "--out", out0}) ==
        0);
  CHECK(Sha256::hex_file(out0 + "/part-00000.jsonl") == Sha256::hex_file(corpus));

  // workers 1 vs 4 vs 16: identical shards.
  std::vector<std::string> digests;
  for (const char* workers : {"1", "4", "16"}) {
    const std::string out = dir / (std::string("w") + workers);
    CHECK(run_cli({"intervene", "--hr-corpus", corpus, "--lexicon", lex, "--strategy", "uniform",
                   "--replacement-ratio", "0.7", "--mix-ratio", "0.9", "--seed", "5", "--workers",
                   workers, "--out", out}) == 0);
    digests.push_back(Sha256::hex_file(out + "/part-00000.jsonl"));
  }
  CHECK(digests[0] == digests[1]);
  CHECK(digests[0] == digests[2]);

  // Different seed: different bytes.
  const std::string outs = dir / "seed6";
  CHECK(run_cli({"intervene", "--hr-corpus", corpus, "--lexicon", lex, "--strategy", "uniform",
                 "--replacement-ratio", "0.7", "--mix-ratio", "0.9", "--seed", "6", "--out",
                 outs}) == 0);
  CHECK(Sha256::hex_file(outs + "/part-00000.jsonl") != digests[0]);

  // Sidecar conservation: substitution records match the report.
  const json report = read_json(dir / "w4" + std::string("/report.json"));
  uint64_t substitutions = 0;
  std::istringstream sidecar(read_file(dir / "w4" + std::string("/sidecar.jsonl")));
  std::string line;
  while (std::getline(sidecar, line)) {
    substitutions += json::parse(line).at("replacements").size();
  }
  CHECK(substitutions == report.at("n_replaced").get<uint64_t>());

  // Domain strategy without a tagging source: exit 2.
  CHECK(run_cli({"intervene", "--hr-corpus", corpus, "--lexicon", lex, "--strategy", "domain",
                 "--out", dir / "dom"}) == 2);
}

TEST_CASE("intervene: domain strategy from assignments") {
  TempDir dir("intervene_domain");
  const std::string corpus = dir / "corpus.jsonl";
  write_file(corpus, make_corpus(100));
  const std::string lex = dir / "lex.tsv";
  write_file(lex, kLexTsv);
  std::string assignments;
  for (int i = 0; i < 100; ++i) {
    assignments += "{\"cluster\":" + std::to_string(i % 4 == 0 ? 2 : 1) +
                   ",\"id\":" + std::to_string(i) + "}\n";
  }
  const std::string assign_path = dir / "assignments.jsonl";
  write_file(assign_path, assignments);

  const std::string out = dir / "dom";
  CHECK(run_cli({"intervene", "--hr-corpus", corpus, "--lexicon", lex, "--strategy", "domain",
                 "--domain-source", "assignments", "--assignments", assign_path,
                 "--domain-cluster", "2", "--replacement-ratio", "1", "--seed", "1", "--out",
                 out}) == 0);
  const json report = read_json(out + "/report.json");
  CHECK(report.at("partition").at("intervened").get<uint64_t>() == 25);
  CHECK(report.at("partition").at("untouched_hr").get<uint64_t>() == 75);

  const std::string out_non = dir / "nondom";
  CHECK(run_cli({"intervene", "--hr-corpus", corpus, "--lexicon", lex, "--strategy",
                 "non-domain", "--domain-source", "assignments", "--assignments", assign_path,
                 "--domain-cluster", "2", "--replacement-ratio", "1", "--seed", "1", "--out",
                 out_non}) == 0);
  const json report_non = read_json(out_non + "/report.json");
  CHECK(report_non.at("partition").at("intervened").get<uint64_t>() == 75);
  CHECK(report_non.at("partition").at("untouched_hr").get<uint64_t>() == 25);
}

TEST_CASE("compose: budget, manifest, rerun digest, hr exhaustion") {
  TempDir dir("compose");
  const std::string hr = dir / "hr.jsonl";
  write_file(hr, make_corpus(4000));
  std::string lr_content;
  for (int i = 0; i < 10; ++i) {
    Document d;
    d.id = 900000 + i;
    d.lang = "de";
    d.role = Role::lr;
    d.text = "ein zwei drei vier";
    lr_content += serialize_document(d) + "\n";
  }
  const std::string lr = dir / "lr.jsonl";
  write_file(lr, lr_content);

  const std::string out = dir / "mix";
  CHECK(run_cli({"compose", "--hr-corpus", hr, "--lr-corpus", lr, "--hr-share", "0.9",
                 "--token-budget", "10000", "--seed", "3", "--out", out}) == 0);
  const json manifest = read_json(out + "/manifest.json");
  const uint64_t tokens = manifest.at("outputs").at("tokens").get<uint64_t>();
  CHECK(tokens >= 10000);
  const double share = manifest.at("outputs").at("hr_token_share").get<double>();
  CHECK(share > 0.85);
  CHECK(share < 0.95);

  // Rerun of the same configuration: manifest and shards byte-identical.
  const std::string manifest_first = read_file(out + "/manifest.json");
  const std::string shard_first = Sha256::hex_file(out + "/part-00000.jsonl");
  CHECK(run_cli({"compose", "--hr-corpus", hr, "--lr-corpus", lr, "--hr-share", "0.9",
                 "--token-budget", "10000", "--seed", "3", "--out", out}) == 0);
  CHECK(read_file(out + "/manifest.json") == manifest_first);
  CHECK(Sha256::hex_file(out + "/part-00000.jsonl") == shard_first);

  // HR exhaustion: tiny hr stream, big budget -> exit 3.
  const std::string hr_small = dir / "hr_small.jsonl";
  write_file(hr_small, make_corpus(5));
  CHECK(run_cli({"compose", "--hr-corpus", hr_small, "--lr-corpus", lr, "--hr-share", "0.9",
                 "--token-budget", "100000", "--seed", "3", "--out", dir / "fail"}) == 3);
}

TEST_CASE("stats: coverage, curve and plateau via files") {
  TempDir dir("stats");
  // 10-word docs with 5 covered words: coverage 0.5.
  std::string corpus;
  for (int i = 0; i < 200; ++i) {
    Document d;
    d.id = i;
    d.lang = "en";
    d.role = Role::hr;
    d.text = "alpha beta gamma delta epsilon f0 f1 f2 f3 f4";
    corpus += serialize_document(d) + "\n";
  }
  const std::string corpus_path = dir / "c.jsonl";
  write_file(corpus_path, corpus);
  const std::string lex = dir / "lex.tsv";
  write_file(lex, "alpha\ta\nbeta\tb\ngamma\tc\ndelta\td\nepsilon\te\n");

  const std::string out = dir / "st";
  CHECK(run_cli({"stats", "--hr-corpus", corpus_path, "--lexicon", lex, "--replacement-ratio",
                 "0.7", "--seed", "2", "--out", out}) == 0);
  const json report = read_json(out + "/report.json");
  CHECK(report.at("coverage").get<double>() == doctest::Approx(0.5));
  CHECK(report.at("report").at("mean_actual_ratio").get<double>() == doctest::Approx(0.5));

  const std::string csv = read_file(out + "/curve.csv");
  CHECK(csv.rfind("target,mean_actual\n", 0) == 0);
  // Plateau: last line is target 1 at coverage 0.5.
  CHECK(csv.find("\n1,0.5\n") != std::string::npos);
}

TEST_CASE("config file provides defaults, flags override") {
  TempDir dir("config");
  const std::string tsv = dir / "in.tsv";
  write_file(tsv, "a\tx\nb\ty\nc\tz\nd\tw\n");
  const json cfg = {{"lexicon_fraction", 0.5},
                    {"lexicon_seed", 9},
                    {"out", dir / "from_config.lex"}};
  const std::string cfg_path = dir / "cfg.json";
  write_file(cfg_path, cfg.dump());

  CHECK(run_cli({"lexicon", "--config", cfg_path, "--in", tsv}) == 0);
  CHECK(fs::exists(dir / "from_config.lex"));
  std::istringstream lines(read_file(dir / "from_config.lex"));
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) ++n;
  CHECK(n == 2);  // fraction 0.5 of 4

  // Flag overrides the config fraction.
  CHECK(run_cli({"lexicon", "--config", cfg_path, "--in", tsv, "--fraction", "1.0", "--out",
                 dir / "full.lex"}) == 0);
  std::istringstream lines2(read_file(dir / "full.lex"));
  n = 0;
  while (std::getline(lines2, line)) ++n;
  CHECK(n == 4);
}

TEST_CASE("intervene driven by a config file matches the flag-driven run") {
  TempDir dir("config_intervene");
  const std::string corpus = dir / "corpus.jsonl";
  write_file(corpus, make_corpus(300));
  const std::string lex = dir / "lex.tsv";
  write_file(lex, kLexTsv);

  const std::string out_flags = dir / "flags";
  CHECK(run_cli({"intervene", "--hr-corpus", corpus, "--lexicon", lex, "--strategy", "uniform",
                 "--replacement-ratio", "0.6", "--mix-ratio", "0.8", "--seed", "77", "--out",
                 out_flags}) == 0);

  const json cfg = {{"hr_corpus", {corpus}},     {"lexicon", lex},
                    {"strategy", "uniform"},     {"replacement_ratio", 0.6},
                    {"mix_ratio", 0.8},          {"seed", 77},
                    {"out", dir / "cfg_run"}};
  const std::string cfg_path = dir / "intervene.json";
  write_file(cfg_path, cfg.dump());
  CHECK(run_cli({"intervene", "--config", cfg_path}) == 0);

  CHECK(Sha256::hex_file(out_flags + "/part-00000.jsonl") ==
        Sha256::hex_file((dir / "cfg_run") + std::string("/part-00000.jsonl")));

  // A flag still overrides the config value.
  CHECK(run_cli({"intervene", "--config", cfg_path, "--seed", "78", "--out",
                 dir / "cfg_override"}) == 0);
  CHECK(Sha256::hex_file((dir / "cfg_override") + std::string("/part-00000.jsonl")) !=
        Sha256::hex_file(out_flags + "/part-00000.jsonl"));
}

TEST_CASE("PipelineConfig round-trips through JSON") {
  PipelineConfig c;
  c.hr_corpus = {"a.jsonl", "b.jsonl"};
  c.lr_corpus = {"lr.jsonl"};
  c.lexicon = "lex.tsv";
  c.embeddings = "e.emb";
  c.embedding_ids = "e.ids";
  c.benchmark_embeddings = "b.emb";
  c.benchmark_ids = "b.ids";
  c.assignments = "as.jsonl";
  c.out = "outdir";
  c.policy.strategy = Strategy::non_domain;
  c.policy.replacement_ratio = 0.35;
  c.policy.mix_ratio = 0.8;
  c.policy.hr_share = 0.96;
  c.policy.global_seed = 123456789012345ull;
  c.cluster_k = 16;
  c.cluster_seed = 4;
  c.cluster_tol = 1e-5;
  c.cluster_max_iter = 123;
  c.cluster_restarts = 3;
  c.domain_cluster = 7;
  c.lexicon_fraction = 0.25;
  c.lexicon_seed = 11;
  c.token_budget = 1000000;
  c.shard_docs = 5000;
  c.workers = 8;
  c.sidecar = false;
  CHECK(PipelineConfig::from_json(c.to_json()) == c);
  CHECK(PipelineConfig::from_json(json::parse(c.to_json().dump())) == c);
}

TEST_CASE("unknown subcommand or flag exits 2") {
  CHECK(run_cli({"frobnicate"}) == 2);
  CHECK(run_cli({"lexicon", "--bogus-flag", "1"}) == 2);
}

TEST_SUITE_END();
