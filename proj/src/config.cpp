#include "lexmix/config.h"

#include <filesystem>

#include "lexmix/errors.h"

namespace lexmix {

using nlohmann::json;

json PipelineConfig::to_json() const {
  json j;
  j["hr_corpus"] = hr_corpus;
  j["lr_corpus"] = lr_corpus;
  j["lexicon"] = lexicon;
  j["embeddings"] = embeddings;
  j["embedding_ids"] = embedding_ids;
  j["benchmark_embeddings"] = benchmark_embeddings;
  j["benchmark_ids"] = benchmark_ids;
  j["assignments"] = assignments;
  j["out"] = out;
  j["strategy"] = to_string(policy.strategy);
  j["replacement_ratio"] = policy.replacement_ratio;
  j["mix_ratio"] = policy.mix_ratio;
  j["hr_share"] = policy.hr_share;
  j["seed"] = policy.global_seed;
  j["cluster_k"] = cluster_k;
  j["cluster_seed"] = cluster_seed;
  j["cluster_tol"] = cluster_tol;
  j["cluster_max_iter"] = cluster_max_iter;
  j["cluster_restarts"] = cluster_restarts;
  j["domain_cluster"] = domain_cluster;
  j["lexicon_fraction"] = lexicon_fraction;
  j["lexicon_seed"] = lexicon_seed;
  j["token_budget"] = token_budget;
  j["shard_docs"] = shard_docs;
  j["workers"] = workers;
  j["sidecar"] = sidecar;
  return j;
}

PipelineConfig PipelineConfig::from_json(const json& j) {
  PipelineConfig c;
  try {
    if (j.contains("hr_corpus")) c.hr_corpus = j.at("hr_corpus").get<std::vector<std::string>>();
    if (j.contains("lr_corpus")) c.lr_corpus = j.at("lr_corpus").get<std::vector<std::string>>();
    if (j.contains("lexicon")) c.lexicon = j.at("lexicon").get<std::string>();
    if (j.contains("embeddings")) c.embeddings = j.at("embeddings").get<std::string>();
    if (j.contains("embedding_ids")) c.embedding_ids = j.at("embedding_ids").get<std::string>();
    if (j.contains("benchmark_embeddings")) {
      c.benchmark_embeddings = j.at("benchmark_embeddings").get<std::string>();
    }
    if (j.contains("benchmark_ids")) c.benchmark_ids = j.at("benchmark_ids").get<std::string>();
    if (j.contains("assignments")) c.assignments = j.at("assignments").get<std::string>();
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
    if (j.contains("strategy")) c.policy.strategy = strategy_from_string(j.at("strategy").get<std::string>());
    if (j.contains("replacement_ratio")) c.policy.replacement_ratio = j.at("replacement_ratio").get<double>();
    if (j.contains("mix_ratio")) c.policy.mix_ratio = j.at("mix_ratio").get<double>();
    if (j.contains("hr_share")) c.policy.hr_share = j.at("hr_share").get<double>();
    if (j.contains("seed")) c.policy.global_seed = j.at("seed").get<uint64_t>();
    if (j.contains("cluster_k")) c.cluster_k = j.at("cluster_k").get<uint32_t>();
    if (j.contains("cluster_seed")) c.cluster_seed = j.at("cluster_seed").get<uint64_t>();
    if (j.contains("cluster_tol")) c.cluster_tol = j.at("cluster_tol").get<double>();
    if (j.contains("cluster_max_iter")) c.cluster_max_iter = j.at("cluster_max_iter").get<uint32_t>();
    if (j.contains("cluster_restarts")) c.cluster_restarts = j.at("cluster_restarts").get<uint32_t>();
    if (j.contains("domain_cluster")) c.domain_cluster = j.at("domain_cluster").get<int64_t>();
    if (j.contains("lexicon_fraction")) c.lexicon_fraction = j.at("lexicon_fraction").get<double>();
    if (j.contains("lexicon_seed")) c.lexicon_seed = j.at("lexicon_seed").get<uint64_t>();
    if (j.contains("token_budget")) c.token_budget = j.at("token_budget").get<uint64_t>();
    if (j.contains("shard_docs")) c.shard_docs = j.at("shard_docs").get<uint64_t>();
    if (j.contains("workers")) c.workers = j.at("workers").get<unsigned>();
    if (j.contains("sidecar")) c.sidecar = j.at("sidecar").get<bool>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad config: ") + e.what());
  }
  return c;
}

void PipelineConfig::validate_paths() const {
  auto check = [](const std::string& path, const char* what) {
    if (!path.empty() && !std::filesystem::exists(path)) {
      throw UsageError(std::string(what) + " not found: " + path);
    }
  };
  for (const std::string& p : hr_corpus) check(p, "hr corpus file");
  for (const std::string& p : lr_corpus) check(p, "lr corpus file");
  check(lexicon, "lexicon file");
  check(embeddings, "embedding file");
  check(embedding_ids, "embedding id sidecar");
  check(benchmark_embeddings, "benchmark embedding file");
  check(benchmark_ids, "benchmark id sidecar");
  check(assignments, "assignments file");
}

}  // namespace lexmix
