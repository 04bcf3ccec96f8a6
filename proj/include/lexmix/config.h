#ifndef LEXMIX_CONFIG_H_
#define LEXMIX_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "lexmix/cluster.h"
#include "lexmix/compose.h"

namespace lexmix {

inline constexpr const char* kToolName = "lexmix";
inline constexpr const char* kToolVersion = "0.1.0";

// Full pipeline configuration; each subcommand consumes its slice.
// Round-trips exactly through JSON.
struct PipelineConfig {
  std::vector<std::string> hr_corpus;
  std::vector<std::string> lr_corpus;
  std::string lexicon;
  std::string embeddings;
  std::string embedding_ids;
  std::string benchmark_embeddings;
  std::string benchmark_ids;
  std::string assignments;
  std::string out;

  InterventionPolicy policy;

  uint32_t cluster_k = kDefaultClusterCount;
  uint64_t cluster_seed = 0;
  double cluster_tol = kDefaultTol;
  uint32_t cluster_max_iter = kDefaultMaxIter;
  uint32_t cluster_restarts = kAutoRestarts;
  int64_t domain_cluster = -1;  // -1 = unset

  double lexicon_fraction = 1.0;
  uint64_t lexicon_seed = 0;

  uint64_t token_budget = 0;
  uint64_t shard_docs = 100000;
  unsigned workers = 1;
  bool sidecar = true;

  bool operator==(const PipelineConfig&) const = default;

  nlohmann::json to_json() const;
  static PipelineConfig from_json(const nlohmann::json& j);

  // Throws UsageError for every configured input path that is missing.
  void validate_paths() const;
};

}  // namespace lexmix

#endif  // LEXMIX_CONFIG_H_
