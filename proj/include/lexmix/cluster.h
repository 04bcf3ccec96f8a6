#ifndef LEXMIX_CLUSTER_H_
#define LEXMIX_CLUSTER_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace lexmix {

// Dense document embeddings, row-major float32, one row per id. The
// vectors are produced elsewhere; this tool only consumes them.
struct EmbeddingMatrix {
  std::vector<uint64_t> ids;
  size_t dim = 0;
  std::vector<float> data;  // ids.size() * dim

  size_t rows() const { return ids.size(); }
  const float* row(size_t i) const { return data.data() + i * dim; }

  // Checks id uniqueness, row/id agreement and finiteness.
  void validate() const;
};

struct ClusterModel {
  uint32_t k = 0;
  size_t dim = 0;
  std::vector<double> centroids;  // k * dim, row-major
  double inertia = 0.0;
  uint32_t iterations = 0;
  uint64_t seed = 0;
  uint32_t max_iter = 0;
  double tol = 0.0;
  bool converged = false;

  // Inertia after each assignment step of the winning restart; not
  // serialized, kept for monotonicity checks.
  std::vector<double> inertia_history;

  const double* centroid(size_t c) const { return centroids.data() + c * dim; }
};

inline constexpr uint32_t kDefaultClusterCount = 32;
inline constexpr uint32_t kDefaultMaxIter = 300;
inline constexpr double kDefaultTol = 1e-4;
// restarts == 0 selects automatically: small instances get many cheap
// seedings (they are where Lloyd's local optima actually bite), large
// ones the conventional 10.
inline constexpr uint32_t kAutoRestarts = 0;

// Lloyd's algorithm with k-means++ seeding from a splitmix64 stream.
// Runs independent seedings and keeps the lowest-inertia fit.
// Deterministic bit-for-bit for fixed inputs and ANY worker count: the
// assignment step parallelizes over point ranges, the update step sums
// points strictly in index order, ties go to the lowest cluster index,
// and empty clusters are re-seeded to the point farthest from its
// assigned centroid.
ClusterModel kmeans_fit(const EmbeddingMatrix& emb, uint32_t k, uint64_t seed,
                        uint32_t max_iter = kDefaultMaxIter, double tol = kDefaultTol,
                        uint32_t restarts = kAutoRestarts, unsigned workers = 1);

// Nearest centroid by squared Euclidean distance; ties break to the
// lowest cluster index.
std::vector<std::pair<uint64_t, uint32_t>> assign(const EmbeddingMatrix& emb,
                                                  const ClusterModel& model);

struct DomainCluster {
  uint32_t cluster = 0;
  double share = 0.0;  // rounded to 4 decimal places
};

// Plurality cluster of a benchmark assignment list, lowest index on ties.
DomainCluster domain_cluster(const std::vector<uint32_t>& benchmark_assignments, uint32_t k);

struct ClusterHistogram {
  std::vector<uint64_t> counts;
  std::vector<double> count_shares;
  bool has_weights = false;
  std::vector<double> token_totals;
  std::vector<double> token_shares;
};

// Per-cluster sample counts (and token totals when weights are given).
ClusterHistogram cluster_histogram(const std::vector<uint32_t>& assignments, uint32_t k,
                                   const std::vector<double>* weights = nullptr);

// Flat binary embedding format: magic "EMBF0001", u64 row count, u32 dim,
// then rows of float32, all little-endian. Ids live in a text sidecar,
// one decimal id per line, in row order.
EmbeddingMatrix load_embeddings(const std::string& bin_path, const std::string& ids_path);
void save_embeddings(const EmbeddingMatrix& emb, const std::string& bin_path,
                     const std::string& ids_path);

// Versioned binary model format: magic "KMNS0001", u32 version, u32 k,
// u32 dim, u64 seed, u32 max_iter, u32 iterations, f64 tol, f64 inertia,
// u8 converged, then k*dim float64 centroids, little-endian.
ClusterModel load_cluster_model(const std::string& path);
void save_cluster_model(const ClusterModel& model, const std::string& path);

}  // namespace lexmix

#endif  // LEXMIX_CLUSTER_H_
