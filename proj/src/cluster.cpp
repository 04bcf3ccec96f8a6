#include "lexmix/cluster.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>
#include <thread>
#include <type_traits>
#include <unordered_set>

#include "lexmix/errors.h"
#include "lexmix/rng.h"

namespace lexmix {

namespace {

double sq_dist(const float* a, const double* b, size_t dim) {
  double s = 0.0;
  for (size_t j = 0; j < dim; ++j) {
    const double d = static_cast<double>(a[j]) - b[j];
    s += d * d;
  }
  return s;
}

struct FitResult {
  std::vector<double> centroids;
  std::vector<uint32_t> labels;
  std::vector<double> inertia_history;
  double inertia = std::numeric_limits<double>::infinity();
  uint32_t iterations = 0;
  bool converged = false;
};

// k-means++: first centroid uniform, then each point weighted by its
// squared distance to the nearest chosen centroid.
std::vector<double> plus_plus_init(const EmbeddingMatrix& emb, uint32_t k, SplitMix64& rng) {
  const size_t n = emb.rows();
  const size_t dim = emb.dim;
  std::vector<double> centroids(static_cast<size_t>(k) * dim);
  std::vector<double> dist2(n, std::numeric_limits<double>::infinity());

  const size_t first = static_cast<size_t>(rng.next_below(n));
  for (size_t j = 0; j < dim; ++j) centroids[j] = emb.row(first)[j];

  for (uint32_t c = 1; c < k; ++c) {
    const double* prev = centroids.data() + static_cast<size_t>(c - 1) * dim;
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      dist2[i] = std::min(dist2[i], sq_dist(emb.row(i), prev, dim));
      total += dist2[i];
    }
    size_t pick;
    if (total > 0.0) {
      const double target = rng.next_unit() * total;
      double acc = 0.0;
      pick = n - 1;  // fallback against fp undershoot
      for (size_t i = 0; i < n; ++i) {
        acc += dist2[i];
        if (acc >= target && dist2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      // All points coincide with chosen centroids.
      pick = static_cast<size_t>(rng.next_below(n));
    }
    double* dst = centroids.data() + static_cast<size_t>(c) * dim;
    for (size_t j = 0; j < dim; ++j) dst[j] = static_cast<double>(emb.row(pick)[j]);
  }
  return centroids;
}

uint32_t nearest_centroid(const float* point, const std::vector<double>& centroids, uint32_t k,
                          size_t dim, double* out_dist) {
  uint32_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (uint32_t c = 0; c < k; ++c) {
    const double d = sq_dist(point, centroids.data() + static_cast<size_t>(c) * dim, dim);
    if (d < best_d) {  // strict: ties keep the lowest index
      best_d = d;
      best = c;
    }
  }
  if (out_dist != nullptr) *out_dist = best_d;
  return best;
}

// Assignment step over [begin, end): writes disjoint slices of labels
// and distances, returns whether any label moved.
bool assign_range(const EmbeddingMatrix& emb, const std::vector<double>& centroids, uint32_t k,
                  size_t begin, size_t end, std::vector<uint32_t>& labels,
                  std::vector<double>& dist) {
  bool changed = false;
  for (size_t i = begin; i < end; ++i) {
    const uint32_t best = nearest_centroid(emb.row(i), centroids, k, emb.dim, &dist[i]);
    if (best != labels[i]) changed = true;
    labels[i] = best;
  }
  return changed;
}

FitResult lloyd(const EmbeddingMatrix& emb, uint32_t k, uint64_t seed, uint32_t max_iter,
                double tol, unsigned workers) {
  const size_t n = emb.rows();
  const size_t dim = emb.dim;
  SplitMix64 rng(seed);

  FitResult fit;
  fit.centroids = plus_plus_init(emb, k, rng);
  fit.labels.assign(n, 0);
  std::vector<double> sums(static_cast<size_t>(k) * dim);
  std::vector<uint64_t> counts(k);
  std::vector<double> point_dist(n);

  const unsigned pool = std::max(1u, std::min<unsigned>(workers, n / 4096 + 1));

  // Labels parallelize over disjoint ranges; every floating-point
  // reduction below runs in strict index order, so the fit is identical
  // for any pool size.
  auto assignment_pass = [&]() {
    if (pool == 1) {
      return assign_range(emb, fit.centroids, k, 0, n, fit.labels, point_dist);
    }
    std::vector<char> range_changed(pool, 0);
    std::vector<std::thread> threads;
    threads.reserve(pool);
    const size_t stride = (n + pool - 1) / pool;
    for (unsigned w = 0; w < pool; ++w) {
      threads.emplace_back([&, w] {
        const size_t begin = std::min(n, w * stride);
        const size_t end = std::min(n, begin + stride);
        range_changed[w] =
            assign_range(emb, fit.centroids, k, begin, end, fit.labels, point_dist) ? 1 : 0;
      });
    }
    for (std::thread& t : threads) t.join();
    bool changed = false;
    for (const char c : range_changed) changed |= c != 0;
    return changed;
  };

  for (uint32_t iter = 1; iter <= max_iter; ++iter) {
    bool changed = assignment_pass() || iter == 1;
    double inertia = 0.0;
    for (size_t i = 0; i < n; ++i) inertia += point_dist[i];
    fit.inertia = inertia;
    fit.inertia_history.push_back(inertia);
    fit.iterations = iter;
    if (!changed) {
      fit.converged = true;
      break;
    }

    // Update step: per-cluster means, points summed in index order.
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (size_t i = 0; i < n; ++i) {
      double* dst = sums.data() + static_cast<size_t>(fit.labels[i]) * dim;
      const float* src = emb.row(i);
      for (size_t j = 0; j < dim; ++j) dst[j] += static_cast<double>(src[j]);
      ++counts[fit.labels[i]];
    }
    std::vector<double> updated(static_cast<size_t>(k) * dim);
    for (uint32_t c = 0; c < k; ++c) {
      double* dst = updated.data() + static_cast<size_t>(c) * dim;
      if (counts[c] > 0) {
        const double* src = sums.data() + static_cast<size_t>(c) * dim;
        for (size_t j = 0; j < dim; ++j) dst[j] = src[j] / static_cast<double>(counts[c]);
      } else {
        // Keep the old location; repaired below.
        const double* src = fit.centroids.data() + static_cast<size_t>(c) * dim;
        std::copy(src, src + dim, dst);
      }
    }

    // Empty-cluster repair: move each empty centroid onto the point
    // farthest from its assigned centroid (lowest index on ties). Such
    // a move only adds a closer option for every point, so inertia
    // stays non-increasing.
    std::unordered_set<size_t> taken;
    for (uint32_t c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      size_t far_idx = 0;
      double far_d = -1.0;
      for (size_t i = 0; i < n; ++i) {
        if (taken.count(i) > 0) continue;
        if (point_dist[i] > far_d) {
          far_d = point_dist[i];
          far_idx = i;
        }
      }
      taken.insert(far_idx);
      double* dst = updated.data() + static_cast<size_t>(c) * dim;
      const float* src = emb.row(far_idx);
      for (size_t j = 0; j < dim; ++j) dst[j] = static_cast<double>(src[j]);
    }

    // Relative centroid shift against the updated positions.
    double shift2 = 0.0;
    double norm2 = 0.0;
    for (size_t j = 0; j < updated.size(); ++j) {
      const double d = updated[j] - fit.centroids[j];
      shift2 += d * d;
      norm2 += updated[j] * updated[j];
    }
    fit.centroids = std::move(updated);
    const double rel_shift = std::sqrt(shift2) / (std::sqrt(norm2) + 1e-300);
    if (rel_shift < tol) {
      // Final assignment against the settled centroids.
      assignment_pass();
      double inertia_final = 0.0;
      for (size_t i = 0; i < n; ++i) inertia_final += point_dist[i];
      fit.inertia = inertia_final;
      fit.inertia_history.push_back(inertia_final);
      fit.converged = true;
      break;
    }
  }
  return fit;
}

}  // namespace

void EmbeddingMatrix::validate() const {
  if (ids.size() * dim != data.size()) {
    throw UsageError("embedding matrix shape mismatch: " + std::to_string(ids.size()) +
                     " ids, dim " + std::to_string(dim) + ", " + std::to_string(data.size()) +
                     " values");
  }
  std::unordered_set<uint64_t> seen;
  seen.reserve(ids.size());
  for (const uint64_t id : ids) {
    if (!seen.insert(id).second) {
      throw UsageError("duplicate embedding id: " + std::to_string(id));
    }
  }
  for (const float v : data) {
    if (!std::isfinite(v)) throw UsageError("embedding matrix contains non-finite values");
  }
}

ClusterModel kmeans_fit(const EmbeddingMatrix& emb, uint32_t k, uint64_t seed,
                        uint32_t max_iter, double tol, uint32_t restarts, unsigned workers) {
  if (k < 1) throw UsageError("cluster count must be at least 1");
  if (emb.rows() < k) {
    throw UsageError("fewer points (" + std::to_string(emb.rows()) + ") than clusters (" +
                     std::to_string(k) + ")");
  }
  if (!(tol > 0.0)) throw UsageError("tolerance must be positive");
  emb.validate();

  if (restarts == 0) {
    const size_t n = emb.rows();
    restarts = n <= 64 ? 64 : n <= 512 ? 24 : 10;
  }

  FitResult best;
  for (uint32_t r = 0; r < restarts; ++r) {
    FitResult fit = lloyd(emb, k, derive_doc_seed(seed, r), max_iter, tol, workers);
    if (fit.inertia < best.inertia) best = std::move(fit);
  }

  ClusterModel model;
  model.k = k;
  model.dim = emb.dim;
  model.centroids = std::move(best.centroids);
  model.inertia = best.inertia;
  model.iterations = best.iterations;
  model.seed = seed;
  model.max_iter = max_iter;
  model.tol = tol;
  model.converged = best.converged;
  model.inertia_history = std::move(best.inertia_history);
  return model;
}

std::vector<std::pair<uint64_t, uint32_t>> assign(const EmbeddingMatrix& emb,
                                                  const ClusterModel& model) {
  if (emb.dim != model.dim) {
    throw UsageError("embedding dim " + std::to_string(emb.dim) + " does not match model dim " +
                     std::to_string(model.dim));
  }
  std::vector<std::pair<uint64_t, uint32_t>> out;
  out.reserve(emb.rows());
  for (size_t i = 0; i < emb.rows(); ++i) {
    out.emplace_back(emb.ids[i],
                     nearest_centroid(emb.row(i), model.centroids, model.k, model.dim, nullptr));
  }
  return out;
}

DomainCluster domain_cluster(const std::vector<uint32_t>& benchmark_assignments, uint32_t k) {
  if (benchmark_assignments.empty()) {
    throw UsageError("cannot pick a domain cluster from an empty assignment list");
  }
  std::vector<uint64_t> counts(k);
  for (const uint32_t c : benchmark_assignments) {
    if (c >= k) throw UsageError("assignment index " + std::to_string(c) + " out of range");
    ++counts[c];
  }
  uint32_t best = 0;
  for (uint32_t c = 1; c < k; ++c) {
    if (counts[c] > counts[best]) best = c;  // ties keep the lowest index
  }
  const double share =
      static_cast<double>(counts[best]) / static_cast<double>(benchmark_assignments.size());
  return {best, std::round(share * 10000.0) / 10000.0};
}

ClusterHistogram cluster_histogram(const std::vector<uint32_t>& assignments, uint32_t k,
                                   const std::vector<double>* weights) {
  if (weights != nullptr && weights->size() != assignments.size()) {
    throw UsageError("weights do not align with assignments");
  }
  ClusterHistogram hist;
  hist.counts.assign(k, 0);
  hist.count_shares.assign(k, 0.0);
  if (weights != nullptr) {
    hist.has_weights = true;
    hist.token_totals.assign(k, 0.0);
    hist.token_shares.assign(k, 0.0);
  }
  double token_sum = 0.0;
  for (size_t i = 0; i < assignments.size(); ++i) {
    const uint32_t c = assignments[i];
    if (c >= k) throw UsageError("assignment index " + std::to_string(c) + " out of range");
    ++hist.counts[c];
    if (weights != nullptr) {
      const double w = (*weights)[i];
      if (w < 0.0 || !std::isfinite(w)) {
        throw UsageError("negative or non-finite weight at row " + std::to_string(i));
      }
      hist.token_totals[c] += w;
      token_sum += w;
    }
  }
  if (!assignments.empty()) {
    for (uint32_t c = 0; c < k; ++c) {
      hist.count_shares[c] =
          static_cast<double>(hist.counts[c]) / static_cast<double>(assignments.size());
    }
  }
  if (weights != nullptr && token_sum > 0.0) {
    for (uint32_t c = 0; c < k; ++c) hist.token_shares[c] = hist.token_totals[c] / token_sum;
  }
  return hist;
}

namespace {

constexpr char kEmbeddingMagic[8] = {'E', 'M', 'B', 'F', '0', '0', '0', '1'};
constexpr char kModelMagic[8] = {'K', 'M', 'N', 'S', '0', '0', '0', '1'};

template <typename T>
void write_pod(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  out.write(reinterpret_cast<const char*>(&value), sizeof(value));
}

template <typename T>
T read_pod(std::istream& in, const std::string& what) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(value));
  if (!in) throw DataError("truncated " + what);
  return value;
}

}  // namespace

EmbeddingMatrix load_embeddings(const std::string& bin_path, const std::string& ids_path) {
  std::ifstream in(bin_path, std::ios::binary);
  if (!in) throw DataError("cannot open embedding file: " + bin_path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kEmbeddingMagic, sizeof(magic)) != 0) {
    throw DataError("not an embedding file (bad magic): " + bin_path);
  }
  const auto count = read_pod<uint64_t>(in, "embedding header");
  const auto dim = read_pod<uint32_t>(in, "embedding header");
  if (dim == 0) throw DataError("embedding file has zero dimension: " + bin_path);

  EmbeddingMatrix emb;
  emb.dim = dim;
  emb.data.resize(count * dim);
  in.read(reinterpret_cast<char*>(emb.data.data()),
          static_cast<std::streamsize>(emb.data.size() * sizeof(float)));
  if (!in) throw DataError("truncated embedding body: " + bin_path);

  std::ifstream ids_in(ids_path);
  if (!ids_in) throw DataError("cannot open embedding id sidecar: " + ids_path);
  std::string line;
  emb.ids.reserve(count);
  while (std::getline(ids_in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    emb.ids.push_back(std::stoull(line));
  }
  if (emb.ids.size() != count) {
    throw DataError("id sidecar has " + std::to_string(emb.ids.size()) + " ids, expected " +
                    std::to_string(count));
  }
  emb.validate();
  return emb;
}

void save_embeddings(const EmbeddingMatrix& emb, const std::string& bin_path,
                     const std::string& ids_path) {
  emb.validate();
  std::ofstream out(bin_path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write embedding file: " + bin_path);
  out.write(kEmbeddingMagic, sizeof(kEmbeddingMagic));
  write_pod<uint64_t>(out, emb.rows());
  write_pod<uint32_t>(out, static_cast<uint32_t>(emb.dim));
  out.write(reinterpret_cast<const char*>(emb.data.data()),
            static_cast<std::streamsize>(emb.data.size() * sizeof(float)));
  if (!out) throw DataError("i/o error writing embedding file: " + bin_path);

  std::ofstream ids_out(ids_path, std::ios::binary | std::ios::trunc);
  if (!ids_out) throw DataError("cannot write embedding id sidecar: " + ids_path);
  for (const uint64_t id : emb.ids) ids_out << id << '\n';
  if (!ids_out) throw DataError("i/o error writing id sidecar: " + ids_path);
}

ClusterModel load_cluster_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open cluster model: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kModelMagic, sizeof(magic)) != 0) {
    throw DataError("not a cluster model file (bad magic): " + path);
  }
  const auto version = read_pod<uint32_t>(in, "model header");
  if (version != 1) throw DataError("unsupported cluster model version " + std::to_string(version));
  ClusterModel model;
  model.k = read_pod<uint32_t>(in, "model header");
  model.dim = read_pod<uint32_t>(in, "model header");
  model.seed = read_pod<uint64_t>(in, "model header");
  model.max_iter = read_pod<uint32_t>(in, "model header");
  model.iterations = read_pod<uint32_t>(in, "model header");
  model.tol = read_pod<double>(in, "model header");
  model.inertia = read_pod<double>(in, "model header");
  model.converged = read_pod<uint8_t>(in, "model header") != 0;
  model.centroids.resize(static_cast<size_t>(model.k) * model.dim);
  in.read(reinterpret_cast<char*>(model.centroids.data()),
          static_cast<std::streamsize>(model.centroids.size() * sizeof(double)));
  if (!in) throw DataError("truncated centroid block: " + path);
  return model;
}

void save_cluster_model(const ClusterModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write cluster model: " + path);
  out.write(kModelMagic, sizeof(kModelMagic));
  write_pod<uint32_t>(out, 1);  // version
  write_pod<uint32_t>(out, model.k);
  write_pod<uint32_t>(out, static_cast<uint32_t>(model.dim));
  write_pod<uint64_t>(out, model.seed);
  write_pod<uint32_t>(out, model.max_iter);
  write_pod<uint32_t>(out, model.iterations);
  write_pod<double>(out, model.tol);
  write_pod<double>(out, model.inertia);
  write_pod<uint8_t>(out, model.converged ? 1 : 0);
  out.write(reinterpret_cast<const char*>(model.centroids.data()),
            static_cast<std::streamsize>(model.centroids.size() * sizeof(double)));
  if (!out) throw DataError("i/o error writing cluster model: " + path);
}

}  // namespace lexmix
