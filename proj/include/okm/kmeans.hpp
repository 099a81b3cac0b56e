#ifndef OKM_KMEANS_HPP
#define OKM_KMEANS_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "okm/dataset.hpp"
#include "okm/distance.hpp"

namespace okm {

struct KMeansConfig {
    std::size_t k = 3;
    DistanceMeasure measure = DistanceMeasure::squared_euclidean;
    std::size_t replicates = 11;
    std::size_t max_iterations = 100;
    std::uint64_t seed = 42;
    bool online_phase = true;

    bool operator==(const KMeansConfig&) const = default;
};

enum class Phase : int { batch = 1, online = 2 };

/// One row of the iteration trace: iteration, phase, points moved, objective afterwards.
struct IterationTraceEntry {
    std::size_t iter = 0;
    Phase phase = Phase::batch;
    std::size_t num = 0;
    double sum = 0.0;

    bool operator==(const IterationTraceEntry&) const = default;
};

struct ReplicateResult {
    std::vector<std::size_t> assignments; ///< cluster index per row, in [0, k)
    Matrix centroids;                     ///< k x d
    double total_sum = 0.0;
    std::vector<IterationTraceEntry> trace;
    std::size_t iterations = 0;
    std::uint64_t seed_used = 0;
    bool converged = false; ///< the final trace entry moved no points

    bool operator==(const ReplicateResult&) const = default;
};

struct KMeansResult {
    ReplicateResult best;
    std::size_t best_replicate = 0;
    std::vector<double> all_sums; ///< replicate order
    std::vector<std::size_t> all_iterations;

    bool operator==(const KMeansResult&) const = default;
};

/// Throws Error when `config` cannot run on `ds` (bad k, counts, or rows outside the measure's domain).
void validate(const Dataset& ds, const KMeansConfig& config);

/// Sum of distances from every row to its assigned centroid, using the public distance().
double objective(const Dataset& ds, const std::vector<std::size_t>& assignments, const Matrix& centroids,
                 DistanceMeasure measure);

/**
 * @brief One k-means run from a seeded random start.
 *
 * Starts from k distinct data rows drawn uniformly with `replicate_seed`.
 * The batch phase alternates nearest-centroid assignment (ties go to the
 * lowest cluster index) with centroid updates until no point moves or
 * `max_iterations` passes have run. The online phase then applies the single
 * point move that lowers the total sum the most, one move per iteration,
 * until no move helps. A cluster left empty takes the point farthest from
 * its own centroid.
 */
ReplicateResult kmeans_single(const Dataset& ds, const KMeansConfig& config, std::uint64_t replicate_seed);

/// Best of `config.replicates` runs seeded seed, seed+1, ...; replicates run in parallel under OpenMP.
KMeansResult kmeans(const Dataset& ds, const KMeansConfig& config);

/// Reference: the same replicates run one after another.
KMeansResult kmeans_serial(const Dataset& ds, const KMeansConfig& config);

} // namespace okm

#endif
