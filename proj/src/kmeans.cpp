#include "okm/kmeans.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <numeric>
#include <random>

#include "measure_kernels.hpp"

namespace okm {

namespace {

constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();
// Online moves must lower the sum by more than this fraction of it.
constexpr double kImprovementTolerance = 1e-10;

// Unbiased draw in [0, bound) from the raw 64-bit stream. std::uniform_int_distribution
// is implementation-defined, which would make seeds non-portable.
std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (true) {
        const std::uint64_t r = gen();
        if (r >= threshold) {
            return r % bound;
        }
    }
}

/// First occurrence of every distinct row, ascending.
std::vector<std::size_t> distinct_rows(const Matrix& values) {
    std::vector<std::size_t> order(values.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto less = [&](std::size_t a, std::size_t b) {
        auto ra = values.row(a);
        auto rb = values.row(b);
        return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    };
    auto equal = [&](std::size_t a, std::size_t b) {
        auto ra = values.row(a);
        auto rb = values.row(b);
        return std::equal(ra.begin(), ra.end(), rb.begin());
    };
    std::stable_sort(order.begin(), order.end(), less);
    order.erase(std::unique(order.begin(), order.end(), equal), order.end());
    std::sort(order.begin(), order.end());
    return order;
}

class Replicate {
public:
    Replicate(const Dataset& ds, const KMeansConfig& config, const Matrix& work)
        : config_(config), work_(work), n_(ds.n()), d_(ds.d()), k_(config.k),
          centroids_(config.k, ds.d()), assignments_(ds.n(), kUnassigned), members_(config.k) {}

    ReplicateResult run(const std::vector<std::size_t>& distinct, std::uint64_t seed) {
        initialize(distinct, seed);

        std::size_t iter = 1;
        reassign();
        std::size_t moved = n_;
        bool batch_converged = false;
        double sum = 0.0;
        while (true) {
            const std::size_t repaired = repair_empty();
            if (iter > 1) moved += repaired;
            update_all_centroids();
            sum = total();
            trace_.push_back({iter, Phase::batch, moved, sum});
            if (iter >= config_.max_iterations) {
                break;
            }
            moved = reassign();
            if (moved == 0) {
                batch_converged = true;
                break;
            }
            ++iter;
        }

        bool converged = false;
        if (config_.online_phase) {
            converged = online(iter, sum);
        } else if (batch_converged) {
            trace_.push_back({iter + 1, Phase::batch, 0, sum});
            converged = true;
        }

        ReplicateResult out;
        out.assignments = assignments_;
        out.centroids = centroids_;
        out.total_sum = trace_.back().sum;
        out.iterations = trace_.back().iter;
        out.trace = std::move(trace_);
        out.seed_used = seed;
        out.converged = converged;
        return out;
    }

private:
    void initialize(const std::vector<std::size_t>& distinct, std::uint64_t seed) {
        std::mt19937_64 gen(seed);
        std::vector<std::size_t> pool = distinct;
        for (std::size_t c = 0; c < k_; ++c) {
            const auto pick = c + uniform_below(gen, pool.size() - c);
            std::swap(pool[c], pool[pick]);
            auto src = work_.row(pool[c]);
            std::copy(src.begin(), src.end(), centroids_.row(c).begin());
        }
    }

    double dist(std::size_t i, std::size_t c) const {
        return detail::prepared_distance(work_.row(i), centroids_.row(c), config_.measure);
    }

    std::size_t nearest(std::size_t i) const {
        std::size_t best = 0;
        double best_d = dist(i, 0);
        for (std::size_t c = 1; c < k_; ++c) {
            const double dc = dist(i, c);
            if (dc < best_d) {
                best_d = dc;
                best = c;
            }
        }
        return best;
    }

    std::size_t reassign() {
        std::size_t moved = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            const auto c = nearest(i);
            if (c != assignments_[i]) {
                assignments_[i] = c;
                ++moved;
            }
        }
        rebuild_members();
        return moved;
    }

    void rebuild_members() {
        for (auto& m : members_) m.clear();
        for (std::size_t i = 0; i < n_; ++i) members_[assignments_[i]].push_back(i);
    }

    // An empty cluster takes the point farthest from its current centroid,
    // drawn from clusters that can spare one.
    std::size_t repair_empty() {
        std::size_t repaired = 0;
        for (std::size_t c = 0; c < k_; ++c) {
            if (!members_[c].empty()) {
                continue;
            }
            std::size_t far = kUnassigned;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n_; ++i) {
                const auto owner = assignments_[i];
                if (members_[owner].size() < 2) {
                    continue;
                }
                const double di = dist(i, owner);
                if (di > far_d) {
                    far_d = di;
                    far = i;
                }
            }
            const auto donor = assignments_[far];
            auto& from = members_[donor];
            from.erase(std::find(from.begin(), from.end(), far));
            assignments_[far] = c;
            members_[c].push_back(far);
            auto src = work_.row(far);
            std::copy(src.begin(), src.end(), centroids_.row(c).begin());
            ++repaired;
        }
        return repaired;
    }

    void update_centroid(std::size_t c) {
        detail::prepared_centroid(work_, members_[c], config_.measure, centroids_.row(c), scratch_);
    }

    void update_all_centroids() {
        for (std::size_t c = 0; c < k_; ++c) update_centroid(c);
    }

    double cluster_cost(std::size_t c) const {
        double s = 0.0;
        for (auto i : members_[c]) s += dist(i, c);
        return s;
    }

    double total() const {
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) s += dist(i, assignments_[i]);
        return s;
    }

    // Cost of `members` (optionally without `skip`, optionally with `extra`) under its own centroid.
    double cost_of(const std::vector<std::size_t>& members, std::size_t skip, std::size_t extra) {
        candidate_.clear();
        for (auto i : members) {
            if (i != skip) candidate_.push_back(i);
        }
        if (extra != kUnassigned) candidate_.push_back(extra);
        candidate_centroid_.resize(d_);
        detail::prepared_centroid(work_, candidate_, config_.measure, candidate_centroid_, scratch_);
        double s = 0.0;
        for (auto i : candidate_) {
            s += detail::prepared_distance(work_.row(i), candidate_centroid_, config_.measure);
        }
        return s;
    }

    struct Move {
        std::size_t point = kUnassigned;
        std::size_t to = 0;
        double delta = 0.0;
    };

    Move best_move(double sum) {
        Move best;
        best.delta = -kImprovementTolerance * std::max(1.0, sum);
        const bool closed_form = config_.measure == DistanceMeasure::squared_euclidean;

        std::vector<double> base(k_);
        if (!closed_form) {
            for (std::size_t c = 0; c < k_; ++c) base[c] = cluster_cost(c);
        }
        for (std::size_t i = 0; i < n_; ++i) {
            const auto from = assignments_[i];
            const auto n_from = members_[from].size();
            if (n_from < 2) {
                continue;
            }
            double removal;
            if (closed_form) {
                const double nf = static_cast<double>(n_from);
                removal = -nf / (nf - 1.0) * dist(i, from);
            } else {
                removal = cost_of(members_[from], i, kUnassigned) - base[from];
            }
            for (std::size_t to = 0; to < k_; ++to) {
                if (to == from) {
                    continue;
                }
                double addition;
                if (closed_form) {
                    const double nt = static_cast<double>(members_[to].size());
                    addition = nt / (nt + 1.0) * dist(i, to);
                } else {
                    addition = cost_of(members_[to], kUnassigned, i) - base[to];
                }
                const double delta = removal + addition;
                if (delta < best.delta) {
                    best = {i, to, delta};
                }
            }
        }
        return best;
    }

    bool online(std::size_t iter, double sum) {
        const std::size_t move_cap = n_ * config_.max_iterations;
        for (std::size_t moves = 0;; ++moves) {
            ++iter;
            const auto move = best_move(sum);
            if (move.point == kUnassigned) {
                trace_.push_back({iter, Phase::online, 0, sum});
                return true;
            }
            if (moves == move_cap) {
                return false;
            }
            const auto from = assignments_[move.point];
            auto& src = members_[from];
            src.erase(std::find(src.begin(), src.end(), move.point));
            auto& dst = members_[move.to];
            dst.insert(std::upper_bound(dst.begin(), dst.end(), move.point), move.point);
            assignments_[move.point] = move.to;
            update_centroid(from);
            update_centroid(move.to);
            sum = total();
            trace_.push_back({iter, Phase::online, 1, sum});
        }
    }

    const KMeansConfig& config_;
    const Matrix& work_;
    std::size_t n_, d_, k_;
    Matrix centroids_;
    std::vector<std::size_t> assignments_;
    std::vector<std::vector<std::size_t>> members_;
    std::vector<IterationTraceEntry> trace_;
    std::vector<double> scratch_;
    std::vector<std::size_t> candidate_;
    std::vector<double> candidate_centroid_;
};

struct Prepared {
    Matrix work;
    std::vector<std::size_t> distinct;
};

Prepared prepare(const Dataset& ds, const KMeansConfig& config) {
    validate(ds, config);
    return {detail::prepare(ds.values(), config.measure), distinct_rows(ds.values())};
}

KMeansResult pick_best(std::vector<ReplicateResult> runs) {
    KMeansResult result;
    std::size_t best = 0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        result.all_sums.push_back(runs[r].total_sum);
        result.all_iterations.push_back(runs[r].iterations);
        if (runs[r].total_sum < runs[best].total_sum) {
            best = r;
        }
    }
    result.best_replicate = best;
    result.best = std::move(runs[best]);
    return result;
}

} // namespace

void validate(const Dataset& ds, const KMeansConfig& config) {
    if (config.k < 1) {
        throw Error("k must be at least 1");
    }
    if (config.k > ds.n()) {
        throw Error("k = " + std::to_string(config.k) + " exceeds the " + std::to_string(ds.n()) + " rows");
    }
    if (config.replicates < 1) {
        throw Error("replicates must be at least 1");
    }
    if (config.max_iterations < 1) {
        throw Error("max_iterations must be at least 1");
    }
    for (std::size_t i = 0; i < ds.n(); ++i) {
        try {
            check_point(ds.row(i), config.measure);
        } catch (const Error& e) {
            throw Error("row " + std::to_string(i) + ": " + e.what());
        }
    }
    const auto distinct = distinct_rows(ds.values()).size();
    if (config.k > distinct) {
        throw Error("k = " + std::to_string(config.k) + " exceeds the " + std::to_string(distinct) +
                    " distinct rows");
    }
}

double objective(const Dataset& ds, const std::vector<std::size_t>& assignments, const Matrix& centroids,
                 DistanceMeasure measure) {
    if (assignments.size() != ds.n()) {
        throw Error("assignment count does not match row count");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < ds.n(); ++i) {
        if (assignments[i] >= centroids.rows()) {
            throw Error("assignment out of range");
        }
        s += distance(ds.row(i), centroids.row(assignments[i]), measure);
    }
    return s;
}

ReplicateResult kmeans_single(const Dataset& ds, const KMeansConfig& config, std::uint64_t replicate_seed) {
    const auto prepared = prepare(ds, config);
    return Replicate(ds, config, prepared.work).run(prepared.distinct, replicate_seed);
}

KMeansResult kmeans(const Dataset& ds, const KMeansConfig& config) {
    const auto prepared = prepare(ds, config);
    const auto count = static_cast<long>(config.replicates);
    std::vector<ReplicateResult> runs(config.replicates);
    std::vector<std::exception_ptr> errors(config.replicates);

#pragma omp parallel for schedule(dynamic, 1)
    for (long r = 0; r < count; ++r) {
        try {
            runs[r] = Replicate(ds, config, prepared.work)
                          .run(prepared.distinct, config.seed + static_cast<std::uint64_t>(r));
        } catch (...) {
            errors[r] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return pick_best(std::move(runs));
}

KMeansResult kmeans_serial(const Dataset& ds, const KMeansConfig& config) {
    const auto prepared = prepare(ds, config);
    std::vector<ReplicateResult> runs;
    runs.reserve(config.replicates);
    for (std::size_t r = 0; r < config.replicates; ++r) {
        runs.push_back(Replicate(ds, config, prepared.work).run(prepared.distinct, config.seed + r));
    }
    return pick_best(std::move(runs));
}

} // namespace okm
