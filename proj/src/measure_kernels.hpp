#ifndef OKM_MEASURE_KERNELS_HPP
#define OKM_MEASURE_KERNELS_HPP

// Kernels on "prepared" coordinates. Cosine points are stored at unit length
// and correlation points centered at unit length, which turns both measures
// into 1 - dot(x, c) and lets their centroids be plain normalized means.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "okm/distance.hpp"

namespace okm::detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline void center(std::span<double> a) {
    double mean = 0.0;
    for (double v : a) mean += v;
    mean /= static_cast<double>(a.size());
    for (double& v : a) v -= mean;
}

/// Scales to unit length; leaves a zero vector untouched.
inline void normalize(std::span<double> a) {
    const double len = norm(a);
    if (len > 0.0) {
        for (double& v : a) v /= len;
    }
}

inline void prepare_point(std::span<const double> in, std::span<double> out, DistanceMeasure m) {
    std::copy(in.begin(), in.end(), out.begin());
    if (m == DistanceMeasure::correlation) {
        center(out);
    }
    if (m == DistanceMeasure::cosine || m == DistanceMeasure::correlation) {
        normalize(out);
    }
}

inline Matrix prepare(const Matrix& raw, DistanceMeasure m) {
    Matrix out(raw.rows(), raw.cols());
    for (std::size_t i = 0; i < raw.rows(); ++i) {
        prepare_point(raw.row(i), out.row(i), m);
    }
    return out;
}

/// Distance between a prepared point and a centroid in prepared space.
/// A zero centroid (cosine/correlation mean that cancelled out) is at distance 1.
inline double prepared_distance(std::span<const double> x, std::span<const double> c, DistanceMeasure m) {
    const std::size_t d = x.size();
    switch (m) {
    case DistanceMeasure::squared_euclidean: {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double t = x[j] - c[j];
            s += t * t;
        }
        return s;
    }
    case DistanceMeasure::city_block: {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += std::abs(x[j] - c[j]);
        return s;
    }
    case DistanceMeasure::cosine:
    case DistanceMeasure::correlation:
        return std::max(0.0, 1.0 - dot(x, c));
    case DistanceMeasure::hamming: {
        std::size_t diff = 0;
        for (std::size_t j = 0; j < d; ++j) diff += x[j] != c[j];
        return static_cast<double>(diff) / static_cast<double>(d);
    }
    }
    return 0.0;
}

inline double median_of(std::vector<double>& v) {
    const std::size_t m = v.size();
    const std::size_t mid = m / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    const double upper = v[mid];
    if (m % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(v.begin(), v.begin() + mid);
    return 0.5 * (lower + upper);
}

/// Centroid of the prepared rows `members` (non-empty) written into `out`.
template <typename Members>
void prepared_centroid(const Matrix& work, const Members& members, DistanceMeasure m, std::span<double> out,
                       std::vector<double>& scratch) {
    const std::size_t d = work.cols();
    const double count = static_cast<double>(members.size());
    switch (m) {
    case DistanceMeasure::squared_euclidean:
    case DistanceMeasure::cosine:
    case DistanceMeasure::correlation: {
        std::fill(out.begin(), out.end(), 0.0);
        for (auto i : members) {
            auto r = work.row(i);
            for (std::size_t j = 0; j < d; ++j) out[j] += r[j];
        }
        for (auto& v : out) v /= count;
        if (m == DistanceMeasure::correlation) {
            center(out);
        }
        if (m != DistanceMeasure::squared_euclidean) {
            normalize(out);
        }
        return;
    }
    case DistanceMeasure::city_block:
        for (std::size_t j = 0; j < d; ++j) {
            scratch.clear();
            for (auto i : members) scratch.push_back(work(i, j));
            out[j] = median_of(scratch);
        }
        return;
    case DistanceMeasure::hamming:
        for (std::size_t j = 0; j < d; ++j) {
            std::size_t ones = 0;
            for (auto i : members) ones += work(i, j) != 0.0;
            out[j] = 2 * ones >= members.size() ? 1.0 : 0.0;
        }
        return;
    }
}

} // namespace okm::detail

#endif
