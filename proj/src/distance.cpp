#include "okm/distance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "measure_kernels.hpp"

namespace okm {

std::string_view to_string(DistanceMeasure m) {
    switch (m) {
    case DistanceMeasure::squared_euclidean: return "sqeuclidean";
    case DistanceMeasure::city_block: return "cityblock";
    case DistanceMeasure::cosine: return "cosine";
    case DistanceMeasure::correlation: return "correlation";
    case DistanceMeasure::hamming: return "hamming";
    }
    return "unknown";
}

DistanceMeasure parse_measure(std::string_view name) {
    if (name == "sqeuclidean" || name == "squared_euclidean") return DistanceMeasure::squared_euclidean;
    if (name == "cityblock" || name == "city_block") return DistanceMeasure::city_block;
    if (name == "cosine") return DistanceMeasure::cosine;
    if (name == "correlation") return DistanceMeasure::correlation;
    if (name == "hamming") return DistanceMeasure::hamming;
    throw Error("unknown distance measure '" + std::string(name) + "'");
}

void check_point(std::span<const double> point, DistanceMeasure m) {
    switch (m) {
    case DistanceMeasure::squared_euclidean:
    case DistanceMeasure::city_block:
        return;
    case DistanceMeasure::cosine:
        if (detail::norm(point) == 0.0) {
            throw Error("cosine distance is undefined for a zero vector");
        }
        return;
    case DistanceMeasure::correlation:
        if (std::all_of(point.begin(), point.end(), [&](double v) { return v == point.front(); })) {
            throw Error("correlation distance is undefined for a constant vector");
        }
        return;
    case DistanceMeasure::hamming:
        for (double v : point) {
            if (v != 0.0 && v != 1.0) {
                throw Error("hamming distance requires binary (0/1) values");
            }
        }
        return;
    }
}

double distance(std::span<const double> a, std::span<const double> b, DistanceMeasure m) {
    if (a.size() != b.size()) {
        throw Error("dimension mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
    if (a.empty()) {
        throw Error("distance between empty vectors");
    }
    check_point(a, m);
    check_point(b, m);
    if (std::equal(a.begin(), a.end(), b.begin())) {
        return 0.0;
    }
    if (m == DistanceMeasure::cosine || m == DistanceMeasure::correlation) {
        std::vector<double> pa(a.size()), pb(b.size());
        detail::prepare_point(a, pa, m);
        detail::prepare_point(b, pb, m);
        return detail::prepared_distance(pa, pb, m);
    }
    return detail::prepared_distance(a, b, m);
}

std::vector<double> centroid(const Matrix& points, DistanceMeasure m) {
    if (points.rows() == 0 || points.cols() == 0) {
        throw Error("centroid of an empty point set");
    }
    for (std::size_t i = 0; i < points.rows(); ++i) {
        check_point(points.row(i), m);
    }
    const Matrix work = detail::prepare(points, m);
    std::vector<std::size_t> members(points.rows());
    std::iota(members.begin(), members.end(), std::size_t{0});
    std::vector<double> out(points.cols());
    std::vector<double> scratch;
    detail::prepared_centroid(work, members, m, out, scratch);
    return out;
}

} // namespace okm
