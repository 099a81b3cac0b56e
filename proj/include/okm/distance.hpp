#ifndef OKM_DISTANCE_HPP
#define OKM_DISTANCE_HPP

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "okm/dataset.hpp"

namespace okm {

enum class DistanceMeasure {
    squared_euclidean,
    city_block,
    cosine,
    correlation,
    hamming,
};

inline constexpr std::array<DistanceMeasure, 5> kAllMeasures = {
    DistanceMeasure::squared_euclidean, DistanceMeasure::city_block, DistanceMeasure::cosine,
    DistanceMeasure::correlation, DistanceMeasure::hamming,
};

/// Short token used on the command line and in JSON: sqeuclidean, cityblock, cosine, correlation, hamming.
std::string_view to_string(DistanceMeasure m);
/// Accepts the short tokens and the long snake_case names.
DistanceMeasure parse_measure(std::string_view name);

/**
 * @brief Point-to-point dissimilarity.
 *
 * - squared_euclidean: sum of squared differences
 * - city_block: sum of absolute differences
 * - cosine: 1 - cos(angle); both vectors must be nonzero
 * - correlation: 1 - Pearson r; both vectors must be non-constant
 * - hamming: fraction of differing coordinates; values must be 0 or 1
 */
double distance(std::span<const double> a, std::span<const double> b, DistanceMeasure m);

/// Throws if `point` violates the measure's domain (zero, constant, or non-binary).
void check_point(std::span<const double> point, DistanceMeasure m);

/**
 * @brief Center of a point set that minimizes the summed distance under `m`.
 *
 * squared_euclidean uses the mean, city_block the component-wise median,
 * hamming a component-wise majority vote with ties going to 1. For cosine the
 * points are scaled to unit length, averaged, and the average rescaled to unit
 * length. Correlation does the same after centering each point; the result
 * is centered with unit norm.
 */
std::vector<double> centroid(const Matrix& points, DistanceMeasure m);

} // namespace okm

#endif
