#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "okm/distance.hpp"

using namespace okm;

namespace {

using Vec = std::vector<double>;

double d(const Vec& a, const Vec& b, DistanceMeasure m) { return distance(a, b, m); }

Matrix matrix_of(const std::vector<Vec>& rows) {
    Matrix out(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) out(i, j) = rows[i][j];
    return out;
}

double summed(const Matrix& pts, const Vec& c, DistanceMeasure m) {
    double s = 0;
    for (std::size_t i = 0; i < pts.rows(); ++i) s += distance(pts.row(i), c, m);
    return s;
}

} // namespace

TEST_CASE("distance worked examples") {
    CHECK(d({0, 0}, {3, 4}, DistanceMeasure::squared_euclidean) == 25.0);
    CHECK(d({1, 2}, {4, 6}, DistanceMeasure::city_block) == 7.0);
    CHECK(d({1, 0, 1, 0}, {1, 1, 1, 1}, DistanceMeasure::hamming) == 0.5);
    CHECK(d({1, 0}, {0, 1}, DistanceMeasure::cosine) == doctest::Approx(1.0));
    CHECK(d({1, 2, 3}, {2, 4, 6}, DistanceMeasure::cosine) == doctest::Approx(0.0));
    CHECK(d({1, 2, 3}, {3, 2, 1}, DistanceMeasure::correlation) == doctest::Approx(2.0));
    CHECK(d({1, 2, 3}, {10, 20, 30}, DistanceMeasure::correlation) == doctest::Approx(0.0));
}

TEST_CASE("distance preconditions") {
    CHECK_THROWS_AS(d({1, 2}, {1, 2, 3}, DistanceMeasure::squared_euclidean), Error);
    CHECK_THROWS_AS(d({0, 0}, {1, 2}, DistanceMeasure::cosine), Error);
    CHECK_THROWS_AS(d({2, 2}, {1, 2}, DistanceMeasure::correlation), Error);
    CHECK_THROWS_AS(d({0, 0.5}, {1, 0}, DistanceMeasure::hamming), Error);
    CHECK_THROWS_AS(d({}, {}, DistanceMeasure::city_block), Error);
}

TEST_CASE("measure names round trip") {
    for (auto m : kAllMeasures) CHECK(parse_measure(to_string(m)) == m);
    CHECK(parse_measure("squared_euclidean") == DistanceMeasure::squared_euclidean);
    CHECK(parse_measure("city_block") == DistanceMeasure::city_block);
    CHECK_THROWS_AS(parse_measure("euclid"), Error);
}

TEST_CASE("distance is non-negative and zero on identical points") {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(-3, 3);
    for (auto m : kAllMeasures) {
        for (int t = 0; t < 200; ++t) {
            Vec a(4), b(4);
            for (std::size_t j = 0; j < 4; ++j) {
                a[j] = m == DistanceMeasure::hamming ? double(gen() % 2) : u(gen);
                b[j] = m == DistanceMeasure::hamming ? double(gen() % 2) : u(gen);
            }
            CHECK(d(a, b, m) >= 0.0);
            CHECK(d(a, a, m) == 0.0);
            CHECK(d(a, b, m) == doctest::Approx(d(b, a, m)));
        }
    }
}

TEST_CASE("centroid worked examples") {
    CHECK(centroid(matrix_of({{0, 0}, {2, 2}}), DistanceMeasure::squared_euclidean) == Vec{1, 1});
    CHECK(centroid(matrix_of({{0, 0}, {0, 2}, {0, 10}}), DistanceMeasure::city_block) == Vec{0, 2});
    CHECK(centroid(matrix_of({{1}, {2}, {7}, {9}}), DistanceMeasure::city_block) == Vec{4.5});
    CHECK(centroid(matrix_of({{1, 0, 1}, {1, 1, 0}, {0, 0, 1}, {0, 1, 0}}), DistanceMeasure::hamming) ==
          Vec{1, 1, 1});
    const auto c = centroid(matrix_of({{2, 0}, {0, 5}}), DistanceMeasure::cosine);
    CHECK(c[0] == doctest::Approx(std::sqrt(0.5)));
    CHECK(c[1] == doctest::Approx(std::sqrt(0.5)));
    const auto r = centroid(matrix_of({{1, 2, 3}, {2, 4, 7}}), DistanceMeasure::correlation);
    CHECK(r[0] + r[1] + r[2] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r[0] * r[0] + r[1] * r[1] + r[2] * r[2] == doctest::Approx(1.0));
    CHECK_THROWS_AS(centroid(Matrix(0, 2), DistanceMeasure::squared_euclidean), Error);
    CHECK_THROWS_AS(centroid(matrix_of({{0, 0}}), DistanceMeasure::cosine), Error);
}

TEST_CASE("city-block centroid beats every grid candidate") {
    const auto pts = matrix_of({{0, 0}, {0, 2}, {0, 10}});
    const auto c = centroid(pts, DistanceMeasure::city_block);
    double best = 1e300;
    double best_y = -1;
    for (int y = 0; y <= 10; ++y) {
        const double s = summed(pts, {0, double(y)}, DistanceMeasure::city_block);
        if (s < best) {
            best = s;
            best_y = y;
        }
    }
    CHECK(best_y == 2.0);
    CHECK(summed(pts, c, DistanceMeasure::city_block) == best);
}

TEST_CASE("centroid rule is optimal against random perturbations") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> u(-4, 4);
    std::normal_distribution<double> step(0.0, 0.3);
    for (auto m : kAllMeasures) {
        CAPTURE(to_string(m));
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t rows = 1 + gen() % 6;
            const std::size_t dims = 2 + gen() % 3;
            Matrix pts(rows, dims);
            for (std::size_t i = 0; i < rows; ++i) {
                for (std::size_t j = 0; j < dims; ++j) {
                    pts(i, j) = m == DistanceMeasure::hamming ? double(gen() % 2) : u(gen);
                }
            }
            const auto c = centroid(pts, m);
            const double at_c = summed(pts, c, m);
            for (int p = 0; p < 1000; ++p) {
                Vec q = c;
                if (m == DistanceMeasure::hamming) {
                    const auto flip = gen() % dims;
                    q[flip] = 1.0 - q[flip];
                    if (p % 2) q[gen() % dims] = double(gen() % 2);
                } else {
                    for (auto& v : q) v += step(gen) * (p % 10 == 0 ? 10.0 : 1.0);
                    if (m == DistanceMeasure::correlation &&
                        std::all_of(q.begin(), q.end(), [&](double v) { return v == q[0]; })) continue;
                }
                CHECK(at_c <= summed(pts, q, m) + 1e-9 * (1.0 + at_c));
            }
        }
    }
}
