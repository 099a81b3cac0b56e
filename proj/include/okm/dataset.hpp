#ifndef OKM_DATASET_HPP
#define OKM_DATASET_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "okm/error.hpp"

namespace okm {

/**
 * @brief Dense row-major matrix of doubles.
 *
 * Used for data tables and for centroid sets. Rows are exposed as spans so
 * kernels can work on them without copying.
 */
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    std::span<const double> row(std::size_t i) const {
        return {values_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) {
        return {values_.data() + i * cols_, cols_};
    }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }

    const std::vector<double>& values() const noexcept { return values_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

/// Sorted, duplicate-free set of 0-based row indices.
class RowSelection {
public:
    RowSelection() = default;
    /// Sorts and removes duplicates.
    explicit RowSelection(std::vector<std::size_t> indices);

    const std::vector<std::size_t>& indices() const noexcept { return indices_; }
    std::size_t size() const noexcept { return indices_.size(); }
    bool empty() const noexcept { return indices_.empty(); }
    bool contains(std::size_t index) const;

    bool operator==(const RowSelection&) const = default;

private:
    std::vector<std::size_t> indices_;
};

/**
 * @brief Immutable numeric table with named columns.
 *
 * Construction validates the invariants: at least one row and one column,
 * unique non-empty column names, and finite values only.
 */
class Dataset {
public:
    Dataset(std::vector<std::string> columns, Matrix values);

    std::size_t n() const noexcept { return values_.rows(); }
    std::size_t d() const noexcept { return values_.cols(); }

    const std::vector<std::string>& columns() const noexcept { return columns_; }
    const Matrix& values() const noexcept { return values_; }
    std::span<const double> row(std::size_t i) const { return values_.row(i); }
    double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }

    /// Index of a named column; throws Error if absent.
    std::size_t column_index(std::string_view name) const;
    bool has_column(std::string_view name) const;
    /// Copy of one column in row order.
    std::vector<double> column(std::size_t j) const;
    std::vector<double> column(std::string_view name) const { return column(column_index(name)); }

    bool operator==(const Dataset&) const = default;

private:
    std::vector<std::string> columns_;
    Matrix values_;
};

struct CsvOptions {
    char separator = ',';
};

/// Parses a header line plus numeric records. Throws ParseError on bad input.
Dataset load_csv(std::istream& in, const CsvOptions& options = {});
Dataset load_csv_string(std::string_view text, const CsvOptions& options = {});
Dataset load_csv_file(const std::string& path, const CsvOptions& options = {});

/// Writes values in shortest round-trip form, so load_csv reproduces them exactly.
void write_csv(std::ostream& out, const Dataset& ds, const CsvOptions& options = {});
std::string to_csv_string(const Dataset& ds, const CsvOptions& options = {});

/// New dataset without the selected rows, original order preserved.
Dataset drop_rows(const Dataset& ds, const RowSelection& sel);

/// Fisher's 150 Iris measurements (SL, SW, PL, PW).
Dataset fisher_iris();

/// Iris plus the injected tuple (10, 7, 8, 5) stored at row 0; 151 rows.
Dataset iris_outlier_fixture();

} // namespace okm

#endif
