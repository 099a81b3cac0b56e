#include "okm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_set>

namespace okm {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows_ * cols_) {
        throw Error("matrix storage size does not match its shape");
    }
}

RowSelection::RowSelection(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
}

bool RowSelection::contains(std::size_t index) const {
    return std::binary_search(indices_.begin(), indices_.end(), index);
}

Dataset::Dataset(std::vector<std::string> columns, Matrix values)
    : columns_(std::move(columns)), values_(std::move(values)) {
    if (values_.rows() == 0) {
        throw Error("dataset has no rows");
    }
    if (columns_.empty() || values_.cols() == 0) {
        throw Error("dataset has no columns");
    }
    if (columns_.size() != values_.cols()) {
        throw Error("column name count does not match value width");
    }
    std::unordered_set<std::string> seen;
    for (const auto& name : columns_) {
        if (name.empty()) {
            throw Error("empty column name");
        }
        if (!seen.insert(name).second) {
            throw Error("duplicate column name '" + name + "'");
        }
    }
    for (std::size_t i = 0; i < values_.rows(); ++i) {
        for (std::size_t j = 0; j < values_.cols(); ++j) {
            if (!std::isfinite(values_(i, j))) {
                throw Error("non-finite value at row " + std::to_string(i) + ", column '" +
                            columns_[j] + "'");
            }
        }
    }
}

std::size_t Dataset::column_index(std::string_view name) const {
    auto it = std::find(columns_.begin(), columns_.end(), name);
    if (it == columns_.end()) {
        throw Error("unknown column '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - columns_.begin());
}

bool Dataset::has_column(std::string_view name) const {
    return std::find(columns_.begin(), columns_.end(), name) != columns_.end();
}

std::vector<double> Dataset::column(std::size_t j) const {
    if (j >= d()) {
        throw Error("column index out of range");
    }
    std::vector<double> out(n());
    for (std::size_t i = 0; i < n(); ++i) {
        out[i] = values_(i, j);
    }
    return out;
}

namespace {

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n\v\f";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return fields;
}

double parse_field(std::string_view field, std::size_t row, const std::string& column) {
    auto where = [&] {
        return "row " + std::to_string(row) + ", column '" + column + "'";
    };
    if (field.empty()) {
        throw ParseError(row, column, "missing value at " + where());
    }
    std::string_view digits = field;
    if (digits.front() == '+') {
        digits.remove_prefix(1);
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec == std::errc::result_out_of_range) {
        throw ParseError(row, column, "value out of range at " + where() + ": '" + std::string(field) + "'");
    }
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
        throw ParseError(row, column, "non-numeric value at " + where() + ": '" + std::string(field) + "'");
    }
    if (!std::isfinite(value)) {
        throw ParseError(row, column, "non-finite value at " + where() + ": '" + std::string(field) + "'");
    }
    return value;
}

} // namespace

Dataset load_csv_string(std::string_view text, const CsvOptions& options) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto pos = text.find('\n', start);
        auto line = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
        if (!trim(line).empty()) {
            lines.push_back(line);
        }
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    if (lines.empty()) {
        throw ParseError(0, "", "empty input: no header");
    }

    std::vector<std::string> columns;
    std::unordered_set<std::string> seen;
    for (auto name : split(lines.front(), options.separator)) {
        if (name.empty()) {
            throw ParseError(0, "", "empty column name in header");
        }
        std::string owned(name);
        if (!seen.insert(owned).second) {
            throw ParseError(0, owned, "duplicate column name '" + owned + "'");
        }
        columns.push_back(std::move(owned));
    }
    if (lines.size() == 1) {
        throw ParseError(0, "", "empty body: header has no data records");
    }

    const std::size_t d = columns.size();
    const std::size_t n = lines.size() - 1;
    std::vector<double> values;
    values.reserve(n * d);
    for (std::size_t r = 1; r < lines.size(); ++r) {
        auto fields = split(lines[r], options.separator);
        if (fields.size() != d) {
            throw ParseError(r, "", "ragged record at row " + std::to_string(r) + ": expected " +
                                        std::to_string(d) + " fields, found " + std::to_string(fields.size()));
        }
        for (std::size_t j = 0; j < d; ++j) {
            values.push_back(parse_field(fields[j], r, columns[j]));
        }
    }
    return Dataset(std::move(columns), Matrix(n, d, std::move(values)));
}

Dataset load_csv(std::istream& in, const CsvOptions& options) {
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (in.bad()) {
        throw Error("failed reading CSV stream");
    }
    return load_csv_string(text, options);
}

Dataset load_csv_file(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path + "' for reading");
    }
    return load_csv(in, options);
}

void write_csv(std::ostream& out, const Dataset& ds, const CsvOptions& options) {
    for (std::size_t j = 0; j < ds.d(); ++j) {
        if (j) out << options.separator;
        out << ds.columns()[j];
    }
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < ds.n(); ++i) {
        for (std::size_t j = 0; j < ds.d(); ++j) {
            if (j) out << options.separator;
            auto res = std::to_chars(buf, buf + sizeof buf, ds(i, j));
            out.write(buf, res.ptr - buf);
        }
        out << '\n';
    }
}

std::string to_csv_string(const Dataset& ds, const CsvOptions& options) {
    std::ostringstream out;
    write_csv(out, ds, options);
    return out.str();
}

Dataset drop_rows(const Dataset& ds, const RowSelection& sel) {
    if (sel.empty()) {
        return ds;
    }
    if (sel.indices().back() >= ds.n()) {
        throw Error("row index " + std::to_string(sel.indices().back()) + " out of range for " +
                    std::to_string(ds.n()) + " rows");
    }
    if (sel.size() == ds.n()) {
        throw Error("removal would leave zero rows");
    }
    const std::size_t kept = ds.n() - sel.size();
    std::vector<double> values;
    values.reserve(kept * ds.d());
    for (std::size_t i = 0; i < ds.n(); ++i) {
        if (sel.contains(i)) {
            continue;
        }
        auto row = ds.row(i);
        values.insert(values.end(), row.begin(), row.end());
    }
    return Dataset(ds.columns(), Matrix(kept, ds.d(), std::move(values)));
}

} // namespace okm
