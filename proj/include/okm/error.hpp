#ifndef OKM_ERROR_HPP
#define OKM_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace okm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed CSV input. `row` is the 1-based data record (0 for the header).
class ParseError : public Error {
public:
    ParseError(std::size_t row, std::string column, const std::string& what)
        : Error(what), row_(row), column_(std::move(column)) {}

    std::size_t row() const noexcept { return row_; }
    const std::string& column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::string column_;
};

} // namespace okm

#endif
