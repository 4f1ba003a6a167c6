#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gei {

/// Dense column-major n x d matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t t, std::size_t j) noexcept { return data_[j * rows_ + t]; }
    double operator()(std::size_t t, std::size_t j) const noexcept { return data_[j * rows_ + t]; }

    std::span<double> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }
    std::span<const double> col(std::size_t j) const noexcept { return {data_.data() + j * rows_, rows_}; }

    static Matrix from_columns(const std::vector<std::vector<double>>& columns);

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Observed series, one column per series. Counts are stored as reals.
class SeriesPanel {
public:
    /// Throws InvalidArgument unless n >= 2, d >= 2 and every value is finite.
    SeriesPanel(Matrix values, std::vector<std::string> labels = {});

    std::size_t n() const noexcept { return values_.rows(); }
    std::size_t d() const noexcept { return values_.cols(); }
    const Matrix& values() const noexcept { return values_; }
    std::span<const double> series(std::size_t j) const noexcept { return values_.col(j); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// Throws DataError naming the first non-integer or negative entry of series j.
    void require_counts(std::size_t j) const;

private:
    Matrix values_;
    std::vector<std::string> labels_;
};

}  // namespace gei
