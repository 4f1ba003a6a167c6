#include "gei/panel.hpp"

#include <cmath>

#include "gei/errors.hpp"

namespace gei {

Matrix Matrix::from_columns(const std::vector<std::vector<double>>& columns) {
    if (columns.empty()) return {};
    Matrix m(columns.front().size(), columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != m.rows()) throw InvalidArgument("columns have different lengths");
        for (std::size_t t = 0; t < m.rows(); ++t) m(t, j) = columns[j][t];
    }
    return m;
}

SeriesPanel::SeriesPanel(Matrix values, std::vector<std::string> labels)
    : values_(std::move(values)), labels_(std::move(labels)) {
    if (values_.rows() < 2) throw InvalidArgument("a series panel needs n >= 2 observations");
    if (values_.cols() < 2) throw InvalidArgument("a series panel needs d >= 2 series");
    if (labels_.empty()) {
        for (std::size_t j = 0; j < values_.cols(); ++j) labels_.push_back("X" + std::to_string(j + 1));
    }
    if (labels_.size() != values_.cols()) throw InvalidArgument("one label per series is required");
    for (std::size_t j = 0; j < values_.cols(); ++j) {
        for (std::size_t t = 0; t < values_.rows(); ++t) {
            if (!std::isfinite(values_(t, j))) {
                throw InvalidArgument("non-finite value in series '" + labels_[j] + "' at row " +
                                      std::to_string(t + 1));
            }
        }
    }
}

void SeriesPanel::require_counts(std::size_t j) const {
    for (std::size_t t = 0; t < n(); ++t) {
        const double x = values_(t, j);
        if (x < 0.0 || x != std::floor(x)) {
            throw DataError("series '" + labels_[j] + "' must hold non-negative integers; row " +
                            std::to_string(t + 1) + " is " + std::to_string(x));
        }
    }
}

}  // namespace gei
