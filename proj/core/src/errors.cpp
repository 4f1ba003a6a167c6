#include "gei/errors.hpp"

namespace gei {

ModelEvaluationError::ModelEvaluationError(const std::string& what, std::size_t t, std::size_t series)
    : Error(what + " (t=" + std::to_string(t + 1) + ", series=" + std::to_string(series + 1) + ")"),
      t_(t),
      series_(series) {}

}  // namespace gei
