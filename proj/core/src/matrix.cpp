#include "eigensafe/matrix.hpp"

#include "eigensafe/error.hpp"

namespace eigensafe {

void Matrix::matvec(std::span<const double> x, std::span<double> out) const {
  if (x.size() != cols_ || out.size() != rows_)
    throw ContractError("matvec: shape mismatch");
  const double* m = data_.data();
  for (std::size_t r = 0; r < rows_; ++r) {
    double acc = 0.0;
    const double* row = m + r * cols_;
    for (std::size_t c = 0; c < cols_; ++c) acc += row[c] * x[c];
    out[r] = acc;
  }
}

}  // namespace eigensafe
