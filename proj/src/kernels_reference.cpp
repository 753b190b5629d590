// Serial reference kernels. Straight loops, no blocking; kept as the
// correctness baseline for the OpenMP versions in kernels.cpp.

#include <cmath>
#include <vector>

#include "ebus/kernels.hpp"

namespace ebus::kernels::reference {

void csr_matvec(const CsrMatrix& a, std::span<const cplx> x, std::span<cplx> y) {
  for (std::size_t i = 0; i < a.rows; ++i) {
    cplx acc = 0.0;
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) acc += a.val[k] * x[a.col[k]];
    y[i] = acc;
  }
}

void weighted_matvec(const CsrMatrix& a, std::span<const std::uint16_t> term,
                     std::span<const double> weights, std::span<const double> diag,
                     std::span<const cplx> x, std::span<cplx> y) {
  for (std::size_t i = 0; i < a.rows; ++i) {
    cplx acc = diag[i] * x[i];
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      acc += weights[term[k]] * a.val[k] * x[a.col[k]];
    y[i] = acc;
  }
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double norm(std::span<const cplx> x) {
  double acc = 0.0;
  for (const auto& v : x) acc += std::norm(v);
  return std::sqrt(acc);
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(cplx alpha, std::span<cplx> x) {
  for (auto& v : x) v *= alpha;
}

void apply_cz_mask(std::span<cplx> amp, std::uint64_t mask_a, std::uint64_t mask_b) {
  for (std::size_t i = 0; i < amp.size(); ++i)
    if ((i & mask_a) && (i & mask_b)) amp[i] = -amp[i];
}

void apply_trailing_unitary(std::span<const cplx> unitary, std::size_t cols,
                            std::span<cplx> amp) {
  const std::size_t rows = amp.size() / cols;
  std::vector<cplx> out(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < cols; ++i) {
      cplx acc = 0.0;
      for (std::size_t j = 0; j < cols; ++j) acc += unitary[j * cols + i] * amp[r * cols + j];
      out[i] = acc;
    }
    std::copy(out.begin(), out.end(), amp.begin() + static_cast<std::ptrdiff_t>(r * cols));
  }
}

}  // namespace ebus::kernels::reference
