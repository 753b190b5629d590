#include "ebus/kernels.hpp"

#include <cmath>
#include <vector>

namespace ebus::kernels {

namespace {

std::ptrdiff_t ssize(std::size_t n) { return static_cast<std::ptrdiff_t>(n); }

std::size_t block_count(std::size_t n) {
  return (n + kReductionBlock - 1) / kReductionBlock;
}

}  // namespace

void csr_matvec(const CsrMatrix& a, std::span<const cplx> x, std::span<cplx> y) {
  const auto* rp = a.row_ptr.data();
  const auto* ci = a.col.data();
  const auto* va = a.val.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < ssize(a.rows); ++i) {
    cplx acc = 0.0;
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) acc += va[k] * x[ci[k]];
    y[static_cast<std::size_t>(i)] = acc;
  }
}

void weighted_matvec(const CsrMatrix& a, std::span<const std::uint16_t> term,
                     std::span<const double> weights, std::span<const double> diag,
                     std::span<const cplx> x, std::span<cplx> y) {
  const auto* rp = a.row_ptr.data();
  const auto* ci = a.col.data();
  const auto* va = a.val.data();
  const auto* tm = term.data();
  const auto* w = weights.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < ssize(a.rows); ++i) {
    const auto r = static_cast<std::size_t>(i);
    cplx acc = diag[r] * x[r];
    for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) acc += (w[tm[k]] * va[k]) * x[ci[k]];
    y[r] = acc;
  }
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  const std::size_t n = a.size();
  const std::size_t nb = block_count(n);
  std::vector<cplx> partial(nb);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t blk = 0; blk < ssize(nb); ++blk) {
    const std::size_t lo = static_cast<std::size_t>(blk) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    cplx acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += std::conj(a[i]) * b[i];
    partial[static_cast<std::size_t>(blk)] = acc;
  }
  cplx total = 0.0;
  for (const auto& p : partial) total += p;
  return total;
}

double norm(std::span<const cplx> x) {
  const std::size_t n = x.size();
  const std::size_t nb = block_count(n);
  std::vector<double> partial(nb);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t blk = 0; blk < ssize(nb); ++blk) {
    const std::size_t lo = static_cast<std::size_t>(blk) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += std::norm(x[i]);
    partial[static_cast<std::size_t>(blk)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return std::sqrt(total);
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < ssize(x.size()); ++i)
    y[static_cast<std::size_t>(i)] += alpha * x[static_cast<std::size_t>(i)];
}

void scale(cplx alpha, std::span<cplx> x) {
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < ssize(x.size()); ++i) x[static_cast<std::size_t>(i)] *= alpha;
}

void apply_cz_mask(std::span<cplx> amp, std::uint64_t mask_a, std::uint64_t mask_b) {
  const std::uint64_t both = mask_a | mask_b;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < ssize(amp.size()); ++i)
    if ((static_cast<std::uint64_t>(i) & both) == both) amp[static_cast<std::size_t>(i)] = -amp[static_cast<std::size_t>(i)];
}

void apply_trailing_unitary(std::span<const cplx> unitary, std::size_t cols,
                            std::span<cplx> amp) {
  const std::size_t rows = amp.size() / cols;
#pragma omp parallel
  {
    std::vector<cplx> in(cols);
#pragma omp for schedule(static)
    for (std::ptrdiff_t r = 0; r < ssize(rows); ++r) {
      cplx* row = amp.data() + static_cast<std::size_t>(r) * cols;
      std::copy(row, row + cols, in.begin());
      for (std::size_t i = 0; i < cols; ++i) row[i] = 0.0;
      for (std::size_t j = 0; j < cols; ++j) {
        const cplx xj = in[j];
        if (xj == cplx{}) continue;
        const cplx* ucol = unitary.data() + j * cols;
        for (std::size_t i = 0; i < cols; ++i) row[i] += ucol[i] * xj;
      }
    }
  }
}

}  // namespace ebus::kernels
