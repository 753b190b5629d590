#pragma once

// Data-parallel inner loops. Every routine here has a serial twin in
// ebus::kernels::reference with identical semantics; tests pin the two
// together and bench/ compares their speed.
//
// Reductions are summed over a fixed block decomposition, so results are
// bit-identical for any OpenMP thread count.

#include <cstdint>
#include <span>

#include "ebus/sparse.hpp"
#include "ebus/types.hpp"

namespace ebus::kernels {

inline constexpr std::size_t kReductionBlock = 4096;

/// y = A x
void csr_matvec(const CsrMatrix& a, std::span<const cplx> x, std::span<cplx> y);

/// y = diag .* x + sum_k weights[term[k]] * A.val[k] * x[A.col[k]]
/// A holds unit-coupling entries tagged by `term`.
void weighted_matvec(const CsrMatrix& a, std::span<const std::uint16_t> term,
                     std::span<const double> weights, std::span<const double> diag,
                     std::span<const cplx> x, std::span<cplx> y);

/// <a|b> = sum conj(a_i) b_i
cplx dot(std::span<const cplx> a, std::span<const cplx> b);
double norm(std::span<const cplx> x);
/// y += alpha x
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
void scale(cplx alpha, std::span<cplx> x);

/// Multiplies amplitude i by -1 whenever bits `mask_a` and `mask_b` are both set.
void apply_cz_mask(std::span<cplx> amp, std::uint64_t mask_a, std::uint64_t mask_b);

/// Rewrites rows of a (rows x cols) row-major block as out_row = U * in_row,
/// where U is cols x cols column-major. Used to act on the trailing qubits.
void apply_trailing_unitary(std::span<const cplx> unitary, std::size_t cols,
                            std::span<cplx> amp);

namespace reference {

void csr_matvec(const CsrMatrix& a, std::span<const cplx> x, std::span<cplx> y);
void weighted_matvec(const CsrMatrix& a, std::span<const std::uint16_t> term,
                     std::span<const double> weights, std::span<const double> diag,
                     std::span<const cplx> x, std::span<cplx> y);
cplx dot(std::span<const cplx> a, std::span<const cplx> b);
double norm(std::span<const cplx> x);
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
void scale(cplx alpha, std::span<cplx> x);
void apply_cz_mask(std::span<cplx> amp, std::uint64_t mask_a, std::uint64_t mask_b);
void apply_trailing_unitary(std::span<const cplx> unitary, std::size_t cols,
                            std::span<cplx> amp);

}  // namespace reference

}  // namespace ebus::kernels
