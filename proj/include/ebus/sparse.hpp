#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ebus/types.hpp"

namespace ebus {

/// Real compressed-sparse-row matrix. Every Hamiltonian in this project is
/// real symmetric in its occupation basis, so complex values are never stored.
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> col;
  std::vector<double> val;

  std::size_t nnz() const { return val.size(); }
};

/// Row-wise triplet accumulator; rows must be appended in order.
class CsrBuilder {
 public:
  CsrBuilder(std::size_t rows, std::size_t cols);

  /// Adds `value` at (row, col). Duplicate columns within a row are summed.
  void add(std::size_t row, std::size_t col, double value);
  CsrMatrix finish();

 private:
  void flush_until(std::size_t row);

  CsrMatrix m_;
  std::size_t current_row_ = 0;
  std::vector<std::pair<std::uint32_t, double>> pending_;
};

CsrMatrix csr_from_dense(const std::vector<std::vector<double>>& dense);

/// max |A_ij - A_ji| over stored entries (missing partner counts as 0).
double symmetry_defect(const CsrMatrix& a);

/// Dense column-major copy, for small exact diagonalisation.
std::vector<double> to_dense(const CsrMatrix& a);

}  // namespace ebus
