#include "ebus/sparse.hpp"

#include <algorithm>
#include <cmath>

namespace ebus {

CsrBuilder::CsrBuilder(std::size_t rows, std::size_t cols) {
  m_.rows = rows;
  m_.cols = cols;
  m_.row_ptr.assign(1, 0);
  m_.row_ptr.reserve(rows + 1);
}

void CsrBuilder::flush_until(std::size_t row) {
  while (current_row_ < row) {
    std::sort(pending_.begin(), pending_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < pending_.size(); ++k) {
      if (k > 0 && pending_[k].first == pending_[k - 1].first) {
        m_.val.back() += pending_[k].second;
        continue;
      }
      m_.col.push_back(pending_[k].first);
      m_.val.push_back(pending_[k].second);
    }
    pending_.clear();
    m_.row_ptr.push_back(m_.val.size());
    ++current_row_;
  }
}

void CsrBuilder::add(std::size_t row, std::size_t col, double value) {
  if (row < current_row_ || row >= m_.rows || col >= m_.cols)
    throw InvalidArgument("CsrBuilder: entry out of order or out of range");
  flush_until(row);
  pending_.emplace_back(static_cast<std::uint32_t>(col), value);
}

CsrMatrix CsrBuilder::finish() {
  flush_until(m_.rows);
  return std::move(m_);
}

CsrMatrix csr_from_dense(const std::vector<std::vector<double>>& dense) {
  const std::size_t rows = dense.size();
  const std::size_t cols = rows == 0 ? 0 : dense.front().size();
  CsrBuilder b(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (dense[i][j] != 0.0) b.add(i, j, dense[i][j]);
  return b.finish();
}

namespace {

double entry(const CsrMatrix& a, std::size_t i, std::size_t j) {
  const auto first = a.col.begin() + static_cast<std::ptrdiff_t>(a.row_ptr[i]);
  const auto last = a.col.begin() + static_cast<std::ptrdiff_t>(a.row_ptr[i + 1]);
  const auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(j));
  if (it == last || *it != j) return 0.0;
  return a.val[static_cast<std::size_t>(it - a.col.begin())];
}

}  // namespace

double symmetry_defect(const CsrMatrix& a) {
  if (a.rows != a.cols) return INFINITY;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      worst = std::max(worst, std::abs(a.val[k] - entry(a, a.col[k], i)));
  return worst;
}

std::vector<double> to_dense(const CsrMatrix& a) {
  std::vector<double> d(a.rows * a.cols, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      d[a.col[k] * a.rows + i] += a.val[k];
  return d;
}

}  // namespace ebus
