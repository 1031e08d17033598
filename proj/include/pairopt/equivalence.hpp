#ifndef PAIROPT_EQUIVALENCE_HPP
#define PAIROPT_EQUIVALENCE_HPP

// Equivalence classes of compatibility matrices.
//
// Two matrices are equivalent when every pairing has the same total under
// both. Each class is characterised by the per-pair quantity
//
//   K(i,j) = C(i,j) - (r_i + r_j) / (n - 2),   r_k = row sum of element k,
//
// which is identical for all members. The member with the smallest element
// variance has all row sums equal to (n-1) * mean_element(C).

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "pairopt/pairmat.hpp"

namespace pairopt {

/// The conserved per-pair quantity of one matrix, same shape as the matrix.
class ClassInvariant {
 public:
  explicit ClassInvariant(CompatibilityMatrix values) : values_(std::move(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_(i, j); }
  const CompatibilityMatrix& values() const& noexcept { return values_; }
  CompatibilityMatrix values() && { return std::move(values_); }

  friend bool operator==(const ClassInvariant&, const ClassInvariant&) = default;

 private:
  CompatibilityMatrix values_;
};

inline ClassInvariant invariant(const CompatibilityMatrix& matrix) {
  validate(matrix);
  const std::size_t n = matrix.size();
  const double inv = 1.0 / static_cast<double>(n - 2);
  const std::vector<double> rows = adjacent_sums(matrix);
  return ClassInvariant(CompatibilityMatrix::from_fn(
      n, [&](std::size_t i, std::size_t j) { return matrix(i, j) - (rows[i] + rows[j]) * inv; }));
}

namespace detail {

// Dense row-major n x n product.
inline std::vector<double> matmul(const std::vector<double>& a, const std::vector<double>& b,
                                  std::size_t n) {
  std::vector<double> out(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a[i * n + k];
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] += aik * b[k * n + j];
    }
  }
  return out;
}

}  // namespace detail

/// Same quantity as invariant(), evaluated as the dense matrix expression
/// C - (J - I) o (J C + C J) / (n - 2), with o the Hadamard product.
inline ClassInvariant invariant_matrix_form(const CompatibilityMatrix& matrix) {
  validate(matrix);
  const std::size_t n = matrix.size();
  const std::vector<double> c = matrix.dense();
  const std::vector<double> ones(n * n, 1.0);
  const std::vector<double> jc = detail::matmul(ones, c, n);
  const std::vector<double> cj = detail::matmul(c, ones, n);

  std::vector<double> k(n * n);
  const double inv = 1.0 / static_cast<double>(n - 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double mask = (i == j) ? 0.0 : 1.0;
      k[i * n + j] = c[i * n + j] - inv * mask * (jc[i * n + j] + cj[i * n + j]);
    }
  }
  return ClassInvariant(CompatibilityMatrix::from_dense(n, k));
}

/// Absolute tolerance on invariant entries, scaled by max(1, largest |entry|).
inline bool equivalent(const CompatibilityMatrix& a, const CompatibilityMatrix& b,
                       double tol = kRelTol) {
  CompatibilityMatrix::require_same_size(a, b);
  const ClassInvariant ka = invariant(a);
  const ClassInvariant kb = invariant(b);
  const double scale = std::max({1.0, ka.values().max_abs(), kb.values().max_abs()});
  return max_abs_diff(ka.values(), kb.values()) <= tol * scale;
}

/// The unique minimum-element-variance member of the class of `matrix`.
inline CompatibilityMatrix variance_optimize(const CompatibilityMatrix& matrix) {
  validate(matrix);
  const std::size_t n = matrix.size();
  const double nd = static_cast<double>(n);
  const double offset = 2.0 * (nd - 1.0) / (nd - 2.0) * mean_element(matrix);
  const std::vector<double> rows = adjacent_sums(matrix);
  return CompatibilityMatrix::from_fn(n, [&](std::size_t i, std::size_t j) {
    return offset + matrix(i, j) - (rows[i] + rows[j]) / (nd - 2.0);
  });
}

}  // namespace pairopt

#endif  // PAIROPT_EQUIVALENCE_HPP
