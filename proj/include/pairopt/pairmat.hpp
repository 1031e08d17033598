#ifndef PAIROPT_PAIRMAT_HPP
#define PAIROPT_PAIRMAT_HPP

// Compatibility matrices, pairings and the scalar statistics defined on them.
//
// Indices in the C++ API are 0-based. Text formats and the CLI use 1-based
// element numbers (see io.hpp).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pairopt/error.hpp"

namespace pairopt {

/// Relative tolerance used for derived identities.
inline constexpr double kRelTol = 1e-9;
/// Absolute tolerance used for construction-level invariants.
inline constexpr double kAbsTol = 1e-12;

/// Throws unless `n` is an admissible element count (even, at least 4).
inline void check_element_count(std::size_t n) {
  if (n % 2 != 0) {
    throw Error(Errc::OddN, "element count must be even, got " + std::to_string(n));
  }
  if (n < 4) {
    throw Error(Errc::TooSmall, "element count must be at least 4, got " + std::to_string(n));
  }
}

/// Symmetric hollow n x n real matrix stored as its packed strict upper
/// triangle. Symmetry and the zero diagonal hold by construction.
class CompatibilityMatrix {
 public:
  explicit CompatibilityMatrix(std::size_t n) : n_(n), upper_(n * (n - 1) / 2, 0.0) {
    check_element_count(n);
  }

  /// `upper` holds entries (i,j), i<j, in row-major order of the upper triangle.
  CompatibilityMatrix(std::size_t n, std::vector<double> upper) : n_(n), upper_(std::move(upper)) {
    check_element_count(n);
    if (upper_.size() != n * (n - 1) / 2) {
      throw Error(Errc::DimensionMismatch,
                  "packed storage for n=" + std::to_string(n) + " needs " +
                      std::to_string(n * (n - 1) / 2) + " values, got " +
                      std::to_string(upper_.size()));
    }
  }

  /// Builds a matrix from `f(i, j)` evaluated for every i<j.
  template <class F>
  static CompatibilityMatrix from_fn(std::size_t n, F&& f) {
    check_element_count(n);
    std::vector<double> upper;
    upper.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) upper.push_back(static_cast<double>(f(i, j)));
    }
    return CompatibilityMatrix(n, std::move(upper));
  }

  static CompatibilityMatrix constant(std::size_t n, double c) {
    check_element_count(n);
    return CompatibilityMatrix(n, std::vector<double>(n * (n - 1) / 2, c));
  }

  /// Builds from a full row-major n x n array after checking the invariants.
  static CompatibilityMatrix from_dense(std::size_t n, std::span<const double> dense,
                                        double tol = kAbsTol);

  std::size_t size() const noexcept { return n_; }
  std::size_t pair_count() const noexcept { return upper_.size(); }

  /// Unchecked access; returns 0 on the diagonal.
  double operator()(std::size_t i, std::size_t j) const noexcept {
    if (i == j) return 0.0;
    if (i > j) std::swap(i, j);
    return upper_[packed_index(i, j)];
  }

  double at(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) {
      throw Error(Errc::IndexOutOfRange, "index (" + std::to_string(i) + "," + std::to_string(j) +
                                             ") outside n=" + std::to_string(n_));
    }
    return (*this)(i, j);
  }

  std::span<const double> packed() const& noexcept { return upper_; }
  std::vector<double> packed() && { return std::move(upper_); }

  /// Full row-major n x n copy.
  std::vector<double> dense() const {
    std::vector<double> out(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double v = upper_[packed_index(i, j)];
        out[i * n_ + j] = v;
        out[j * n_ + i] = v;
      }
    }
    return out;
  }

  double max_abs() const noexcept {
    double m = 0.0;
    for (double v : upper_) m = std::max(m, std::abs(v));
    return m;
  }

  std::size_t packed_index(std::size_t i, std::size_t j) const noexcept {
    return i * (2 * n_ - i - 1) / 2 + (j - i - 1);
  }

  friend bool operator==(const CompatibilityMatrix&, const CompatibilityMatrix&) = default;

  friend CompatibilityMatrix operator+(const CompatibilityMatrix& a, const CompatibilityMatrix& b) {
    require_same_size(a, b);
    std::vector<double> out(a.upper_);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += b.upper_[k];
    return CompatibilityMatrix(a.n_, std::move(out));
  }

  friend CompatibilityMatrix operator-(const CompatibilityMatrix& a, const CompatibilityMatrix& b) {
    require_same_size(a, b);
    std::vector<double> out(a.upper_);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] -= b.upper_[k];
    return CompatibilityMatrix(a.n_, std::move(out));
  }

  friend CompatibilityMatrix operator*(double s, const CompatibilityMatrix& a) {
    std::vector<double> out(a.upper_);
    for (double& v : out) v *= s;
    return CompatibilityMatrix(a.n_, std::move(out));
  }

  static void require_same_size(const CompatibilityMatrix& a, const CompatibilityMatrix& b) {
    if (a.n_ != b.n_) {
      throw Error(Errc::DimensionMismatch,
                  "n=" + std::to_string(a.n_) + " vs n=" + std::to_string(b.n_));
    }
  }

 private:
  std::size_t n_;
  std::vector<double> upper_;
};

/// Checks a full row-major n x n array against the compatibility-matrix
/// invariants (even n >= 4, symmetric, hollow) within absolute `tol`.
inline void validate_dense(std::size_t n, std::span<const double> dense, double tol = kAbsTol) {
  check_element_count(n);
  if (dense.size() != n * n) {
    throw Error(Errc::DimensionMismatch, "expected " + std::to_string(n * n) + " values, got " +
                                             std::to_string(dense.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(dense[i * n + i]) > tol) {
      throw Error(Errc::NonZeroDiagonal, "entry (" + std::to_string(i + 1) + "," +
                                             std::to_string(i + 1) + ") is nonzero");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(dense[i * n + j] - dense[j * n + i]) > tol) {
        throw Error(Errc::NotSymmetric, "entries (" + std::to_string(i + 1) + "," +
                                            std::to_string(j + 1) + ") and transpose differ");
      }
    }
  }
}

/// The packed representation makes every constructed matrix symmetric and
/// hollow; only the element count remains to be checked.
inline void validate(const CompatibilityMatrix& matrix) { check_element_count(matrix.size()); }

inline CompatibilityMatrix CompatibilityMatrix::from_dense(std::size_t n,
                                                           std::span<const double> dense,
                                                           double tol) {
  validate_dense(n, dense, tol);
  return from_fn(n, [&](std::size_t i, std::size_t j) { return dense[i * n + j]; });
}

/// A perfect matching on n elements, stored as a fixed-point-free involution.
class Pairing {
 public:
  explicit Pairing(std::vector<std::size_t> partner) : partner_(std::move(partner)) {
    const std::size_t n = partner_.size();
    if (n == 0 || n % 2 != 0) {
      throw Error(Errc::InvalidPairing, "pairing needs an even positive element count, got " +
                                            std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t p = partner_[i];
      if (p >= n || p == i || partner_[p] != i) {
        throw Error(Errc::InvalidPairing,
                    "partner array is not a fixed-point-free involution at element " +
                        std::to_string(i + 1));
      }
    }
  }

  static Pairing from_pairs(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> pairs) {
    constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> partner(n, kUnset);
    if (pairs.size() * 2 != n) {
      throw Error(Errc::InvalidPairing, "expected " + std::to_string(n / 2) + " pairs, got " +
                                            std::to_string(pairs.size()));
    }
    for (auto [a, b] : pairs) {
      if (a >= n || b >= n || a == b || partner[a] != kUnset || partner[b] != kUnset) {
        throw Error(Errc::InvalidPairing, "pair (" + std::to_string(a + 1) + "," +
                                              std::to_string(b + 1) + ") is invalid or repeats an element");
      }
      partner[a] = b;
      partner[b] = a;
    }
    return Pairing(std::move(partner));
  }

  static Pairing from_pairs(std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> pairs) {
    return from_pairs(n, std::span<const std::pair<std::size_t, std::size_t>>(pairs.begin(), pairs.size()));
  }

  /// The reference pairing {0,1},{2,3},...
  static Pairing sequential(std::size_t n) {
    std::vector<std::size_t> partner(n);
    for (std::size_t i = 0; i < n; ++i) partner[i] = i ^ 1u;
    return Pairing(std::move(partner));
  }

  std::size_t size() const noexcept { return partner_.size(); }
  std::size_t partner(std::size_t i) const { return partner_.at(i); }
  std::span<const std::size_t> partners() const& noexcept { return partner_; }
  std::vector<std::size_t> partners() && { return std::move(partner_); }

  /// The n/2 unordered pairs as (smaller, larger), ascending by smaller element.
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(partner_.size() / 2);
    for (std::size_t i = 0; i < partner_.size(); ++i) {
      if (i < partner_[i]) out.emplace_back(i, partner_[i]);
    }
    return out;
  }

  friend bool operator==(const Pairing&, const Pairing&) = default;

 private:
  std::vector<std::size_t> partner_;
};

/// Sum of C over the pairs of the pairing (half the Frobenius product of S and C).
inline double total_compatibility(const Pairing& pairing, const CompatibilityMatrix& matrix) {
  if (pairing.size() != matrix.size()) {
    throw Error(Errc::DimensionMismatch, "pairing n=" + std::to_string(pairing.size()) +
                                             " vs matrix n=" + std::to_string(matrix.size()));
  }
  double total = 0.0;
  const auto partner = pairing.partners();
  for (std::size_t i = 0; i < partner.size(); ++i) {
    if (i < partner[i]) total += matrix(i, partner[i]);
  }
  return total;
}

/// Row sum of element i: the total over every pair containing i.
inline double adjacent_sum(std::size_t i, const CompatibilityMatrix& matrix) {
  const std::size_t n = matrix.size();
  if (i >= n) {
    throw Error(Errc::IndexOutOfRange, "element " + std::to_string(i) + " outside n=" + std::to_string(n));
  }
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j != i) s += matrix(i, j);
  }
  return s;
}

/// All n row sums in one pass over the packed triangle.
inline std::vector<double> adjacent_sums(const CompatibilityMatrix& matrix) {
  const std::size_t n = matrix.size();
  std::vector<double> sums(n, 0.0);
  const auto upper = matrix.packed();
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      sums[i] += upper[k];
      sums[j] += upper[k];
    }
  }
  return sums;
}

inline double mean_element(const CompatibilityMatrix& matrix) {
  double s = 0.0;
  for (double v : matrix.packed()) s += v;
  return s / static_cast<double>(matrix.pair_count());
}

/// Covariance of the off-diagonal elements of two matrices over all pairs.
inline double element_covariance(const CompatibilityMatrix& a, const CompatibilityMatrix& b) {
  CompatibilityMatrix::require_same_size(a, b);
  const double ma = mean_element(a);
  const double mb = mean_element(b);
  const auto pa = a.packed();
  const auto pb = b.packed();
  double s = 0.0;
  for (std::size_t k = 0; k < pa.size(); ++k) s += (pa[k] - ma) * (pb[k] - mb);
  return s / static_cast<double>(pa.size());
}

inline double element_variance(const CompatibilityMatrix& matrix) {
  return element_covariance(matrix, matrix);
}

struct MatrixStats {
  double mu_element = 0.0;
  double mu_sum = 0.0;
  double sigma2_element = 0.0;
  double sigma2_sum = 0.0;
};

/// Element and total-compatibility moments. The total-compatibility moments
/// over all (n-1)!! pairings are evaluated in closed form, O(n^2).
inline MatrixStats stats(const CompatibilityMatrix& matrix) {
  validate(matrix);
  const double n = static_cast<double>(matrix.size());
  MatrixStats out;
  out.mu_element = mean_element(matrix);
  out.mu_sum = (n / 2.0) * out.mu_element;
  out.sigma2_element = element_variance(matrix);

  // Row sums of the centered matrix: r_k - (n-1) mu.
  double row_term = 0.0;
  for (double r : adjacent_sums(matrix)) {
    const double centered_row = r - (n - 1.0) * out.mu_element;
    row_term += centered_row * centered_row;
  }
  const double s2 = n * (n - 2.0) / (2.0 * (n - 3.0)) * out.sigma2_element -
                    row_term / ((n - 1.0) * (n - 3.0));
  out.sigma2_sum = std::max(0.0, s2);
  return out;
}

/// C - mu_element(C) (J - I).
inline CompatibilityMatrix centered(const CompatibilityMatrix& matrix) {
  const double mu = mean_element(matrix);
  std::vector<double> out(matrix.packed().begin(), matrix.packed().end());
  for (double& v : out) v -= mu;
  return CompatibilityMatrix(matrix.size(), std::move(out));
}

/// Largest elementwise absolute difference between two same-sized matrices.
inline double max_abs_diff(const CompatibilityMatrix& a, const CompatibilityMatrix& b) {
  CompatibilityMatrix::require_same_size(a, b);
  const auto pa = a.packed();
  const auto pb = b.packed();
  double m = 0.0;
  for (std::size_t k = 0; k < pa.size(); ++k) m = std::max(m, std::abs(pa[k] - pb[k]));
  return m;
}

}  // namespace pairopt

#endif  // PAIROPT_PAIRMAT_HPP
