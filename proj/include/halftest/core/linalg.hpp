#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "halftest/core/types.hpp"

namespace halftest {

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

/// Unit vector along `a`. Throws when ‖a‖₂ < 1e-12.
Vector normalized(std::span<const double> a);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

Vector basis_vector(std::size_t dim, std::size_t axis);

/// Dense symmetric d×d matrix, row-major. Only ever filled by symmetric
/// updates, so symmetry holds by construction.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(std::size_t dim);

  static SymmetricMatrix identity(std::size_t dim);
  static SymmetricMatrix diagonal(std::span<const double> diag);

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

  /// this += weight * x xᵀ
  void add_outer(std::span<const double> x, double weight = 1.0);
  /// Sets entries (i,j) and (j,i).
  void set(std::size_t i, std::size_t j, double value);
  void scale(double factor);

  Vector multiply(std::span<const double> x) const;
  SymmetricMatrix squared() const;
  double max_abs() const;

 private:
  std::size_t dim_;
  std::vector<double> data_;
};

/// Largest eigenvalue of a symmetric positive semidefinite matrix.
///
/// Power iteration from the all-ones start vector. Each step squares the
/// operator, so step k applies M^(2^k); this converges for near-degenerate
/// spectra (covariances close to identity) well inside the step cap. The
/// estimate is the Rayleigh quotient of M at the current iterate; iteration
/// stops once successive estimates agree to relative tolerance `tol`.
/// Throws Error after `max_steps` steps without convergence.
double spectral_upper(const SymmetricMatrix& m, double tol = 1e-10, int max_steps = 1000);

}  // namespace halftest
