#include "halftest/core/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace halftest {

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error("dot: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()) + ")");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

Vector normalized(std::span<const double> a) {
  const double n = norm2(a);
  if (!(n >= 1e-12)) throw Error("normalize: vector norm below 1e-12");
  Vector out(a.begin(), a.end());
  for (double& v : out) v /= n;
  return out;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw Error("axpy: dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vector basis_vector(std::size_t dim, std::size_t axis) {
  if (axis >= dim) throw Error("basis_vector: axis out of range");
  Vector e(dim, 0.0);
  e[axis] = 1.0;
  return e;
}

SymmetricMatrix::SymmetricMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {
  if (dim == 0) throw Error("SymmetricMatrix: zero dimension");
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t dim) {
  SymmetricMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.data_[i * dim + i] = 1.0;
  return m;
}

SymmetricMatrix SymmetricMatrix::diagonal(std::span<const double> diag) {
  SymmetricMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m.data_[i * diag.size() + i] = diag[i];
  return m;
}

void SymmetricMatrix::add_outer(std::span<const double> x, double weight) {
  if (x.size() != dim_) throw Error("SymmetricMatrix::add_outer: dimension mismatch");
  for (std::size_t i = 0; i < dim_; ++i) {
    const double wi = weight * x[i];
    for (std::size_t j = i; j < dim_; ++j) {
      const double v = wi * x[j];
      data_[i * dim_ + j] += v;
      if (j != i) data_[j * dim_ + i] += v;
    }
  }
}

void SymmetricMatrix::set(std::size_t i, std::size_t j, double value) {
  if (i >= dim_ || j >= dim_) throw Error("SymmetricMatrix::set: index out of range");
  data_[i * dim_ + j] = value;
  data_[j * dim_ + i] = value;
}

void SymmetricMatrix::scale(double factor) {
  for (double& v : data_) v *= factor;
}

Vector SymmetricMatrix::multiply(std::span<const double> x) const {
  if (x.size() != dim_) throw Error("SymmetricMatrix::multiply: dimension mismatch");
  Vector y(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) s += data_[i * dim_ + j] * x[j];
    y[i] = s;
  }
  return y;
}

SymmetricMatrix SymmetricMatrix::squared() const {
  SymmetricMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i; j < dim_; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim_; ++k) s += data_[i * dim_ + k] * data_[k * dim_ + j];
      out.data_[i * dim_ + j] = s;
      out.data_[j * dim_ + i] = s;
    }
  }
  return out;
}

double SymmetricMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

double rayleigh(const SymmetricMatrix& m, std::span<const double> unit) {
  const Vector mx = m.multiply(unit);
  return dot(unit, mx);
}

}  // namespace

double spectral_upper(const SymmetricMatrix& m, double tol, int max_steps) {
  const std::size_t d = m.dim();
  const double scale = m.max_abs();
  if (scale == 0.0) return 0.0;

  const Vector start(d, 1.0 / std::sqrt(static_cast<double>(d)));
  double estimate = rayleigh(m, start);

  SymmetricMatrix power = m;
  power.scale(1.0 / scale);
  for (int step = 1; step <= max_steps; ++step) {
    const Vector y = power.multiply(start);
    const double ny = norm2(y);
    if (!(ny > 0.0)) {
      throw Error("spectral_upper: start vector annihilated at step " + std::to_string(step));
    }
    Vector x = y;
    for (double& v : x) v /= ny;
    const double next = rayleigh(m, x);
    if (std::abs(next - estimate) <= tol * std::max(std::abs(next), 1e-300)) return next;
    estimate = next;

    power = power.squared();
    const double s = power.max_abs();
    if (!(s > 0.0)) {
      throw Error("spectral_upper: operator underflow at step " + std::to_string(step));
    }
    power.scale(1.0 / s);
  }
  throw Error("spectral_upper: no convergence after " + std::to_string(max_steps) + " steps");
}

}  // namespace halftest
