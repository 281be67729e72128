// Copyright 2026 The dwtk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dw/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dw/error.hpp"

namespace dw {

CMatrix::CMatrix(int rows, int cols, std::initializer_list<cplx> entries)
    : rows_(rows), cols_(cols), a_(entries) {
  if (static_cast<int>(a_.size()) != rows * cols) {
    throw Error(ErrorCode::kDimensionMismatch, "initializer size does not match shape");
  }
}

CMatrix CMatrix::identity(int n) {
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::zero(int rows, int cols) { return CMatrix(rows, cols); }

CMatrix CMatrix::ket(std::initializer_list<cplx> amps) {
  CMatrix v(static_cast<int>(amps.size()), 1);
  int i = 0;
  for (cplx a : amps) v(i++, 0) = a;
  return v;
}

CMatrix CMatrix::projector(const CMatrix& v) {
  CMatrix p(v.rows(), v.rows());
  for (int i = 0; i < v.rows(); ++i)
    for (int j = 0; j < v.rows(); ++j) p(i, j) = v(i, 0) * std::conj(v(j, 0));
  return p;
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw Error(ErrorCode::kDimensionMismatch, "matrix add shape mismatch");
  CMatrix r = *this;
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
  return r;
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw Error(ErrorCode::kDimensionMismatch, "matrix sub shape mismatch");
  CMatrix r = *this;
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
  return r;
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
  if (cols_ != o.rows_)
    throw Error(ErrorCode::kDimensionMismatch, "matrix mul shape mismatch");
  CMatrix r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      cplx aik = (*this)(i, k);
      if (aik == cplx(0.0, 0.0)) continue;
      for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
    }
  }
  return r;
}

CMatrix CMatrix::operator*(cplx s) const {
  CMatrix r = *this;
  for (auto& e : r.a_) e *= s;
  return r;
}

CMatrix CMatrix::adjoint() const {
  CMatrix r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

CMatrix CMatrix::transpose() const {
  CMatrix r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

cplx CMatrix::trace() const {
  cplx t = 0.0;
  for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& e : a_) m = std::max(m, std::abs(e));
  return m;
}

double CMatrix::frobenius() const {
  double s = 0.0;
  for (const auto& e : a_) s += std::norm(e);
  return std::sqrt(s);
}

bool CMatrix::is_hermitian(double tol) const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i; j < cols_; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
  return true;
}

bool CMatrix::is_unitary(double tol) const {
  if (rows_ != cols_) return false;
  CMatrix p = adjoint() * (*this);
  return (p - identity(rows_)).max_abs() <= tol;
}

bool CMatrix::is_psd(double tol) const {
  if (!is_hermitian(std::max(tol, 1e-12))) return false;
  auto ev = hermitian_eigenvalues(*this);
  return ev.empty() || ev.front() >= -tol;
}

bool CMatrix::is_density(double tol) const {
  return is_psd(tol) && std::abs(trace() - cplx(1.0, 0.0)) <= tol;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      cplx aij = a(i, j);
      if (aij == cplx(0.0, 0.0)) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return r;
}

CMatrix partial_trace_second(const CMatrix& m, int d1, int d2) {
  if (m.rows() != d1 * d2 || m.cols() != d1 * d2)
    throw Error(ErrorCode::kDimensionMismatch, "partial trace shape mismatch");
  CMatrix r(d1, d1);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d1; ++j) {
      cplx s = 0.0;
      for (int k = 0; k < d2; ++k) s += m(i * d2 + k, j * d2 + k);
      r(i, j) = s;
    }
  return r;
}

CMatrix partial_trace_first(const CMatrix& m, int d1, int d2) {
  if (m.rows() != d1 * d2 || m.cols() != d1 * d2)
    throw Error(ErrorCode::kDimensionMismatch, "partial trace shape mismatch");
  CMatrix r(d2, d2);
  for (int k = 0; k < d2; ++k)
    for (int l = 0; l < d2; ++l) {
      cplx s = 0.0;
      for (int i = 0; i < d1; ++i) s += m(i * d2 + k, i * d2 + l);
      r(k, l) = s;
    }
  return r;
}

double expectation(const CMatrix& rho, const CMatrix& op) {
  return (rho * op).trace().real();
}

namespace {

// One complex Jacobi rotation zeroing entry (p, q), p < q, applied to A and
// accumulated into V.
void jacobi_rotate(CMatrix& a, CMatrix& v, int p, int q) {
  const cplx apq = a(p, q);
  const double abs_apq = std::abs(apq);
  if (abs_apq == 0.0) return;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const cplx phase = apq / abs_apq;

  const double tau = (aqq - app) / (2.0 * abs_apq);
  double t;
  if (tau >= 0.0) {
    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
  } else {
    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
  }
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = c * t;

  const int n = a.rows();
  // Columns: [p q] <- [p q] * J with J = [[c, s*phase], [-s*conj(phase), c]].
  for (int i = 0; i < n; ++i) {
    const cplx aip = a(i, p);
    const cplx aiq = a(i, q);
    a(i, p) = c * aip - s * std::conj(phase) * aiq;
    a(i, q) = s * phase * aip + c * aiq;
  }
  // Rows: J^dagger applied from the left.
  for (int j = 0; j < n; ++j) {
    const cplx apj = a(p, j);
    const cplx aqj = a(q, j);
    a(p, j) = c * apj - s * phase * aqj;
    a(q, j) = s * std::conj(phase) * apj + c * aqj;
  }
  for (int i = 0; i < n; ++i) {
    const cplx vip = v(i, p);
    const cplx viq = v(i, q);
    v(i, p) = c * vip - s * std::conj(phase) * viq;
    v(i, q) = s * phase * vip + c * viq;
  }
}

double off_diagonal_norm(const CMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

HermitianEigen hermitian_eigen(const CMatrix& m) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::kDimensionMismatch, "eigendecomposition needs a square matrix");
  const int n = m.rows();
  CMatrix a = m;
  CMatrix v = CMatrix::identity(n);
  const double scale = std::max(a.frobenius(), 1e-300);
  for (int sweep = 0; sweep < 80; ++sweep) {
    if (off_diagonal_norm(a) <= 1e-15 * scale) break;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q)
        if (std::abs(a(p, q)) > 1e-18 * scale) jacobi_rotate(a, v, p, q);
  }
  HermitianEigen out;
  out.values.resize(n);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = a(i, i).real();
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return diag[x] < diag[y]; });
  out.vectors = CMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = diag[order[k]];
    for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const CMatrix& m) {
  return hermitian_eigen(m).values;
}

double trace_norm_hermitian(const CMatrix& m) {
  double s = 0.0;
  for (double ev : hermitian_eigenvalues(m)) s += std::fabs(ev);
  return s;
}

CMatrix psd_clamp(const CMatrix& m) {
  HermitianEigen e = hermitian_eigen(m);
  const int n = m.rows();
  CMatrix r(n, n);
  for (int k = 0; k < n; ++k) {
    if (e.values[k] <= 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const cplx vik = e.vectors(i, k);
      if (vik == cplx(0.0, 0.0)) continue;
      for (int j = 0; j < n; ++j)
        r(i, j) += e.values[k] * vik * std::conj(e.vectors(j, k));
    }
  }
  return r;
}

namespace {

void jacobi_rotate_sym(std::vector<double>& a, std::vector<double>& v, int n,
                       int p, int q) {
  const double apq = a[static_cast<size_t>(p) * n + q];
  if (apq == 0.0) return;
  const double app = a[static_cast<size_t>(p) * n + p];
  const double aqq = a[static_cast<size_t>(q) * n + q];
  const double tau = (aqq - app) / (2.0 * apq);
  double t;
  if (tau >= 0.0) {
    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
  } else {
    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
  }
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = c * t;
  for (int i = 0; i < n; ++i) {
    const double aip = a[static_cast<size_t>(i) * n + p];
    const double aiq = a[static_cast<size_t>(i) * n + q];
    a[static_cast<size_t>(i) * n + p] = c * aip - s * aiq;
    a[static_cast<size_t>(i) * n + q] = s * aip + c * aiq;
  }
  for (int j = 0; j < n; ++j) {
    const double apj = a[static_cast<size_t>(p) * n + j];
    const double aqj = a[static_cast<size_t>(q) * n + j];
    a[static_cast<size_t>(p) * n + j] = c * apj - s * aqj;
    a[static_cast<size_t>(q) * n + j] = s * apj + c * aqj;
  }
  for (int i = 0; i < n; ++i) {
    const double vip = v[static_cast<size_t>(i) * n + p];
    const double viq = v[static_cast<size_t>(i) * n + q];
    v[static_cast<size_t>(i) * n + p] = c * vip - s * viq;
    v[static_cast<size_t>(i) * n + q] = s * vip + c * viq;
  }
}

double off_norm_sym(const std::vector<double>& a, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) s += a[static_cast<size_t>(i) * n + j] * a[static_cast<size_t>(i) * n + j];
  return std::sqrt(s);
}

}  // namespace

SymmetricEigen symmetric_eigen(const std::vector<double>& m, int n) {
  std::vector<double> a = m;
  std::vector<double> v(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) v[static_cast<size_t>(i) * n + i] = 1.0;
  double scale = 0.0;
  for (double e : a) scale += e * e;
  scale = std::max(std::sqrt(scale), 1e-300);
  for (int sweep = 0; sweep < 80; ++sweep) {
    if (off_norm_sym(a, n) <= 1e-15 * scale) break;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q)
        if (std::fabs(a[static_cast<size_t>(p) * n + q]) > 1e-18 * scale)
          jacobi_rotate_sym(a, v, n, p, q);
  }
  SymmetricEigen out;
  out.values.resize(n);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = a[static_cast<size_t>(i) * n + i];
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return diag[x] < diag[y]; });
  out.vectors.assign(static_cast<size_t>(n) * n, 0.0);
  for (int k = 0; k < n; ++k) {
    out.values[k] = diag[order[k]];
    for (int i = 0; i < n; ++i)
      out.vectors[static_cast<size_t>(i) * n + k] = v[static_cast<size_t>(i) * n + order[k]];
  }
  return out;
}

void symmetric_psd_clamp(std::vector<double>& m, int n) {
  SymmetricEigen e = symmetric_eigen(m, n);
  std::fill(m.begin(), m.end(), 0.0);
  for (int k = 0; k < n; ++k) {
    if (e.values[k] <= 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const double vik = e.vectors[static_cast<size_t>(i) * n + k];
      if (vik == 0.0) continue;
      const double w = e.values[k] * vik;
      for (int j = 0; j < n; ++j)
        m[static_cast<size_t>(i) * n + j] += w * e.vectors[static_cast<size_t>(j) * n + k];
    }
  }
}

double symmetric_min_eigenvalue(const std::vector<double>& m, int n) {
  return symmetric_eigen(m, n).values.front();
}

CMatrix pauli_x() { return CMatrix(2, 2, {0.0, 1.0, 1.0, 0.0}); }
CMatrix pauli_y() { return CMatrix(2, 2, {0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0}); }
CMatrix pauli_z() { return CMatrix(2, 2, {1.0, 0.0, 0.0, -1.0}); }

CMatrix bell_phi_plus() {
  const double s = 1.0 / std::sqrt(2.0);
  return CMatrix::ket({s, 0.0, 0.0, s});
}

CMatrix bell_psi_minus() {
  const double s = 1.0 / std::sqrt(2.0);
  return CMatrix::ket({0.0, s, -s, 0.0});
}

}  // namespace dw
