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

#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace dw {

using cplx = std::complex<double>;

/// Dense row-major complex matrix. Small dimensions only (everything in this
/// toolkit lives on tensor products of a few qubits or on moment matrices of
/// a few dozen rows), so no blocking or external BLAS.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}
  CMatrix(int rows, int cols, std::initializer_list<cplx> entries);

  static CMatrix identity(int n);
  static CMatrix zero(int rows, int cols);
  /// Column vector from amplitudes.
  static CMatrix ket(std::initializer_list<cplx> amps);
  /// Outer product |v><v| for a column vector v.
  static CMatrix projector(const CMatrix& v);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  cplx& operator()(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
  const cplx& operator()(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }
  const std::vector<cplx>& data() const { return a_; }

  CMatrix operator+(const CMatrix& o) const;
  CMatrix operator-(const CMatrix& o) const;
  CMatrix operator*(const CMatrix& o) const;
  CMatrix operator*(cplx s) const;
  friend CMatrix operator*(cplx s, const CMatrix& m) { return m * s; }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  cplx trace() const;

  double max_abs() const;
  double frobenius() const;

  bool is_hermitian(double tol = 1e-12) const;
  bool is_unitary(double tol = 1e-12) const;
  /// Positive semidefinite within tol (requires Hermitian within tol).
  bool is_psd(double tol = 1e-10) const;
  bool is_density(double tol = 1e-10) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> a_;
};

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Partial trace over the second factor of a (d1*d2)x(d1*d2) matrix.
CMatrix partial_trace_second(const CMatrix& m, int d1, int d2);
/// Partial trace over the first factor.
CMatrix partial_trace_first(const CMatrix& m, int d1, int d2);

/// Re Tr(rho * op); the imaginary part is checked to be numerical noise.
double expectation(const CMatrix& rho, const CMatrix& op);

struct HermitianEigen {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // columns are eigenvectors
};

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix. Deterministic
/// sweep order (row-major over the upper triangle) so results are exactly
/// reproducible run to run.
HermitianEigen hermitian_eigen(const CMatrix& m);

/// Eigenvalues of a Hermitian matrix, ascending.
std::vector<double> hermitian_eigenvalues(const CMatrix& m);

/// Sum of |eigenvalues| of a Hermitian matrix.
double trace_norm_hermitian(const CMatrix& m);

/// Nearest PSD matrix in Frobenius norm (eigenvalue clamping).
CMatrix psd_clamp(const CMatrix& m);

// Real symmetric counterparts, used by the moment-matrix solver where
// everything is real. Matrices are flat row-major n*n vectors.
struct SymmetricEigen {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // row-major, columns are eigenvectors
};

SymmetricEigen symmetric_eigen(const std::vector<double>& m, int n);
/// Clamps negative eigenvalues of a real symmetric matrix to zero, in place.
void symmetric_psd_clamp(std::vector<double>& m, int n);
double symmetric_min_eigenvalue(const std::vector<double>& m, int n);

// Pauli matrices and common two-qubit states.
CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();
/// (|00> + |11>)/sqrt(2) as a column vector.
CMatrix bell_phi_plus();
/// (|01> - |10>)/sqrt(2) as a column vector.
CMatrix bell_psi_minus();

}  // namespace dw
