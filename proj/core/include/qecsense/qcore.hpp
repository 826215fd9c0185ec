// Copyright 2026 The qec-sense Authors
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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qecsense/tolerances.hpp"

// Dense operator algebra on n qubits.
//
// Ordering: qubit 1 is the leftmost tensor factor, i.e. the most significant
// bit of a basis index, so |100> has index 4 for n = 3.
// Vectorization: column stacking, vec(A X B) = (B^T kron A) vec(X).

namespace qecsense {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

class Operator {
 public:
  explicit Operator(Matrix m);

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  Operator adjoint() const { return Operator(m_.adjoint()); }

  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator*(cplx s, const Operator& a);
  friend Operator operator+(const Operator& a, const Operator& b);

 private:
  Matrix m_;
};

class DensityMatrix {
 public:
  // Throws std::invalid_argument unless Hermitian and unit trace within tol.
  explicit DensityMatrix(Matrix m, double tol = kTol.construction);
  static DensityMatrix pure(const Vector& psi);

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  cplx expectation(const Operator& o) const;
  double min_eigenvalue() const;
  bool is_psd(double tol = kTol.psd) const { return min_eigenvalue() >= -tol; }

 private:
  Matrix m_;
};

class Channel {
 public:
  // Throws std::invalid_argument unless sum K^dag K = I within tol.
  Channel(std::vector<Operator> kraus, std::string label, double tol = kTol.construction);

  const std::vector<Operator>& kraus_ops() const { return kraus_; }
  const std::string& label() const { return label_; }
  Eigen::Index dim() const { return kraus_.front().dim(); }
  Matrix apply(const Matrix& rho) const;
  DensityMatrix apply(const DensityMatrix& rho) const;
  double trace_preservation_error() const;

 private:
  std::vector<Operator> kraus_;
  std::string label_;
};

class Superoperator {
 public:
  // dim is the Hilbert-space dimension; m must be dim^2 x dim^2.
  Superoperator(Matrix m, Eigen::Index dim);

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return dim_; }
  Matrix apply(const Matrix& rho) const;
  Superoperator power(unsigned long long k) const;

  friend Superoperator operator*(const Superoperator& a, const Superoperator& b);

 private:
  Matrix m_;
  Eigen::Index dim_;
};

Matrix kron(const Matrix& a, const Matrix& b);
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, Eigen::Index dim);

Matrix pauli(char label);
Operator pauli_string(int n, std::string_view spec);
// Single-qubit Pauli on qubit j (1-based) of an n-qubit register.
Operator pauli_on(int n, int j, char label);
Operator identity(Eigen::Index dim);

std::pair<Vector, Vector> logical_states(int n);
DensityMatrix ramsey_state(int n);
Operator logical_x(int n);
// Matrix units |i>_L <j|_L for i, j in {0, 1}.
std::vector<Matrix> logical_basis(int n);

Matrix dissipator(const Operator& l, const Matrix& rho);
Superoperator dissipator_superoperator(const Operator& l);
Superoperator commutator_superoperator(const Operator& h);  // -i[h, .]

Channel identity_channel(Eigen::Index dim);
Channel unitary_channel(const Matrix& u, std::string label);
// a after b: rho -> a(b(rho)).
Channel compose(const Channel& a, const Channel& b);
Superoperator channel_to_superoperator(const Channel& ch);

double max_abs(const Matrix& m);

}  // namespace qecsense
