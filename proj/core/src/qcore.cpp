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

#include "qecsense/qcore.hpp"

#include <cmath>
#include <stdexcept>

namespace qecsense {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
  }
}

}  // namespace

Operator::Operator(Matrix m) : m_(std::move(m)) { require_square(m_, "Operator"); }

Operator operator*(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("Operator product: dimension mismatch");
  return Operator(a.m_ * b.m_);
}

Operator operator*(cplx s, const Operator& a) { return Operator(s * a.m_); }

Operator operator+(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("Operator sum: dimension mismatch");
  return Operator(a.m_ + b.m_);
}

DensityMatrix::DensityMatrix(Matrix m, double tol) : m_(std::move(m)) {
  require_square(m_, "DensityMatrix");
  if (max_abs(m_ - m_.adjoint()) >= tol) {
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  }
  if (std::abs(m_.trace() - cplx(1.0)) >= tol) {
    throw std::invalid_argument("DensityMatrix: trace differs from 1");
  }
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw std::invalid_argument("DensityMatrix::pure: zero vector");
  const Vector u = psi / n;
  return DensityMatrix(u * u.adjoint());
}

cplx DensityMatrix::expectation(const Operator& o) const {
  if (o.dim() != dim()) throw std::invalid_argument("expectation: dimension mismatch");
  return (o.matrix() * m_).trace();
}

double DensityMatrix::min_eigenvalue() const {
  const Matrix h = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Channel::Channel(std::vector<Operator> kraus, std::string label, double tol)
    : kraus_(std::move(kraus)), label_(std::move(label)) {
  if (kraus_.empty()) throw std::invalid_argument("Channel: no Kraus operators");
  for (const auto& k : kraus_) {
    if (k.dim() != kraus_.front().dim()) throw std::invalid_argument("Channel: mixed dimensions");
  }
  if (trace_preservation_error() >= tol) {
    throw std::invalid_argument("Channel '" + label_ + "': not trace preserving");
  }
}

double Channel::trace_preservation_error() const {
  Matrix s = Matrix::Zero(dim(), dim());
  for (const auto& k : kraus_) s += k.matrix().adjoint() * k.matrix();
  return max_abs(s - Matrix::Identity(dim(), dim()));
}

Matrix Channel::apply(const Matrix& rho) const {
  if (rho.rows() != dim() || rho.cols() != dim()) {
    throw std::invalid_argument("Channel::apply: dimension mismatch");
  }
  Matrix out = Matrix::Zero(dim(), dim());
  for (const auto& k : kraus_) out += k.matrix() * rho * k.matrix().adjoint();
  return out;
}

DensityMatrix Channel::apply(const DensityMatrix& rho) const {
  return DensityMatrix(apply(rho.matrix()), 1e3 * kTol.construction);
}

Superoperator::Superoperator(Matrix m, Eigen::Index dim) : m_(std::move(m)), dim_(dim) {
  if (dim_ <= 0 || m_.rows() != dim_ * dim_ || m_.cols() != dim_ * dim_) {
    throw std::invalid_argument("Superoperator: expected dim^2 x dim^2 matrix");
  }
}

Matrix Superoperator::apply(const Matrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) {
    throw std::invalid_argument("Superoperator::apply: dimension mismatch");
  }
  return unvec(m_ * vec(rho), dim_);
}

Superoperator Superoperator::power(unsigned long long k) const {
  Matrix result = Matrix::Identity(m_.rows(), m_.cols());
  Matrix base = m_;
  while (k > 0) {
    if (k & 1ULL) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return Superoperator(std::move(result), dim_);
}

Superoperator operator*(const Superoperator& a, const Superoperator& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("Superoperator product: dimension mismatch");
  return Superoperator(a.m_ * b.m_, a.dim_);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvec(const Vector& v, Eigen::Index dim) {
  if (v.size() != dim * dim) throw std::invalid_argument("unvec: size mismatch");
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Matrix pauli(char label) {
  Matrix p(2, 2);
  switch (label) {
    case 'I': p << 1, 0, 0, 1; break;
    case 'X': p << 0, 1, 1, 0; break;
    case 'Y': p << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': p << 1, 0, 0, -1; break;
    default: throw std::invalid_argument(std::string("pauli: unknown label '") + label + "'");
  }
  return p;
}

Operator pauli_string(int n, std::string_view spec) {
  if (n < 1) throw std::invalid_argument("pauli_string: n must be >= 1");
  if (static_cast<int>(spec.size()) != n) {
    throw std::invalid_argument("pauli_string: spec length differs from n");
  }
  Matrix m = pauli(spec.front());
  for (std::size_t j = 1; j < spec.size(); ++j) m = kron(m, pauli(spec[j]));
  return Operator(std::move(m));
}

Operator pauli_on(int n, int j, char label) {
  if (j < 1 || j > n) throw std::invalid_argument("pauli_on: qubit index out of range");
  std::string spec(static_cast<std::size_t>(n), 'I');
  spec[static_cast<std::size_t>(j - 1)] = label;
  return pauli_string(n, spec);
}

Operator identity(Eigen::Index dim) { return Operator(Matrix::Identity(dim, dim)); }

std::pair<Vector, Vector> logical_states(int n) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("logical_states: n must be odd and >= 3");
  const Eigen::Index d = Eigen::Index(1) << n;
  Vector zero = Vector::Zero(d);
  Vector one = Vector::Zero(d);
  zero(0) = 1.0;
  one(d - 1) = 1.0;
  return {zero, one};
}

DensityMatrix ramsey_state(int n) {
  auto [zero, one] = logical_states(n);
  return DensityMatrix::pure(zero + one);
}

Operator logical_x(int n) { return pauli_string(n, std::string(static_cast<std::size_t>(n), 'X')); }

std::vector<Matrix> logical_basis(int n) {
  auto [zero, one] = logical_states(n);
  const Vector* ket[2] = {&zero, &one};
  std::vector<Matrix> basis;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) basis.push_back(*ket[i] * ket[j]->adjoint());
  }
  return basis;
}

Matrix dissipator(const Operator& l, const Matrix& rho) {
  if (l.dim() != rho.rows() || rho.rows() != rho.cols()) {
    throw std::invalid_argument("dissipator: dimension mismatch");
  }
  const Matrix& a = l.matrix();
  const Matrix ada = a.adjoint() * a;
  return a * rho * a.adjoint() - 0.5 * (ada * rho + rho * ada);
}

Superoperator dissipator_superoperator(const Operator& l) {
  const Eigen::Index d = l.dim();
  const Matrix& a = l.matrix();
  const Matrix ada = a.adjoint() * a;
  const Matrix id = Matrix::Identity(d, d);
  Matrix s = kron(a.conjugate(), a) - 0.5 * kron(id, ada) - 0.5 * kron(ada.transpose(), id);
  return Superoperator(std::move(s), d);
}

Superoperator commutator_superoperator(const Operator& h) {
  const Eigen::Index d = h.dim();
  const Matrix id = Matrix::Identity(d, d);
  Matrix s = cplx(0, -1) * (kron(id, h.matrix()) - kron(h.matrix().transpose(), id));
  return Superoperator(std::move(s), d);
}

Channel identity_channel(Eigen::Index dim) { return Channel({identity(dim)}, "identity"); }

Channel unitary_channel(const Matrix& u, std::string label) {
  return Channel({Operator(u)}, std::move(label));
}

Channel compose(const Channel& a, const Channel& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("compose: dimension mismatch");
  std::vector<Operator> ks;
  ks.reserve(a.kraus_ops().size() * b.kraus_ops().size());
  for (const auto& ka : a.kraus_ops()) {
    for (const auto& kb : b.kraus_ops()) {
      Operator k = ka * kb;
      if (max_abs(k.matrix()) > 0.0) ks.push_back(std::move(k));
    }
  }
  if (ks.empty()) ks.push_back(Operator(Matrix::Zero(a.dim(), a.dim())));
  return Channel(std::move(ks), a.label() + " o " + b.label(), 1e3 * kTol.construction);
}

Superoperator channel_to_superoperator(const Channel& ch) {
  const Eigen::Index d = ch.dim();
  Matrix s = Matrix::Zero(d * d, d * d);
  for (const auto& k : ch.kraus_ops()) s += kron(k.matrix().conjugate(), k.matrix());
  return Superoperator(std::move(s), d);
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace qecsense
