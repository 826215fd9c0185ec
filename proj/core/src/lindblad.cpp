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

#include "qecsense/lindblad.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qecsense {

void SensorParams::validate() const {
  if (n < 1) throw std::invalid_argument("SensorParams: n must be >= 1");
  if (!(omega > 0.0)) throw std::invalid_argument("SensorParams: omega must be > 0");
  if (!(gamma_err >= 0.0)) throw std::invalid_argument("SensorParams: gamma_err must be >= 0");
  if (!(gamma_qec >= 0.0)) throw std::invalid_argument("SensorParams: gamma_qec must be >= 0");
  if (omega_q && xi && v_signal) {
    if (std::abs(*omega_q + 2.0 * *xi * *v_signal - omega) >= 1e-12) {
      throw std::invalid_argument("SensorParams: omega != omega_q + 2 xi V");
    }
  }
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::simulated: return "simulated";
    case Provenance::analytic_full: return "analytic_full";
    case Provenance::analytic_reduced: return "analytic_reduced";
    case Provenance::conjectured: return "conjectured";
    case Provenance::uncorrected: return "uncorrected";
    case Provenance::discrete: return "discrete";
  }
  return "unknown";
}

void ExpectationTrace::validate() const {
  if (taus.size() != values.size()) throw std::invalid_argument("ExpectationTrace: size mismatch");
  for (std::size_t i = 1; i < taus.size(); ++i) {
    if (!(taus[i] > taus[i - 1])) throw std::invalid_argument("ExpectationTrace: taus not increasing");
  }
  for (double v : values) {
    if (!(std::abs(v) <= 1.0 + 1e-6)) throw std::invalid_argument("ExpectationTrace: |value| > 1");
  }
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t n) {
  if (n < 2 || !(t1 > t0)) throw std::invalid_argument("uniform_grid: need n >= 2 and t1 > t0");
  std::vector<double> g(n);
  const double dt = (t1 - t0) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = t0 + dt * static_cast<double>(i);
  g.back() = t1;
  return g;
}

Operator hamiltonian(const SensorParams& p) {
  const Eigen::Index d = Eigen::Index(1) << p.n;
  Matrix h = Matrix::Zero(d, d);
  for (int j = 1; j <= p.n; ++j) h += 0.5 * p.omega * pauli_on(p.n, j, 'Z').matrix();
  return Operator(std::move(h));
}

std::vector<Operator> error_jumps(const SensorParams& p) {
  std::vector<Operator> ls;
  if (p.gamma_err == 0.0) return ls;
  for (int j = 1; j <= p.n; ++j) ls.push_back(cplx(std::sqrt(p.gamma_err)) * pauli_on(p.n, j, 'X'));
  return ls;
}

std::vector<Operator> qec_jumps(const SensorParams& p) {
  std::vector<Operator> ls;
  if (p.gamma_qec == 0.0) return ls;
  if (p.n != 3) throw std::invalid_argument("qec_jumps: correction operators are defined for n = 3");
  const Matrix id = Matrix::Identity(8, 8);
  for (int j = 1; j <= 3; ++j) {
    const int k = j % 3 + 1;
    const int l = (j + 1) % 3 + 1;
    const Matrix zj = pauli_on(3, j, 'Z').matrix();
    const Matrix pk = 0.5 * (id - zj * pauli_on(3, k, 'Z').matrix());
    const Matrix pl = 0.5 * (id - zj * pauli_on(3, l, 'Z').matrix());
    ls.emplace_back(std::sqrt(p.gamma_qec) * pauli_on(3, j, 'X').matrix() * pk * pl);
  }
  return ls;
}

Superoperator build_liouvillian(const SensorParams& p) {
  p.validate();
  if (p.gamma_qec > 0.0 && p.n != 3) {
    throw std::invalid_argument("build_liouvillian: gamma_qec > 0 requires n = 3");
  }
  if (p.gamma_qec == 0.0 && (p.n < 3 || p.n % 2 == 0)) {
    throw std::invalid_argument("build_liouvillian: n must be odd and >= 3");
  }
  Matrix s = commutator_superoperator(hamiltonian(p)).matrix();
  for (const auto& l : error_jumps(p)) s += dissipator_superoperator(l).matrix();
  for (const auto& l : qec_jumps(p)) s += dissipator_superoperator(l).matrix();
  return Superoperator(std::move(s), Eigen::Index(1) << p.n);
}

std::vector<DensityMatrix> evolve(const SensorParams& p, const DensityMatrix& rho0,
                                  const std::vector<double>& taus, const OdeOptions& opt) {
  if (taus.empty() || taus.front() != 0.0) {
    throw std::invalid_argument("evolve: time grid must start at 0");
  }
  const Superoperator liou = build_liouvillian(p);
  if (rho0.dim() != liou.dim()) throw std::invalid_argument("evolve: rho0 dimension mismatch");
  const Matrix& l = liou.matrix();
  const Eigen::Index d = liou.dim();

  std::vector<DensityMatrix> out;
  out.reserve(taus.size());
  auto rhs = [&l](double, const Vector& y, Vector& dy) { dy.noalias() = l * y; };
  integrate_dp5(rhs, vec(rho0.matrix()), taus, opt, [&](std::size_t i, const Vector& y) {
    Matrix rho = unvec(y, d);
    try {
      out.emplace_back(std::move(rho), kTol.integration);
    } catch (const std::invalid_argument& e) {
      throw IntegrationError(std::string("evolve: ") + e.what(), taus[i]);
    }
  });
  return out;
}

double logical_coherence_expectation(const Matrix& rho) {
  return 2.0 * rho(0, rho.cols() - 1).real();
}

ExpectationTrace ramsey_trace(const SensorParams& p, const std::vector<double>& taus,
                              const OdeOptions& opt) {
  const auto states = evolve(p, ramsey_state(p.n), taus, opt);
  ExpectationTrace tr;
  tr.taus = taus;
  tr.provenance = Provenance::simulated;
  tr.params = p;
  tr.values.reserve(states.size());
  for (const auto& s : states) tr.values.push_back(logical_coherence_expectation(s.matrix()));
  return tr;
}

Coherence4 coherence_sector(const Matrix& rho) {
  if (rho.rows() != 8) throw std::invalid_argument("coherence_sector: n = 3 only");
  Coherence4 c;
  c(0) = rho(0, 7);
  c(1) = rho(4, 3) + rho(2, 5) + rho(1, 6);
  c(2) = rho(3, 4) + rho(5, 2) + rho(6, 1);
  c(3) = rho(7, 0);
  return c;
}

Eigen::Matrix4cd reduced_matrix(const SensorParams& p, bool keep_coupling) {
  const double w = p.omega, g = p.gamma_err, gq = p.gamma_qec;
  const cplx i(0, 1);
  const double orange = keep_coupling ? 2.0 * g : 0.0;
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = -3.0 * i * w - 3.0 * g;
  m(0, 1) = g + gq;
  m(1, 0) = 3.0 * g;
  m(1, 1) = -i * w - 3.0 * g - gq;
  m(1, 2) = orange;
  m(2, 1) = orange;
  m(2, 2) = i * w - 3.0 * g - gq;
  m(2, 3) = 3.0 * g;
  m(3, 2) = g + gq;
  m(3, 3) = 3.0 * i * w - 3.0 * g;
  return m;
}

Coherence4 reduced_rhs(const SensorParams& p, const Coherence4& state, bool keep_coupling) {
  return reduced_matrix(p, keep_coupling) * state;
}

std::vector<Coherence4> integrate_reduced(const SensorParams& p, const std::vector<double>& taus,
                                          bool keep_coupling, const OdeOptions& opt) {
  if (taus.empty() || taus.front() != 0.0) {
    throw std::invalid_argument("integrate_reduced: time grid must start at 0");
  }
  const Eigen::Matrix4cd m = reduced_matrix(p, keep_coupling);
  std::vector<Coherence4> out;
  out.reserve(taus.size());
  Coherence4 y0(0.5, 0.0, 0.0, 0.5);
  auto rhs = [&m](double, const Coherence4& y, Coherence4& dy) { dy.noalias() = m * y; };
  integrate_dp5(rhs, y0, taus, opt, [&](std::size_t, const Coherence4& y) { out.push_back(y); });
  return out;
}

}  // namespace qecsense
