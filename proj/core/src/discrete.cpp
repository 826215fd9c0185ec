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

#include "qecsense/discrete.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace qecsense {

namespace {

void require_n3(int n, const char* what) {
  if (n != 3) throw std::invalid_argument(std::string(what) + ": n = 3 only");
}

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + ": probability outside [0, 1]");
}

Operator scaled(double w, const Operator& o) { return cplx(std::sqrt(w)) * o; }

// Weighted Pauli-X error patterns of the noise model, excluding the identity.
std::vector<std::pair<double, Operator>> error_terms(const NoiseModel& m) {
  std::vector<std::pair<double, Operator>> terms;
  if (m.kind == NoiseKind::optimal) {
    for (int j = 1; j <= 3; ++j) terms.emplace_back(m.p / 3.0, pauli_on(3, j, 'X'));
    return terms;
  }
  const double p = m.p;
  for (int j = 1; j <= 3; ++j) terms.emplace_back(p, pauli_on(3, j, 'X'));
  for (int k = 1; k <= 3; ++k) {
    for (int l = k + 1; l <= 3; ++l) terms.emplace_back(p * p, pauli_on(3, k, 'X') * pauli_on(3, l, 'X'));
  }
  terms.emplace_back(p * p * p, logical_x(3));
  return terms;
}

Vector apply_vec(const Superoperator& s, const Vector& v) { return s.matrix() * v; }

}  // namespace

double NoiseModel::p_noise() const {
  if (kind == NoiseKind::optimal) return p;
  return 3.0 * p + 3.0 * p * p + p * p * p;
}

void CycleSpec::validate() const {
  if (!(delta_tau >= 0.0)) throw std::invalid_argument("CycleSpec: delta_tau must be >= 0");
  require_probability(noise.p, "CycleSpec");
  require_probability(noise.p_noise(), "CycleSpec");
}

NoiseChannels noise_channel(const NoiseModel& model, int n) {
  require_n3(n, "noise_channel");
  require_probability(model.p, "noise_channel");
  const double pn = model.p_noise();
  require_probability(pn, "noise_channel");
  const auto terms = error_terms(model);

  std::vector<Operator> full;
  if (1.0 - pn > 0.0) full.push_back(scaled(1.0 - pn, identity(8)));
  std::vector<Operator> err;
  for (const auto& [w, op] : terms) {
    if (w > 0.0) {
      full.push_back(scaled(w, op));
      err.push_back(scaled(w / pn, op));
    }
  }
  Channel erroneous = err.empty() ? identity_channel(8) : Channel(std::move(err), "N'");
  return {Channel(std::move(full), "N"), std::move(erroneous), pn};
}

Channel correction_channel(int n) {
  require_n3(n, "correction_channel");
  const Matrix id = Matrix::Identity(8, 8);
  const Matrix z[3] = {pauli_on(3, 1, 'Z').matrix(), pauli_on(3, 2, 'Z').matrix(),
                       pauli_on(3, 3, 'Z').matrix()};
  // P0 projects onto the code space, P_j onto states with qubit j disagreeing.
  std::vector<Operator> ks;
  ks.emplace_back(0.25 * (id + z[0] * z[1]) * (id + z[1] * z[2]));
  for (int j = 0; j < 3; ++j) {
    const int k = (j + 1) % 3, l = (j + 2) % 3;
    const Matrix pj = 0.25 * (id - z[j] * z[k]) * (id - z[j] * z[l]);
    ks.emplace_back(pauli_on(3, j + 1, 'X').matrix() * pj);
  }
  return Channel(std::move(ks), "C");
}

Matrix sensing_unitary(const SensorParams& p, double delta_tau) {
  const Eigen::Index d = Eigen::Index(1) << p.n;
  Matrix u = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const int ones = std::popcount(static_cast<unsigned long long>(i));
    const double zsum = static_cast<double>(p.n - 2 * ones);
    u(i, i) = std::exp(cplx(0.0, -0.5 * p.omega * delta_tau * zsum));
  }
  return u;
}

Channel sensing_channel(const SensorParams& p, double delta_tau) {
  return unitary_channel(sensing_unitary(p, delta_tau), "U");
}

Superoperator cycle_superoperator(const CycleSpec& spec, const SensorParams& p) {
  const auto noise = noise_channel(spec.noise, p.n);
  return channel_to_superoperator(correction_channel(p.n)) *
         channel_to_superoperator(sensing_channel(p, spec.delta_tau)) *
         channel_to_superoperator(noise.full);
}

Superoperator binomial_kernel(const CycleSpec& spec, const SensorParams& p) {
  const auto noise = noise_channel(spec.noise, p.n);
  return channel_to_superoperator(correction_channel(p.n)) *
         channel_to_superoperator(sensing_channel(p, spec.delta_tau)) *
         channel_to_superoperator(noise.erroneous) *
         channel_to_superoperator(sensing_channel(p, -spec.delta_tau));
}

DensityMatrix ideal_state(const SensorParams& p, const DensityMatrix& rho0, double tau) {
  const Matrix u = sensing_unitary(p, tau);
  return DensityMatrix(u * rho0.matrix() * u.adjoint(), 1e3 * kTol.construction);
}

DensityMatrix iterate_cycles(const CycleSpec& spec, const SensorParams& p, const DensityMatrix& rho0) {
  spec.validate();
  const Superoperator s = cycle_superoperator(spec, p).power(spec.c);
  return DensityMatrix(s.apply(rho0.matrix()), kTol.commutator);
}

double binomial_commutator_norm(const CycleSpec& spec, const SensorParams& p) {
  const auto noise = noise_channel(spec.noise, p.n);
  const Superoperator cu = channel_to_superoperator(correction_channel(p.n)) *
                           channel_to_superoperator(sensing_channel(p, spec.delta_tau));
  const Superoperator cun = cu * channel_to_superoperator(noise.erroneous);
  const Matrix comm = (cu * cun).matrix() - (cun * cu).matrix();
  double norm = 0.0;
  for (const auto& b : logical_basis(p.n)) norm = std::max(norm, max_abs(unvec(comm * vec(b), b.rows())));
  return norm;
}

DensityMatrix binomial_form(const CycleSpec& spec, const SensorParams& p, const DensityMatrix& rho_tau,
                            bool verify) {
  spec.validate();
  if (verify) {
    const double norm = binomial_commutator_norm(spec, p);
    if (norm > kTol.commutator) {
      throw CommutationError("binomial_form: commutation condition fails on the logical space (norm " +
                             std::to_string(norm) + "); the binomial expansion does not apply");
    }
  }
  const double pn = spec.p_noise();
  const double pi = 1.0 - pn;
  const Superoperator m = binomial_kernel(spec, p);
  const auto c = spec.c;

  Vector v = vec(rho_tau.matrix());
  Vector acc = Vector::Zero(v.size());
  const double lc = std::lgamma(static_cast<double>(c) + 1.0);
  for (unsigned long long k = 0; k <= c; ++k) {
    double w;
    if (pn == 0.0) {
      w = k == 0 ? 1.0 : 0.0;
    } else if (pi == 0.0) {
      w = k == c ? 1.0 : 0.0;
    } else {
      const double dk = static_cast<double>(k), dc = static_cast<double>(c);
      w = std::exp(lc - std::lgamma(dk + 1.0) - std::lgamma(dc - dk + 1.0) + (dc - dk) * std::log(pi) +
                   dk * std::log(pn));
    }
    acc += w * v;
    if (k < c) v = apply_vec(m, v);
  }
  return DensityMatrix(unvec(acc, rho_tau.dim()), kTol.commutator);
}

BiasReport biasedness_check(const Channel& sensing, const Channel& noise_err_part,
                            const std::vector<Matrix>& logical_basis, double tol) {
  if (sensing.dim() != noise_err_part.dim()) {
    throw std::invalid_argument("biasedness_check: channel dimensions differ");
  }
  std::vector<Operator> inv;
  for (const auto& k : sensing.kraus_ops()) inv.push_back(k.adjoint());
  const Channel sensing_inv(std::move(inv), "U^-1");
  double norm = 0.0;
  for (const auto& b : logical_basis) {
    const Matrix tilde = sensing.apply(noise_err_part.apply(sensing_inv.apply(b)));
    const Matrix plain = sensing_inv.apply(sensing.apply(noise_err_part.apply(b)));
    norm = std::max(norm, max_abs(tilde - plain));
  }
  return {norm, 0.0, norm > tol};
}

DensityMatrix unbiased_reconstruction(const CycleSpec& spec, const SensorParams& p,
                                      const DensityMatrix& rho_tau) {
  const auto power = static_cast<unsigned long long>(std::llround(static_cast<double>(spec.c) * spec.p_noise()));
  const Superoperator m = binomial_kernel(spec, p).power(power);
  return DensityMatrix(m.apply(rho_tau.matrix()), kTol.commutator);
}

double bias_of_observable(const CycleSpec& spec, const SensorParams& p, const Operator& observable,
                          const DensityMatrix& rho_tau) {
  const DensityMatrix biased = unbiased_reconstruction(spec, p, rho_tau);
  return (biased.expectation(observable) - rho_tau.expectation(observable)).real();
}

double expectation_discrete_normal(const CycleSpec& spec, const SensorParams& p, double tau) {
  const double pn = spec.p_noise();
  const double pi = 1.0 - pn;
  const double w = p.omega;
  return std::exp(-2.0 * pn * pi * w * w * spec.delta_tau * tau) *
         std::cos(3.0 * w * (1.0 - 2.0 / 3.0 * pn) * tau);
}

bool normal_regime(const CycleSpec& spec) {
  const double c = static_cast<double>(spec.c);
  const double pn = spec.p_noise();
  return c * pn >= 5.0 && c * (1.0 - pn) >= 5.0;
}

DiscreteTraces discrete_traces(const CycleSpec& spec, const SensorParams& p) {
  spec.validate();
  const auto noise = noise_channel(spec.noise, p.n);
  const Superoperator su = channel_to_superoperator(sensing_channel(p, spec.delta_tau));
  const Superoperator sn = channel_to_superoperator(noise.full);
  const Superoperator sc = channel_to_superoperator(correction_channel(p.n));
  const Superoperator uncorr = su * sn;
  const Superoperator corr = sc * su * sn;
  const Superoperator kernel = binomial_kernel(spec, p);

  const DensityMatrix rho0 = ramsey_state(p.n);
  const Eigen::Index d = rho0.dim();
  auto sx = [d](const Vector& v) { return 2.0 * v(static_cast<Eigen::Index>((d - 1) * d)).real(); };

  DiscreteTraces out;
  Vector vu = vec(rho0.matrix());
  Vector vc = vu;
  for (unsigned long long cc = 0; cc <= spec.c; ++cc) {
    const double tau = static_cast<double>(cc) * spec.delta_tau;
    const CycleSpec here{cc, spec.delta_tau, spec.noise};
    out.taus.push_back(tau);
    out.ideal.push_back(std::cos(3.0 * p.omega * tau));
    out.uncorrected.push_back(sx(vu));
    out.corrected.push_back(sx(vc));

    const auto power = static_cast<unsigned long long>(std::llround(static_cast<double>(cc) * here.p_noise()));
    const Matrix u = sensing_unitary(p, tau);
    Vector rt = vec(u * rho0.matrix() * u.adjoint());
    for (unsigned long long k = 0; k < power; ++k) rt = kernel.matrix() * rt;
    out.unbiased.push_back(sx(rt));
    out.normal_approx.push_back(expectation_discrete_normal(here, p, tau));

    vu = uncorr.matrix() * vu;
    vc = corr.matrix() * vc;
  }
  return out;
}

}  // namespace qecsense
