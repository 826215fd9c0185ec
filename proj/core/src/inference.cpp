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

#include "qecsense/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

#include "qecsense/parallel.hpp"
#include "qecsense/philox.hpp"

namespace qecsense {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sample_variance(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  double m = 0.0;
  for (double v : x) m += v;
  m /= n;
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / (n - 1.0);
}

double mean_of(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m += v;
  return m / static_cast<double>(x.size());
}

void require_repetitions(std::size_t n, const char* what) {
  if (n < 100) throw std::invalid_argument(std::string(what) + ": need at least 100 repetitions");
}

}  // namespace

std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::conjectured: return "conjectured";
    case ModelKind::proposed_full: return "proposed_full";
    case ModelKind::proposed_reduced: return "proposed_reduced";
  }
  return "unknown";
}

std::string_view to_string(SensitivityModel m) {
  switch (m) {
    case SensitivityModel::naive: return "naive";
    case SensitivityModel::proposed_reduced: return "proposed_reduced";
    case SensitivityModel::proposed_reduced_refined: return "proposed_reduced_refined";
    case SensitivityModel::proposed_full: return "proposed_full";
  }
  return "unknown";
}

ExpectationModel::ExpectationModel(ModelKind kind, double gamma_qec, int order)
    : kind_(kind), gamma_qec_(gamma_qec), order_(order) {
  if (kind_ != ModelKind::conjectured && !(gamma_qec_ > 0.0)) {
    throw std::invalid_argument("ExpectationModel: proposed models need gamma_qec > 0");
  }
  if (order_ < 1 || order_ > 3) throw std::invalid_argument("ExpectationModel: order must be 1, 2 or 3");
}

SensorParams ExpectationModel::sensor(const ModelParams& th) const {
  SensorParams p;
  p.omega = th.omega;
  p.gamma_err = th.gamma;
  p.gamma_qec = gamma_qec_;
  return p;
}

double ExpectationModel::value(const ModelParams& th, double tau) const {
  switch (kind_) {
    case ModelKind::conjectured: return std::exp(-3.0 * th.gamma * tau) * std::cos(3.0 * th.omega * tau);
    case ModelKind::proposed_full: return expectation_full(sensor(th), tau);
    case ModelKind::proposed_reduced: return expectation_reduced(effective_params(sensor(th), order_), tau);
  }
  return 0.0;
}

std::optional<double> ExpectationModel::analytic_derivative(Param which, const ModelParams& th,
                                                            double tau) const {
  switch (kind_) {
    case ModelKind::conjectured: {
      const double env = std::exp(-3.0 * th.gamma * tau);
      if (which == Param::omega) return -3.0 * tau * env * std::sin(3.0 * th.omega * tau);
      return -3.0 * tau * env * std::cos(3.0 * th.omega * tau);
    }
    case ModelKind::proposed_full: {
      const Gradient g = expectation_full_gradient(sensor(th), tau);
      return which == Param::omega ? g.d_omega : g.d_gamma;
    }
    case ModelKind::proposed_reduced: {
      if (which == Param::gamma) return std::nullopt;
      const SensorParams p = sensor(th);
      const EffectiveParams ep = effective_params(p, order_);
      const EffectiveParamsDerivative d = effective_params_domega(p, order_);
      const double env = std::exp(-3.0 * ep.gamma_eff * tau);
      const double ph = 3.0 * ep.omega_eff * tau;
      return -3.0 * tau * env * (d.d_gamma_eff * std::cos(ph) + d.d_omega_eff * std::sin(ph));
    }
  }
  return std::nullopt;
}

double ExpectationModel::fd_derivative(Param which, const ModelParams& th, double tau) const {
  const double h = 1e-6 * th.omega;
  ModelParams a = th, b = th;
  if (which == Param::omega) {
    a.omega += h;
    b.omega -= h;
  } else {
    a.gamma += h;
    b.gamma -= h;
  }
  return (value(a, tau) - value(b, tau)) / (2.0 * h);
}

double ExpectationModel::derivative(Param which, const ModelParams& th, double tau) const {
  if (auto d = analytic_derivative(which, th, tau)) return *d;
  return fd_derivative(which, th, tau);
}

double ShotRecord::mean() const {
  if (outcomes.empty()) return 0.0;
  long long s = 0;
  for (auto o : outcomes) s += o;
  return static_cast<double>(s) / static_cast<double>(outcomes.size());
}

ShotRecord sample_shots(const std::function<double(double)>& model, double tau, std::size_t n_shots,
                        std::uint64_t seed, std::uint64_t stream) {
  if (n_shots == 0) throw std::invalid_argument("sample_shots: n_shots must be positive");
  double m = model(tau);
  ShotRecord rec;
  rec.tau = tau;
  rec.seed = seed;
  rec.stream = stream;
  if (!std::isfinite(m) || std::abs(m) > 1.0 + kTol.shot_reject) {
    throw std::domain_error("sample_shots: model value outside [-1, 1] at tau = " + std::to_string(tau));
  }
  if (std::abs(m) > 1.0 + kTol.shot_clip) rec.clipped = true;
  m = std::clamp(m, -1.0, 1.0);
  const double p_plus = 0.5 * (1.0 + m);
  Philox4x32 rng(seed, stream);
  rec.outcomes.resize(n_shots);
  for (auto& o : rec.outcomes) o = rng.uniform() < p_plus ? 1 : -1;
  return rec;
}

FitBracket FitBracket::around(double omega_seed, double gamma_seed) {
  return {0.5 * omega_seed, 1.5 * omega_seed, 0.0, 5.0 * gamma_seed, 200, 200};
}

void FitBracket::validate() const {
  if (!(omega_hi > omega_lo) || !(gamma_hi > gamma_lo) || n_omega < 3 || n_gamma < 3) {
    throw std::invalid_argument("FitBracket: degenerate bracket");
  }
  if (!(omega_lo > 0.0)) throw std::invalid_argument("FitBracket: omega bracket must be positive");
}

GridFitter::GridFitter(ExpectationModel model, std::vector<double> taus, FitBracket bracket)
    : model_(model), taus_(std::move(taus)), bracket_(bracket) {
  bracket_.validate();
  if (std::set<double>(taus_.begin(), taus_.end()).size() < 2) {
    throw std::invalid_argument("GridFitter: need at least 2 distinct tau values");
  }
  const std::size_t no = bracket_.n_omega, ng = bracket_.n_gamma, nt = taus_.size();
  table_.resize(no * ng * nt);
  sumsq_.resize(no * ng);
  for (std::size_t g = 0; g < ng; ++g) {
    const double gv = bracket_.gamma_lo + (bracket_.gamma_hi - bracket_.gamma_lo) * static_cast<double>(g) /
                                              static_cast<double>(ng - 1);
    for (std::size_t o = 0; o < no; ++o) {
      const double ov = bracket_.omega_lo + (bracket_.omega_hi - bracket_.omega_lo) * static_cast<double>(o) /
                                                static_cast<double>(no - 1);
      double* row = &table_[(g * no + o) * nt];
      double ss = 0.0;
      for (std::size_t t = 0; t < nt; ++t) {
        row[t] = model_.value({ov, gv}, taus_[t]);
        ss += row[t] * row[t];
      }
      sumsq_[g * no + o] = ss;
    }
  }
}

double GridFitter::objective(const ModelParams& th, const std::vector<double>& means) const {
  double s = 0.0;
  for (std::size_t t = 0; t < taus_.size(); ++t) {
    const double r = means[t] - model_.value(th, taus_[t]);
    s += r * r;
  }
  return s;
}

FitResult GridFitter::fit(const std::vector<double>& means, const std::vector<std::size_t>& shots) const {
  const std::size_t no = bracket_.n_omega, ng = bracket_.n_gamma, nt = taus_.size();
  if (means.size() != nt || shots.size() != nt) throw std::invalid_argument("GridFitter::fit: size mismatch");
  const double dom = (bracket_.omega_hi - bracket_.omega_lo) / static_cast<double>(no - 1);
  const double dga = (bracket_.gamma_hi - bracket_.gamma_lo) / static_cast<double>(ng - 1);

  double xx = 0.0;
  for (double x : means) xx += x * x;
  auto grid_obj = [&](std::size_t g, std::size_t o) {
    const double* row = &table_[(g * no + o) * nt];
    double xm = 0.0;
    for (std::size_t t = 0; t < nt; ++t) xm += means[t] * row[t];
    return xx - 2.0 * xm + sumsq_[g * no + o];
  };

  std::size_t bg = 0, bo = 0;
  double best = kInf;
  for (std::size_t g = 0; g < ng; ++g) {
    for (std::size_t o = 0; o < no; ++o) {
      const double f = grid_obj(g, o);
      if (f < best) {
        best = f;
        bg = g;
        bo = o;
      }
    }
  }

  auto clamp_th = [&](ModelParams th) {
    th.omega = std::clamp(th.omega, bracket_.omega_lo, bracket_.omega_hi);
    th.gamma = std::clamp(th.gamma, bracket_.gamma_lo, bracket_.gamma_hi);
    return th;
  };

  ModelParams grid_best{bracket_.omega_lo + dom * static_cast<double>(bo),
                        bracket_.gamma_lo + dga * static_cast<double>(bg)};
  // Per-coordinate parabola through the grid neighbours.
  ModelParams th = grid_best;
  auto parabola = [](double fm, double f0, double fp) {
    const double den = fm - 2.0 * f0 + fp;
    return den > 0.0 ? std::clamp(0.5 * (fm - fp) / den, -1.0, 1.0) : 0.0;
  };
  if (bo > 0 && bo + 1 < no) th.omega += dom * parabola(grid_obj(bg, bo - 1), best, grid_obj(bg, bo + 1));
  if (bg > 0 && bg + 1 < ng) th.gamma += dga * parabola(grid_obj(bg - 1, bo), best, grid_obj(bg + 1, bo));
  th = clamp_th(th);
  double f = objective(th, means);
  if (f > objective(grid_best, means)) {
    th = grid_best;
    f = objective(th, means);
  }

  // Levenberg-Marquardt polish inside the bracket.
  double mu = 1e-3;
  bool converged = false;
  for (int it = 0; it < 200 && !converged; ++it) {
    Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
    Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
    for (std::size_t t = 0; t < nt; ++t) {
      const double r = means[t] - model_.value(th, taus_[t]);
      const Eigen::Vector2d j(model_.derivative(Param::omega, th, taus_[t]),
                              model_.derivative(Param::gamma, th, taus_[t]));
      jtj += j * j.transpose();
      jtr += j * r;
    }
    bool improved = false;
    for (int tries = 0; tries < 30 && !improved; ++tries) {
      Eigen::Matrix2d a = jtj;
      a.diagonal() *= 1.0 + mu;
      a.diagonal().array() += 1e-300;
      const Eigen::Vector2d step = a.ldlt().solve(jtr);
      const ModelParams cand = clamp_th({th.omega + step(0), th.gamma + step(1)});
      const double fc = objective(cand, means);
      if (fc < f) {
        const double moved = std::abs(cand.omega - th.omega) + std::abs(cand.gamma - th.gamma);
        th = cand;
        const double gain = f - fc;
        f = fc;
        mu = std::max(mu / 3.0, 1e-12);
        improved = true;
        converged = moved < 1e-14 || gain < 1e-16 * std::max(f, 1e-300);
      } else {
        mu *= 4.0;
      }
    }
    if (!improved) break;
  }

  FitResult res;
  res.omega_hat = th.omega;
  res.gamma_hat = th.gamma;
  res.model = model_.kind();
  res.residual_sum = objective(th, means);

  Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d meat = Eigen::Matrix2d::Zero();
  for (std::size_t t = 0; t < nt; ++t) {
    const double m = model_.value(th, taus_[t]);
    const Eigen::Vector2d j(model_.derivative(Param::omega, th, taus_[t]),
                            model_.derivative(Param::gamma, th, taus_[t]));
    const double w = std::max(0.0, 1.0 - m * m) / static_cast<double>(shots[t]);
    h += j * j.transpose();
    meat += w * j * j.transpose();
  }
  const double det = h.determinant();
  if (std::abs(det) > 0.0) {
    const Eigen::Matrix2d hi = h.inverse();
    const Eigen::Matrix2d cov = hi * meat * hi;
    res.se_omega = std::sqrt(std::max(0.0, cov(0, 0)));
    res.se_gamma = std::sqrt(std::max(0.0, cov(1, 1)));
  } else {
    res.se_omega = res.se_gamma = kInf;
  }
  return res;
}

FitResult least_squares_fit(const std::vector<ShotRecord>& records, const ExpectationModel& model,
                            const FitBracket& bracket) {
  if (records.empty()) throw std::invalid_argument("least_squares_fit: empty records");
  std::vector<double> taus, means;
  std::vector<std::size_t> shots;
  for (const auto& r : records) {
    if (r.n_shots() == 0) throw std::invalid_argument("least_squares_fit: record without shots");
    taus.push_back(r.tau);
    means.push_back(r.mean());
    shots.push_back(r.n_shots());
  }
  return GridFitter(model, taus, bracket).fit(means, shots);
}

double bias_statistic(const std::vector<FitResult>& repetitions, double omega_true) {
  require_repetitions(repetitions.size(), "bias_statistic");
  std::vector<double> w;
  w.reserve(repetitions.size());
  double msd = 0.0;
  for (const auto& f : repetitions) {
    w.push_back(f.omega_hat);
    msd += (omega_true - f.omega_hat) * (omega_true - f.omega_hat);
  }
  msd /= static_cast<double>(repetitions.size());
  return msd - sample_variance(w);
}

FitEnsemble summarize(std::vector<FitResult> repetitions, double omega_true) {
  require_repetitions(repetitions.size(), "summarize");
  FitEnsemble e;
  std::vector<double> w, g;
  for (const auto& f : repetitions) {
    w.push_back(f.omega_hat);
    g.push_back(f.gamma_hat);
  }
  e.mean_omega = mean_of(w);
  e.mean_gamma = mean_of(g);
  e.variance_omega = sample_variance(w);
  e.variance_gamma = sample_variance(g);
  e.bias_stat = bias_statistic(repetitions, omega_true);
  e.fits = std::move(repetitions);
  return e;
}

double fisher_information(const ExpectationModel& model, Param which, const ModelParams& th, double tau) {
  const double m = model.value(th, tau);
  const double q = (1.0 + m) * (1.0 - m);
  if (!(q > 0.0)) return kInf;
  const double d = model.derivative(which, th, tau);
  return d * d / q;
}

std::size_t Design::total_shots() const {
  std::size_t n = 0;
  for (auto s : shots) n += s;
  return n;
}

Design Design::single(double tau, std::size_t n_shots) { return {{tau}, {n_shots}}; }

Design Design::window(double tau, std::size_t n_shots, std::size_t k, double span) {
  if (k == 0 || n_shots < k) throw std::invalid_argument("Design::window: need 1 <= k <= n_shots");
  Design d;
  for (std::size_t i = 0; i < k; ++i) {
    const double t = tau + ((static_cast<double>(i) + 0.5) / static_cast<double>(k) - 0.5) * span;
    if (t < 0.0) throw std::invalid_argument("Design::window: window extends below tau = 0");
    d.times.push_back(t);
    d.shots.push_back(n_shots / k + (i < n_shots % k ? 1 : 0));
  }
  return d;
}

Design Design::ramp(double tau, std::size_t n_shots, std::size_t k) {
  if (k == 0 || n_shots < k) throw std::invalid_argument("Design::ramp: need 1 <= k <= n_shots");
  if (!(tau > 0.0)) throw std::invalid_argument("Design::ramp: tau must be > 0");
  Design d;
  for (std::size_t i = 0; i < k; ++i) {
    d.times.push_back(tau * static_cast<double>(i + 1) / static_cast<double>(k));
    d.shots.push_back(n_shots / k + (i < n_shots % k ? 1 : 0));
  }
  return d;
}

BoundReport crb_audit(const std::vector<FitResult>& fits, const ExpectationModel& model,
                      const ModelParams& truth, double tau, const Design& design, double z) {
  require_repetitions(fits.size(), "crb_audit");
  std::vector<double> w, g;
  for (const auto& f : fits) {
    w.push_back(f.omega_hat);
    g.push_back(f.gamma_hat);
  }
  BoundReport r;
  r.tau = tau;
  const double n = static_cast<double>(design.total_shots());
  for (std::size_t k = 0; k < design.times.size(); ++k) {
    const double share = static_cast<double>(design.shots[k]) / n;
    r.fisher_omega += share * fisher_information(model, Param::omega, truth, design.times[k]);
    r.fisher_gamma += share * fisher_information(model, Param::gamma, truth, design.times[k]);
  }
  r.crb_rhs = (1.0 / r.fisher_omega + 1.0 / r.fisher_gamma) / n;
  r.total_variance = sample_variance(w) + sample_variance(g);
  r.tolerance = z * r.crb_rhs * std::sqrt(2.0 / (static_cast<double>(fits.size()) - 1.0));
  r.violated = r.total_variance < r.crb_rhs - r.tolerance;
  return r;
}

BoundReport crb_audit(const std::vector<FitResult>& fits, const ExpectationModel& model,
                      const ModelParams& truth, double tau, std::size_t n_shots, double z) {
  return crb_audit(fits, model, truth, tau, Design::single(tau, n_shots), z);
}

double decoherence_knee(const SensorParams& p) { return 1.0 / std::abs(eigen_solution(p).lambda_plus.real()); }

std::vector<CrbPointResult> run_crb_experiment(const CrbExperimentConfig& cfg) {
  cfg.truth.validate();
  const std::size_t np = cfg.tau_points.size(), reps = cfg.repetitions, k = cfg.window_samples;
  require_repetitions(reps, "run_crb_experiment");
  const double span = cfg.window_span > 0.0 ? cfg.window_span : 2.0 * std::numbers::pi / (3.0 * cfg.truth.omega);
  const ModelParams truth{cfg.truth.omega, cfg.truth.gamma_err};
  const ExpectationModel gen(ModelKind::proposed_full, cfg.truth.gamma_qec);
  const ExpectationModel conj(ModelKind::conjectured, cfg.truth.gamma_qec);
  const FitBracket bracket = FitBracket::around(truth.omega, truth.gamma);

  std::vector<Design> designs;
  std::vector<GridFitter> conj_fit, prop_fit;
  for (double tau : cfg.tau_points) {
    const auto k_ramp = std::max(k, static_cast<std::size_t>(std::ceil(tau / cfg.max_spacing)));
    designs.push_back(cfg.ramp ? Design::ramp(tau, cfg.shots_per_point, k_ramp)
                               : Design::window(tau, cfg.shots_per_point, k, span));
    conj_fit.emplace_back(conj, designs.back().times, bracket);
    prop_fit.emplace_back(gen, designs.back().times, bracket);
  }

  std::vector<FitResult> conj_res(np * reps), prop_res(np * reps);
  parallel_for(np * reps, cfg.workers, [&](std::size_t task) {
    const std::size_t pt = task / reps;
    const Design& d = designs[pt];
    std::vector<double> means(d.times.size());
    for (std::size_t i = 0; i < d.times.size(); ++i) {
      const auto rec = sample_shots([&](double t) { return gen.value(truth, t); }, d.times[i], d.shots[i],
                                    cfg.seed, static_cast<std::uint64_t>(task) * 65536u + i);
      means[i] = rec.mean();
    }
    conj_res[task] = conj_fit[pt].fit(means, d.shots);
    prop_res[task] = prop_fit[pt].fit(means, d.shots);
  });

  std::vector<CrbPointResult> out;
  for (std::size_t pt = 0; pt < np; ++pt) {
    std::vector<FitResult> c(conj_res.begin() + static_cast<long>(pt * reps),
                             conj_res.begin() + static_cast<long>((pt + 1) * reps));
    std::vector<FitResult> pr(prop_res.begin() + static_cast<long>(pt * reps),
                              prop_res.begin() + static_cast<long>((pt + 1) * reps));
    CrbPointResult r;
    r.tau = cfg.tau_points[pt];
    r.conjectured_bound = crb_audit(c, gen, truth, r.tau, designs[pt], cfg.z);
    r.proposed_bound = crb_audit(pr, gen, truth, r.tau, designs[pt], cfg.z);
    r.conjectured = summarize(std::move(c), truth.omega);
    r.proposed = summarize(std::move(pr), truth.omega);
    out.push_back(std::move(r));
  }
  return out;
}

double standard_quantum_limit(double tau, double n_shots) { return 1.0 / std::sqrt(9.0 * n_shots * tau * tau); }

double min_detectable_signal(SensitivityModel model, const SensorParams& p, const EffectiveParams& ep, double tau,
                             double n_shots) {
  double x = 0.0, dx = 0.0;
  switch (model) {
    case SensitivityModel::naive: {
      const double env = std::exp(-3.0 * p.gamma_err * tau);
      x = env * std::cos(3.0 * p.omega * tau);
      dx = -3.0 * tau * env * std::sin(3.0 * p.omega * tau);
      break;
    }
    case SensitivityModel::proposed_reduced: {
      const double env = std::exp(-3.0 * ep.gamma_eff * tau);
      x = env * std::cos(3.0 * ep.omega_eff * tau);
      dx = -3.0 * tau * env * std::sin(3.0 * ep.omega_eff * tau) * (1.0 - 2.0 * p.gamma_err / p.gamma_qec);
      break;
    }
    case SensitivityModel::proposed_reduced_refined: {
      const EffectiveParamsDerivative d = effective_params_domega(p, ep.order);
      const double env = std::exp(-3.0 * ep.gamma_eff * tau);
      const double ph = 3.0 * ep.omega_eff * tau;
      x = env * std::cos(ph);
      dx = -3.0 * tau * env * (d.d_gamma_eff * std::cos(ph) + d.d_omega_eff * std::sin(ph));
      break;
    }
    case SensitivityModel::proposed_full: {
      x = expectation_full(p, tau);
      dx = expectation_full_gradient(p, tau).d_omega;
      break;
    }
  }
  if (dx == 0.0 || !std::isfinite(dx)) return kInf;
  return std::sqrt(std::max(0.0, 1.0 - x * x) / n_shots) / std::abs(dx);
}

std::optional<OptimalTime> optimal_sensing_time(double omega_est, double gamma_est) {
  if (!(omega_est > 0.0)) throw std::invalid_argument("optimal_sensing_time: omega must be > 0");
  if (gamma_est < 0.0) throw std::invalid_argument("optimal_sensing_time: gamma must be >= 0");
  if (gamma_est == 0.0) return std::nullopt;
  const long long k = std::llround(2.0 / std::numbers::pi * omega_est / gamma_est);
  return OptimalTime{std::numbers::pi / 2.0 * static_cast<double>(k) / (3.0 * omega_est), k};
}

}  // namespace qecsense
