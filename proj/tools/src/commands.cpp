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


#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include "qecsense/closedform.hpp"
#include "qecsense/discrete.hpp"
#include "qecsense/inference.hpp"
#include "qecsense/lindblad.hpp"
#include "qecsense/parallel.hpp"
#include "qecsense/spectral.hpp"

#ifndef QECSENSE_VERSION_STRING
#define QECSENSE_VERSION_STRING "unknown"
#endif

namespace qecsense::cli {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr const char* kUnits = "omega = 1; tau in units of 1/omega; rates and angular frequencies in units of omega";

json base_config(std::string_view command) {
  return json{{"command", std::string(command)},
              {"description", ""},
              {"seed", kDefaultSeed},
              {"format", "csv"},
              {"output_path", "-"}};
}

json params(double gamma_err, double gamma_qec) {
  return json{{"omega", 1.0}, {"gamma_err", gamma_err}, {"gamma_qec", gamma_qec}};
}

json grid(double t_max, std::size_t n) { return json{{"t_max", t_max}, {"n_points", n}}; }

// ---- config access -------------------------------------------------------

const json& at(const json& cfg, const char* ptr) {
  const json::json_pointer p(ptr);
  if (!cfg.contains(p)) throw std::invalid_argument(std::string("config: missing ") + ptr);
  return cfg.at(p);
}

double num(const json& cfg, const char* ptr) {
  const json& v = at(cfg, ptr);
  if (!v.is_number()) throw std::invalid_argument(std::string("config: ") + ptr + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw std::invalid_argument(std::string("config: ") + ptr + " must be finite");
  return x;
}

double positive(const json& cfg, const char* ptr) {
  const double x = num(cfg, ptr);
  if (!(x > 0.0)) throw std::invalid_argument(std::string("config: ") + ptr + " must be > 0");
  return x;
}

std::uint64_t count(const json& cfg, const char* ptr, std::uint64_t min_value = 1) {
  const json& v = at(cfg, ptr);
  if (v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0)) {
    const auto n = v.get<std::uint64_t>();
    if (n >= min_value) return n;
  } else if (v.is_number_float()) {
    const double x = v.get<double>();
    if (x == std::floor(x) && x >= static_cast<double>(min_value) && x < 1e15) return static_cast<std::uint64_t>(x);
  }
  throw std::invalid_argument(std::string("config: ") + ptr + " must be an integer >= " + std::to_string(min_value));
}

std::string str(const json& cfg, const char* ptr) {
  const json& v = at(cfg, ptr);
  if (!v.is_string()) throw std::invalid_argument(std::string("config: ") + ptr + " must be a string");
  return v.get<std::string>();
}

bool flag(const json& cfg, const char* ptr) {
  const json& v = at(cfg, ptr);
  if (!v.is_boolean()) throw std::invalid_argument(std::string("config: ") + ptr + " must be true or false");
  return v.get<bool>();
}

SensorParams sensor(const json& cfg) {
  if (num(cfg, "/params/omega") != 1.0)
    throw std::invalid_argument("config: params.omega is fixed to 1 (rates are entered in units of omega)");
  SensorParams p;
  p.gamma_err = num(cfg, "/params/gamma_err");
  p.gamma_qec = num(cfg, "/params/gamma_qec");
  p.validate();
  return p;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n == 1) return {a};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

std::vector<double> logspace(double a, double b, std::size_t n) {
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("log-spaced sweep needs positive bounds");
  auto v = linspace(std::log(a), std::log(b), n);
  for (auto& x : v) x = std::exp(x);
  return v;
}

std::vector<double> ramsey_grid(const json& cfg) {
  return uniform_grid(0.0, positive(cfg, "/grid/t_max"), count(cfg, "/grid/n_points", 2));
}

Cell boolean(bool b) { return std::string(b ? "true" : "false"); }

struct Deviation {
  double rmse = 0.0;
  double max_abs = 0.0;
  std::size_t n = 0;
};

Deviation deviation(const std::vector<double>& d) {
  Deviation r;
  double s = 0.0;
  for (double x : d) {
    if (!std::isfinite(x)) continue;
    s += x * x;
    r.max_abs = std::max(r.max_abs, std::abs(x));
    ++r.n;
  }
  if (r.n) r.rmse = std::sqrt(s / static_cast<double>(r.n));
  return r;
}

Deviation deviation(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return deviation(d);
}

std::vector<double> sampled(const std::vector<double>& taus, auto&& f) {
  std::vector<double> v(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) v[i] = f(taus[i]);
  return v;
}

// Output under construction: columns carry a one-line description that ends
// up in the schema metadata line.
struct Run {
  Table table;
  json schema = json::object();
  json summary = json::object();
  std::vector<std::string> warnings;

  void column(std::string name, std::string description) {
    schema[name] = std::move(description);
    table.columns.push_back(std::move(name));
  }
};

// ---- ramsey / spectrum ---------------------------------------------------

struct RamseyData {
  std::vector<double> taus, ideal, uncorrected, corrected_sim;
};

RamseyData ramsey_data(const SensorParams& p, const std::vector<double>& taus, unsigned workers) {
  RamseyData d;
  d.taus = taus;
  d.ideal = sampled(taus, [&](double t) { return std::cos(3.0 * p.omega * t); });
  SensorParams pu = p;
  pu.gamma_qec = 0.0;
  std::vector<double> sims[2];
  parallel_for(2, workers, [&](std::size_t i) { sims[i] = ramsey_trace(i == 0 ? pu : p, taus).values; });
  d.uncorrected = std::move(sims[0]);
  d.corrected_sim = std::move(sims[1]);
  return d;
}

Run cmd_ramsey(const json& cfg, unsigned workers) {
  const SensorParams p = sensor(cfg);
  const auto d = ramsey_data(p, ramsey_grid(cfg), workers);
  const auto analytic = sampled(d.taus, [&](double t) { return expectation_full(p, t); });
  const auto conj = sampled(d.taus, [&](double t) { return expectation_conjectured(p, t); });

  Run r;
  r.column("tau", "free evolution time");
  r.column("ideal", "cos(3 tau), noiseless logical Ramsey signal");
  r.column("uncorrected", "<sigma_x^L> from the Lindblad simulation with gamma_qec = 0");
  r.column("corrected_sim", "<sigma_x^L> from the Lindblad simulation with correction");
  r.column("corrected_analytic", "closed-form <sigma_x^L> of the corrected sensor");
  r.column("conjectured", "exp(-3 gamma_err tau) cos(3 tau)");
  for (std::size_t i = 0; i < d.taus.size(); ++i)
    r.table.add_row({d.taus[i], d.ideal[i], d.uncorrected[i], d.corrected_sim[i], analytic[i], conj[i]});

  const auto dev = deviation(d.corrected_sim, analytic);
  r.summary = {{"rmse_corrected_sim_vs_analytic", dev.rmse},
               {"max_abs_corrected_sim_vs_analytic", dev.max_abs},
               {"n_points", dev.n}};
  return r;
}

Window parse_window(const std::string& s) {
  if (s == "rect") return Window::rect;
  if (s == "hann") return Window::hann;
  throw std::invalid_argument("config: options.window must be rect or hann");
}

Run cmd_spectrum(const json& cfg, unsigned workers) {
  const SensorParams p = sensor(cfg);
  const Window window = parse_window(str(cfg, "/options/window"));
  const int pad = static_cast<int>(count(cfg, "/options/pad"));
  const double f_max = num(cfg, "/options/f_max");
  const auto d = ramsey_data(p, ramsey_grid(cfg), workers);

  const Spectrum s_ideal = spectrum(d.taus, d.ideal, pad, window);
  const Spectrum s_unc = spectrum(d.taus, d.uncorrected, pad, window);
  const Spectrum s_cor = spectrum(d.taus, d.corrected_sim, pad, window);

  Run r;
  r.column("freq", "angular frequency of the zero-padded DFT bin");
  r.column("ideal", "|DFT| of the ideal trace");
  r.column("uncorrected", "|DFT| of the uncorrected simulated trace");
  r.column("corrected", "|DFT| of the corrected simulated trace");
  for (std::size_t i = 0; i < s_ideal.freqs.size(); ++i) {
    if (f_max > 0.0 && s_ideal.freqs[i] > f_max) break;
    r.table.add_row({s_ideal.freqs[i], s_ideal.magnitudes[i], s_unc.magnitudes[i], s_cor.magnitudes[i]});
  }

  auto peak = [](const Spectrum& s) {
    return json{{"freq", s.peak_freq}, {"uncertainty", s.peak_uncertainty}, {"bin_width", s.bin_width}};
  };
  json predicted = {{"ideal", 3.0 * p.omega}};
  if (p.gamma_err < p.omega) predicted["uncorrected"] = 3.0 * uncorrected_frequency(p);
  if (p.gamma_qec > 0.0) {
    predicted["corrected_order1"] = 3.0 * effective_params(p, 1).omega_eff;
    predicted["corrected_order3"] = 3.0 * effective_params(p, 3).omega_eff;
  }
  const double tol = s_ideal.peak_uncertainty + s_unc.peak_uncertainty;
  r.summary = {{"peaks", {{"ideal", peak(s_ideal)}, {"uncorrected", peak(s_unc)}, {"corrected", peak(s_cor)}}},
               {"predicted", predicted},
               {"uncorrected_below_ideal", s_unc.peak_freq < s_ideal.peak_freq - tol},
               {"corrected_below_ideal", s_cor.peak_freq < s_ideal.peak_freq - tol}};
  return r;
}

// ---- sensitivity ---------------------------------------------------------

Run cmd_sensitivity(const json& cfg, unsigned) {
  const SensorParams truth = sensor(cfg);
  SensorParams est = truth;
  est.omega = positive(cfg, "/options/omega_est");
  const json& g = at(cfg, "/options/gamma_est");
  est.gamma_err = g.is_string() ? truth.gamma_err : num(cfg, "/options/gamma_est");
  est.validate();
  if (!(est.gamma_qec > 0.0)) throw std::invalid_argument("sensitivity: gamma_qec must be > 0");
  const double n_shots = positive(cfg, "/options/n_shots");
  const double t_max = positive(cfg, "/grid/t_max");
  const std::size_t n = count(cfg, "/grid/n_points", 2);
  // Both curves see the same estimates; for the proposed curve they play the
  // role of the fitted effective parameters.
  const EffectiveParams ep{est.omega, est.gamma_err, 1};

  Run r;
  r.column("tau", "sensing time, tau_i = t_max (i + 1) / n_points");
  r.column("naive", "|delta omega| from exp(-3 gamma tau) cos(3 omega tau) at the estimates");
  r.column("proposed", "|delta omega| of the reduced corrected model, estimates taken as effective parameters");
  r.column("sql", "1 / (3 tau sqrt(N))");

  double best_naive = kInf, best_prop = kInf, arg_naive = 0.0, arg_prop = 0.0;
  bool above_sql = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double tau = t_max * static_cast<double>(i + 1) / static_cast<double>(n);
    const double a = min_detectable_signal(SensitivityModel::naive, est, ep, tau, n_shots);
    const double b = min_detectable_signal(SensitivityModel::proposed_reduced, est, ep, tau, n_shots);
    const double sql = standard_quantum_limit(tau, n_shots);
    if (a < best_naive) best_naive = a, arg_naive = tau;
    if (b < best_prop) best_prop = b, arg_prop = tau;
    const double slack = 1e-12 * sql;
    if (a < sql - slack || b < sql - slack) above_sql = false;
    r.table.add_row({tau, a, b, sql});
  }

  const double step = t_max / static_cast<double>(n);
  const auto opt = optimal_sensing_time(est.omega, est.gamma_err);
  r.summary = {{"n_shots", n_shots}, {"grid_step", step}, {"argmin_naive", arg_naive},
               {"argmin_proposed", arg_prop}, {"above_sql", above_sql}};
  if (opt) {
    const bool naive_ok = std::abs(arg_naive - opt->tau_opt) <= step * (1.0 + 1e-9);
    const bool prop_ok = std::abs(arg_prop - opt->tau_opt) <= step * (1.0 + 1e-9);
    r.summary["tau_opt"] = opt->tau_opt;
    r.summary["k_opt"] = opt->k_opt;
    r.summary["naive_matches_tau_opt"] = naive_ok;
    r.summary["proposed_matches_tau_opt"] = prop_ok;
    if (!prop_ok) r.warnings.push_back("proposed |delta omega| argmin is not within one grid step of tau_opt");
  } else {
    r.summary["tau_opt"] = nullptr;
    r.summary["k_opt"] = nullptr;
    r.warnings.push_back("gamma_est = 0: no optimal sensing time");
  }
  if (!above_sql) r.warnings.push_back("a sensitivity curve falls below the standard quantum limit");
  return r;
}

// ---- fit -------------------------------------------------------------------

Run cmd_fit(const json& cfg, unsigned workers) {
  const SensorParams truth = sensor(cfg);
  CrbExperimentConfig c;
  c.truth = truth;
  c.tau_points = linspace(positive(cfg, "/options/tau_min"), positive(cfg, "/options/tau_max"),
                          count(cfg, "/options/tau_points"));
  c.shots_per_point = count(cfg, "/options/shots");
  c.repetitions = count(cfg, "/options/repetitions", 100);
  c.window_samples = count(cfg, "/options/min_samples");
  c.ramp = true;
  c.max_spacing = positive(cfg, "/options/max_spacing");
  c.seed = at(cfg, "/seed").get<std::uint64_t>();
  c.workers = workers;
  c.z = positive(cfg, "/options/z");
  const auto results = run_crb_experiment(c);
  const double knee = decoherence_knee(truth);

  Run r;
  r.column("tau", "longest sample time of the record");
  r.column("model", "model fitted to the shots (data always come from the closed-form corrected model)");
  r.column("var_total", "var(omega_hat) + var(gamma_hat) over repetitions");
  r.column("crb_rhs", "(1/I_omega + 1/I_gamma) / N at the true parameters");
  r.column("tolerance", "z crb_rhs sqrt(2 / (R - 1)), statistical slack on var_total");
  r.column("violated", "var_total < crb_rhs - tolerance");
  r.column("bias_stat", "mean squared deviation of omega_hat from omega minus its sample variance");
  r.column("mean_omega", "mean of omega_hat");
  r.column("mean_gamma", "mean of gamma_hat");

  std::size_t before = 0, conj_viol = 0, prop_viol = 0, bias_better = 0;
  for (const auto& pt : results) {
    r.table.add_row({pt.tau, std::string("conjectured"), pt.conjectured_bound.total_variance,
                     pt.conjectured_bound.crb_rhs, pt.conjectured_bound.tolerance,
                     boolean(pt.conjectured_bound.violated), pt.conjectured.bias_stat, pt.conjectured.mean_omega,
                     pt.conjectured.mean_gamma});
    r.table.add_row({pt.tau, std::string("proposed_full"), pt.proposed_bound.total_variance,
                     pt.proposed_bound.crb_rhs, pt.proposed_bound.tolerance, boolean(pt.proposed_bound.violated),
                     pt.proposed.bias_stat, pt.proposed.mean_omega, pt.proposed.mean_gamma});
    if (pt.proposed.bias_stat < pt.conjectured.bias_stat) ++bias_better;
    if (pt.tau < knee) {
      ++before;
      conj_viol += pt.conjectured_bound.violated;
      prop_viol += pt.proposed_bound.violated;
    }
  }
  r.summary = {{"decoherence_knee", knee},
               {"points_before_knee", before},
               {"conjectured_violations_before_knee", conj_viol},
               {"proposed_violations_before_knee", prop_viol},
               {"conjectured_violation_fraction", before ? static_cast<double>(conj_viol) / before : 0.0},
               {"proposed_less_biased_points", bias_better},
               {"n_points", results.size()}};
  return r;
}

// ---- validity --------------------------------------------------------------

Run cmd_validity(const json& cfg, unsigned) {
  if (num(cfg, "/params/omega") != 1.0) throw std::invalid_argument("config: params.omega is fixed to 1");
  const auto ge = linspace(positive(cfg, "/options/gamma_err_min"), positive(cfg, "/options/gamma_err_max"),
                           count(cfg, "/options/gamma_err_points"));
  const double gq_lo = positive(cfg, "/options/gamma_qec_min"), gq_hi = positive(cfg, "/options/gamma_qec_max");
  const std::size_t ngq = count(cfg, "/options/gamma_qec_points");
  const auto gq = flag(cfg, "/options/log_gamma_qec") ? logspace(gq_lo, gq_hi, ngq) : linspace(gq_lo, gq_hi, ngq);

  Run r;
  r.column("gamma_err", "bit-flip rate");
  r.column("gamma_qec", "correction rate");
  r.column("margin", "left side of the first validity inequality, negative inside the region");
  r.column("valid", "both validity inequalities hold");
  std::size_t n_valid = 0;
  for (double a : ge) {
    for (double b : gq) {
      SensorParams p;
      p.gamma_err = a;
      p.gamma_qec = b;
      const auto v = validity_check(p);
      n_valid += v.valid;
      r.table.add_row({a, b, v.margin, boolean(v.valid)});
    }
  }
  r.summary = {{"n_valid", n_valid}, {"n_points", ge.size() * gq.size()}};
  return r;
}

// ---- compare ---------------------------------------------------------------

struct CompareRow {
  double gamma_qec;
  std::string model_a, model_b;
  Deviation dev;
  bool valid;
  double measured = 0.0, predicted = 0.0, uncertainty = 0.0;
};

std::vector<int> orders_of(const json& cfg) {
  const auto k = count(cfg, "/options/order", 0);
  if (k > 3) throw std::invalid_argument("config: options.order must be 0 (all) or 1..3");
  if (k == 0) return {1, 2, 3};
  return {static_cast<int>(k)};
}

bool valid_at(const SensorParams& p) { return p.gamma_qec > 0.0 && validity_check(p).valid; }

// Square root of the per-shot Fisher information, |dx| / sqrt(1 - x^2).
double root_fisher(double x, double dx) {
  const double v = 1.0 - x * x;
  return v > 0.0 ? std::abs(dx) / std::sqrt(v) : kInf;
}

std::vector<double> normalised_fisher_gap(const std::vector<double>& taus, const std::vector<double>& fa,
                                          const std::vector<double>& fb) {
  std::vector<double> d(taus.size(), kInf);
  for (std::size_t i = 0; i < taus.size(); ++i)
    if (taus[i] > 0.0 && std::isfinite(fa[i]) && std::isfinite(fb[i])) d[i] = (fa[i] - fb[i]) / (3.0 * taus[i]);
  return d;
}

Run cmd_compare(const json& cfg, unsigned workers) {
  SensorParams base;
  if (num(cfg, "/params/omega") != 1.0) throw std::invalid_argument("config: params.omega is fixed to 1");
  base.gamma_err = num(cfg, "/params/gamma_err");
  base.validate();
  const std::string kind = str(cfg, "/options/kind");
  const auto gqs = logspace(positive(cfg, "/options/gamma_qec_min"), positive(cfg, "/options/gamma_qec_max"),
                            count(cfg, "/options/gamma_qec_points"));
  const auto taus = ramsey_grid(cfg);
  const auto orders = orders_of(cfg);

  auto at_gq = [&](double gq) {
    SensorParams p = base;
    p.gamma_qec = gq;
    return p;
  };

  std::vector<std::vector<CompareRow>> rows(gqs.size());
  if (kind == "sim_uncorrected") {
    rows.assign(1, {});
    const SensorParams p = base;
    const auto sim = ramsey_trace(p, taus).values;
    const auto ana = sampled(taus, [&](double t) { return expectation_uncorrected(p, t); });
    rows[0].push_back({0.0, "simulated", "uncorrected_exact", deviation(sim, ana), false});
  } else if (kind == "sim_full") {
    parallel_for(gqs.size(), workers, [&](std::size_t i) {
      const SensorParams p = at_gq(gqs[i]);
      const auto sim = ramsey_trace(p, taus).values;
      const auto ana = sampled(taus, [&](double t) { return expectation_full(p, t); });
      rows[i].push_back({gqs[i], "simulated", "analytic_full", deviation(sim, ana), valid_at(p)});
    });
  } else if (kind == "sim_full_sensitivity") {
    constexpr double h = 1e-4;
    parallel_for(gqs.size(), workers, [&](std::size_t i) {
      const SensorParams p = at_gq(gqs[i]);
      SensorParams lo = p, hi = p;
      lo.omega -= h;
      hi.omega += h;
      const auto x = ramsey_trace(p, taus).values;
      const auto xl = ramsey_trace(lo, taus).values;
      const auto xh = ramsey_trace(hi, taus).values;
      std::vector<double> fs(taus.size()), fa(taus.size());
      for (std::size_t j = 0; j < taus.size(); ++j) {
        fs[j] = root_fisher(x[j], (xh[j] - xl[j]) / (2.0 * h));
        fa[j] = root_fisher(expectation_full(p, taus[j]), expectation_full_gradient(p, taus[j]).d_omega);
      }
      rows[i].push_back({gqs[i], "simulated_sensitivity", "analytic_full_sensitivity",
                         deviation(normalised_fisher_gap(taus, fs, fa)), valid_at(p)});
    });
  } else if (kind == "full_reduced") {
    parallel_for(gqs.size(), workers, [&](std::size_t i) {
      const SensorParams p = at_gq(gqs[i]);
      const auto full = sampled(taus, [&](double t) { return expectation_full(p, t); });
      for (int k : orders) {
        const auto red = sampled(taus, [&](double t) { return expectation_simplified(p, t, k).value; });
        rows[i].push_back({gqs[i], "analytic_full", "analytic_reduced_order" + std::to_string(k),
                           deviation(full, red), valid_at(p)});
      }
    });
  } else if (kind == "full_reduced_sensitivity") {
    parallel_for(gqs.size(), workers, [&](std::size_t i) {
      const SensorParams p = at_gq(gqs[i]);
      std::vector<double> fa(taus.size());
      for (std::size_t j = 0; j < taus.size(); ++j)
        fa[j] = root_fisher(expectation_full(p, taus[j]), expectation_full_gradient(p, taus[j]).d_omega);
      for (int k : orders) {
        const EffectiveParams ep = effective_params(p, k);
        std::vector<double> fb(taus.size());
        for (std::size_t j = 0; j < taus.size(); ++j) {
          const double dw = taus[j] > 0.0 ? min_detectable_signal(SensitivityModel::proposed_reduced, p, ep, taus[j], 1.0)
                                          : kInf;
          fb[j] = std::isfinite(dw) ? 1.0 / dw : 0.0;
        }
        rows[i].push_back({gqs[i], "analytic_full_sensitivity", "reduced_sensitivity_order" + std::to_string(k),
                           deviation(normalised_fisher_gap(taus, fa, fb)), valid_at(p)});
      }
    });
  } else if (kind == "frequency") {
    SweepOptions so;
    so.dt = positive(cfg, "/options/dt");
    so.target_uncertainty = positive(cfg, "/options/target_uncertainty");
    so.workers = workers;
    const auto sweep = effective_frequency_sweep(base, gqs, so);
    for (std::size_t i = 0; i < gqs.size(); ++i) {
      const SensorParams p = at_gq(gqs[i]);
      for (int k : orders) {
        const double pred = effective_params(p, k).omega_eff;
        const double dev = std::abs(sweep[i].omega_eff_measured - pred);
        CompareRow row{gqs[i], "fft_peak", "effective_order" + std::to_string(k), {dev, dev, 1}, valid_at(p)};
        row.measured = sweep[i].omega_eff_measured;
        row.predicted = pred;
        row.uncertainty = sweep[i].uncertainty;
        rows[i].push_back(row);
      }
    }
  } else {
    throw std::invalid_argument("compare: unknown kind '" + kind +
                                "' (sim_full, sim_uncorrected, sim_full_sensitivity, full_reduced, "
                                "full_reduced_sensitivity, frequency)");
  }

  Run r;
  const bool freq = kind == "frequency";
  r.column("gamma_qec", "correction rate");
  r.column("model_a", "reference curve");
  r.column("model_b", "compared curve");
  r.column("rmse", freq ? "|omega_eff measured - predicted|" : "root-mean-square of the pointwise difference");
  r.column("max_abs", "largest pointwise |difference|");
  r.column("n_points", "number of finite points compared");
  r.column("valid", "parameters inside the validity region of the reduced model");
  if (freq) {
    r.column("omega_eff_measured", "FFT peak of the closed-form trace divided by 3");
    r.column("omega_eff_predicted", "effective frequency of the given expansion order");
    r.column("uncertainty", "half a zero-padded bin, divided by 3");
  }
  double worst = 0.0;
  for (const auto& group : rows) {
    for (const auto& c : group) {
      std::vector<Cell> cells{c.gamma_qec, c.model_a, c.model_b, c.dev.rmse, c.dev.max_abs,
                              static_cast<double>(c.dev.n), boolean(c.valid)};
      if (freq) cells.insert(cells.end(), {c.measured, c.predicted, c.uncertainty});
      r.table.add_row(std::move(cells));
      worst = std::max(worst, c.dev.rmse);
    }
  }
  r.summary = {{"kind", kind}, {"max_rmse", worst}, {"n_rows", r.table.rows.size()}};
  if (kind == "sim_full_sensitivity" || kind == "full_reduced_sensitivity")
    r.summary["metric"] = "sqrt(Fisher) difference divided by 3 tau, over tau > 0";
  return r;
}

// ---- discrete --------------------------------------------------------------

Run cmd_discrete(const json& cfg, unsigned) {
  if (num(cfg, "/params/omega") != 1.0) throw std::invalid_argument("config: params.omega is fixed to 1");
  const std::string noise = str(cfg, "/options/noise");
  const double prob = num(cfg, "/options/p");
  CycleSpec spec;
  spec.c = count(cfg, "/options/c", 0);
  spec.delta_tau = num(cfg, "/options/delta_tau");
  if (noise == "optimal") spec.noise = NoiseModel::optimal(prob);
  else if (noise == "realistic") spec.noise = NoiseModel::realistic(prob);
  else throw std::invalid_argument("config: options.noise must be optimal or realistic");
  spec.validate();
  const SensorParams p;
  const auto tr = discrete_traces(spec, p);

  Run r;
  r.column("tau", "c' delta_tau for c' = 0..c");
  r.column("ideal", "noiseless sensing channel applied c' times");
  r.column("uncorrected", "[U o N]^c'");
  r.column("corrected", "[C o U o N]^c'");
  r.column("unbiased_reconstruction", "binomial kernel to the power round(c' p_N) applied to the ideal state");
  for (std::size_t i = 0; i < tr.taus.size(); ++i)
    r.table.add_row({tr.taus[i], tr.ideal[i], tr.uncorrected[i], tr.corrected[i], tr.unbiased[i]});

  const double comm = binomial_commutator_norm(spec, p);
  r.summary = {{"p_noise", spec.p_noise()}, {"commutator_norm", comm}, {"normal_regime", normal_regime(spec)}};
  // Guardrail: the binomial reduction is only exact when the kernel commutes.
  const DensityMatrix rho0 = ramsey_state(3);
  try {
    const auto bf = binomial_form(spec, p, ideal_state(p, rho0, spec.tau()), true);
    const auto it = iterate_cycles(spec, p, rho0);
    r.summary["binomial_vs_iteration"] = max_abs(bf.matrix() - it.matrix());
  } catch (const CommutationError& e) {
    r.summary["binomial_vs_iteration"] = nullptr;
    r.warnings.push_back(std::string(e.what()) +
                         "; unbiased_reconstruction is the rounded kernel power, not an exact identity");
  }
  return r;
}

json with_seed_rules(json cfg, const json& file, const json& overrides, std::optional<std::uint64_t> env_seed) {
  if (env_seed && !file.contains("seed") && !overrides.contains("seed")) cfg["seed"] = *env_seed;
  return cfg;
}

void check_types(const json& def, const json& in, const std::string& where) {
  if (!in.is_object()) throw std::invalid_argument("config" + where + ": expected an object");
  for (auto it = in.begin(); it != in.end(); ++it) {
    const std::string path = where + "/" + it.key();
    if (!def.contains(it.key())) throw std::invalid_argument("config: unknown key " + path);
    const json& d = def.at(it.key());
    const json& v = it.value();
    if (d.is_object()) {
      check_types(d, v, path);
    } else if (d.is_number()) {
      if (!v.is_number()) throw std::invalid_argument("config: " + path + " must be a number");
    } else if (d.is_boolean()) {
      if (!v.is_boolean()) throw std::invalid_argument("config: " + path + " must be true or false");
    } else if (d.is_string()) {
      const bool auto_ok = d == "auto" && (v.is_number() || v == "auto");
      if (!v.is_string() && !auto_ok) throw std::invalid_argument("config: " + path + " must be a string");
    }
  }
}

void collect_flags(const json& j, const std::string& ptr, std::vector<FlagSpec>& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string p = ptr + "/" + it.key();
    if (it.value().is_object()) {
      collect_flags(it.value(), p, out);
      continue;
    }
    if (p == "/params/omega" || p == "/command" || p == "/description" || p == "/seed" || p == "/format" || p == "/output_path") continue;
    std::string name = it.key();
    std::replace(name.begin(), name.end(), '_', '-');
    out.push_back({name, p, "default " + it.value().dump()});
  }
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"ramsey", "spectrum", "sensitivity", "fit",
                                                 "validity", "compare", "discrete"};
  return names;
}

json default_config(std::string_view command) {
  json c = base_config(command);
  if (command == "ramsey") {
    c["params"] = params(0.1, 5.0);
    c["grid"] = grid(20.0, 2000);
  } else if (command == "spectrum") {
    c["params"] = params(0.1, 5.0);
    c["grid"] = grid(20.0, 2000);
    c["options"] = {{"window", "rect"}, {"pad", 8}, {"f_max", 10.0}};
  } else if (command == "sensitivity") {
    c["params"] = params(0.2, 16.6);
    c["grid"] = grid(5.0, 500);
    c["options"] = {{"omega_est", 1.0}, {"gamma_est", "auto"}, {"n_shots", 1.0}};
  } else if (command == "fit") {
    c["params"] = params(0.2, 16.6);
    c["options"] = {{"shots", 10000}, {"repetitions", 200}, {"tau_min", 2.0},     {"tau_max", 48.0},
                    {"tau_points", 12}, {"min_samples", 16},  {"max_spacing", 0.5}, {"z", 3.0}};
  } else if (command == "validity") {
    c["params"] = {{"omega", 1.0}};
    c["options"] = {{"gamma_err_min", 0.01},   {"gamma_err_max", 0.5},   {"gamma_err_points", 50},
                    {"gamma_qec_min", 0.1},    {"gamma_qec_max", 50.0},  {"gamma_qec_points", 100},
                    {"log_gamma_qec", true}};
  } else if (command == "compare") {
    c["params"] = {{"omega", 1.0}, {"gamma_err", 0.1}};
    c["grid"] = grid(20.0, 2000);
    c["options"] = {{"kind", "sim_full"}, {"order", 0},     {"gamma_qec_min", 1.0},     {"gamma_qec_max", 50.0},
                    {"gamma_qec_points", 25}, {"dt", 0.01}, {"target_uncertainty", 0.002}};
  } else if (command == "discrete") {
    c["params"] = {{"omega", 1.0}};
    c["options"] = {{"noise", "optimal"}, {"p", 0.06}, {"c", 100}, {"delta_tau", 0.2}};
  } else {
    throw std::invalid_argument("unknown command '" + std::string(command) + "'");
  }
  return c;
}

const std::vector<FlagSpec>& command_flags(std::string_view command) {
  static std::map<std::string, std::vector<FlagSpec>, std::less<>> cache;
  auto it = cache.find(command);
  if (it == cache.end()) {
    std::vector<FlagSpec> flags;
    collect_flags(default_config(command), "", flags);
    it = cache.emplace(std::string(command), std::move(flags)).first;
  }
  return it->second;
}

json resolve_config(std::string_view command, const json& file, const json& overrides,
                    std::optional<std::uint64_t> env_seed) {
  json cfg = default_config(command);
  if (!file.is_null()) {
    if (file.contains("command") && file.at("command") != std::string(command))
      throw std::invalid_argument("config file is for command " + file.at("command").dump());
    check_types(cfg, file, "");
  }
  if (!overrides.is_null()) check_types(cfg, overrides, "");
  cfg = with_seed_rules(cfg, file, overrides, env_seed);
  if (!file.is_null()) cfg.merge_patch(file);
  if (!overrides.is_null()) cfg.merge_patch(overrides);
  const json& seed = cfg.at("seed");
  if (!(seed.is_number_unsigned() || (seed.is_number_integer() && seed.get<long long>() >= 0)))
    throw std::invalid_argument("config: seed must be a non-negative integer");
  parse_format(cfg.at("format").get<std::string>());
  return cfg;
}

std::uint64_t parse_seed(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("invalid seed '" + std::string(s) + "'");
  return v;
}

CommandResult run_command(const json& config, unsigned workers) {
  const std::string command = config.at("command").get<std::string>();
  Run r;
  if (command == "ramsey") r = cmd_ramsey(config, workers);
  else if (command == "spectrum") r = cmd_spectrum(config, workers);
  else if (command == "sensitivity") r = cmd_sensitivity(config, workers);
  else if (command == "fit") r = cmd_fit(config, workers);
  else if (command == "validity") r = cmd_validity(config, workers);
  else if (command == "compare") r = cmd_compare(config, workers);
  else if (command == "discrete") r = cmd_discrete(config, workers);
  else throw std::invalid_argument("unknown command '" + command + "'");

  r.summary["warnings"] = r.warnings;
  CommandResult out;
  out.table = std::move(r.table);
  out.table.metadata = {json{{"artifact", "qec-sense"}, {"version", QECSENSE_VERSION_STRING},
                             {"config", config}, {"units", kUnits}},
                        json{{"schema", r.schema}}, json{{"summary", r.summary}}};
  out.warnings = std::move(r.warnings);
  return out;
}

}  // namespace qecsense::cli
