#include "experiments.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "softphoton/amplitudes.hpp"
#include "softphoton/fit.hpp"

namespace softphoton::cli {
namespace {

template <class F>
auto annotated(const std::string& context, F&& fn) {
  try {
    return fn();
  } catch (const NumericalError& e) {
    throw NumericalError(e.code(), std::string(e.what()) + " [" + context + "]");
  }
}

std::string family_context(Family f, double lambda) {
  return std::string("family=") + to_string(f) + " lambda=" + format_double(lambda);
}

QuadratureGrid noted(Report& r, QuadratureGrid g) {
  r.note_grid(g.fingerprint_hex());
  return g;
}

void run_exponent(const Config& cfg, Report& r) {
  const ModelSpec base = cfg.model();
  const Vec3 v = cfg.vec3("v"), vp = cfg.vec3("v_prime");
  const auto grid = noted(r, cfg.grid(base.disp, base.ff));
  r.columns = {"family", "lambda", "re_exponent", "im_exponent", "modulus", "ratio"};
  double first = 0.0;
  for (Family f : cfg.families()) {
    const auto x = annotated(family_context(f, base.disp.lambda()),
                             [&] { return overlap_exponent(base.with_family(f), v, vp, grid); });
    if (r.rows.empty()) first = x.value.real();
    r.add_row({to_string(f), x.lambda, x.value.real(), x.value.imag(), std::exp(x.value.real()),
               x.value.real() / first});
  }
}

void run_scan_lambda(const Config& cfg, Report& r) {
  const ModelSpec base = cfg.model();
  const Vec3 v = cfg.vec3("v"), vp = cfg.vec3("v_prime");
  const auto lambdas = cfg.ladder("lambda_ladder");
  std::vector<QuadratureGrid> grids;
  for (double l : lambdas) grids.push_back(noted(r, cfg.grid_for_lambda(l)));

  r.columns = {"family", "lambda", "re_exponent", "im_exponent", "modulus"};
  for (Family f : cfg.families()) {
    std::vector<double> x, y;
    bool monotone = true;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      ModelSpec s = base.with_family(f);
      s.disp = Dispersion(lambdas[i]);
      const auto e = annotated(family_context(f, lambdas[i]), [&] { return overlap_exponent(s, v, vp, grids[i]); });
      if (!y.empty() && !(e.value.real() < y.back())) monotone = false;
      x.push_back(std::log(1.0 / lambdas[i]));
      y.push_back(e.value.real());
      r.add_row({to_string(f), lambdas[i], e.value.real(), e.value.imag(), std::exp(e.value.real())});
    }
    const std::string tag = to_string(f);
    r.summary.emplace_back("slope_" + tag, fit_line(x, y).slope);
    r.summary.emplace_back("modulus_decreasing_" + tag, std::string(monotone ? "true" : "false"));
  }
  // Leading-log prediction for the transverse dipole model.
  const double e2 = base.kin.e * base.kin.e;
  r.summary.emplace_back("slope_reference_PFB", -2.0 * std::numbers::pi / 3.0 * e2 * norm_sq(vp - v));
}

void run_converge(const Config& cfg, Report& r) {
  const ModelSpec s = cfg.model();
  const auto times = cfg.ladder("t_ladder");
  const auto grid = noted(r, cfg.grid(s.disp, s.ff));
  const auto prof = annotated(family_context(s.family, s.disp.lambda()) + " eps=" + format_double(s.eps), [&] {
    return convergence_profile(s.family, s.kin, s.disp, s.ff, s.eps, times, grid);
  });
  r.columns = {"t", "strong_residual", "weak_residual", "strong_ratio"};
  std::vector<double> weak;
  for (const auto& p : prof.points) {
    r.add_row({p.t, p.strong_residual, p.weak_residual, p.strong_residual / prof.limit_norm});
    weak.push_back(p.weak_residual);
  }
  r.summary.emplace_back("limit_norm", prof.limit_norm);
  r.summary.emplace_back("weak_slope", fit_power_law(times, weak).slope);
}

void run_counterterm_check(const Config& cfg, Report& r) {
  const ModelSpec base = cfg.model();
  const auto ladder = cfg.ladder("eps_ladder");
  const auto grid = noted(r, cfg.grid(base.disp, base.ff));
  const PhaseOptions opts = cfg.phase_options();
  r.columns = {"family", "counterterm", "counterterm_scale", "eps", "limiting_phase", "verdict"};
  for (Family f : cfg.families()) {
    const ModelSpec s = base.with_family(f);
    const auto kind = opts.counterterm_override.value_or(natural_counterterm(f));
    const auto pts = annotated(family_context(f, base.disp.lambda()), [&] { return cancellation_scan(s, ladder, grid, opts); });
    const auto sum = summarize_cancellation(pts);
    for (const auto& p : pts) {
      r.add_row({to_string(f), to_string(kind), opts.counterterm_scale, p.eps, p.argument, to_string(sum.verdict)});
    }
    const std::string tag = to_string(f);
    r.summary.emplace_back("cauchy_slope_" + tag, sum.cauchy_slope);
    r.summary.emplace_back("magnitude_slope_" + tag, sum.magnitude_slope);
    r.summary.emplace_back("verdict_" + tag, std::string(to_string(sum.verdict)));
  }
}

void run_emission(const Config& cfg, Report& r) {
  const ModelSpec base = cfg.model().with_family(Family::BN_F);
  const Vec3 v = cfg.vec3("v"), vp = cfg.vec3("v_prime");
  const PhotonList photons = cfg.photons();
  const Complex hard = cfg.complex_number("hard");
  const auto grid = noted(r, cfg.grid(base.disp, base.ff));
  auto amp = [&](const PhotonList& ps) {
    return annotated(family_context(Family::BN_F, base.disp.lambda()),
                     [&] { return emission_amplitude(base, v, vp, ps, hard, grid); });
  };

  r.columns = {"photons", "re_amplitude", "im_amplitude", "re_ratio", "im_ratio", "re_product", "im_product"};
  const Complex zero = amp({});
  Complex product = 1.0;
  double worst = 0.0;
  PhotonList prefix;
  for (std::size_t n = 0; n <= photons.size(); ++n) {
    if (n > 0) {
      prefix.push_back(photons[n - 1]);
      product *= amp({photons[n - 1]}) / zero;
    }
    const Complex a = n == 0 ? zero : amp(prefix);
    const Complex ratio = a / zero;
    const double gap = std::abs(ratio - product);
    worst = std::max(worst, std::abs(product) > 0.0 ? gap / std::abs(product) : gap);
    r.add_row({static_cast<std::int64_t>(n), a.real(), a.imag(), ratio.real(), ratio.imag(), product.real(),
               product.imag()});
  }
  r.summary.emplace_back("factorization_rel_residual", worst);
}

void run_compare_gauges(const Config& cfg, Report& r) {
  const ModelSpec base = cfg.model();
  const Vec3 v = cfg.vec3("v"), vp = cfg.vec3("v_prime");
  const auto cmp = annotated("gauge comparison", [&] {
    return gauge_compare_bn(base, v, vp, cfg.ladder("lambda_ladder"),
                            [&](const Dispersion& d, const FormFactor& ff) { return noted(r, cfg.grid(d, ff)); });
  });
  r.columns = {"lambda",          "re_feynman",        "re_coulomb", "re_dipole_coulomb",
               "re_dipole_feynman", "max_abs_kj",      "max_abs_kj_dipole"};
  for (const auto& row : cmp.rows) {
    r.add_row({row.lambda, row.re_feynman, row.re_coulomb, row.re_dipole_coulomb, row.re_dipole_feynman,
               row.max_abs_kj, row.max_abs_kj_dipole});
  }
  r.summary = {{"slope_feynman", cmp.slope_feynman},
               {"slope_coulomb", cmp.slope_coulomb},
               {"slope_rel_diff", cmp.slope_rel_diff},
               {"offset_mean", cmp.offset_mean},
               {"offset_spread", cmp.offset_spread},
               {"slope_dipole_coulomb", cmp.slope_dipole_coulomb},
               {"slope_dipole_feynman", cmp.slope_dipole_feynman},
               {"dipole_slope_ratio", cmp.dipole_slope_ratio},
               {"max_abs_kj", cmp.max_abs_kj}};
}

void run_crosscheck(const Config& cfg, Report& r) {
  const ModelSpec base = cfg.model();
  const Vec3 v = cfg.vec3("v"), vp = cfg.vec3("v_prime");
  const auto grid = noted(r, cfg.grid(base.disp, base.ff));
  CrosscheckOptions opts;
  opts.horizon = cfg.number("horizon");
  opts.time_nodes = cfg.integer("time_nodes");
  r.columns = {"family", "re_coherent", "im_coherent", "re_dyson", "im_dyson", "rel_diff"};
  double worst = 0.0;
  for (Family f : cfg.families()) {
    const auto rep = annotated(family_context(f, base.disp.lambda()) + " eps=" + format_double(base.eps),
                               [&] { return perturbative_crosscheck(base.with_family(f), v, vp, grid, opts); });
    worst = std::max(worst, rep.rel_diff);
    r.add_row({to_string(f), rep.coherent.real(), rep.coherent.imag(), rep.dyson.real(), rep.dyson.imag(),
               rep.rel_diff});
  }
  r.summary.emplace_back("max_rel_diff", worst);
}

void fill_grid_spec(const Config& cfg, Report& r) {
  const auto g = cfg.grid_spec(Dispersion(cfg.number("lambda")), FormFactor(cfg.number("uv_scale")));
  r.grid_spec = {{"k_min", format_double(g.k_min)},
                 {"k_max", format_double(g.k_max)},
                 {"radial_panels", std::to_string(g.radial_panels)},
                 {"nodes_per_panel", std::to_string(g.nodes_per_panel)},
                 {"n_cos", std::to_string(g.n_cos)},
                 {"n_phi", std::to_string(g.n_phi)},
                 {"max_panel_width", format_double(g.max_panel_width)}};
}

}  // namespace

Report validation_report(const Config& cfg, const std::vector<std::string>& diagnostics) {
  Report r;
  r.experiment = cfg.experiment();
  r.config = cfg.resolved();
  r.columns = {"diagnostic"};
  for (const auto& d : diagnostics) r.add_row({d});
  r.summary.emplace_back("violations", static_cast<std::int64_t>(diagnostics.size()));
  return r;
}

Report run_experiment(const Config& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Report r;
  r.experiment = cfg.experiment();
  r.config = cfg.resolved();
  fill_grid_spec(cfg, r);
  const std::string& x = cfg.experiment();
  if (x == "exponent") run_exponent(cfg, r);
  else if (x == "scan-lambda") run_scan_lambda(cfg, r);
  else if (x == "converge") run_converge(cfg, r);
  else if (x == "counterterm-check") run_counterterm_check(cfg, r);
  else if (x == "emission") run_emission(cfg, r);
  else if (x == "compare-gauges") run_compare_gauges(cfg, r);
  else if (x == "crosscheck") run_crosscheck(cfg, r);
  else throw ConfigError("experiment", "no runner for '" + x + "'");
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace softphoton::cli
