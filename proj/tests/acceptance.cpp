// Acceptance run: one PASS/FAIL line per criterion, optionally mirrored to a
// report file. Exits nonzero only when a criterion outside the documented
// known-failure set fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nanoshell/regression.hpp"
#include "nanoshell/specfun.hpp"
#include "nanoshell/spectro.hpp"
#include "nanoshell/sweep.hpp"
#include "oracles/bessel_oracle.hpp"
#include "oracles/mie_oracle.hpp"

using namespace nanoshell;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Criteria 1-6 share the reference table; evaluate it once.
std::map<int, std::vector<RegressionOutcome>> regression_outcomes() {
  std::map<int, std::vector<RegressionOutcome>> by_criterion;
  for (auto& o : run_regressions()) by_criterion[o.entry.criterion].push_back(std::move(o));
  return by_criterion;
}

Verdict from_regressions(const std::vector<RegressionOutcome>& outcomes) {
  Verdict v{true, ""};
  int failed = 0;
  double worst = 0.0;
  std::string first_failure;
  for (const auto& o : outcomes) {
    if (!o.entry.lower_bound) worst = std::max(worst, o.rel_error);
    if (!o.pass) {
      v.pass = false;
      if (failed++ == 0) {
        first_failure = o.label() + " computed " + format_number(o.computed) + " expected " +
                        format_number(o.entry.expected);
      }
    }
  }
  v.detail = std::to_string(outcomes.size() - failed) + "/" + std::to_string(outcomes.size()) +
             " values within tolerance, worst rel error " + fmt("%.3g", worst);
  if (failed > 0) v.detail += "; e.g. " + first_failure;
  return v;
}

Verdict energy_balance() {
  int checked = 0;
  double worst_lossy = 0.0, worst_lossless = 0.0;
  for (const auto& name : preset_names()) {
    const StratifiedSphere s = preset(name);
    const double rs = s.outer_radius();
    const bool lossless = name == "D";
    for (double x : default_grid(s, 595.0)) {
      const double r = x * rs;
      if (!lossless && s.distance_to_interface(r) < 0.01 * rs) continue;
      const PointEvaluation p = evaluate_point(s, r, 595.0);
      for (const auto* q : {&p.radial, &p.tangential}) {
        ++checked;
        if (lossless) {
          worst_lossless = std::max(
              worst_lossless, std::abs(q->wt_norm - q->wrad_norm) / q->wt_norm +
                                  (q->wohm_norm != 0.0 ? 1.0 : 0.0));
        } else {
          worst_lossy = std::max(
              worst_lossy, std::abs(q->wt_norm - q->wrad_norm - q->wohm_norm) / q->wt_norm);
        }
      }
    }
  }
  return {worst_lossy < 1e-4 && worst_lossless < 1e-8,
          std::to_string(checked) + " samples; worst imbalance " + fmt("%.3g", worst_lossy) +
              " (A,B,C,E,F, limit 1e-4), " + fmt("%.3g", worst_lossless) +
              " (D lossless, limit 1e-8)"};
}

Verdict lmax_convergence() {
  SpectroOptions lo, hi;
  lo.l_max = 50;
  hi.l_max = 60;
  lo.ohmic = hi.ohmic = false;
  int checked = 0, failed = 0;
  double worst = 0.0;
  std::string worst_at;
  std::map<std::string, int> failures;
  for (const auto& name : preset_names()) {
    const StratifiedSphere s = preset(name);
    const double rs = s.outer_radius();
    for (double x : default_grid(s, 595.0)) {
      const double r = x * rs;
      if (s.distance_to_interface(r) < 0.005 * rs) continue;
      const PointEvaluation a = evaluate_point(s, r, 595.0, lo);
      const PointEvaluation b = evaluate_point(s, r, 595.0, hi);
      double change = 0.0;
      for (auto o : {Orientation::radial, Orientation::tangential}) {
        change = std::max({change, rel(a.get(o).wt_norm, b.get(o).wt_norm),
                           rel(a.get(o).wrad_norm, b.get(o).wrad_norm)});
      }
      ++checked;
      if (change >= 1e-8) {
        ++failed;
        ++failures[name];
      }
      if (change > worst) {
        worst = change;
        worst_at = name + " r/r_s=" + format_number(x);
      }
    }
  }
  std::string detail = std::to_string(checked - failed) + "/" + std::to_string(checked) +
                       " grid points move < 1e-8; worst " + fmt("%.3g", worst) + " at " +
                       worst_at;
  if (failed > 0) {
    detail += "; failures per preset:";
    for (const auto& [name, n] : failures) detail += " " + name + "=" + std::to_string(n);
  }
  return {failed == 0, detail};
}

Verdict homogeneous_oracle() {
  std::mt19937 rng(595);
  SpectroOptions opts;
  opts.ohmic = false;
  const int n_max = 60;
  double worst_rate = 0.0, worst_shift = 0.0;
  int checked = 0;
  auto compare = [&](const PointEvaluation& p, const oracle::MieRates& m) {
    worst_rate = std::max({worst_rate, rel(p.radial.wt_norm, m.wt_radial),
                           rel(p.tangential.wt_norm, m.wt_tangential),
                           rel(p.radial.wrad_norm, m.wrad_radial),
                           rel(p.tangential.wrad_norm, m.wrad_tangential)});
    // Shifts are in units of the host rate and can pass through zero.
    for (auto [e, o] : {std::pair{p.radial.shift_norm, m.shift_radial},
                        std::pair{p.tangential.shift_norm, m.shift_tangential}}) {
      worst_shift = std::max(worst_shift, std::abs(e - o) / std::max(std::abs(o), 1.0));
    }
    ++checked;
  };
  for (const auto& name : {"D", "E", "F"}) {
    const StratifiedSphere s = preset(name);
    const double a = s.outer_radius();
    const complex n_sphere = s.refractive_index(1, 595.0);
    const double n_host = s.ambient().index.real();
    const bool interior_allowed = name == std::string("D");
    std::uniform_real_distribution<double> outside(1.005, 2.01), inside(0.0, 0.995);
    for (int i = 0; i < 50; ++i) {
      const bool in = interior_allowed && i % 2 == 1;
      const double r = (in ? inside(rng) : outside(rng)) * a;
      const PointEvaluation p = evaluate_point(s, r, 595.0, opts);
      compare(p, in ? oracle::interior_rates(n_sphere.real(), n_host, a, r, 595.0, n_max)
                    : oracle::exterior_rates(n_sphere, n_host, a, r, 595.0, n_max));
    }
  }
  return {worst_rate < 1e-10 && worst_shift < 1e-10,
          std::to_string(checked) + " positions (D in/out, E and F exterior); worst rate rel " +
              fmt("%.3g", worst_rate) + ", worst shift " + fmt("%.3g", worst_shift) +
              " (limit 1e-10)"};
}

Verdict quasistatic_oracle() {
  // The exterior shift series converges slowly near the surface, so both
  // checks use enough orders to resolve it.
  SpectroOptions opts;
  opts.l_max = 2000;
  opts.ohmic = false;

  const StratifiedSphere d = preset("D");
  const double rs = d.outer_radius();
  const double k2 = vacuum_wavenumber(595.0) * 1.33;
  double worst_qs = 0.0;
  for (double x : {1.005, 1.01, 1.02, 1.03, 1.04, 1.05}) {
    const double qs =
        quasistatic_shift(1.45 * 1.45, 1.33 * 1.33, k2 * rs, k2 * x * rs, Orientation::tangential);
    const double full = evaluate_point(d, x * rs, 595.0, opts).tangential.shift_norm;
    worst_qs = std::max(worst_qs, rel(full, qs));
  }

  double lo = 1e300, hi = -1e300;
  int samples = 0;
  for (const auto& name : preset_names()) {
    const StratifiedSphere s = preset(name);
    const auto grid = default_grid(s, 595.0);
    for (int i = 1; i <= s.shell_count(); ++i) {
      const double xi = s.interface_radius(i) / s.outer_radius();
      double below = -1.0, above = 1e300;
      for (double x : grid) {
        if (x < xi) below = std::max(below, x);
        if (x > xi) above = std::min(above, x);
      }
      for (double x : {below, above}) {
        if (std::abs(x - xi) > 0.02) continue;
        const PointEvaluation p = evaluate_point(s, x * s.outer_radius(), 595.0, opts);
        const double ratio = p.radial.shift_norm / p.tangential.shift_norm;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        ++samples;
      }
    }
  }
  return {worst_qs < 0.15 && lo >= 1.8 && hi <= 2.2,
          "D tangential vs quasistatic worst rel " + fmt("%.3g", worst_qs) +
              " over [1.005, 1.05]; radial/tangential ratio in [" + fmt("%.4f", lo) + ", " +
              fmt("%.4f", hi) + "] over " + std::to_string(samples) + " samples (l_max 2000)"};
}

Verdict special_functions() {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> re(0.05, 40.0), im_weak(0.0, 3.0), im_strong(0.0, 20.0);
  std::uniform_int_distribution<int> order(1, 80);
  double wronskian = 0.0, recurrence = 0.0, oracle_err = 0.0;

  for (int trial = 0; trial < 400; ++trial) {
    const bool strong = trial % 2 == 1;
    const complex z = strong ? complex{re(rng) / 4.0, im_strong(rng)} : complex{re(rng), im_weak(rng)};
    if (std::abs(z) < 0.05) continue;
    const int l_max = order(rng);
    const auto t = specfun::bessel_table(l_max, z);
    const auto s = specfun::scaled_riccati(l_max, z);
    for (int l = 0; l <= l_max; ++l) {
      const complex wjh = z * z * (t.j[l] * t.dh1[l] - t.dj[l] * t.h1[l]);
      const complex wpx = s.psi[l] * s.dxi[l] - s.dpsi[l] * s.xi[l];
      wronskian = std::max({wronskian, std::abs(wjh - complex{0.0, 1.0}),
                            std::abs(wpx - complex{0.0, 1.0})});
      if (!strong) {
        const complex wjy = z * z * (t.j[l] * t.dy[l] - t.dj[l] * t.y[l]);
        wronskian = std::max(wronskian, std::abs(wjy - 1.0));
      }
      if (l >= 1 && l < l_max) {
        const complex f = (2.0 * l + 1.0) / z;
        for (const auto* v : {&t.j, &t.h1}) {
          const auto& a = *v;
          const double scale = std::abs(a[l - 1]) + std::abs(a[l + 1]) + std::abs(f * a[l]);
          if (scale > 0.0) {
            recurrence = std::max(recurrence, std::abs(a[l - 1] + a[l + 1] - f * a[l]) / scale);
          }
        }
      }
    }
  }

  const complex n_gold{0.248, 2.986};
  const double k0 = vacuum_wavenumber(595.0);
  std::uniform_real_distribution<double> radius(5.0, 700.0), mag(0.05, 30.0), angle(0.0, 1.5);
  for (int trial = 0; trial < 60; ++trial) {
    const complex z = trial % 2 ? n_gold * k0 * radius(rng) : std::polar(mag(rng), angle(rng));
    const auto t = specfun::bessel_table(60, z);
    const auto zz = oracle::to_mp(z);
    for (int l = 0; l <= 60; l += 6) {
      const complex exact = oracle::to_double(oracle::hankel1_exact(l, zz));
      oracle_err = std::max(oracle_err, std::abs(t.h1[l] - exact) / std::abs(exact));
    }
  }
  return {wronskian < 1e-10 && recurrence < 1e-10 && oracle_err < 1e-8,
          "max Wronskian residual " + fmt("%.3g", wronskian) + ", recurrence " +
              fmt("%.3g", recurrence) + " (limit 1e-10); h1 vs 100-digit closed form " +
              fmt("%.3g", oracle_err) + " (limit 1e-8)"};
}

Verdict determinism() {
  std::string reference;
  bool same = true;
  int runs = 0;
  for (const char* name : {"A", "C"}) {
    reference.clear();
    for (int threads : {1, 1, 2, 4}) {
      SweepConfig cfg = parse_sweep_config(nlohmann::json{
          {"sphere", name}, {"orientations", {"radial", "tangential", "averaged"}}});
      cfg.threads = threads;
      std::ostringstream out;
      write_csv(out, run_sweep(cfg));
      if (reference.empty()) {
        reference = out.str();
      } else {
        same = same && out.str() == reference;
      }
      ++runs;
    }
  }
  return {same, std::to_string(runs) + " full default-grid runs of A and C at 1, 1, 2, 4 threads " +
                    (same ? "byte-identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string report_path;
  app.add_option("--report", report_path, "Also write the verdicts to this file");
  CLI11_PARSE(app, argc, argv);

  // Criteria with a documented, analysed discrepancy; they still print FAIL.
  const std::set<int> known_failures = {5, 8};

  const auto regressions = regression_outcomes();
  std::vector<std::pair<int, std::function<Verdict()>>> criteria;
  for (int c = 1; c <= 6; ++c) {
    criteria.emplace_back(c, [&regressions, c] { return from_regressions(regressions.at(c)); });
  }
  criteria.emplace_back(7, energy_balance);
  criteria.emplace_back(8, lmax_convergence);
  criteria.emplace_back(9, homogeneous_oracle);
  criteria.emplace_back(10, quasistatic_oracle);
  criteria.emplace_back(11, special_functions);
  criteria.emplace_back(12, determinism);

  std::ostringstream report;
  bool unexpected = false;
  for (const auto& [id, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    char line[64];
    std::snprintf(line, sizeof line, "criterion %2d: %s", id, v.pass ? "PASS" : "FAIL");
    report << line << "  " << v.detail << '\n';
    std::fputs((std::string(line) + "  " + v.detail + "\n").c_str(), stdout);
    std::fflush(stdout);
    if (!v.pass && !known_failures.count(id)) unexpected = true;
  }
  if (!report_path.empty()) std::ofstream(report_path) << report.str();
  return unexpected ? 1 : 0;
}
