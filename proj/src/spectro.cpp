#include "nanoshell/spectro.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nanoshell/errors.hpp"
#include "nanoshell/quadrature.hpp"
#include "nanoshell/specfun.hpp"

namespace nanoshell {

namespace {

constexpr complex kI{0.0, 1.0};
constexpr int kResidualWindow = 10;
constexpr double kMetalMargin = 0.005;  // in units of r_s

int orient_index(Orientation o) { return o == Orientation::radial ? 0 : 1; }

// max - min of the last few partial sums, relative to the final one.
double spread(const std::vector<double>& partial) {
  if (partial.empty()) return 0.0;
  const std::size_t start = partial.size() > kResidualWindow ? partial.size() - kResidualWindow : 0;
  const auto [lo, hi] = std::minmax_element(partial.begin() + start, partial.end());
  const double scale = std::abs(partial.back());
  if (scale == 0.0) return *hi - *lo == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return (*hi - *lo) / scale;
}

// Geometric extrapolation of the remaining shift terms from the last few.
double shift_tail(const std::vector<double>& terms) {
  const int n = static_cast<int>(terms.size());
  if (n < 5) return 0.0;
  const double last = std::abs(terms[n - 1]);
  const double earlier = std::abs(terms[n - 5]);
  if (last == 0.0) return 0.0;
  if (earlier == 0.0) return std::numeric_limits<double>::infinity();
  const double q = std::pow(last / earlier, 0.25);
  if (q >= 1.0) return std::numeric_limits<double>::infinity();
  return last * q / (1.0 - q);
}

std::vector<double> prefix_sums(const std::vector<double>& terms, double offset = 0.0) {
  std::vector<double> out(terms.size());
  double acc = offset;
  for (std::size_t i = 0; i < terms.size(); ++i) out[i] = acc += terms[i];
  return out;
}

struct OrderTerms {
  std::vector<double> wt;     // Im of the scaled self-field, per order
  std::vector<double> shift;  // per order
  std::vector<double> wrad;   // per order
};

OrderTerms order_terms(const MultipoleCoefficients& coeffs, Orientation o) {
  const int l_max = coeffs.l_max();
  OrderTerms t;
  t.wt.assign(l_max, 0.0);
  t.shift.assign(l_max, 0.0);
  t.wrad.assign(l_max, 0.0);
  for (int l = 1; l <= l_max; ++l) {
    const complex v = kI * (coeffs.self_term(o, l, Polarization::tm) +
                            coeffs.self_term(o, l, Polarization::te));
    t.wt[l - 1] = v.imag();
    t.shift[l - 1] = -0.5 * v.real();
  }
  for (const FarFieldTerm& f : ambient_far_field(coeffs, o)) t.wrad[f.l - 1] += f.power();
  return t;
}

SpectroResult assemble(const OrderTerms& t, const std::vector<double>& ohmic, bool ohmic_ok,
                       bool near_metal, int l_max) {
  SpectroResult r;
  const auto wt = prefix_sums(t.wt, 1.0);
  const auto wrad = prefix_sums(t.wrad);
  const auto wohm = prefix_sums(ohmic);
  const auto shift = prefix_sums(t.shift);
  r.wt_norm = wt.back();
  r.wrad_norm = wrad.back();
  r.wohm_norm = wohm.back();
  r.shift_norm = shift.back();
  r.yield = fluorescence_yield(r.wt_norm, r.wrad_norm);
  r.photostability = photostability_ratio(r.wrad_norm);
  r.l_used = l_max;
  r.wt_residual = spread(wt);
  r.wrad_residual = spread(wrad);
  r.wohm_residual = spread(wohm);
  r.shift_tail = shift_tail(t.shift);
  r.converged = r.wt_residual < 1e-8 && r.wrad_residual < 1e-8 && r.wohm_residual < 1e-6 &&
                ohmic_ok && !near_metal;
  return r;
}

SpectroResult average(const SpectroResult& rad, const SpectroResult& tan) {
  SpectroResult a;
  a.shift_norm = orientation_average(rad.shift_norm, tan.shift_norm);
  a.wt_norm = orientation_average(rad.wt_norm, tan.wt_norm);
  a.wrad_norm = orientation_average(rad.wrad_norm, tan.wrad_norm);
  a.wohm_norm = orientation_average(rad.wohm_norm, tan.wohm_norm);
  a.yield = fluorescence_yield(a.wt_norm, a.wrad_norm);
  a.photostability = photostability_ratio(a.wrad_norm);
  a.l_used = rad.l_used;
  a.converged = rad.converged && tan.converged;
  a.wt_residual = std::max(rad.wt_residual, tan.wt_residual);
  a.wrad_residual = std::max(rad.wrad_residual, tan.wrad_residual);
  a.wohm_residual = std::max(rad.wohm_residual, tan.wohm_residual);
  a.shift_tail = orientation_average(rad.shift_tail, tan.shift_tail);
  return a;
}

}  // namespace

SelfField self_field(const MultipoleCoefficients& coeffs, Orientation o) {
  SelfField s;
  s.partial.reserve(coeffs.l_max());
  for (int l = 1; l <= coeffs.l_max(); ++l) {
    s.value += kI * (coeffs.self_term(o, l, Polarization::tm) +
                     coeffs.self_term(o, l, Polarization::te));
    s.partial.push_back(s.value);
  }
  return s;
}

SelfField self_field(const StratifiedSphere& sphere, const DipoleSource& dipole, int l_max) {
  return self_field(solve_dipole_fields(sphere, dipole, l_max), dipole.orientation);
}

double frequency_shift(const StratifiedSphere& sphere, const DipoleSource& dipole, int l_max) {
  return -0.5 * self_field(sphere, dipole, l_max).value.real();
}

double total_rate(const StratifiedSphere& sphere, const DipoleSource& dipole, int l_max) {
  return 1.0 + self_field(sphere, dipole, l_max).value.imag();
}

double radiative_rate(const MultipoleCoefficients& coeffs, Orientation o) {
  double p = 0.0;
  for (const FarFieldTerm& f : ambient_far_field(coeffs, o)) p += f.power();
  return p;
}

double radiative_rate(const StratifiedSphere& sphere, const DipoleSource& dipole, int l_max) {
  return radiative_rate(solve_dipole_fields(sphere, dipole, l_max), dipole.orientation);
}

double OhmicLoss::total(Orientation o) const {
  const auto& v = o == Orientation::radial ? radial : tangential;
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

OhmicLoss ohmic_loss(const MultipoleCoefficients& coeffs, const StratifiedSphere& sphere,
                     const QuadratureConfig& cfg) {
  const int l_max = coeffs.l_max();
  const int host = coeffs.host();
  const double k0 = coeffs.vacuum_wavenumber();
  const Medium& hm = coeffs.media()[host - 1];
  const double n_s = hm.index.real();
  const double k_s = k0 * n_s;
  const double eps_s = n_s * n_s / hm.permeability;

  OhmicLoss loss;
  loss.radial.assign(l_max, 0.0);
  loss.tangential.assign(l_max, 0.0);

  const quadrature::Options qopts{cfg.rel_tol, cfg.abs_tol, cfg.max_panels};
  for (int j = 1; j <= coeffs.region_count(); ++j) {
    if (j == host) continue;
    const Medium& m = coeffs.media()[j - 1];
    const complex eps_j = m.index * m.index / m.permeability;
    if (!(eps_j.imag() > 0.0)) continue;
    if (j == coeffs.region_count()) {
      throw DomainError("ohmic_loss: absorbing ambient medium has no finite loss");
    }

    const double pref_tm = eps_s / k_s * eps_j.imag() / std::norm(eps_j);
    const double pref_te = k0 * k0 * hm.permeability / k_s * eps_j.imag();
    const double k_abs2 = std::norm(k0 * m.index);

    // amps[o][pol][l-1]
    std::array<std::array<std::vector<ScaledWave>, 2>, 2> amps;
    for (Orientation o : {Orientation::radial, Orientation::tangential}) {
      for (Polarization pol : {Polarization::tm, Polarization::te}) {
        auto& v = amps[orient_index(o)][pol == Polarization::tm ? 0 : 1];
        v.reserve(l_max);
        for (int l = 1; l <= l_max; ++l) v.push_back(coeffs.field(o, l, pol, j));
      }
    }

    const bool core = j == 1;
    auto integrand = [&](double r, std::span<double> out) {
      std::fill(out.begin(), out.end(), 0.0);
      const complex z = k0 * m.index * r;
      if (std::abs(z) < specfun::kMinArgument) return;
      const auto t = specfun::scaled_riccati(l_max, z);
      for (int o = 0; o < 2; ++o) {
        for (int l = 1; l <= l_max; ++l) {
          const double ll1 = l * (l + 1.0);
          const WaveAmplitudes a = amps[o][0][l - 1].in_scale(t.scale[l]);
          const WaveAmplitudes b = amps[o][1][l - 1].in_scale(t.scale[l]);
          const complex u_tm = a.regular * t.psi[l] + a.outgoing * t.xi[l];
          const complex du_tm = a.regular * t.dpsi[l] + a.outgoing * t.dxi[l];
          const complex u_te = b.regular * t.psi[l] + b.outgoing * t.xi[l];
          out[o * l_max + (l - 1)] =
              pref_tm * (ll1 * std::norm(u_tm) / (r * r) + k_abs2 * std::norm(du_tm)) +
              pref_te * std::norm(u_te);
        }
      }
    };

    const double a = core ? 0.0 : sphere.interface_radius(j - 1);
    const double b = sphere.interface_radius(j);
    std::vector<double> breaks;
    if (b - a > 2.0 * cfg.edge_offset_nm) {
      breaks = {a + cfg.edge_offset_nm, b - cfg.edge_offset_nm};
    }
    const auto res = quadrature::integrate(integrand, 2 * static_cast<std::size_t>(l_max), a, b,
                                           breaks, 2, qopts);
    double worst = 0.0;
    for (int o = 0; o < 2; ++o) {
      double total = 0.0;
      for (int l = 0; l < l_max; ++l) total += res.value[o * l_max + l];
      if (total > 0.0) worst = std::max(worst, res.group_error[o] / total);
    }
    if (worst >= loss.achieved_rel_error) {
      loss.achieved_rel_error = worst;
      loss.worst_region = j;
    }
    if (!res.converged) {
      std::ostringstream msg;
      msg << "ohmic_loss: quadrature did not converge in region " << j << " after "
          << res.panels << " panels (achieved relative error " << worst << ", requested "
          << cfg.rel_tol << ")";
      throw NumericalError(msg.str());
    }
    for (int l = 0; l < l_max; ++l) {
      loss.radial[l] += res.value[l];
      loss.tangential[l] += res.value[l_max + l];
    }
  }
  return loss;
}

double ohmic_rate(const StratifiedSphere& sphere, const DipoleSource& dipole, int l_max,
                  const QuadratureConfig& cfg) {
  const auto coeffs = solve_dipole_fields(sphere, dipole, l_max);
  return ohmic_loss(coeffs, sphere, cfg).total(dipole.orientation);
}

double fluorescence_yield(double wt_norm, double wrad_norm) {
  if (!(wt_norm > 0.0)) {
    throw DomainError("fluorescence_yield: total rate must be positive");
  }
  return wrad_norm / wt_norm;
}

double orientation_average(double radial_value, double tangential_value) {
  return (radial_value + 2.0 * tangential_value) / 3.0;
}

double quasistatic_shift(double eps_sphere, double eps_host, double k2_rs, double kd_rd,
                         Orientation o) {
  const double sum = eps_sphere + eps_host;
  if (sum == 0.0) throw DomainError("quasistatic_shift: pole at eps_sphere + eps_host = 0");
  const double gap = k2_rs - kd_rd;
  if (gap == 0.0) throw DomainError("quasistatic_shift: dipole on the sphere surface");
  const double tangential = 3.0 / 32.0 * (eps_sphere - eps_host) / sum / (gap * gap * gap);
  return o == Orientation::radial ? 2.0 * tangential : tangential;
}

double photostability_ratio(double wrad_norm) { return wrad_norm; }

PointEvaluation evaluate_point(const StratifiedSphere& sphere, double radius_nm,
                               double wavelength_nm, const SpectroOptions& opts) {
  const auto coeffs = solve_dipole_fields(sphere, radius_nm, wavelength_nm, opts.l_max);
  OhmicLoss loss;
  loss.radial.assign(opts.l_max, 0.0);
  loss.tangential.assign(opts.l_max, 0.0);
  if (opts.ohmic) loss = ohmic_loss(coeffs, sphere, opts.quadrature);

  const bool near_metal = sphere.distance_to_absorbing_interface(radius_nm, wavelength_nm) <
                          kMetalMargin * sphere.outer_radius();
  PointEvaluation p;
  p.radial = assemble(order_terms(coeffs, Orientation::radial), loss.radial, loss.converged,
                      near_metal, opts.l_max);
  p.tangential = assemble(order_terms(coeffs, Orientation::tangential), loss.tangential,
                          loss.converged, near_metal, opts.l_max);
  p.averaged = average(p.radial, p.tangential);
  return p;
}

SpectroResult evaluate(const StratifiedSphere& sphere, const DipoleSource& dipole,
                       const SpectroOptions& opts) {
  return evaluate_point(sphere, dipole.radius_nm, dipole.wavelength_nm, opts)
      .get(dipole.orientation);
}

ConvergenceReport convergence_report(const StratifiedSphere& sphere, const DipoleSource& dipole,
                                     const SpectroOptions& opts) {
  const auto coeffs = solve_dipole_fields(sphere, dipole, opts.l_max);
  const OrderTerms t = order_terms(coeffs, dipole.orientation);
  std::vector<double> ohm(opts.l_max, 0.0);
  if (opts.ohmic) {
    const auto loss = ohmic_loss(coeffs, sphere, opts.quadrature);
    ohm = dipole.orientation == Orientation::radial ? loss.radial : loss.tangential;
  }
  const auto wt = prefix_sums(t.wt, 1.0);
  const auto wrad = prefix_sums(t.wrad);
  const auto shift = prefix_sums(t.shift);
  const auto wohm = prefix_sums(ohm);

  ConvergenceReport rep;
  for (int l = 1; l <= opts.l_max; ++l) {
    rep.rows.push_back({l, wt[l - 1], wrad[l - 1], shift[l - 1], wohm[l - 1]});
  }
  auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-8 * std::abs(b);
  };
  for (int l = opts.l_max; l >= 1; --l) {
    if (!close(wt[l - 1], wt.back()) || !close(wrad[l - 1], wrad.back())) break;
    rep.eight_digit_order = l;
  }
  // A plateau shorter than ten orders is not evidence of convergence.
  if (rep.eight_digit_order > opts.l_max - 10) rep.eight_digit_order = 0;
  return rep;
}

}  // namespace nanoshell
