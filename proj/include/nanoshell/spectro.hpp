#pragma once

#include <vector>

#include "nanoshell/model.hpp"
#include "nanoshell/transfer.hpp"

namespace nanoshell {

struct QuadratureConfig {
  double rel_tol = 1e-7;
  double abs_tol = 1e-14;
  int max_panels = 4000;
  /// Forced panel boundary offset from each face of an absorbing shell [nm].
  double edge_offset_nm = 1.0;
};

struct SpectroOptions {
  int l_max = 60;
  QuadratureConfig quadrature;
  bool ohmic = true;
};

/// Scattered self-field at the emitter, scaled as 3 eps_n / (2 k_n^3) p.G.p / p^2.
/// With this scaling W^t/W_h = 1 + Im value and the normalized shift is
/// -Re value / 2.
struct SelfField {
  complex value{0.0, 0.0};
  std::vector<complex> partial;  // partial[l-1] = sum over orders 1..l
};

SelfField self_field(const MultipoleCoefficients& coeffs, Orientation o);
SelfField self_field(const StratifiedSphere& sphere, const DipoleSource& dipole, int l_max);

/// (omega - omega_0) / W_h; negative is a red shift.
double frequency_shift(const StratifiedSphere& sphere, const DipoleSource& dipole, int l_max);
/// W^t / W_h from the imaginary part of the self-field.
double total_rate(const StratifiedSphere& sphere, const DipoleSource& dipole, int l_max);
/// W^rad / W_h from the power carried to infinity.
double radiative_rate(const StratifiedSphere& sphere, const DipoleSource& dipole, int l_max);
double radiative_rate(const MultipoleCoefficients& coeffs, Orientation o);

/// Per-order Ohmic loss (W^nrad_Omega / W_h) for both orientations.
struct OhmicLoss {
  std::vector<double> radial;      // [l-1]
  std::vector<double> tangential;  // [l-1]
  double total(Orientation o) const;
  bool converged = true;
  double achieved_rel_error = 0.0;  // worst shell
  int worst_region = 0;
};

/// Volume integral of eps'' |E|^2 over every absorbing region; angular parts
/// are done analytically, the radial part by adaptive quadrature. Throws
/// NumericalError when the quadrature misses its tolerance.
OhmicLoss ohmic_loss(const MultipoleCoefficients& coeffs, const StratifiedSphere& sphere,
                     const QuadratureConfig& cfg);
double ohmic_rate(const StratifiedSphere& sphere, const DipoleSource& dipole, int l_max,
                  const QuadratureConfig& cfg = {});

/// W^rad / W^t, an upper bound on the fluorescence quantum yield.
double fluorescence_yield(double wt_norm, double wrad_norm);

/// Isotropic average (radial + 2 tangential) / 3.
double orientation_average(double radial_value, double tangential_value);

/// Near-surface quasistatic shift outside a homogeneous sphere of
/// permittivity eps_sphere in eps_host, with k_2 the host wavenumber.
double quasistatic_shift(double eps_sphere, double eps_host, double k2_rs, double kd_rd,
                         Orientation o);

/// N/N0, the photon budget before photobleaching relative to the unbounded
/// host. Equals the normalized radiative rate.
double photostability_ratio(double wrad_norm);

struct PointEvaluation {
  SpectroResult radial;
  SpectroResult tangential;
  SpectroResult averaged;
  const SpectroResult& get(Orientation o) const {
    return o == Orientation::radial ? radial : tangential;
  }
};

/// All outputs for both orientations from one field solve.
PointEvaluation evaluate_point(const StratifiedSphere& sphere, double radius_nm,
                               double wavelength_nm, const SpectroOptions& opts = {});

SpectroResult evaluate(const StratifiedSphere& sphere, const DipoleSource& dipole,
                       const SpectroOptions& opts = {});

/// Per-order partial sums, for convergence audits.
struct ConvergenceRow {
  int l = 0;
  double wt = 0.0;
  double wrad = 0.0;
  double shift = 0.0;
  double wohm = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  /// First order from which W^t and W^rad stay within 1e-8 relative of the
  /// final value; 0 unless at least ten orders confirm it.
  int eight_digit_order = 0;
};

ConvergenceReport convergence_report(const StratifiedSphere& sphere, const DipoleSource& dipole,
                                     const SpectroOptions& opts = {});

}  // namespace nanoshell
