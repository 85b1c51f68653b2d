#pragma once

#include <array>
#include <vector>

#include "nanoshell/model.hpp"

namespace nanoshell {

/// TM: electric-type waves (radial E). TE: magnetic-type waves.
enum class Polarization { tm, te };

/// Amplitudes of the regular (psi-based) and outgoing (xi-based) radial
/// Riccati functions of one (l, polarization) channel in one region.
struct WaveAmplitudes {
  complex regular{0.0, 0.0};
  complex outgoing{0.0, 0.0};
};

/// Amplitudes stored against a power-of-two Riccati scale (see
/// specfun::ScaledRiccati): the true regular and outgoing amplitudes are
/// v.regular * 2^(exponent - scale) and v.outgoing * 2^(exponent + scale).
/// High orders stay representable even where the true values are not.
struct ScaledWave {
  WaveAmplitudes v;
  int exponent = 0;
  int scale = 0;

  /// True amplitudes; may overflow or underflow at high orders.
  WaveAmplitudes value() const;
  /// Coefficients to combine with a scaled table whose scale is `table_scale`.
  WaveAmplitudes in_scale(int table_scale) const;
  /// Same wave, stored against another scale.
  ScaledWave rescaled(int new_scale) const;
  ScaledWave operator*(complex c) const;
};

/// Row-major 2x2 complex matrix.
using Matrix2 = std::array<complex, 4>;

/// Optical constants of one region at a fixed wavelength.
struct Medium {
  complex index{1.0, 0.0};
  double permeability = 1.0;
};

/// Matching weight multiplying d/dx of the radial function: mu/n for TM,
/// n/mu for TE (x = k r). The radial function itself is continuous.
complex matching_weight(Polarization pol, const Medium& m);

/// Maps (regular, outgoing) amplitudes just inside an interface of radius
/// `radius_nm` to those just outside such that tangential E and H are
/// continuous. det M = weight(inner)/weight(outer).
Matrix2 interface_matrix(int l, Polarization pol, const Medium& inner, const Medium& outer,
                         double radius_nm, double vacuum_wavenumber);

WaveAmplitudes apply(const Matrix2& m, const WaveAmplitudes& v);

/// Per-channel solution of the two-point boundary problem seen from the
/// host region s, in the host's source scale (the scaled table at the
/// dipole). u_in is regular at the origin with coefficients (1, r_in) in
/// region s; u_out is outgoing at infinity with coefficients (r_out, 1).
/// t_out is the true outgoing amplitude of u_out in the ambient.
struct ChannelSolution {
  int l = 0;
  Polarization pol = Polarization::tm;
  int source_scale = 0;
  complex r_in{0.0, 0.0};
  complex r_out{0.0, 0.0};
  complex denominator{1.0, 0.0};  // 1 - r_in r_out
  complex t_out{1.0, 0.0};
  std::vector<ScaledWave> inner;  // u_in in regions 1..s
  std::vector<ScaledWave> outer;  // u_out in regions s..N+1
};

/// Coupling of a point dipole to one channel: the free-medium expansion of
/// its field, scaled so that the squared regular factors sum to 1 over all
/// channels (unit radiated power in an unbounded host). Expressed in the
/// channel's source scale.
struct SourceFactors {
  complex regular{0.0, 0.0};
  complex outgoing{0.0, 0.0};
};

/// Field coefficients for all channels and regions for a dipole at a given
/// radius, for both orientations.
class MultipoleCoefficients {
 public:
  int l_max() const { return l_max_; }
  int host() const { return host_; }
  int region_count() const { return region_count_; }
  double radius_nm() const { return radius_nm_; }
  double wavelength_nm() const { return wavelength_nm_; }
  bool centered() const { return centered_; }
  /// k_s r_d (0 for the centered branch).
  double host_argument() const { return host_argument_; }
  const std::vector<Medium>& media() const { return media_; }
  double vacuum_wavenumber() const { return k0_; }

  const ChannelSolution& channel(int l, Polarization pol) const;
  const SourceFactors& source(Orientation o, int l, Polarization pol) const;

  /// Field amplitudes of channel (l, pol) in `region` for a dipole of
  /// orientation `o`. In the host region this is the scattered part only;
  /// elsewhere it is the total field.
  ScaledWave field(Orientation o, int l, Polarization pol, int region) const;

  /// Contribution of channel (l, pol) to the scattered self-field kernel:
  /// W^t/W_h - 1 = Re sum, shift = Im sum / 2.
  complex self_term(Orientation o, int l, Polarization pol) const;

 private:
  friend MultipoleCoefficients solve_dipole_fields(const StratifiedSphere&, double, double, int);

  int l_max_ = 0;
  int host_ = 1;
  int region_count_ = 2;
  double radius_nm_ = 0.0;
  double wavelength_nm_ = 0.0;
  double host_argument_ = 0.0;
  double k0_ = 0.0;
  bool centered_ = false;
  std::vector<Medium> media_;                       // regions 1..N+1
  std::array<std::vector<ChannelSolution>, 2> channels_;      // [pol][l-1]
  std::array<std::array<std::vector<SourceFactors>, 2>, 2> sources_;  // [orient][pol][l-1]
};

/// Solves every (l, pol) channel for l = 1..l_max by ordered interface
/// crossings from the core outward and from the ambient inward. Throws
/// NumericalError on a degenerate matching system.
MultipoleCoefficients solve_dipole_fields(const StratifiedSphere& sphere, double radius_nm,
                                          double wavelength_nm, int l_max);

inline MultipoleCoefficients solve_dipole_fields(const StratifiedSphere& sphere,
                                                 const DipoleSource& dipole, int l_max) {
  return solve_dipole_fields(sphere, dipole.radius_nm, dipole.wavelength_nm, l_max);
}

/// Outgoing amplitude of one channel in the ambient. The channel's share of
/// the radiated power is |amplitude|^2 * flux_weight, in units of the power
/// the same dipole radiates in an unbounded host medium.
struct FarFieldTerm {
  int l = 0;
  Polarization pol = Polarization::tm;
  complex amplitude{0.0, 0.0};
  double flux_weight = 1.0;
  double power() const { return std::norm(amplitude) * flux_weight; }
};

std::vector<FarFieldTerm> ambient_far_field(const MultipoleCoefficients& coeffs, Orientation o);

}  // namespace nanoshell
