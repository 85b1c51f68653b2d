#include "nanoshell/transfer.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "nanoshell/errors.hpp"
#include "nanoshell/specfun.hpp"

namespace nanoshell {

namespace {

constexpr complex kI{0.0, 1.0};

int pol_index(Polarization p) { return p == Polarization::tm ? 0 : 1; }
int orient_index(Orientation o) { return o == Orientation::radial ? 0 : 1; }

// Scaled Riccati tables of both media at one interface.
struct InterfaceSample {
  specfun::ScaledRiccati inner;
  specfun::ScaledRiccati outer;
};

complex scaled(complex v, int e) { return {std::ldexp(v.real(), e), std::ldexp(v.imag(), e)}; }

ScaledWave normalized(ScaledWave w) {
  const double m = std::max(std::abs(w.v.regular), std::abs(w.v.outgoing));
  if (!(m > 0.0) || !std::isfinite(m)) return w;
  int e = 0;
  std::frexp(m, &e);
  w.v = {scaled(w.v.regular, -e), scaled(w.v.outgoing, -e)};
  w.exponent += e;
  return w;
}

// Carries a wave across an interface from the side described by `from` to
// the side described by `to`. Equivalent to multiplying by the interface
// matrix, without forming products of two irregular functions.
ScaledWave cross(const specfun::ScaledRiccati& from, const specfun::ScaledRiccati& to,
                 complex weight_ratio, int l, const ScaledWave& w) {
  const ScaledWave here = w.rescaled(from.scale[l]);
  const WaveAmplitudes& v = here.v;
  const complex u = v.regular * from.psi[l] + v.outgoing * from.xi[l];
  const complex du = weight_ratio * (v.regular * from.dpsi[l] + v.outgoing * from.dxi[l]);
  // psi xi' - psi' xi = i, with or without the scale.
  ScaledWave out{{-kI * (to.dxi[l] * u - to.xi[l] * du), -kI * (-to.dpsi[l] * u + to.psi[l] * du)},
                 here.exponent, to.scale[l]};
  return normalized(out);
}

std::string channel_name(int l, Polarization pol) {
  return "(l=" + std::to_string(l) + ", " + (pol == Polarization::tm ? "TM" : "TE") + ")";
}

}  // namespace

complex matching_weight(Polarization pol, const Medium& m) {
  return pol == Polarization::tm ? m.permeability / m.index : m.index / m.permeability;
}

Matrix2 interface_matrix(int l, Polarization pol, const Medium& inner, const Medium& outer,
                         double radius_nm, double vacuum_wavenumber) {
  if (l < 1) throw DomainError("interface_matrix: l must be >= 1");
  if (!(radius_nm > 0.0)) throw DomainError("interface_matrix: radius must be > 0");
  const auto in = specfun::riccati(l, vacuum_wavenumber * inner.index * radius_nm);
  const auto out = specfun::riccati(l, vacuum_wavenumber * outer.index * radius_nm);
  const complex rho = matching_weight(pol, inner) / matching_weight(pol, outer);
  return {-kI * (out.dxi[l] * in.psi[l] - rho * out.xi[l] * in.dpsi[l]),
          -kI * (out.dxi[l] * in.xi[l] - rho * out.xi[l] * in.dxi[l]),
          -kI * (-out.dpsi[l] * in.psi[l] + rho * out.psi[l] * in.dpsi[l]),
          -kI * (-out.dpsi[l] * in.xi[l] + rho * out.psi[l] * in.dxi[l])};
}

WaveAmplitudes ScaledWave::value() const {
  return {scaled(v.regular, exponent - scale), scaled(v.outgoing, exponent + scale)};
}

WaveAmplitudes ScaledWave::in_scale(int table_scale) const {
  return {scaled(v.regular, exponent - scale + table_scale),
          scaled(v.outgoing, exponent + scale - table_scale)};
}

ScaledWave ScaledWave::rescaled(int new_scale) const {
  // The regular coefficient grows by 2^d and the outgoing one shrinks by
  // 2^d. The shared exponent follows the larger result so that only a
  // relatively negligible component can underflow.
  const int d = new_scale - scale;
  auto binary_exponent = [](complex c) {
    int e = 0;
    std::frexp(std::max(std::abs(c.real()), std::abs(c.imag())), &e);
    return e;
  };
  const bool has_reg = v.regular != 0.0;
  const bool has_out = v.outgoing != 0.0;
  if (!has_reg && !has_out) return {v, exponent, new_scale};
  const int reg_top = has_reg ? binary_exponent(v.regular) + d : std::numeric_limits<int>::min();
  const int out_top = has_out ? binary_exponent(v.outgoing) - d : std::numeric_limits<int>::min();
  const int shift = std::max(reg_top, out_top);
  return {{scaled(v.regular, d - shift), scaled(v.outgoing, -d - shift)}, exponent + shift,
          new_scale};
}

ScaledWave ScaledWave::operator*(complex c) const {
  return normalized({{v.regular * c, v.outgoing * c}, exponent, scale});
}

WaveAmplitudes apply(const Matrix2& m, const WaveAmplitudes& v) {
  return {m[0] * v.regular + m[1] * v.outgoing, m[2] * v.regular + m[3] * v.outgoing};
}

const ChannelSolution& MultipoleCoefficients::channel(int l, Polarization pol) const {
  return channels_[pol_index(pol)].at(l - 1);
}

const SourceFactors& MultipoleCoefficients::source(Orientation o, int l, Polarization pol) const {
  return sources_[orient_index(o)][pol_index(pol)].at(l - 1);
}

ScaledWave MultipoleCoefficients::field(Orientation o, int l, Polarization pol,
                                        int region) const {
  const ChannelSolution& ch = channel(l, pol);
  const SourceFactors& src = source(o, l, pol);
  if (region < 1 || region > region_count_) {
    throw DomainError("field: region " + std::to_string(region) + " out of range");
  }
  const complex below = (src.outgoing + ch.r_out * src.regular) / ch.denominator;
  const complex above = (src.regular + ch.r_in * src.outgoing) / ch.denominator;
  if (region < host_) return ch.inner[region - 1] * below;
  if (region > host_) return ch.outer[region - host_] * above;
  return normalized({{ch.r_out * above, ch.r_in * below}, 0, ch.source_scale});
}

complex MultipoleCoefficients::self_term(Orientation o, int l, Polarization pol) const {
  const ChannelSolution& ch = channel(l, pol);
  const SourceFactors& src = source(o, l, pol);
  return (ch.r_out * src.regular * src.regular + ch.r_in * src.outgoing * src.outgoing +
          2.0 * ch.r_in * ch.r_out * src.regular * src.outgoing) /
         ch.denominator;
}

MultipoleCoefficients solve_dipole_fields(const StratifiedSphere& sphere, double radius_nm,
                                          double wavelength_nm, int l_max) {
  if (l_max < 1) throw DomainError("solve_dipole_fields: l_max must be >= 1");
  const int host = host_region(sphere, radius_nm, wavelength_nm);
  const int n_regions = sphere.region_count();
  const int n_interfaces = sphere.shell_count();

  MultipoleCoefficients c;
  c.l_max_ = l_max;
  c.host_ = host;
  c.region_count_ = n_regions;
  c.radius_nm_ = radius_nm;
  c.wavelength_nm_ = wavelength_nm;
  c.k0_ = vacuum_wavenumber(wavelength_nm);
  for (int j = 1; j <= n_regions; ++j) {
    c.media_.push_back({sphere.refractive_index(j, wavelength_nm), sphere.permeability(j)});
  }

  std::vector<InterfaceSample> samples;
  samples.reserve(n_interfaces);
  for (int i = 1; i <= n_interfaces; ++i) {
    const double r = sphere.interface_radius(i);
    samples.push_back({specfun::scaled_riccati(l_max, c.k0_ * c.media_[i - 1].index * r),
                       specfun::scaled_riccati(l_max, c.k0_ * c.media_[i].index * r)});
  }

  // Source expansion about the center. At the center only l = 1 TM couples
  // and the core table at the first interface supplies the scale.
  const double k_host = c.k0_ * c.media_[host - 1].index.real();
  const double x = k_host * radius_nm;
  c.centered_ = x < specfun::kMinArgument;
  c.host_argument_ = c.centered_ ? 0.0 : x;
  const specfun::ScaledRiccati& at_source =
      c.centered_ ? samples.front().inner : specfun::scaled_riccati(l_max, complex{x, 0.0});

  for (auto& per_orient : c.sources_) {
    for (auto& per_pol : per_orient) per_pol.assign(l_max, SourceFactors{});
  }
  if (c.centered_) {
    // psi_1/x^2 -> 1/3 and psi_1'/x -> 2/3 leave unit l = 1 TM factors.
    const complex one = scaled(1.0, -at_source.scale[1]);
    c.sources_[0][0][0] = {one, 0.0};
    c.sources_[1][0][0] = {one, 0.0};
  } else {
    for (int l = 1; l <= l_max; ++l) {
      const double two_l1 = 2.0 * l + 1.0;
      const double radial = std::sqrt(1.5 * two_l1 * l * (l + 1.0)) / (x * x);
      const double tangential = std::sqrt(0.75 * two_l1) / x;
      c.sources_[0][0][l - 1] = {radial * at_source.psi[l], radial * at_source.xi[l]};
      c.sources_[1][0][l - 1] = {tangential * at_source.dpsi[l], tangential * at_source.dxi[l]};
      c.sources_[1][1][l - 1] = {tangential * at_source.psi[l], tangential * at_source.xi[l]};
    }
  }

  for (Polarization pol : {Polarization::tm, Polarization::te}) {
    auto& list = c.channels_[pol_index(pol)];
    list.resize(l_max);
    std::vector<complex> weight(n_regions);
    for (int j = 0; j < n_regions; ++j) weight[j] = matching_weight(pol, c.media_[j]);

    for (int l = 1; l <= l_max; ++l) {
      ChannelSolution& ch = list[l - 1];
      ch.l = l;
      ch.pol = pol;
      ch.source_scale = at_source.scale[l];

      // Regular solution, core outward to the host.
      std::vector<ScaledWave> up(host);
      up[0] = {{1.0, 0.0}, 0, 0};
      for (int i = 1; i < host; ++i) {
        const auto& s = samples[i - 1];
        up[i] = cross(s.inner, s.outer, weight[i - 1] / weight[i], l, up[i - 1]);
      }
      // Outgoing solution, ambient inward to the host.
      std::vector<ScaledWave> down(n_regions - host + 1);
      down.back() = {{0.0, 1.0}, 0, 0};
      for (int i = n_interfaces; i >= host; --i) {
        const auto& s = samples[i - 1];
        down[i - host] = cross(s.outer, s.inner, weight[i] / weight[i - 1], l, down[i + 1 - host]);
      }

      const ScaledWave hin = up.back().rescaled(ch.source_scale);
      const ScaledWave hout = down.front().rescaled(ch.source_scale);
      if (hin.v.regular == 0.0 || hout.v.outgoing == 0.0) {
        throw NumericalError("solve_dipole_fields: degenerate matching in channel " +
                             channel_name(l, pol));
      }
      ch.r_in = host == 1 ? complex{0.0, 0.0} : hin.v.outgoing / hin.v.regular;
      ch.r_out = host == n_regions ? complex{0.0, 0.0} : hout.v.regular / hout.v.outgoing;
      ch.denominator = 1.0 - ch.r_in * ch.r_out;

      ch.inner.resize(host);
      for (int j = 0; j < host; ++j) {
        ScaledWave w = up[j] * (1.0 / hin.v.regular);
        w.exponent -= hin.exponent;
        ch.inner[j] = w;
      }
      ch.inner.back() = {{1.0, ch.r_in}, 0, ch.source_scale};
      ch.outer.resize(down.size());
      for (std::size_t j = 0; j < down.size(); ++j) {
        ScaledWave w = down[j] * (1.0 / hout.v.outgoing);
        w.exponent -= hout.exponent;
        ch.outer[j] = w;
      }
      ch.outer.front() = {{ch.r_out, 1.0}, 0, ch.source_scale};
      ch.t_out = ch.outer.back().value().outgoing;

      const bool ok = std::isfinite(std::abs(ch.r_in)) && std::isfinite(std::abs(ch.r_out)) &&
                      std::isfinite(std::abs(ch.t_out)) && std::abs(ch.denominator) > 1e-300;
      if (!ok) {
        throw NumericalError("solve_dipole_fields: singular 2x2 system in channel " +
                             channel_name(l, pol));
      }
    }
  }
  return c;
}

std::vector<FarFieldTerm> ambient_far_field(const MultipoleCoefficients& coeffs, Orientation o) {
  const Medium& host = coeffs.media()[coeffs.host() - 1];
  const Medium& amb = coeffs.media().back();
  const double tm_flux = (amb.permeability / amb.index.real()) / (host.permeability / host.index.real());
  std::vector<FarFieldTerm> terms;
  terms.reserve(2 * coeffs.l_max());
  for (int l = 1; l <= coeffs.l_max(); ++l) {
    for (Polarization pol : {Polarization::tm, Polarization::te}) {
      const ChannelSolution& ch = coeffs.channel(l, pol);
      const SourceFactors& src = coeffs.source(o, l, pol);
      FarFieldTerm t;
      t.l = l;
      t.pol = pol;
      t.amplitude = (src.regular + ch.r_in * src.outgoing) / ch.denominator * ch.t_out;
      t.flux_weight = pol == Polarization::tm ? tm_flux : 1.0 / tm_flux;
      terms.push_back(t);
    }
  }
  return terms;
}

}  // namespace nanoshell
