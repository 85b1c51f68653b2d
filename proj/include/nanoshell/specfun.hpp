#pragma once

#include <complex>
#include <vector>

namespace nanoshell::specfun {

using complex = std::complex<double>;

/// Spherical Bessel functions j_l, y_l and the outgoing Hankel function
/// h1_l = j_l + i y_l for l = 0..order_max at one complex argument, together
/// with their z-derivatives.
///
/// h1 is produced by its own upward recurrence from the closed-form l = 0, 1
/// seeds and never as the sum j + i y: inside absorbing media y_l ~ i j_l to
/// nearly all digits and the sum loses everything.
struct BesselTable {
  int order_max = 0;
  complex argument;
  std::vector<complex> j, y, h1;
  std::vector<complex> dj, dy, dh1;
};

/// Riccati-Bessel forms psi = z j, chi = -z y, xi = z h1 and derivatives.
struct RiccatiTable {
  int order_max = 0;
  complex argument;
  std::vector<complex> psi, chi, xi;
  std::vector<complex> dpsi, dchi, dxi;
};

/// Riccati functions with a power-of-two scale per order, usable far beyond
/// the orders where psi underflows and xi overflows: the true values are
/// psi[l] * 2^scale[l] and xi[l] * 2^-scale[l] (likewise for derivatives).
/// Products of one regular and one outgoing function need no scale.
struct ScaledRiccati {
  int order_max = 0;
  complex argument;
  std::vector<complex> psi, dpsi, xi, dxi;
  std::vector<int> scale;
};

/// Arguments with |z| below this are rejected.
inline constexpr double kMinArgument = 1e-8;

/// Throws DomainError for l_max < 1 or |z| < kMinArgument, RangeError when a
/// stored entry overflows (the message names the failing order).
BesselTable bessel_table(int l_max, complex z);

RiccatiTable riccati(int l_max, complex z);

/// j_l only, by normalized downward recurrence. Entries that underflow are 0.
std::vector<complex> spherical_j(int l_max, complex z);

/// Never overflows for |Im z| below ~700.
ScaledRiccati scaled_riccati(int l_max, complex z);

}  // namespace nanoshell::specfun
