#include "nanoshell/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nanoshell/errors.hpp"

namespace nanoshell::specfun {

namespace {

constexpr complex kI{0.0, 1.0};
// Rescaling quantum for the downward recurrence, as a power of two.
constexpr int kScaleBits = 600;

void check_arguments(int l_max, complex z) {
  if (l_max < 1) {
    throw DomainError("specfun: l_max must be >= 1, got " + std::to_string(l_max));
  }
  if (!(std::isfinite(z.real()) && std::isfinite(z.imag()))) {
    throw DomainError("specfun: non-finite argument");
  }
  if (std::abs(z) < kMinArgument) {
    throw DomainError("specfun: argument too close to zero");
  }
}

bool finite(complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

void require_finite(const std::vector<complex>& v, const char* name, complex z) {
  for (std::size_t l = 0; l < v.size(); ++l) {
    if (!finite(v[l])) {
      throw RangeError(std::string("specfun: ") + name + " overflows at order l=" +
                       std::to_string(l) + " for |z|=" + std::to_string(std::abs(z)));
    }
  }
}

complex ldexp(complex v, int e) {
  return {std::ldexp(v.real(), e), std::ldexp(v.imag(), e)};
}

// Derivative of f_l from the lower neighbour: f'_l = f_{l-1} - (l+1)/z f_l,
// with f'_0 = -f_1.
std::vector<complex> derivative(const std::vector<complex>& f, complex z) {
  std::vector<complex> df(f.size());
  df[0] = -f[1];
  for (std::size_t l = 1; l < f.size(); ++l) {
    df[l] = f[l - 1] - (static_cast<double>(l) + 1.0) / z * f[l];
  }
  return df;
}

// Upward recurrence f_{l+1} = (2l+1)/z f_l - f_{l-1} from two seeds.
std::vector<complex> upward(int l_max, complex z, complex f0, complex f1) {
  std::vector<complex> f(l_max + 1);
  f[0] = f0;
  f[1] = f1;
  for (int l = 1; l < l_max; ++l) {
    f[l + 1] = (2.0 * l + 1.0) / z * f[l] - f[l - 1];
  }
  return f;
}

// j_l = mant[l] * 2^exp[l], with |mant| of order one.
struct ScaledSequence {
  std::vector<complex> mant;
  std::vector<int> exp;
};

void normalize(complex& m, int& e) {
  const double a = std::max(std::abs(m.real()), std::abs(m.imag()));
  if (a == 0.0 || !std::isfinite(a)) return;
  int k = 0;
  std::frexp(a, &k);
  m = ldexp(m, -k);
  e += k;
}

ScaledSequence miller_j(int l_max, complex z) {
  // Below l ~ |z| both recurrence solutions oscillate with comparable size;
  // the start has to sit well past the turning point as well as past l_max.
  const double az = std::abs(z);
  const int start = std::max(l_max, static_cast<int>(std::ceil(az))) + 30 +
                    static_cast<int>(std::ceil(8.0 * std::cbrt(az)));

  // Miller's algorithm. Values are kept as (mantissa, 2^kScaleBits exponent)
  // so that the growth toward low orders never overflows.
  std::vector<complex> mant(l_max + 1);
  std::vector<int> scale(l_max + 1);
  complex upper = 0.0;  // f_{l+1}
  complex cur = 1.0;    // f_l
  int exponent = 0;
  const double big = std::ldexp(1.0, kScaleBits);
  for (int l = start; l >= 1; --l) {
    const complex lower = (2.0 * l + 1.0) / z * cur - upper;
    upper = cur;
    cur = lower;
    if (std::abs(cur) > big) {
      cur = ldexp(cur, -kScaleBits);
      upper = ldexp(upper, -kScaleBits);
      ++exponent;
    }
    if (l - 1 <= l_max) {
      mant[l - 1] = cur;
      scale[l - 1] = exponent;
    }
    if (l <= l_max) {
      mant[l] = upper;
      scale[l] = exponent;
    }
  }

  const complex j0 = std::sin(z) / z;
  const complex j1 = std::sin(z) / (z * z) - std::cos(z) / z;
  // For |z| <= 1 j_0 has no zero and the closed-form j_1 cancels badly.
  const int ref = (std::abs(z) <= 1.0 || std::abs(j0) >= std::abs(j1)) ? 0 : 1;
  const complex ratio = (ref == 0 ? j0 : j1) / mant[ref];

  ScaledSequence out{std::vector<complex>(l_max + 1), std::vector<int>(l_max + 1)};
  for (int l = 0; l <= l_max; ++l) {
    out.mant[l] = mant[l] * ratio;
    out.exp[l] = kScaleBits * (scale[l] - scale[ref]);
    normalize(out.mant[l], out.exp[l]);
  }
  out.mant[0] = j0;
  out.exp[0] = 0;
  normalize(out.mant[0], out.exp[0]);
  if (std::abs(z) > 1.0) {
    out.mant[1] = j1;
    out.exp[1] = 0;
    normalize(out.mant[1], out.exp[1]);
  }
  return out;
}

}  // namespace

std::vector<complex> spherical_j(int l_max, complex z) {
  check_arguments(l_max, z);
  const ScaledSequence s = miller_j(l_max, z);
  std::vector<complex> j(l_max + 1);
  for (int l = 0; l <= l_max; ++l) j[l] = ldexp(s.mant[l], s.exp[l]);
  return j;
}

BesselTable bessel_table(int l_max, complex z) {
  check_arguments(l_max, z);
  BesselTable t;
  t.order_max = l_max;
  t.argument = z;
  t.j = spherical_j(l_max, z);

  const complex s = std::sin(z);
  const complex c = std::cos(z);
  t.y = upward(l_max, z, -c / z, -c / (z * z) - s / z);

  const complex e = std::exp(kI * z);
  t.h1 = upward(l_max, z, -kI * e / z, -e * (z + kI) / (z * z));

  require_finite(t.j, "j", z);
  require_finite(t.y, "y", z);
  require_finite(t.h1, "h1", z);

  t.dj = derivative(t.j, z);
  t.dy = derivative(t.y, z);
  t.dh1 = derivative(t.h1, z);
  require_finite(t.dy, "y'", z);
  require_finite(t.dh1, "h1'", z);
  return t;
}

RiccatiTable riccati(int l_max, complex z) {
  const BesselTable b = bessel_table(l_max, z);
  RiccatiTable r;
  r.order_max = l_max;
  r.argument = z;
  const std::size_t n = b.j.size();
  r.psi.resize(n);
  r.chi.resize(n);
  r.xi.resize(n);
  r.dpsi.resize(n);
  r.dchi.resize(n);
  r.dxi.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    r.psi[l] = z * b.j[l];
    r.chi[l] = -z * b.y[l];
    r.xi[l] = z * b.h1[l];
    r.dpsi[l] = b.j[l] + z * b.dj[l];
    r.dchi[l] = -(b.y[l] + z * b.dy[l]);
    r.dxi[l] = b.h1[l] + z * b.dh1[l];
  }
  return r;
}

ScaledRiccati scaled_riccati(int l_max, complex z) {
  check_arguments(l_max, z);
  ScaledSequence psi = miller_j(l_max, z);
  for (int l = 0; l <= l_max; ++l) {
    psi.mant[l] *= z;
    normalize(psi.mant[l], psi.exp[l]);
  }

  // Upward recurrence for xi = z h1, renormalized at every step.
  ScaledSequence xi{std::vector<complex>(l_max + 1), std::vector<int>(l_max + 1)};
  const complex e = std::exp(kI * z);
  complex lower = -kI * e;
  complex cur = -e * (1.0 + kI / z);
  if (!finite(lower) || !finite(cur)) {
    throw RangeError("specfun: outgoing seeds overflow for |z|=" + std::to_string(std::abs(z)));
  }
  int common = 0;
  xi.mant[0] = lower;
  xi.mant[1] = cur;
  for (int l = 1; l < l_max; ++l) {
    const complex next = (2.0 * l + 1.0) / z * cur - lower;
    lower = cur;
    cur = next;
    int shift = 0;
    normalize(cur, shift);
    lower = ldexp(lower, -shift);
    common += shift;
    xi.mant[l + 1] = cur;
    xi.exp[l + 1] = common;
  }
  for (int l = 0; l <= 1 && l <= l_max; ++l) normalize(xi.mant[l], xi.exp[l]);

  ScaledRiccati t;
  t.order_max = l_max;
  t.argument = z;
  t.psi.resize(l_max + 1);
  t.xi.resize(l_max + 1);
  t.dpsi.resize(l_max + 1);
  t.dxi.resize(l_max + 1);
  t.scale.resize(l_max + 1);
  for (int l = 0; l <= l_max; ++l) {
    // Split the magnitudes evenly so both stored values stay near sqrt|psi xi|.
    const int sc = static_cast<int>(std::floor(0.5 * (psi.exp[l] - xi.exp[l])));
    t.scale[l] = sc;
    t.psi[l] = ldexp(psi.mant[l], psi.exp[l] - sc);
    t.xi[l] = ldexp(xi.mant[l], xi.exp[l] + sc);
    if (l == 0) {
      t.dpsi[0] = ldexp(std::cos(z), -sc);
      t.dxi[0] = ldexp(e, sc);
    } else {
      // f'_l = f_{l-1} - l/z f_l for both Riccati forms.
      t.dpsi[l] = ldexp(psi.mant[l - 1], psi.exp[l - 1] - sc) - static_cast<double>(l) / z * t.psi[l];
      t.dxi[l] = ldexp(xi.mant[l - 1], xi.exp[l - 1] + sc) - static_cast<double>(l) / z * t.xi[l];
    }
  }
  for (const auto* v : {&t.psi, &t.xi, &t.dpsi, &t.dxi}) require_finite(*v, "scaled Riccati", z);
  return t;
}

}  // namespace nanoshell::specfun
