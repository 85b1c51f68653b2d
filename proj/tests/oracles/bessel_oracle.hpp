#pragma once

// Arbitrary-precision reference values for spherical Bessel functions,
// built from closed forms that share nothing with the library recurrences.

#include <complex>

#include <boost/multiprecision/cpp_complex.hpp>

namespace oracle {

using Complex100 = boost::multiprecision::cpp_complex_100;

inline Complex100 to_mp(std::complex<double> z) { return Complex100(z.real(), z.imag()); }

inline std::complex<double> to_double(const Complex100& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

/// h1_l(z) = (-i)^(l+1) e^(iz)/z sum_k i^k (l+k)! / (k! (l-k)! (2z)^k).
inline Complex100 hankel1_exact(int l, const Complex100& z) {
  const Complex100 i(0, 1);
  Complex100 sum = 0;
  Complex100 term = 1;  // i^k (l+k)! / (k! (l-k)! (2z)^k) / l!
  for (int k = 0; k <= l; ++k) {
    if (k > 0) term *= i * Complex100((l + k) * (l - k + 1)) / (Complex100(k) * 2 * z);
    sum += term;
  }
  Complex100 phase = 1;
  for (int k = 0; k < l + 1; ++k) phase *= -i;
  return phase * exp(i * z) / z * sum;
}

/// j_l(z) = z^l sum_k (-z^2/2)^k / (k! (2l+2k+1)!!), summed until the terms
/// no longer change the result.
inline Complex100 bessel_j_series(int l, const Complex100& z) {
  Complex100 lead = 1;
  for (int k = 1; k <= l; ++k) lead *= z / Complex100(2 * k + 1);
  const Complex100 q = -z * z / 2;
  Complex100 term = lead;
  Complex100 sum = term;
  for (int k = 1; k < 4000; ++k) {
    term *= q / (Complex100(k) * Complex100(2 * l + 2 * k + 1));
    sum += term;
    if (abs(term) < abs(sum) * 1e-90 && k > abs(z)) break;
  }
  return sum;
}

}  // namespace oracle
