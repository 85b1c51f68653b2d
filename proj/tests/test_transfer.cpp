#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nanoshell/errors.hpp"
#include "nanoshell/specfun.hpp"
#include "nanoshell/spectro.hpp"
#include "nanoshell/transfer.hpp"
#include "oracles/mie_oracle.hpp"

using namespace nanoshell;

namespace {

constexpr Polarization kPols[] = {Polarization::tm, Polarization::te};
constexpr Orientation kOrients[] = {Orientation::radial, Orientation::tangential};

StratifiedSphere water_in_water() {
  return build_sphere({{60.0, media::water()}, {100.0, media::water()}}, water_host());
}

// u and q du/dx of a channel just inside (side = 0) or outside (side = 1)
// interface j.
std::pair<complex, complex> boundary_values(const MultipoleCoefficients& c, Orientation o, int l,
                                            Polarization pol, int region, double r_nm) {
  const Medium& m = c.media()[region - 1];
  const auto t = specfun::scaled_riccati(l, c.vacuum_wavenumber() * m.index * r_nm);
  const WaveAmplitudes w = c.field(o, l, pol, region).in_scale(t.scale[l]);
  const complex u = w.regular * t.psi[l] + w.outgoing * t.xi[l];
  const complex du = w.regular * t.dpsi[l] + w.outgoing * t.dxi[l];
  return {u, matching_weight(pol, m) * du};
}

}  // namespace

TEST_CASE("identical media give the identity matrix") {
  const Medium m{{1.45, 0.0}, 1.0};
  for (int l : {1, 5, 20}) {
    for (auto pol : kPols) {
      const Matrix2 t = interface_matrix(l, pol, m, m, 150.0, vacuum_wavenumber(595.0));
      CHECK(std::abs(t[0] - 1.0) < 1e-14);
      CHECK(std::abs(t[1]) < 1e-14);
      CHECK(std::abs(t[2]) < 1e-14);
      CHECK(std::abs(t[3] - 1.0) < 1e-14);
    }
  }
}

TEST_CASE("determinant equals the weight ratio") {
  const Medium in{{1.45, 0.0}, 1.0}, out{{1.33, 0.0}, 1.0};
  for (int l = 1; l <= 10; ++l) {
    for (auto pol : kPols) {
      const Matrix2 t = interface_matrix(l, pol, in, out, 150.0, vacuum_wavenumber(595.0));
      const complex det = t[0] * t[3] - t[1] * t[2];
      const complex rho = matching_weight(pol, in) / matching_weight(pol, out);
      CHECK(std::abs(det - rho) < 1e-12 * std::abs(rho));
    }
  }
}

TEST_CASE("silica/water matrix reproduces the textbook Mie coefficient a_1") {
  const Medium in{{1.45, 0.0}, 1.0}, out{{1.33, 0.0}, 1.0};
  const double k0 = vacuum_wavenumber(595.0);
  const Matrix2 t = interface_matrix(1, Polarization::tm, in, out, 150.0, k0);
  // Regular inside -> psi M00 + xi M10 outside; Mie writes psi - a xi.
  const complex a_matrix = -t[2] / t[0];

  const double x = k0 * 1.33 * 150.0;
  const double m = 1.45 / 1.33;
  auto psi = [](int n, double z) { return z * std::sph_bessel(n, z); };
  auto xi = [](int n, double z) {
    return complex{z * std::sph_bessel(n, z), z * std::sph_neumann(n, z)};
  };
  auto dpsi = [&](int n, double z) { return psi(n - 1, z) - n * psi(n, z) / z; };
  auto dxi = [&](int n, double z) { return xi(n - 1, z) - double(n) * xi(n, z) / z; };
  const complex a1 = (m * psi(1, m * x) * dpsi(1, x) - psi(1, x) * dpsi(1, m * x)) /
                     (m * psi(1, m * x) * dxi(1, x) - xi(1, x) * dpsi(1, m * x));
  CHECK(std::abs(a_matrix - a1) < 1e-10 * std::abs(a1));
}

TEST_CASE("no contrast means no scattered field") {
  const StratifiedSphere s = water_in_water();
  for (double r : {0.0, 30.0, 80.0, 150.0}) {
    const auto c = solve_dipole_fields(s, r, 595.0, 20);
    for (auto o : kOrients) {
      for (int l = 1; l <= 20; ++l) {
        for (auto pol : kPols) {
          CHECK(std::abs(c.self_term(o, l, pol)) < 1e-13);
        }
      }
    }
    CHECK(total_rate(s, DipoleSource{r, Orientation::radial, 595.0}, 20) ==
          doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("centered dipole couples to l = 1 TM only") {
  for (const char* name : {"A", "D"}) {
    const auto c = solve_dipole_fields(preset(name), 0.0, 595.0, 10);
    CHECK(c.centered());
    for (auto o : kOrients) {
      for (int l = 1; l <= 10; ++l) {
        for (auto pol : kPols) {
          const auto& src = c.source(o, l, pol);
          const bool allowed = l == 1 && pol == Polarization::tm;
          if (!allowed) {
            CHECK(src.regular == complex{0.0, 0.0});
            CHECK(src.outgoing == complex{0.0, 0.0});
            CHECK(c.self_term(o, l, pol) == complex{0.0, 0.0});
          } else {
            CHECK(std::abs(src.regular) > 0.0);
          }
        }
      }
    }
  }
  // In a homogeneous medium the l = 1 term carries the whole free-dipole rate.
  const auto free = solve_dipole_fields(water_in_water(), 0.0, 595.0, 5);
  const auto ff = ambient_far_field(free, Orientation::radial);
  double p = 0.0;
  for (const auto& term : ff) p += term.power();
  CHECK(p == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("radial dipoles excite no TE waves") {
  const auto c = solve_dipole_fields(preset("B"), 1.3 * 145.0, 595.0, 20);
  for (int l = 1; l <= 20; ++l) {
    CHECK(c.source(Orientation::radial, l, Polarization::te).regular == complex{0.0, 0.0});
  }
}

TEST_CASE("reference total rates") {
  const StratifiedSphere d = preset("D");
  CHECK(total_rate(d, {1.005025 * 150.0, Orientation::radial, 595.0}, 60) ==
        doctest::Approx(1.27798).epsilon(0.02));
  const StratifiedSphere f = preset("F");
  CHECK(total_rate(f, {2.01 * 150.0, Orientation::radial, 595.0}, 60) ==
        doctest::Approx(1.0188).epsilon(0.005));
}

TEST_CASE("lossless sphere: far-field power equals the total rate") {
  const StratifiedSphere d = preset("D");
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> x(0.0, 2.01);
  for (int i = 0; i < 20; ++i) {
    const double r = x(rng) * 150.0;
    if (std::abs(r - 150.0) < 0.5) continue;
    const auto c = solve_dipole_fields(d, r, 595.0, 60);
    for (auto o : kOrients) {
      double p = 0.0;
      for (const auto& term : ambient_far_field(c, o)) p += term.power();
      const double wt = 1.0 + self_field(c, o).value.imag();
      CHECK(std::abs(p - wt) < 1e-8 * wt);
    }
  }
}

TEST_CASE("single interface agrees with the closed-form oracle") {
  const StratifiedSphere d = preset("D");
  for (double x : {0.2, 0.8, 0.995, 1.005, 1.7}) {
    const double r = x * 150.0;
    const auto m = x < 1.0 ? oracle::interior_rates(1.45, 1.33, 150.0, r, 595.0, 40)
                           : oracle::exterior_rates({1.45, 0.0}, 1.33, 150.0, r, 595.0, 40);
    const auto c = solve_dipole_fields(d, r, 595.0, 40);
    const complex g_rad = self_field(c, Orientation::radial).value;
    const complex g_tan = self_field(c, Orientation::tangential).value;
    CHECK(1.0 + g_rad.imag() == doctest::Approx(m.wt_radial).epsilon(1e-10));
    CHECK(1.0 + g_tan.imag() == doctest::Approx(m.wt_tangential).epsilon(1e-10));
    CHECK(-g_rad.real() / 2.0 == doctest::Approx(m.shift_radial).epsilon(1e-10));
    CHECK(-g_tan.real() / 2.0 == doctest::Approx(m.shift_tangential).epsilon(1e-10));
  }
}

TEST_CASE("tangential fields are continuous at every interface") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> shells(2, 5), order(1, 40);
  const double wl = 595.0;
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = shells(rng);
    std::vector<Shell> layers;
    double r = 0.0;
    for (int j = 0; j < n; ++j) {
      r += 20.0 + 120.0 * unit(rng);
      const double pick = unit(rng);
      Material m = pick < 0.3   ? media::gold()
                   : pick < 0.6 ? media::silica()
                                : Material::constant({1.2 + unit(rng), 0.5 * unit(rng)});
      layers.push_back({r, m});
    }
    const StratifiedSphere s = build_sphere(layers, water_host());
    // Dipole in the ambient or in a lossless core; skip interfaces of its own region.
    const bool outside = trial % 2 == 0 || s.material(1).absorbing(wl);
    const double rd = outside ? s.outer_radius() * (1.05 + unit(rng))
                              : s.interface_radius(1) * (0.1 + 0.8 * unit(rng));
    const int host = outside ? s.ambient_region() : 1;
    const auto c = solve_dipole_fields(s, rd, wl, 40);
    for (int j = 1; j <= s.shell_count(); ++j) {
      if (j == host || j + 1 == host) continue;
      const int l = order(rng);
      for (auto o : kOrients) {
        for (auto pol : kPols) {
          if (o == Orientation::radial && pol == Polarization::te) continue;
          const auto [u_in, f_in] = boundary_values(c, o, l, pol, j, s.interface_radius(j));
          const auto [u_out, f_out] = boundary_values(c, o, l, pol, j + 1, s.interface_radius(j));
          CHECK(std::abs(u_in - u_out) <= 1e-9 * std::max(std::abs(u_in), std::abs(u_out)));
          CHECK(std::abs(f_in - f_out) <= 1e-9 * std::max(std::abs(f_in), std::abs(f_out)));
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 20);
}

TEST_CASE("self-field terms decay with order away from interfaces") {
  const auto c = solve_dipole_fields(preset("D"), 75.0, 595.0, 60);
  for (auto o : kOrients) {
    const complex total = self_field(c, o).value;
    double tail = 0.0;
    for (auto pol : kPols) tail += std::abs(c.self_term(o, 60, pol));
    CHECK(tail < 1e-12 * std::abs(total));
  }
}

TEST_CASE("invalid inputs") {
  const StratifiedSphere a = preset("A");
  CHECK_THROWS_AS(solve_dipole_fields(a, 90.0, 595.0, 10), DomainError);
  CHECK_THROWS_AS(solve_dipole_fields(a, 107.0, 595.0, 10), DomainError);
  CHECK_THROWS_AS(solve_dipole_fields(a, 50.0, 595.0, 0), DomainError);
  CHECK_THROWS_AS(solve_dipole_fields(a, 500.0, 200.0, 10), RangeError);
  const Medium m{{1.45, 0.0}, 1.0};
  CHECK_THROWS_AS(interface_matrix(0, Polarization::tm, m, m, 1.0, 0.01), DomainError);
}
