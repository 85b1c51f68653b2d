#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "nanoshell/errors.hpp"
#include "nanoshell/model.hpp"

using namespace nanoshell;

TEST_CASE("preset geometries") {
  const StratifiedSphere a = preset("A");
  REQUIRE(a.shell_count() == 4);
  CHECK(a.interface_radius(1) == 80.0);
  CHECK(a.interface_radius(2) == 107.0);
  CHECK(a.interface_radius(3) == 135.0);
  CHECK(a.interface_radius(4) == 157.0);
  CHECK(a.material(1).name() == "silica");
  CHECK(a.material(2).name() == "gold");

  const StratifiedSphere c = preset("C");
  CHECK(c.shell_count() == 4);
  CHECK(c.outer_radius() == 693.0);

  const StratifiedSphere e = preset("E");
  CHECK(e.shell_count() == 1);
  CHECK(e.outer_radius() == 693.0);
  CHECK(e.material(1).name() == "gold");

  const StratifiedSphere d = preset("D");
  CHECK(d.ambient().index == complex{1.33, 0.0});
  CHECK(d.refractive_index(d.ambient_region(), 595.0) == complex{1.33, 0.0});
  CHECK(preset("F").outer_radius() == 150.0);
  CHECK(preset("B").interface_radius(3) == 141.0);

  CHECK_THROWS_AS(preset("G"), DomainError);
  CHECK(preset_names().size() == 6);
}

TEST_CASE("presets round-trip through validation") {
  for (const auto& name : preset_names()) {
    const StratifiedSphere s = preset(name);
    const StratifiedSphere copy = build_sphere(s.shells(), s.ambient());
    CHECK(copy.describe() == s.describe());
  }
}

TEST_CASE("construction rejects bad geometry") {
  const Material si = media::silica();
  const Material au = media::gold();
  CHECK_NOTHROW(build_sphere({{150.0, si}}, water_host()));
  CHECK_NOTHROW(build_sphere({{80, si}, {107, au}, {135, si}, {157, au}}, water_host()));
  CHECK_THROWS_AS(build_sphere({{107, au}, {80, si}}, water_host()), DomainError);
  CHECK_THROWS_AS(build_sphere({}, water_host()), DomainError);
  CHECK_THROWS_AS(build_sphere({{-1.0, si}}, water_host()), DomainError);
  CHECK_THROWS_AS(build_sphere({{10, si}, {10, au}}, water_host()), DomainError);
  CHECK_THROWS_AS(build_sphere({{150.0, si}}, HostMedium{{1.33, 0.01}, 1.0}), DomainError);
}

TEST_CASE("region lookup") {
  const StratifiedSphere a = preset("A");
  CHECK(a.locate_region(0.0) == 1);
  CHECK(a.locate_region(90.0) == 2);
  CHECK(a.locate_region(200.0) == 5);
  CHECK_THROWS_AS(a.locate_region(107.0), DomainError);
  CHECK_THROWS_AS(a.locate_region(-1.0), DomainError);
  CHECK(a.distance_to_interface(100.0) == doctest::Approx(7.0));
  CHECK(a.distance_to_absorbing_interface(60.0, 595.0) == doctest::Approx(20.0));
}

TEST_CASE("region lookup agrees with a binary search") {
  const StratifiedSphere c = preset("C");
  std::vector<double> radii;
  for (int j = 1; j <= c.shell_count(); ++j) radii.push_back(c.interface_radius(j));
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> r(0.0, 2.5 * c.outer_radius());
  for (int i = 0; i < 100000; ++i) {
    const double x = r(rng);
    if (std::find(radii.begin(), radii.end(), x) != radii.end()) continue;
    const int expected =
        1 + static_cast<int>(std::upper_bound(radii.begin(), radii.end(), x) - radii.begin());
    REQUIRE(c.locate_region(x) == expected);
  }
}

TEST_CASE("dipole host region") {
  const StratifiedSphere a = preset("A");
  CHECK(host_region(a, 50.0, 595.0) == 1);
  CHECK(host_region(a, 120.0, 595.0) == 3);
  CHECK(host_region(a, 300.0, 595.0) == 5);
  CHECK_THROWS_AS(host_region(a, 90.0, 595.0), DomainError);
  CHECK_THROWS_AS(host_region(a, 80.0, 595.0), DomainError);
}

TEST_CASE("orientation names") {
  CHECK(parse_orientation("radial") == Orientation::radial);
  CHECK(parse_orientation("tangential") == Orientation::tangential);
  CHECK(to_string(Orientation::tangential) == "tangential");
  CHECK_THROWS(parse_orientation("sideways"));
}
