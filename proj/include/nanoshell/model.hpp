#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nanoshell/materials.hpp"

namespace nanoshell {

/// Lossless ambient medium surrounding the particle.
struct HostMedium {
  complex index{1.0, 0.0};
  double permeability = 1.0;
};

inline HostMedium water_host() { return HostMedium{{1.33, 0.0}, 1.0}; }

/// One concentric layer, bounded outside by `outer_radius_nm`.
struct Shell {
  double outer_radius_nm = 0.0;
  Material material;
};

/// Concentric shells plus ambient. Regions are numbered 1..N from the core
/// outward; region N+1 is the ambient.
class StratifiedSphere {
 public:
  /// Validates radii (positive, strictly increasing), N >= 1 and a lossless
  /// ambient; throws DomainError otherwise.
  StratifiedSphere(std::vector<Shell> shells, HostMedium ambient);

  int shell_count() const { return static_cast<int>(shells_.size()); }
  int region_count() const { return shell_count() + 1; }
  int ambient_region() const { return region_count(); }

  /// Outer radius of shell j (1-based), i.e. the j-th interface.
  double interface_radius(int j) const { return shells_.at(j - 1).outer_radius_nm; }
  double outer_radius() const { return shells_.back().outer_radius_nm; }
  const std::vector<Shell>& shells() const { return shells_; }
  const HostMedium& ambient() const { return ambient_; }

  /// Material of region j (1..N+1).
  const Material& material(int region) const;

  complex refractive_index(int region, double wavelength_nm) const;
  complex permittivity(int region, double wavelength_nm) const;
  double permeability(int region) const;

  /// Region containing radius r. Throws DomainError when r < 0 or when r
  /// coincides with an interface.
  int locate_region(double r_nm) const;

  /// Smallest |r - r_j| over all interfaces.
  double distance_to_interface(double r_nm) const;
  /// Smallest |r - r_j| over interfaces that touch an absorbing region.
  double distance_to_absorbing_interface(double r_nm, double wavelength_nm) const;

  std::string describe() const;

 private:
  std::vector<Shell> shells_;
  HostMedium ambient_;
  Material ambient_material_;
};

StratifiedSphere build_sphere(std::vector<Shell> shells, HostMedium ambient);

/// The six reference particles in water: A, B, C silica/gold/silica/gold
/// nanoshells, D a silica sphere, E and F gold spheres.
StratifiedSphere preset(std::string_view name);
const std::vector<std::string>& preset_names();

enum class Orientation { radial, tangential };

std::string_view to_string(Orientation o);
Orientation parse_orientation(std::string_view s);

/// Emitter on the z axis at `radius_nm` from the center. The transition
/// dipole magnitude cancels in every normalized output and is not stored.
struct DipoleSource {
  double radius_nm = 0.0;
  Orientation orientation = Orientation::radial;
  double wavelength_nm = 595.0;
};

/// Region hosting the dipole; rejects interface positions and absorbing
/// hosts (DomainError).
int host_region(const StratifiedSphere& sphere, double r_nm, double wavelength_nm);

/// Normalized spectroscopic properties for one emitter configuration.
/// All rates are in units of the radiative rate in an unbounded medium
/// identical to the one at the emitter.
struct SpectroResult {
  double shift_norm = 0.0;
  double wt_norm = 1.0;
  double wrad_norm = 1.0;
  double wohm_norm = 0.0;
  double yield = 1.0;
  double photostability = 1.0;
  int l_used = 0;
  bool converged = true;
  // Spread of the last ten partial sums, relative.
  double wt_residual = 0.0;
  double wrad_residual = 0.0;
  double wohm_residual = 0.0;
  /// Estimated magnitude of the truncated shift series tail (not added).
  double shift_tail = 0.0;
};

}  // namespace nanoshell
