#include "nanoshell/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nanoshell/errors.hpp"

namespace nanoshell {

StratifiedSphere::StratifiedSphere(std::vector<Shell> shells, HostMedium ambient)
    : shells_(std::move(shells)),
      ambient_(ambient),
      ambient_material_(Material::constant({1.0, 0.0}, "ambient")) {
  if (shells_.empty()) throw DomainError("sphere: at least one shell is required");
  double previous = 0.0;
  for (std::size_t j = 0; j < shells_.size(); ++j) {
    const double r = shells_[j].outer_radius_nm;
    if (!(r > previous) || !std::isfinite(r)) {
      std::ostringstream msg;
      msg << "sphere: radii must be positive and strictly increasing (shell " << j + 1
          << " has r=" << r << " nm after " << previous << " nm)";
      throw DomainError(msg.str());
    }
    previous = r;
  }
  if (ambient_.index.imag() != 0.0 || !(ambient_.index.real() > 0.0)) {
    throw DomainError("sphere: ambient medium must be lossless with n > 0");
  }
  if (!(ambient_.permeability > 0.0)) throw DomainError("sphere: ambient permeability must be > 0");
  ambient_material_ = Material::constant(ambient_.index, "ambient", ambient_.permeability);
}

const Material& StratifiedSphere::material(int region) const {
  if (region < 1 || region > region_count()) {
    throw DomainError("sphere: region index " + std::to_string(region) + " out of range");
  }
  return region == ambient_region() ? ambient_material_ : shells_[region - 1].material;
}

complex StratifiedSphere::refractive_index(int region, double wavelength_nm) const {
  return material(region).refractive_index(wavelength_nm);
}

complex StratifiedSphere::permittivity(int region, double wavelength_nm) const {
  return material(region).permittivity(wavelength_nm);
}

double StratifiedSphere::permeability(int region) const { return material(region).permeability(); }

int StratifiedSphere::locate_region(double r_nm) const {
  if (!(r_nm >= 0.0) || !std::isfinite(r_nm)) {
    throw DomainError("sphere: radial position must be finite and >= 0");
  }
  for (int j = 1; j <= shell_count(); ++j) {
    const double rj = interface_radius(j);
    if (r_nm == rj) {
      std::ostringstream msg;
      msg << "sphere: position r=" << r_nm << " nm lies on interface " << j;
      throw DomainError(msg.str());
    }
    if (r_nm < rj) return j;
  }
  return ambient_region();
}

double StratifiedSphere::distance_to_interface(double r_nm) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& s : shells_) d = std::min(d, std::abs(r_nm - s.outer_radius_nm));
  return d;
}

double StratifiedSphere::distance_to_absorbing_interface(double r_nm, double wavelength_nm) const {
  double d = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= shell_count(); ++j) {
    const bool lossy = material(j).absorbing(wavelength_nm) ||
                       material(j + 1).absorbing(wavelength_nm);
    if (lossy) d = std::min(d, std::abs(r_nm - interface_radius(j)));
  }
  return d;
}

std::string StratifiedSphere::describe() const {
  std::ostringstream out;
  for (std::size_t j = 0; j < shells_.size(); ++j) {
    if (j) out << " / ";
    out << shells_[j].material.name() << "@" << shells_[j].outer_radius_nm << "nm";
  }
  out << " in n=" << ambient_.index.real();
  return out.str();
}

StratifiedSphere build_sphere(std::vector<Shell> shells, HostMedium ambient) {
  return StratifiedSphere(std::move(shells), ambient);
}

namespace {

StratifiedSphere nanoshell(double r1, double r2, double r3, double r4) {
  const Material sio2 = media::silica();
  const Material au = media::gold();
  return build_sphere({{r1, sio2}, {r2, au}, {r3, sio2}, {r4, au}}, water_host());
}

}  // namespace

StratifiedSphere preset(std::string_view name) {
  if (name == "A") return nanoshell(80, 107, 135, 157);
  if (name == "B") return nanoshell(77, 102, 141, 145);
  if (name == "C") return nanoshell(396, 418, 654, 693);
  if (name == "D") return build_sphere({{150, media::silica()}}, water_host());
  if (name == "E") return build_sphere({{693, media::gold()}}, water_host());
  if (name == "F") return build_sphere({{150, media::gold()}}, water_host());
  throw DomainError("unknown preset '" + std::string(name) + "' (expected A-F)");
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"A", "B", "C", "D", "E", "F"};
  return names;
}

std::string_view to_string(Orientation o) {
  return o == Orientation::radial ? "radial" : "tangential";
}

Orientation parse_orientation(std::string_view s) {
  if (s == "radial") return Orientation::radial;
  if (s == "tangential") return Orientation::tangential;
  throw DomainError("unknown orientation '" + std::string(s) + "'");
}

int host_region(const StratifiedSphere& sphere, double r_nm, double wavelength_nm) {
  const int region = sphere.locate_region(r_nm);
  if (sphere.material(region).absorbing(wavelength_nm)) {
    std::ostringstream msg;
    msg << "dipole at r=" << r_nm << " nm sits in absorbing region " << region << " ("
        << sphere.material(region).name() << ")";
    throw DomainError(msg.str());
  }
  return region;
}

}  // namespace nanoshell
