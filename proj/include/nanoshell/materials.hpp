#pragma once

#include <complex>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace nanoshell {

using complex = std::complex<double>;

namespace constants {
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;
}  // namespace constants

/// Angular frequency [rad/s] of light with the given vacuum wavelength [nm].
double angular_frequency(double wavelength_nm);

/// Vacuum wavenumber [1/nm].
double vacuum_wavenumber(double wavelength_nm);

/// Complex refractive index sampled at strictly increasing vacuum
/// wavelengths, linearly interpolated in (Re n, Im n). No extrapolation.
class DispersionTable {
 public:
  DispersionTable() = default;
  DispersionTable(std::vector<double> wavelength_nm, std::vector<complex> index);

  /// Parses `wavelength_nm  n_real  n_imag` rows; `#` starts a comment.
  static DispersionTable parse(std::istream& in, const std::string& source = "<stream>");
  static DispersionTable load(const std::filesystem::path& path);

  complex index_at(double wavelength_nm) const;
  double min_wavelength() const { return wavelength_.front(); }
  double max_wavelength() const { return wavelength_.back(); }
  const std::vector<double>& wavelengths() const { return wavelength_; }
  const std::vector<complex>& indices() const { return index_; }

 private:
  std::vector<double> wavelength_;
  std::vector<complex> index_;
};

/// Parameters of the size-corrected Drude term.
struct DrudeParameters {
  double plasma_frequency = 0.0;       // omega_p [rad/s]
  double bulk_relaxation_time = 0.0;   // tau_B [s]
  double fermi_velocity = 0.0;         // v_F [m/s]
  double geometry_factor = 1.0;        // A
  double feature_size = 0.0;           // S [m]
};

enum class MaterialKind { constant, tabulated, drude_size_corrected };

/// Wavelength-dependent optical constants of a passive medium with real
/// permeability. Immutable once built.
class Material {
 public:
  static Material constant(complex index, std::string name = "constant", double permeability = 1.0);
  static Material tabulated(DispersionTable table, std::string name = "tabulated",
                            double permeability = 1.0);
  /// Bulk response `base` plus the mean-free-path correction.
  static Material size_corrected(const Material& base, DrudeParameters drude,
                                 std::string name = "drude");

  MaterialKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double permeability() const { return mu_; }

  /// Complex permittivity; throws RangeError outside a table, DomainError if
  /// the result would be active (Im eps < 0).
  complex permittivity(double wavelength_nm) const;
  /// sqrt(eps mu) on the branch with Im n >= 0.
  complex refractive_index(double wavelength_nm) const;
  bool absorbing(double wavelength_nm) const { return permittivity(wavelength_nm).imag() > 0.0; }

  const DispersionTable* table() const { return table_.get(); }
  const DrudeParameters* drude() const { return drude_.get(); }

 private:
  Material() = default;

  MaterialKind kind_ = MaterialKind::constant;
  std::string name_;
  double mu_ = 1.0;
  complex index_{1.0, 0.0};
  std::shared_ptr<const DispersionTable> table_;
  std::shared_ptr<const Material> base_;
  std::shared_ptr<const DrudeParameters> drude_;
};

/// eps_B + wp^2/(w^2 + i w/tau_B) - wp^2/(w^2 + i w/tau), 1/tau = 1/tau_B + A v_F / S.
complex size_corrected_permittivity(complex bulk_permittivity, double omega,
                                    double plasma_frequency, double bulk_relaxation_time,
                                    double fermi_velocity, double feature_size,
                                    double geometry_factor);

/// Ratio of the radiative rate in a lossless homogeneous medium to the
/// vacuum rate, n^3 / eps.
double homogeneous_rate_factor(complex index, double permittivity);

/// Photon density of states in vacuum, omega^2 / (c^3 pi^2), SI units.
double vacuum_ldos(double omega);

/// n^2 d(omega n)/d omega times the vacuum value, for a real dispersive index.
double homogeneous_dispersive_ldos(const std::function<double(double)>& index_of_omega,
                                   double omega);

namespace media {

Material silica();
Material water();
/// Gold dispersion. Reads `gold.txt` from the directory named by
/// NANOSHELL_MATERIAL_DIR when set, otherwise the built-in table.
Material gold();
/// The built-in gold table (400-1100 nm, pinned to 0.248 + 2.986i at 595 nm).
const DispersionTable& builtin_gold_table();

/// Gold size-corrected Drude defaults (literature values).
DrudeParameters gold_drude(double feature_size_m, double geometry_factor = 1.0);

}  // namespace media

}  // namespace nanoshell
