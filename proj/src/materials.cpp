#include "nanoshell/materials.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nanoshell/errors.hpp"

namespace nanoshell {

double angular_frequency(double wavelength_nm) {
  return 2.0 * constants::kPi * constants::kSpeedOfLight / (wavelength_nm * 1e-9);
}

double vacuum_wavenumber(double wavelength_nm) { return 2.0 * constants::kPi / wavelength_nm; }

// DispersionTable

DispersionTable::DispersionTable(std::vector<double> wavelength_nm, std::vector<complex> index)
    : wavelength_(std::move(wavelength_nm)), index_(std::move(index)) {
  if (wavelength_.empty() || wavelength_.size() != index_.size()) {
    throw DomainError("dispersion table: empty or mismatched columns");
  }
  for (std::size_t i = 0; i < wavelength_.size(); ++i) {
    if (!(wavelength_[i] > 0.0)) throw DomainError("dispersion table: non-positive wavelength");
    if (i > 0 && !(wavelength_[i] > wavelength_[i - 1])) {
      throw DomainError("dispersion table: wavelengths must be strictly increasing (row " +
                        std::to_string(i + 1) + ")");
    }
    if (index_[i].imag() < 0.0) throw DomainError("dispersion table: negative Im n (active medium)");
  }
}

DispersionTable DispersionTable::parse(std::istream& in, const std::string& source) {
  std::vector<double> wl;
  std::vector<complex> n;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double w, re, im;
    if (!(row >> w)) continue;  // blank
    if (!(row >> re >> im)) {
      throw DomainError(source + ":" + std::to_string(lineno) + ": expected three columns");
    }
    std::string extra;
    if (row >> extra) {
      throw DomainError(source + ":" + std::to_string(lineno) + ": trailing data '" + extra + "'");
    }
    wl.push_back(w);
    n.emplace_back(re, im);
  }
  return DispersionTable(std::move(wl), std::move(n));
}

DispersionTable DispersionTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open dispersion table " + path.string());
  return parse(in, path.string());
}

complex DispersionTable::index_at(double wavelength_nm) const {
  if (!(wavelength_nm >= wavelength_.front() && wavelength_nm <= wavelength_.back())) {
    std::ostringstream msg;
    msg << "wavelength " << wavelength_nm << " nm outside table range [" << wavelength_.front()
        << ", " << wavelength_.back() << "] nm";
    throw RangeError(msg.str());
  }
  auto hi = std::lower_bound(wavelength_.begin(), wavelength_.end(), wavelength_nm);
  const auto i = static_cast<std::size_t>(hi - wavelength_.begin());
  if (wavelength_[i] == wavelength_nm) return index_[i];
  const double t = (wavelength_nm - wavelength_[i - 1]) / (wavelength_[i] - wavelength_[i - 1]);
  return index_[i - 1] + t * (index_[i] - index_[i - 1]);
}

// Material

Material Material::constant(complex index, std::string name, double permeability) {
  if (index.imag() < 0.0) throw DomainError("material " + name + ": Im n < 0 (active medium)");
  if (!(permeability > 0.0)) throw DomainError("material " + name + ": permeability must be > 0");
  Material m;
  m.kind_ = MaterialKind::constant;
  m.name_ = std::move(name);
  m.index_ = index;
  m.mu_ = permeability;
  return m;
}

Material Material::tabulated(DispersionTable table, std::string name, double permeability) {
  if (!(permeability > 0.0)) throw DomainError("material " + name + ": permeability must be > 0");
  Material m;
  m.kind_ = MaterialKind::tabulated;
  m.name_ = std::move(name);
  m.mu_ = permeability;
  m.table_ = std::make_shared<const DispersionTable>(std::move(table));
  return m;
}

Material Material::size_corrected(const Material& base, DrudeParameters drude, std::string name) {
  if (!(drude.feature_size > 0.0)) throw DomainError("drude: feature size S must be > 0");
  if (!(drude.bulk_relaxation_time > 0.0)) throw DomainError("drude: tau_B must be > 0");
  Material m;
  m.kind_ = MaterialKind::drude_size_corrected;
  m.name_ = std::move(name);
  m.mu_ = base.mu_;
  m.base_ = std::make_shared<const Material>(base);
  m.drude_ = std::make_shared<const DrudeParameters>(drude);
  return m;
}

complex Material::permittivity(double wavelength_nm) const {
  if (!(wavelength_nm > 0.0)) throw DomainError("wavelength must be positive");
  complex eps;
  switch (kind_) {
    case MaterialKind::constant:
      eps = index_ * index_ / mu_;
      break;
    case MaterialKind::tabulated: {
      const complex n = table_->index_at(wavelength_nm);
      eps = n * n / mu_;
      break;
    }
    case MaterialKind::drude_size_corrected:
      eps = size_corrected_permittivity(base_->permittivity(wavelength_nm),
                                        angular_frequency(wavelength_nm), drude_->plasma_frequency,
                                        drude_->bulk_relaxation_time, drude_->fermi_velocity,
                                        drude_->feature_size, drude_->geometry_factor);
      break;
  }
  if (eps.imag() < 0.0) {
    throw DomainError("material " + name_ + ": Im eps < 0 at " + std::to_string(wavelength_nm) +
                      " nm");
  }
  return eps;
}

complex Material::refractive_index(double wavelength_nm) const {
  if (kind_ == MaterialKind::constant) return index_;
  if (kind_ == MaterialKind::tabulated) return table_->index_at(wavelength_nm);
  return std::sqrt(permittivity(wavelength_nm) * mu_);
}

// Free functions

complex size_corrected_permittivity(complex bulk_permittivity, double omega,
                                    double plasma_frequency, double bulk_relaxation_time,
                                    double fermi_velocity, double feature_size,
                                    double geometry_factor) {
  if (!(feature_size > 0.0)) throw DomainError("size correction: S must be > 0");
  if (!(bulk_relaxation_time > 0.0)) throw DomainError("size correction: tau_B must be > 0");
  if (!(omega > 0.0)) throw DomainError("size correction: omega must be > 0");
  const double gamma_bulk = 1.0 / bulk_relaxation_time;
  const double gamma = gamma_bulk + geometry_factor * fermi_velocity / feature_size;
  const double wp2 = plasma_frequency * plasma_frequency;
  const complex iw{0.0, omega};
  return bulk_permittivity + wp2 / (omega * omega + iw * gamma_bulk) -
         wp2 / (omega * omega + iw * gamma);
}

double homogeneous_rate_factor(complex index, double permittivity) {
  if (index.imag() != 0.0) throw DomainError("rate factor: medium must be lossless");
  if (!(permittivity > 0.0)) throw DomainError("rate factor: permittivity must be > 0");
  const double n = index.real();
  return n * n * n / permittivity;
}

double vacuum_ldos(double omega) {
  const double c = constants::kSpeedOfLight;
  return omega * omega / (c * c * c * constants::kPi * constants::kPi);
}

double homogeneous_dispersive_ldos(const std::function<double(double)>& index_of_omega,
                                   double omega) {
  const double h = 1e-6 * omega;
  const double up = (omega + h) * index_of_omega(omega + h);
  const double down = (omega - h) * index_of_omega(omega - h);
  const double n = index_of_omega(omega);
  return n * n * (up - down) / (2.0 * h) * vacuum_ldos(omega);
}

namespace media {

Material silica() { return Material::constant({1.45, 0.0}, "silica"); }

Material water() { return Material::constant({1.33, 0.0}, "water"); }

const DispersionTable& builtin_gold_table() {
  static const DispersionTable table(
      {397.0, 413.0, 430.0, 451.0, 473.0, 496.0, 521.0, 549.0, 582.0, 595.0, 617.0, 659.0, 704.0,
       756.0, 821.0, 892.0, 984.0, 1107.0},
      {{1.470, 1.952}, {1.460, 1.958}, {1.450, 1.948}, {1.380, 1.914}, {1.310, 1.849},
       {1.040, 1.833}, {0.620, 2.081}, {0.430, 2.455}, {0.290, 2.863}, {0.248, 2.986},
       {0.210, 3.272}, {0.140, 3.697}, {0.130, 4.103}, {0.140, 4.542}, {0.160, 5.083},
       {0.170, 5.663}, {0.220, 6.350}, {0.270, 7.150}});
  return table;
}

Material gold() {
  if (const char* dir = std::getenv("NANOSHELL_MATERIAL_DIR"); dir != nullptr && *dir != '\0') {
    const auto path = std::filesystem::path(dir) / "gold.txt";
    if (std::filesystem::exists(path)) return Material::tabulated(DispersionTable::load(path), "gold");
  }
  return Material::tabulated(builtin_gold_table(), "gold");
}

DrudeParameters gold_drude(double feature_size_m, double geometry_factor) {
  DrudeParameters p;
  p.plasma_frequency = 1.37e16;
  p.bulk_relaxation_time = 9.3e-15;
  p.fermi_velocity = 1.40e6;
  p.geometry_factor = geometry_factor;
  p.feature_size = feature_size_m;
  return p;
}

}  // namespace media

}  // namespace nanoshell
