#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nanoshell/model.hpp"
#include "nanoshell/spectro.hpp"

namespace nanoshell {

enum class SweepKind { radial, wavelength };

/// Row label: one of the two physical orientations or the isotropic average.
enum class OrientationChoice { radial, tangential, averaged };

std::string_view to_string(OrientationChoice o);
OrientationChoice parse_orientation_choice(std::string_view s);

/// Radial grid in units of the outer radius r_s.
struct GridSpec {
  /// Explicit values; when unset the linspace fields apply.
  std::optional<std::vector<double>> values;
  double start = 0.0;
  double stop = 2.01;
  int count = 401;
  /// Points closer than margin * r_s to an interface move outward by nudge * r_s.
  double margin = 0.001;
  double nudge = 0.005;
};

struct SweepConfig {
  /// Either a preset name ("A".."F") or an inline {"shells": [...], "ambient": ...}.
  nlohmann::json sphere = "D";
  SweepKind kind = SweepKind::radial;
  /// Radial sweeps use the first entry only.
  std::vector<double> wavelengths_nm{595.0};
  GridSpec grid;
  std::vector<OrientationChoice> orientations{OrientationChoice::radial,
                                              OrientationChoice::tangential};
  int l_max = 60;
  QuadratureConfig quadrature;
  int threads = 1;
  std::string output = "results.csv";
  /// Directory for gnuplot-ready two-column files; empty disables them.
  std::string plot_dir;
};

/// Parses a config object; unknown keys and type mismatches throw ConfigError.
SweepConfig parse_sweep_config(const nlohmann::json& j);
SweepConfig load_sweep_config(const std::filesystem::path& path);
/// Fully expanded config: feeding it back to parse_sweep_config reproduces
/// the same rows.
nlohmann::json to_json(const SweepConfig& cfg);

StratifiedSphere sphere_from_json(const nlohmann::json& j);

/// Grid values r / r_s. Linspace points within `margin` of an interface
/// move to `nudge` from it on their own side; those left inside an
/// absorbing region are dropped. Explicit lists are returned unchanged.
std::vector<double> expand_grid(const GridSpec& grid, const StratifiedSphere& sphere,
                                double wavelength_nm);
std::vector<double> default_grid(const StratifiedSphere& sphere, double wavelength_nm);

struct SweepRow {
  double r_over_rs = 0.0;
  double wavelength_nm = 0.0;
  OrientationChoice orientation = OrientationChoice::radial;
  SpectroResult result;
};

/// Rows ordered by r then orientation (radial sweep) or by wavelength, r,
/// orientation (wavelength sweep). Output does not depend on `threads`.
std::vector<SweepRow> run_radial_sweep(const SweepConfig& cfg);
std::vector<SweepRow> run_wavelength_sweep(const SweepConfig& cfg);
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

inline constexpr const char* kCsvHeader =
    "r_over_rs,wavelength_nm,orientation,shift_norm,wt_norm,wrad_norm,wohm_norm,yield,"
    "photostability,l_used,converged";

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::string format_number(double v);

/// One `<quantity>_<orientation>.dat` file per quantity and orientation,
/// two whitespace-separated columns (r/r_s or wavelength, value).
void write_plot_files(const std::filesystem::path& dir, const std::vector<SweepRow>& rows,
                      SweepKind kind);

}  // namespace nanoshell
