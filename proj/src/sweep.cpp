#include "nanoshell/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "nanoshell/errors.hpp"

namespace nanoshell {

using nlohmann::json;

std::string_view to_string(OrientationChoice o) {
  switch (o) {
    case OrientationChoice::radial: return "radial";
    case OrientationChoice::tangential: return "tangential";
    case OrientationChoice::averaged: return "averaged";
  }
  return "radial";
}

OrientationChoice parse_orientation_choice(std::string_view s) {
  if (s == "radial") return OrientationChoice::radial;
  if (s == "tangential") return OrientationChoice::tangential;
  if (s == "averaged") return OrientationChoice::averaged;
  throw ConfigError("unknown orientation '" + std::string(s) +
                    "' (expected radial, tangential or averaged)");
}

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(where + ": not finite");
  return v;
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<int>();
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + ": expected a string");
  return j.get<std::string>();
}

std::vector<double> number_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

complex index_value(const json& j, const std::string& where) {
  if (j.is_number()) return {number(j, where), 0.0};
  if (j.is_array() && j.size() == 2) {
    return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
  }
  throw ConfigError(where + ": expected a number or [real, imag]");
}

Material material_from_json(const json& j, const std::string& where) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "silica") return media::silica();
    if (name == "water") return media::water();
    if (name == "gold") return media::gold();
    throw ConfigError(where + ": unknown material '" + name + "'");
  }
  if (!j.is_object()) throw ConfigError(where + ": expected a material name or object");
  const double mu = j.contains("permeability") ? number(j["permeability"], where + ".permeability")
                                               : 1.0;
  if (j.contains("index")) {
    check_keys(j, {"index", "permeability", "name"}, where);
    const std::string name = j.contains("name") ? text(j["name"], where + ".name") : "constant";
    return Material::constant(index_value(j["index"], where + ".index"), name, mu);
  }
  if (j.contains("table")) {
    check_keys(j, {"table", "permeability", "name"}, where);
    const std::string path = text(j["table"], where + ".table");
    const std::string name = j.contains("name") ? text(j["name"], where + ".name") : path;
    return Material::tabulated(DispersionTable::load(path), name, mu);
  }
  if (j.contains("drude")) {
    check_keys(j, {"drude", "name"}, where);
    const json& d = j["drude"];
    const std::string dw = where + ".drude";
    check_keys(d,
               {"base", "feature_size_nm", "geometry_factor", "plasma_frequency",
                "bulk_relaxation_time", "fermi_velocity"},
               dw);
    if (!d.contains("base") || !d.contains("feature_size_nm")) {
      throw ConfigError(dw + ": 'base' and 'feature_size_nm' are required");
    }
    const Material base = material_from_json(d["base"], dw + ".base");
    DrudeParameters p = media::gold_drude(number(d["feature_size_nm"], dw + ".feature_size_nm") *
                                          1e-9);
    if (d.contains("geometry_factor")) p.geometry_factor = number(d["geometry_factor"], dw);
    if (d.contains("plasma_frequency")) p.plasma_frequency = number(d["plasma_frequency"], dw);
    if (d.contains("bulk_relaxation_time")) {
      p.bulk_relaxation_time = number(d["bulk_relaxation_time"], dw);
    }
    if (d.contains("fermi_velocity")) p.fermi_velocity = number(d["fermi_velocity"], dw);
    const std::string name = j.contains("name") ? text(j["name"], where + ".name") : "drude";
    return Material::size_corrected(base, p, name);
  }
  throw ConfigError(where + ": material object needs 'index', 'table' or 'drude'");
}

HostMedium host_from_json(const json& j) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "water") return water_host();
    if (name == "vacuum") return HostMedium{};
    throw ConfigError("sphere.ambient: unknown medium '" + name + "'");
  }
  check_keys(j, {"index", "permeability"}, "sphere.ambient");
  HostMedium h;
  if (j.contains("index")) h.index = index_value(j["index"], "sphere.ambient.index");
  if (j.contains("permeability")) {
    h.permeability = number(j["permeability"], "sphere.ambient.permeability");
  }
  return h;
}

GridSpec grid_from_json(const json& j) {
  GridSpec g;
  if (j.is_string()) {
    if (j.get<std::string>() != "default") throw ConfigError("grid: expected \"default\"");
    return g;
  }
  if (j.is_array()) {
    g.values = number_list(j, "grid");
    return g;
  }
  check_keys(j, {"values", "start", "stop", "count", "margin", "nudge"}, "grid");
  if (j.contains("values")) g.values = number_list(j["values"], "grid.values");
  if (j.contains("start")) g.start = number(j["start"], "grid.start");
  if (j.contains("stop")) g.stop = number(j["stop"], "grid.stop");
  if (j.contains("count")) g.count = integer(j["count"], "grid.count");
  if (j.contains("margin")) g.margin = number(j["margin"], "grid.margin");
  if (j.contains("nudge")) g.nudge = number(j["nudge"], "grid.nudge");
  if (g.count < 0) throw ConfigError("grid.count: must be non-negative");
  if (g.margin < 0.0 || g.nudge < g.margin) {
    throw ConfigError("grid: need 0 <= margin <= nudge");
  }
  return g;
}

QuadratureConfig quadrature_from_json(const json& j) {
  check_keys(j, {"rel_tol", "abs_tol", "max_panels", "edge_offset_nm"}, "quadrature");
  QuadratureConfig q;
  if (j.contains("rel_tol")) q.rel_tol = number(j["rel_tol"], "quadrature.rel_tol");
  if (j.contains("abs_tol")) q.abs_tol = number(j["abs_tol"], "quadrature.abs_tol");
  if (j.contains("max_panels")) q.max_panels = integer(j["max_panels"], "quadrature.max_panels");
  if (j.contains("edge_offset_nm")) {
    q.edge_offset_nm = number(j["edge_offset_nm"], "quadrature.edge_offset_nm");
  }
  if (!(q.rel_tol > 0.0) || q.abs_tol < 0.0 || q.max_panels < 1 || q.edge_offset_nm < 0.0) {
    throw ConfigError("quadrature: tolerances must be positive and max_panels >= 1");
  }
  return q;
}

}  // namespace

StratifiedSphere sphere_from_json(const json& j) {
  if (j.is_string()) {
    try {
      return preset(j.get<std::string>());
    } catch (const DomainError& e) {
      throw ConfigError(std::string("sphere: ") + e.what());
    }
  }
  check_keys(j, {"shells", "ambient"}, "sphere");
  if (!j.contains("shells") || !j["shells"].is_array() || j["shells"].empty()) {
    throw ConfigError("sphere.shells: expected a non-empty array");
  }
  std::vector<Shell> shells;
  for (std::size_t i = 0; i < j["shells"].size(); ++i) {
    const json& s = j["shells"][i];
    const std::string where = "sphere.shells[" + std::to_string(i) + "]";
    check_keys(s, {"outer_radius_nm", "material"}, where);
    if (!s.contains("outer_radius_nm") || !s.contains("material")) {
      throw ConfigError(where + ": 'outer_radius_nm' and 'material' are required");
    }
    shells.push_back(Shell{number(s["outer_radius_nm"], where + ".outer_radius_nm"),
                           material_from_json(s["material"], where + ".material")});
  }
  const HostMedium host = j.contains("ambient") ? host_from_json(j["ambient"]) : water_host();
  try {
    return build_sphere(std::move(shells), host);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("sphere: ") + e.what());
  }
}

SweepConfig parse_sweep_config(const json& j) {
  check_keys(j,
             {"sphere", "sweep", "wavelength_nm", "wavelengths_nm", "grid", "r_over_rs",
              "orientations", "orientation", "l_max", "quadrature", "threads", "output",
              "format", "plot_dir"},
             "config");
  SweepConfig cfg;
  if (!j.contains("sphere")) throw ConfigError("config: 'sphere' is required");
  cfg.sphere = j["sphere"];
  sphere_from_json(cfg.sphere);  // validate early

  if (j.contains("sweep")) {
    const std::string kind = text(j["sweep"], "sweep");
    if (kind == "radial") {
      cfg.kind = SweepKind::radial;
    } else if (kind == "wavelength") {
      cfg.kind = SweepKind::wavelength;
    } else {
      throw ConfigError("sweep: expected \"radial\" or \"wavelength\"");
    }
  }

  if (j.contains("wavelength_nm") && j.contains("wavelengths_nm")) {
    throw ConfigError("config: give either 'wavelength_nm' or 'wavelengths_nm'");
  }
  if (j.contains("wavelength_nm")) {
    cfg.wavelengths_nm = {number(j["wavelength_nm"], "wavelength_nm")};
  } else if (j.contains("wavelengths_nm")) {
    const json& w = j["wavelengths_nm"];
    if (w.is_object()) {
      check_keys(w, {"start", "stop", "step"}, "wavelengths_nm");
      if (!w.contains("start") || !w.contains("stop") || !w.contains("step")) {
        throw ConfigError("wavelengths_nm: 'start', 'stop' and 'step' are required");
      }
      const double start = number(w["start"], "wavelengths_nm.start");
      const double stop = number(w["stop"], "wavelengths_nm.stop");
      const double step = number(w["step"], "wavelengths_nm.step");
      if (!(step > 0.0) || stop < start) throw ConfigError("wavelengths_nm: bad range");
      cfg.wavelengths_nm.clear();
      const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9));
      for (int i = 0; i <= n; ++i) cfg.wavelengths_nm.push_back(start + i * step);
    } else {
      cfg.wavelengths_nm = number_list(w, "wavelengths_nm");
    }
  }
  for (double w : cfg.wavelengths_nm) {
    if (!(w > 0.0)) throw ConfigError("wavelength must be positive");
  }
  if (cfg.kind == SweepKind::radial && cfg.wavelengths_nm.size() != 1) {
    throw ConfigError("radial sweep: exactly one wavelength expected");
  }

  if (j.contains("grid") && j.contains("r_over_rs")) {
    throw ConfigError("config: give either 'grid' or 'r_over_rs'");
  }
  if (j.contains("grid")) cfg.grid = grid_from_json(j["grid"]);
  if (j.contains("r_over_rs")) {
    cfg.grid.values = std::vector<double>{number(j["r_over_rs"], "r_over_rs")};
  }
  for (double r : cfg.grid.values.value_or(std::vector<double>{})) {
    if (r < 0.0) throw ConfigError("grid: r/r_s must be non-negative");
  }

  if (j.contains("orientations") && j.contains("orientation")) {
    throw ConfigError("config: give either 'orientations' or 'orientation'");
  }
  if (j.contains("orientation")) {
    cfg.orientations = {parse_orientation_choice(text(j["orientation"], "orientation"))};
  }
  if (j.contains("orientations")) {
    const json& o = j["orientations"];
    if (!o.is_array() || o.empty()) throw ConfigError("orientations: expected a non-empty array");
    cfg.orientations.clear();
    for (std::size_t i = 0; i < o.size(); ++i) {
      cfg.orientations.push_back(
          parse_orientation_choice(text(o[i], "orientations[" + std::to_string(i) + "]")));
    }
  }

  if (j.contains("l_max")) cfg.l_max = integer(j["l_max"], "l_max");
  if (cfg.l_max < 1) throw ConfigError("l_max: must be >= 1");
  if (j.contains("quadrature")) cfg.quadrature = quadrature_from_json(j["quadrature"]);
  if (j.contains("threads")) cfg.threads = integer(j["threads"], "threads");
  if (cfg.threads < 1) throw ConfigError("threads: must be >= 1");
  if (j.contains("output")) cfg.output = text(j["output"], "output");
  if (j.contains("format") && text(j["format"], "format") != "csv") {
    throw ConfigError("format: only \"csv\" is supported");
  }
  if (j.contains("plot_dir")) cfg.plot_dir = text(j["plot_dir"], "plot_dir");
  return cfg;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_sweep_config(j);
}

json to_json(const SweepConfig& cfg) {
  json j;
  j["sphere"] = cfg.sphere;
  j["sweep"] = cfg.kind == SweepKind::radial ? "radial" : "wavelength";
  if (cfg.kind == SweepKind::radial) {
    j["wavelength_nm"] = cfg.wavelengths_nm.front();
  } else {
    j["wavelengths_nm"] = cfg.wavelengths_nm;
  }
  json grid;
  if (cfg.grid.values) grid["values"] = *cfg.grid.values;
  grid["start"] = cfg.grid.start;
  grid["stop"] = cfg.grid.stop;
  grid["count"] = cfg.grid.count;
  grid["margin"] = cfg.grid.margin;
  grid["nudge"] = cfg.grid.nudge;
  j["grid"] = grid;
  json orientations = json::array();
  for (auto o : cfg.orientations) orientations.push_back(std::string(to_string(o)));
  j["orientations"] = orientations;
  j["l_max"] = cfg.l_max;
  j["quadrature"] = {{"rel_tol", cfg.quadrature.rel_tol},
                     {"abs_tol", cfg.quadrature.abs_tol},
                     {"max_panels", cfg.quadrature.max_panels},
                     {"edge_offset_nm", cfg.quadrature.edge_offset_nm}};
  j["threads"] = cfg.threads;
  j["output"] = cfg.output;
  j["format"] = "csv";
  if (!cfg.plot_dir.empty()) j["plot_dir"] = cfg.plot_dir;
  return j;
}

std::vector<double> expand_grid(const GridSpec& grid, const StratifiedSphere& sphere,
                                double wavelength_nm) {
  if (grid.values) return *grid.values;
  std::vector<double> out;
  if (grid.count == 0) return out;
  const double rs = sphere.outer_radius();
  for (int k = 0; k < grid.count; ++k) {
    double x = grid.count == 1
                   ? grid.start
                   : grid.start + (grid.stop - grid.start) * k / (grid.count - 1);
    for (int i = 1; i <= sphere.shell_count(); ++i) {
      const double xi = sphere.interface_radius(i) / rs;
      if (std::abs(x - xi) < grid.margin) {
        x = x < xi ? xi - grid.nudge : xi + grid.nudge;
        break;
      }
    }
    if (x < 0.0 || sphere.distance_to_interface(x * rs) == 0.0) continue;
    const int region = sphere.locate_region(x * rs);
    if (sphere.material(region).absorbing(wavelength_nm)) continue;
    out.push_back(x);
  }
  return out;
}

std::vector<double> default_grid(const StratifiedSphere& sphere, double wavelength_nm) {
  return expand_grid(GridSpec{}, sphere, wavelength_nm);
}

namespace {

struct Job {
  double wavelength_nm;
  double r_over_rs;
};

std::string describe_job(const Job& job) {
  return "row r/r_s=" + format_number(job.r_over_rs) +
         ", wavelength=" + format_number(job.wavelength_nm) + " nm: ";
}

// Same exception family as the original, with the failing row prepended.
std::exception_ptr tag_error(const Job& job) {
  const std::string where = describe_job(job);
  try {
    throw;
  } catch (const ConfigError& e) {
    return std::make_exception_ptr(ConfigError(where + e.what()));
  } catch (const DomainError& e) {
    return std::make_exception_ptr(DomainError(where + e.what()));
  } catch (const RangeError& e) {
    return std::make_exception_ptr(RangeError(where + e.what()));
  } catch (const NumericalError& e) {
    return std::make_exception_ptr(NumericalError(where + e.what()));
  } catch (const std::exception& e) {
    return std::make_exception_ptr(std::runtime_error(where + e.what()));
  }
}

std::vector<SweepRow> run_jobs(const SweepConfig& cfg, const StratifiedSphere& sphere,
                               const std::vector<Job>& jobs) {
  SpectroOptions opts;
  opts.l_max = cfg.l_max;
  opts.quadrature = cfg.quadrature;

  std::vector<PointEvaluation> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        results[i] = evaluate_point(sphere, jobs[i].r_over_rs * sphere.outer_radius(),
                                    jobs[i].wavelength_nm, opts);
      } catch (...) {
        errors[i] = tag_error(jobs[i]);
        failed.store(true);
      }
    }
  };
  const int n_threads =
      static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), jobs.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  // Report the earliest failing row in declared order, independent of scheduling.
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
  }
  if (failed.load()) throw std::logic_error("sweep: worker failed without error");

  std::vector<SweepRow> rows;
  rows.reserve(jobs.size() * cfg.orientations.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    for (auto o : cfg.orientations) {
      SweepRow row{jobs[i].r_over_rs, jobs[i].wavelength_nm, o, {}};
      switch (o) {
        case OrientationChoice::radial: row.result = results[i].radial; break;
        case OrientationChoice::tangential: row.result = results[i].tangential; break;
        case OrientationChoice::averaged: row.result = results[i].averaged; break;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace

std::vector<SweepRow> run_radial_sweep(const SweepConfig& cfg) {
  const StratifiedSphere sphere = sphere_from_json(cfg.sphere);
  if (cfg.wavelengths_nm.empty()) throw ConfigError("radial sweep: no wavelength given");
  const double lambda = cfg.wavelengths_nm.front();
  std::vector<Job> jobs;
  for (double x : expand_grid(cfg.grid, sphere, lambda)) jobs.push_back({lambda, x});
  return run_jobs(cfg, sphere, jobs);
}

std::vector<SweepRow> run_wavelength_sweep(const SweepConfig& cfg) {
  const StratifiedSphere sphere = sphere_from_json(cfg.sphere);
  std::vector<Job> jobs;
  for (double lambda : cfg.wavelengths_nm) {
    for (double x : expand_grid(cfg.grid, sphere, lambda)) jobs.push_back({lambda, x});
  }
  return run_jobs(cfg, sphere, jobs);
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  return cfg.kind == SweepKind::radial ? run_radial_sweep(cfg) : run_wavelength_sweep(cfg);
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& row : rows) {
    const SpectroResult& r = row.result;
    out << format_number(row.r_over_rs) << ',' << format_number(row.wavelength_nm) << ','
        << to_string(row.orientation) << ',' << format_number(r.shift_norm) << ','
        << format_number(r.wt_norm) << ',' << format_number(r.wrad_norm) << ','
        << format_number(r.wohm_norm) << ',' << format_number(r.yield) << ','
        << format_number(r.photostability) << ',' << r.l_used << ','
        << (r.converged ? "true" : "false") << '\n';
  }
}

void write_plot_files(const std::filesystem::path& dir, const std::vector<SweepRow>& rows,
                      SweepKind kind) {
  std::filesystem::create_directories(dir);
  struct Quantity {
    const char* name;
    double SpectroResult::*field;
  };
  const Quantity quantities[] = {{"shift", &SpectroResult::shift_norm},
                                 {"wt", &SpectroResult::wt_norm},
                                 {"wrad", &SpectroResult::wrad_norm},
                                 {"wohm", &SpectroResult::wohm_norm},
                                 {"yield", &SpectroResult::yield},
                                 {"photostability", &SpectroResult::photostability}};
  std::set<OrientationChoice> orientations;
  for (const auto& row : rows) orientations.insert(row.orientation);

  for (const auto& q : quantities) {
    for (auto o : orientations) {
      const auto path = dir / (std::string(q.name) + "_" + std::string(to_string(o)) + ".dat");
      std::ofstream out(path);
      if (!out) throw ConfigError("cannot write " + path.string());
      if (kind == SweepKind::radial) {
        out << "# r_over_rs " << q.name << '\n';
        for (const auto& row : rows) {
          if (row.orientation != o) continue;
          out << format_number(row.r_over_rs) << ' ' << format_number(row.result.*q.field)
              << '\n';
        }
      } else {
        // One gnuplot data block per radial position.
        std::map<double, std::vector<const SweepRow*>> blocks;
        for (const auto& row : rows) {
          if (row.orientation == o) blocks[row.r_over_rs].push_back(&row);
        }
        bool first = true;
        for (const auto& [x, block] : blocks) {
          if (!first) out << "\n\n";
          first = false;
          out << "# r_over_rs = " << format_number(x) << "\n# wavelength_nm " << q.name << '\n';
          for (const SweepRow* row : block) {
            out << format_number(row->wavelength_nm) << ' '
                << format_number(row->result.*q.field) << '\n';
          }
        }
      }
    }
  }
}

}  // namespace nanoshell
