#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nanoshell/errors.hpp"
#include "nanoshell/model.hpp"
#include "nanoshell/regression.hpp"
#include "nanoshell/spectro.hpp"
#include "nanoshell/sweep.hpp"

namespace fs = std::filesystem;
using namespace nanoshell;

namespace {

constexpr int kExitRegression = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRange = 3;
constexpr int kExitNumerical = 4;

// Writes next to the target and renames, so a failed run leaves no partial file.
void write_atomically(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    if (!out) throw ConfigError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

void execute(const SweepConfig& cfg) {
  const auto rows = run_sweep(cfg);
  std::ostringstream csv;
  write_csv(csv, rows);
  const fs::path out = cfg.output;
  write_atomically(out, csv.str());
  fs::path sidecar = out;
  sidecar += ".config.json";
  write_atomically(sidecar, to_json(cfg).dump(2) + "\n");
  if (!cfg.plot_dir.empty()) write_plot_files(cfg.plot_dir, rows, cfg.kind);
  std::cerr << rows.size() << " rows written to " << out.string() << '\n';
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("not a number in list: '" + item + "'");
    }
  }
  return out;
}

int report_regressions() {
  const auto outcomes = run_regressions();
  int failures = 0;
  for (const auto& o : outcomes) {
    std::printf("%s  %-60s expected %s%s computed %s (rel %.3g, tol %.3g)\n",
                o.pass ? "PASS" : "FAIL", o.label().c_str(), o.entry.lower_bound ? "> " : "",
                format_number(o.entry.expected).c_str(), format_number(o.computed).c_str(),
                o.rel_error, o.entry.tolerance);
    if (!o.pass) ++failures;
  }
  std::printf("%zu entries, %d failed\n", outcomes.size(), failures);
  return failures == 0 ? 0 : kExitRegression;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Emission of a dipole in or near a stratified sphere"};
  app.require_subcommand(0, 1);
  bool preset_regression = false;
  app.add_flag("--preset-regression", preset_regression,
               "Run the built-in reference table and report pass/fail per entry");

  auto* run = app.add_subcommand("run", "Run a sweep described by a JSON config");
  std::string config_path;
  int run_threads = 0;
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("--threads", run_threads, "Override the worker count");

  auto* pre = app.add_subcommand("preset", "Radial sweep of a reference particle");
  std::string preset_name;
  double lambda = 595.0;
  std::string grid = "default";
  std::string out_path = "results.csv";
  std::string orientations = "radial,tangential";
  int l_max = 60;
  int threads = 1;
  std::string plot_dir;
  pre->add_option("name", preset_name, "Preset A..F")->required();
  pre->add_option("--lambda", lambda, "Emission wavelength [nm]");
  pre->add_option("--grid", grid, "\"default\" or comma-separated r/r_s values");
  pre->add_option("--out", out_path, "CSV output path");
  pre->add_option("--orientations", orientations, "Comma-separated radial,tangential,averaged");
  pre->add_option("--l-max", l_max, "Highest multipole order");
  pre->add_option("--threads", threads, "Worker threads");
  pre->add_option("--plot-dir", plot_dir, "Directory for two-column plot files");

  auto* regress = app.add_subcommand("regress", "Compare against the reference table");

  auto* conv = app.add_subcommand("converge", "Partial sums versus multipole order");
  std::string conv_preset;
  double conv_r = 0.99;
  std::string conv_orientation = "radial";
  double conv_lambda = 595.0;
  int conv_l_max = 60;
  conv->add_option("name", conv_preset, "Preset A..F")->required();
  conv->add_option("--r", conv_r, "Emitter position r/r_s");
  conv->add_option("--orientation", conv_orientation, "radial or tangential");
  conv->add_option("--lambda", conv_lambda, "Emission wavelength [nm]");
  conv->add_option("--l-max", conv_l_max, "Highest multipole order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (preset_regression || regress->parsed()) return report_regressions();

    if (run->parsed()) {
      SweepConfig cfg = load_sweep_config(config_path);
      if (run_threads > 0) cfg.threads = run_threads;
      execute(cfg);
      return 0;
    }

    if (pre->parsed()) {
      nlohmann::json j;
      j["sphere"] = preset_name;
      j["sweep"] = "radial";
      j["wavelength_nm"] = lambda;
      if (grid != "default") j["grid"] = parse_list(grid);
      nlohmann::json o = nlohmann::json::array();
      std::stringstream ss(orientations);
      for (std::string item; std::getline(ss, item, ',');) {
        if (!item.empty()) o.push_back(item);
      }
      j["orientations"] = o;
      j["l_max"] = l_max;
      j["threads"] = threads;
      j["output"] = out_path;
      if (!plot_dir.empty()) j["plot_dir"] = plot_dir;
      execute(parse_sweep_config(j));
      return 0;
    }

    if (conv->parsed()) {
      const StratifiedSphere sphere = preset(conv_preset);
      const DipoleSource dipole{conv_r * sphere.outer_radius(),
                                parse_orientation(conv_orientation), conv_lambda};
      SpectroOptions opts;
      opts.l_max = conv_l_max;
      const auto report = convergence_report(sphere, dipole, opts);
      std::printf("# %s r/r_s=%s %s lambda=%s nm\n", conv_preset.c_str(),
                  format_number(conv_r).c_str(), conv_orientation.c_str(),
                  format_number(conv_lambda).c_str());
      std::printf("l,wt_norm,wrad_norm,shift_norm,wohm_norm\n");
      for (const auto& row : report.rows) {
        std::printf("%d,%s,%s,%s,%s\n", row.l, format_number(row.wt).c_str(),
                    format_number(row.wrad).c_str(), format_number(row.shift).c_str(),
                    format_number(row.wohm).c_str());
      }
      if (report.eight_digit_order > 0) {
        std::printf("# 8-digit convergence from l = %d\n", report.eight_digit_order);
      } else {
        std::printf("# not converged to 8 digits by l = %d\n", conv_l_max);
      }
      return 0;
    }

    std::cerr << app.help();
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const RangeError& e) {
    std::cerr << "out of range: " << e.what() << '\n';
    return kExitRange;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRegression;
  }
}
