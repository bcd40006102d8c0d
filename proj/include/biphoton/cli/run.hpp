#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "biphoton/cli/config.hpp"

namespace biphoton {

enum class Command { spectrum, g2, sweep, design, check };

inline Command parse_command(std::string_view s) {
  if (s == "spectrum") return Command::spectrum;
  if (s == "g2") return Command::g2;
  if (s == "sweep") return Command::sweep;
  if (s == "design") return Command::design;
  if (s == "check") return Command::check;
  throw Error(ErrorKind::config, "unknown command '" + std::string(s) + "'");
}

inline std::string_view to_string(Command c) {
  switch (c) {
    case Command::spectrum: return "spectrum";
    case Command::g2: return "g2";
    case Command::sweep: return "sweep";
    case Command::design: return "design";
    case Command::check: return "check";
  }
  return "?";
}

// 9 significant digits, locale independent.
inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

// Writes to a sibling temporary and renames it into place.
inline void write_atomically(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::config, "cannot write " + tmp.string());
    f << text;
    if (!f.flush()) throw Error(ErrorKind::config, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

class CsvWriter {
 public:
  CsvWriter(std::string_view command, const std::string& hash, std::string_view columns) {
    text_ += "# biphoton ";
    text_ += command;
    text_ += " config=";
    text_ += hash;
    text_ += '\n';
    text_ += columns;
    text_ += '\n';
  }

  void row(double a, double b) {
    text_ += format_number(a);
    text_ += ',';
    text_ += format_number(b);
    text_ += '\n';
  }

  void row(double a, double b, double c) {
    text_ += format_number(a);
    text_ += ',';
    text_ += format_number(b);
    text_ += ',';
    text_ += format_number(c);
    text_ += '\n';
  }

  const std::string& text() const noexcept { return text_; }

 private:
  std::string text_;
};

// Everything a command needs, resolved from a RunConfig.
struct Scenario {
  RunConfig config;
  MaterialLibrary library;
  CrystalModel crystal;
  FibreSpec fibre;

  static Scenario resolve(const RunConfig& cfg) {
    validate(cfg);
    try {
      MaterialLibrary lib = cfg.materials_file.empty() ? builtin_materials()
                                                       : MaterialLibrary::from_file(cfg.materials_file);
      CrystalModel crystal = CrystalModel::build(cfg.crystal, lib);
      FibreSpec fibre = FibreSpec::build(lib.get(cfg.fibre.material, Axis::isotropic), crystal.summary.omega0,
                                         cfg.fibre.model, cfg.fibre.arm);
      fibre.remove_group_delay = cfg.fibre.remove_group_delay;
      return Scenario{cfg, std::move(lib), std::move(crystal), std::move(fibre)};
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::config) throw;
      throw Error(ErrorKind::config, std::string("cannot set up the configured materials: ") + e.what());
    }
  }
};

// Amplitude for the selected route. The closed forms share the grid of the
// linear-mode quadrature.
inline SpectralAmplitude compute_tpsa(const CrystalModel& model, TpsaKind kind, const GridDefaults& g) {
  switch (kind) {
    case TpsaKind::exact:
      return tpsa_numeric(model, default_grid(model, MismatchMode::exact, g), MismatchMode::exact);
    case TpsaKind::quadratic:
      return tpsa_numeric(model, default_grid(model, MismatchMode::quadratic, g), MismatchMode::quadratic);
    case TpsaKind::linear:
      return tpsa_numeric(model, default_grid(model, MismatchMode::linear, g), MismatchMode::linear);
    case TpsaKind::erf:
      return tpsa_closed_form(model, approximation_grid(model, g), ClosedForm::erf);
    case TpsaKind::rect:
      return tpsa_closed_form(model, approximation_grid(model, g), ClosedForm::rect);
  }
  throw Error(ErrorKind::config, "unknown tpsa mode");
}

inline MismatchMode numeric_mode(TpsaKind kind) {
  switch (kind) {
    case TpsaKind::exact: return MismatchMode::exact;
    case TpsaKind::quadratic: return MismatchMode::quadratic;
    default: return MismatchMode::linear;
  }
}

// Half-maximum band of |F|^2 mapped onto the degenerate wavelength axis.
struct SpectralBand {
  WidthResult width;      // in detuning (rad/s)
  double shortest_nm = 0.0;
  double longest_nm = 0.0;
};

inline double wavelength_nm(double omega) { return 2.0 * std::numbers::pi * kSpeedOfLight / omega * 1e7; }

inline SpectralBand spectral_band(const SpectralAmplitude& f) {
  SpectralBand b;
  b.width = fwhm(f.curve.modulus_squared(), f.grid());
  const double w0 = f.omega0;
  b.shortest_nm = std::min(wavelength_nm(w0 + b.width.right), wavelength_nm(w0 - b.width.left));
  b.longest_nm = std::max(wavelength_nm(w0 + b.width.left), wavelength_nm(w0 - b.width.right));
  return b;
}

// Signal branch at omega0 + Omega, then idler branch at omega0 - Omega, each
// in ascending wavelength.
inline std::string spectrum_csv(const SpectralAmplitude& f, const std::string& hash) {
  CsvWriter csv("spectrum", hash, "wavelength_nm,intensity_norm");
  const auto p = f.curve.modulus_squared();
  const auto& g = f.grid();
  for (std::size_t i = g.count(); i-- > 0;) csv.row(wavelength_nm(f.omega0 + g[i]), p[i]);
  for (std::size_t i = 0; i < g.count(); ++i) csv.row(wavelength_nm(f.omega0 - g[i]), p[i]);
  return csv.text();
}

// Samples with g2_norm below `floor` at either end are dropped.
inline std::string g2_csv(const TemporalAmplitude& t, const std::string& hash, double floor = 1e-6) {
  CsvWriter csv("g2", hash, "tau_fs,g2_norm");
  const auto g2 = t.g2();
  const double peak = t.width.peak;
  std::size_t first = 0, last = g2.size() - 1;
  while (first < last && g2[first] < floor * peak) ++first;
  while (last > first && g2[last] < floor * peak) --last;
  for (std::size_t i = first; i <= last; ++i) csv.row(t.grid()[i] * 1e15, g2[i] / peak);
  return csv.text();
}

inline nlohmann::json to_json(const ConditionReport& r) {
  return {{"broadening_ratio", r.broadening_ratio},
          {"gvd_ratio", r.gvd_ratio},
          {"edge_gvd_ratio", r.edge_gvd_ratio},
          {"broadening_ok", r.broadening_ok},
          {"gvd_ok", r.gvd_ok},
          {"edge_gvd_ok", r.edge_gvd_ok},
          {"thresholds", {{"broadening_min", r.thresholds.broadening_min}, {"gvd_max", r.thresholds.gvd_max}}}};
}

inline nlohmann::json to_json(const SweepPoint& p) {
  return {{"length_cm", p.length_cm},
          {"fwhm_fs", p.fwhm_s * 1e15},
          {"sidelobe_ratio", p.sidelobe_ratio},
          {"multimodal", p.multimodal}};
}

inline std::string length_tag(double x) {
  std::string s = format_number(x);
  for (char& c : s)
    if (c == '+') c = 'p';
  return s;
}

namespace detail {

inline nlohmann::json fibre_metadata(const FibreSpec& f) {
  return {{"material", f.material.label()},
          {"model", std::string(to_string(f.model))},
          {"arm", std::string(to_string(f.arm))},
          {"group_delay_removed", f.remove_group_delay}};
}

inline nlohmann::json run_spectrum(const Scenario& sc, const std::filesystem::path& out, const std::string& hash) {
  const TpsaKind kind = sc.config.tpsa_mode.value_or(TpsaKind::exact);
  const SpectralAmplitude f = compute_tpsa(sc.crystal, kind, sc.config.grid);
  const CrystalModel periodic = sc.crystal.with_alpha(0.0);
  const SpectralAmplitude ref = tpsa_numeric(periodic, f.grid(), numeric_mode(kind));

  const SpectralBand band = spectral_band(f);
  const SpectralBand ref_band = spectral_band(ref);
  write_atomically(out / "spectrum.csv", spectrum_csv(f, hash));
  write_atomically(out / "spectrum_reference.csv", spectrum_csv(ref, hash));

  nlohmann::json warnings = f.warnings;
  for (const auto& w : ref.warnings) warnings.push_back("reference: " + w);
  if (band.width.multimodal) warnings.push_back("spectrum has several disjoint regions above half maximum");
  return {{"tpsa_mode", std::string(to_string(kind))},
          {"files", {"spectrum.csv", "spectrum_reference.csv"}},
          {"half_max_edges_nm", {band.shortest_nm, band.longest_nm}},
          {"fwhm_rad_s", band.width.fwhm},
          {"reference_fwhm_rad_s", ref_band.width.fwhm},
          {"broadening_factor", band.width.fwhm / ref_band.width.fwhm},
          {"warnings", warnings}};
}

inline std::vector<double> g2_lengths(const RunConfig& cfg) {
  return cfg.fibre.lengths_cm.empty() ? std::vector<double>{cfg.fibre.length_cm} : cfg.fibre.lengths_cm;
}

inline std::vector<double> sweep_lengths(const RunConfig& cfg) {
  const auto& f = cfg.fibre;
  return f.lengths_cm.empty() ? linspace(f.sweep_start_cm, f.sweep_stop_cm, f.sweep_count) : f.lengths_cm;
}

inline nlohmann::json run_g2(const Scenario& sc, const std::filesystem::path& out, const std::string& hash) {
  const TpsaKind kind = sc.config.tpsa_mode.value_or(TpsaKind::linear);
  const SpectralAmplitude f = compute_tpsa(sc.crystal, kind, sc.config.grid);
  const double alpha = sc.crystal.spec.alpha_per_cm2;
  nlohmann::json entries = nlohmann::json::array();
  for (double l : g2_lengths(sc.config)) {
    const TemporalAmplitude t = to_time(apply_fibre(f, sc.fibre, l), sc.config.time);
    const std::string name = "g2_alpha" + length_tag(alpha) + "_l" + length_tag(l) + "cm.csv";
    write_atomically(out / name, g2_csv(t, hash));
    entries.push_back({{"length_cm", l},
                       {"file", name},
                       {"fwhm_fs", t.fwhm() * 1e15},
                       {"sidelobe_ratio", t.sidelobe_ratio()},
                       {"multimodal", t.width.multimodal},
                       {"pad_factor", t.pad_factor},
                       {"warnings", t.warnings}});
  }
  return {{"tpsa_mode", std::string(to_string(kind))},
          {"alpha_cm2", alpha},
          {"fibre", fibre_metadata(sc.fibre)},
          {"entries", entries}};
}

inline nlohmann::json run_sweep(const Scenario& sc, const std::filesystem::path& out, const std::string& hash) {
  const TpsaKind kind = sc.config.tpsa_mode.value_or(TpsaKind::linear);
  const double magnitude = std::abs(sc.crystal.spec.alpha_per_cm2);
  const std::vector<double> lengths = sweep_lengths(sc.config);

  struct Branch {
    double alpha;
    const char* file;
  };
  std::vector<Branch> branches;
  if (magnitude == 0.0) branches.push_back({0.0, "sweep_alpha_zero.csv"});
  else branches = {{-magnitude, "sweep_alpha_neg.csv"}, {magnitude, "sweep_alpha_pos.csv"}};

  nlohmann::json result = {{"tpsa_mode", std::string(to_string(kind))}, {"fibre", fibre_metadata(sc.fibre)}};
  nlohmann::json report = nlohmann::json::array();
  for (const auto& b : branches) {
    const CrystalModel model = sc.crystal.with_alpha(b.alpha);
    const SpectralAmplitude f = compute_tpsa(model, kind, sc.config.grid);
    const auto points = sweep_fibre(f, sc.fibre, lengths, sc.config.time);
    CsvWriter csv("sweep", hash, "l_cm,fwhm_fs,sidelobe_ratio");
    bool nondecreasing = true;
    std::size_t multimodal = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      csv.row(points[i].length_cm, points[i].fwhm_s * 1e15, points[i].sidelobe_ratio);
      if (i > 0 && points[i].fwhm_s < points[i - 1].fwhm_s) nondecreasing = false;
      multimodal += points[i].multimodal ? 1 : 0;
    }
    write_atomically(out / b.file, csv.text());
    const SweepPoint best = refine_minimum(f, sc.fibre, points, sc.config.refine_tol_cm, sc.config.time);
    nlohmann::json entry = {{"alpha_cm2", b.alpha},
                            {"file", b.file},
                            {"minimum", to_json(best)},
                            {"nondecreasing", nondecreasing},
                            {"multimodal_points", multimodal},
                            {"warnings", f.warnings}};
    try {
      entry["optimal_length_cm"] = optimal_length(model, sc.fibre);
    } catch (const Error& e) {
      entry["optimal_length_cm"] = nullptr;
      entry["optimal_length_note"] = e.what();
    }
    report.push_back(std::move(entry));
  }
  result["branches"] = report;
  return result;
}

inline nlohmann::json run_design(const Scenario& sc, const std::filesystem::path& out) {
  const auto& s = sc.crystal.summary;
  const auto& spec = sc.crystal.spec;
  nlohmann::json j = {{"omega0_rad_s", s.omega0},
                      {"degenerate_wavelength_nm", wavelength_nm(s.omega0)},
                      {"D_s_per_cm", s.group_mismatch},
                      {"kappa_s2_per_cm", s.gvd_mean},
                      {"mismatch0_per_cm", s.mismatch0},
                      {"kappa_f_s2_per_cm", sc.fibre.kappa},
                      {"fibre_k1_s_per_cm", sc.fibre.k1},
                      {"poling_period_um",
                       {{"entry", local_poling_period(spec, -spec.half_length())},
                        {"exit", local_poling_period(spec, spec.half_length())}}},
                      {"conditions", to_json(condition_report(sc.crystal, sc.config.thresholds))}};
  if (s.group_mismatch != 0.0 && spec.alpha_per_cm2 != 0.0) {
    const double band = rect_bandwidth(sc.crystal);
    j["rect_bandwidth_rad_s"] = band;
    // sinc^2 limit of a flat band of full width `band`
    j["transform_limited_fwhm_fs"] = 5.5663 / band * 1e15;
  }
  try {
    j["l_opt_cm"] = optimal_length(sc.crystal, sc.fibre);
  } catch (const Error& e) {
    j["l_opt_cm"] = nullptr;
    j["l_opt_note"] = e.what();
  }
  write_atomically(out / "design.json", j.dump(2) + "\n");
  j["files"] = {"design.json"};
  return j;
}

inline nlohmann::json run_check(const Scenario& sc, const std::filesystem::path& out) {
  nlohmann::json j = to_json(condition_report(sc.crystal, sc.config.thresholds));
  write_atomically(out / "check.json", j.dump(2) + "\n");
  j["files"] = {"check.json"};
  return j;
}

}  // namespace detail

// Runs a command, writes its files into cfg.output_dir and returns the report.
// Throws biphoton::Error on failure.
inline nlohmann::json execute(Command command, const RunConfig& cfg) {
  const Scenario sc = Scenario::resolve(cfg);
  const std::string hash = config_hash(cfg);
  const std::filesystem::path out = cfg.output_dir;
  nlohmann::json report;
  switch (command) {
    case Command::spectrum: report = detail::run_spectrum(sc, out, hash); break;
    case Command::g2: report = detail::run_g2(sc, out, hash); break;
    case Command::sweep: report = detail::run_sweep(sc, out, hash); break;
    case Command::design: report = detail::run_design(sc, out); break;
    case Command::check: report = detail::run_check(sc, out); break;
  }
  report["command"] = std::string(to_string(command));
  report["config_hash"] = hash;
  return report;
}

inline int exit_code(ErrorKind kind) { return kind == ErrorKind::config ? 2 : 3; }

inline nlohmann::json error_json(ErrorKind kind, std::string_view message) {
  return {{"error", {{"kind", std::string(to_string(kind))}, {"message", std::string(message)}}}};
}

// Report or error as one JSON document on `report`; returns the exit status.
inline int run(Command command, const RunConfig& cfg, std::ostream& report) {
  try {
    report << execute(command, cfg).dump(2) << '\n';
    return 0;
  } catch (const Error& e) {
    report << error_json(e.kind(), e.what()).dump(2) << '\n';
    return exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    report << error_json(ErrorKind::config, e.what()).dump(2) << '\n';
    return 2;
  }
}

}  // namespace biphoton
