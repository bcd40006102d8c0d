#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "biphoton/crystal/conditions.hpp"
#include "biphoton/propagation/sweep.hpp"

namespace biphoton {

// Spectral-amplitude route selected on the command line.
enum class TpsaKind { exact, quadratic, linear, erf, rect };

inline std::string_view to_string(TpsaKind k) {
  switch (k) {
    case TpsaKind::exact: return "exact";
    case TpsaKind::quadratic: return "quadratic";
    case TpsaKind::linear: return "linear";
    case TpsaKind::erf: return "erf";
    case TpsaKind::rect: return "rect";
  }
  return "?";
}

inline TpsaKind parse_tpsa_kind(std::string_view s) {
  if (s == "exact") return TpsaKind::exact;
  if (s == "quadratic") return TpsaKind::quadratic;
  if (s == "linear") return TpsaKind::linear;
  if (s == "erf") return TpsaKind::erf;
  if (s == "rect") return TpsaKind::rect;
  throw Error(ErrorKind::config, "unknown tpsa mode '" + std::string(s) + "'");
}

inline FibreModel parse_fibre_model(std::string_view s) {
  if (s == "quadratic") return FibreModel::quadratic;
  if (s == "full") return FibreModel::full;
  throw Error(ErrorKind::config, "unknown fibre model '" + std::string(s) + "'");
}

inline Arm parse_arm(std::string_view s) {
  if (s == "idler") return Arm::idler;
  if (s == "signal") return Arm::signal;
  throw Error(ErrorKind::config, "unknown fibre arm '" + std::string(s) + "'");
}

struct FibreSettings {
  std::string material = "fused_silica";
  FibreModel model = FibreModel::quadratic;
  Arm arm = Arm::idler;
  bool remove_group_delay = true;
  double length_cm = 0.0;
  double sweep_start_cm = 0.0;
  double sweep_stop_cm = 50.0;
  std::size_t sweep_count = 201;
  // Explicit lengths; when non-empty they replace length_cm for g2 and the
  // start/stop/count grid for sweep.
  std::vector<double> lengths_cm;
};

struct RunConfig {
  CrystalSpec crystal{};
  FibreSettings fibre{};
  GridDefaults grid{};
  TimeOptions time{};
  ConditionThresholds thresholds{};
  std::optional<TpsaKind> tpsa_mode;  // unset: exact for spectrum, linear otherwise
  std::string materials_file;         // empty: shipped coefficient sets
  std::string output_dir = ".";
  double refine_tol_cm = 0.01;
};

namespace detail {

// A dimensional field and the unit suffixes it accepts, with the factor to
// the internal unit.
struct UnitField {
  std::string_view base;
  std::vector<std::pair<std::string_view, double>> units;
};

class ObjectReader {
 public:
  ObjectReader(const nlohmann::json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw Error(ErrorKind::config, where() + " must be an object");
  }

  std::string where(std::string_view key = {}) const {
    if (key.empty()) return path_.empty() ? std::string("config") : path_;
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  template <typename Handler>
  void each(Handler&& handle) const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) handle(it.key(), it.value());
  }

  std::string string_at(const std::string& key, const nlohmann::json& v) const {
    if (!v.is_string()) throw Error(ErrorKind::config, where(key) + " must be a string");
    return v.get<std::string>();
  }

  double number_at(const std::string& key, const nlohmann::json& v) const {
    if (!v.is_number()) throw Error(ErrorKind::config, where(key) + " must be a number");
    return v.get<double>();
  }

  std::size_t count_at(const std::string& key, const nlohmann::json& v) const {
    if (!v.is_number_integer() || v.get<long long>() < 1)
      throw Error(ErrorKind::config, where(key) + " must be a positive integer");
    return static_cast<std::size_t>(v.get<long long>());
  }

  bool bool_at(const std::string& key, const nlohmann::json& v) const {
    if (!v.is_boolean()) throw Error(ErrorKind::config, where(key) + " must be true or false");
    return v.get<bool>();
  }

  // Returns the value in internal units if `key` names one of the fields.
  // A bare base name is rejected as a missing unit.
  std::optional<std::pair<std::string_view, double>> dimensional(
      const std::string& key, const nlohmann::json& v, const std::vector<UnitField>& fields) const {
    for (const auto& f : fields) {
      if (key == f.base)
        throw Error(ErrorKind::config, "missing unit on " + where(key) + " (use " + std::string(f.base) + "_" +
                                           std::string(f.units.front().first) + ")");
      for (const auto& [unit, factor] : f.units) {
        if (key.size() == f.base.size() + 1 + unit.size() && key.starts_with(f.base) &&
            key[f.base.size()] == '_' && key.ends_with(unit))
          return std::pair{f.base, number_at(key, v) * factor};
      }
    }
    return std::nullopt;
  }

  [[noreturn]] void unknown(const std::string& key) const {
    throw Error(ErrorKind::config, "unknown key " + where(key));
  }

 private:
  const nlohmann::json& obj_;
  std::string path_;
};

inline const std::vector<UnitField>& length_cm_units(std::string_view base) {
  static std::map<std::string_view, std::vector<UnitField>> cache;
  auto it = cache.find(base);
  if (it == cache.end())
    it = cache.emplace(base, std::vector<UnitField>{{base, {{"cm", 1.0}, {"mm", 0.1}, {"m", 100.0}, {"um", 1e-4}}}})
             .first;
  return it->second;
}

inline void read_crystal(const nlohmann::json& j, RunConfig& cfg) {
  static const std::vector<UnitField> fields = {
      {"L", {{"cm", 1.0}, {"mm", 0.1}, {"um", 1e-4}}},
      {"K0", {{"per_cm", 1.0}, {"per_mm", 10.0}, {"per_um", 1e4}}},
      {"alpha", {{"cm2", 1.0}, {"mm2", 100.0}, {"um2", 1e8}}},
      {"pump", {{"nm", 1.0}, {"um", 1e3}}},
  };
  ObjectReader r(j, "crystal");
  r.each([&](const std::string& key, const nlohmann::json& v) {
    if (auto d = r.dimensional(key, v, fields)) {
      const auto [base, value] = *d;
      if (base == "L") cfg.crystal.length_cm = value;
      else if (base == "K0") cfg.crystal.grating_k0_per_cm = value;
      else if (base == "alpha") cfg.crystal.alpha_per_cm2 = value;
      else cfg.crystal.pump_nm = value;
    } else if (key == "material") {
      cfg.crystal.material = r.string_at(key, v);
    } else if (key == "polarization") {
      ObjectReader p(v, r.where(key));
      p.each([&](const std::string& wave, const nlohmann::json& axis) {
        Axis a;
        try {
          a = parse_axis(p.string_at(wave, axis));
        } catch (const Error& e) {
          throw Error(ErrorKind::config, p.where(wave) + ": " + e.what());
        }
        if (wave == "pump") cfg.crystal.polarization.pump = a;
        else if (wave == "signal") cfg.crystal.polarization.signal = a;
        else if (wave == "idler") cfg.crystal.polarization.idler = a;
        else p.unknown(wave);
      });
    } else {
      r.unknown(key);
    }
  });
}

inline void read_fibre(const nlohmann::json& j, RunConfig& cfg) {
  ObjectReader r(j, "fibre");
  r.each([&](const std::string& key, const nlohmann::json& v) {
    if (auto d = r.dimensional(key, v, length_cm_units("length"))) {
      cfg.fibre.length_cm = d->second;
    } else if (key == "material") {
      cfg.fibre.material = r.string_at(key, v);
    } else if (key == "model") {
      try {
        cfg.fibre.model = parse_fibre_model(r.string_at(key, v));
      } catch (const Error& e) {
        throw Error(ErrorKind::config, r.where(key) + ": " + e.what());
      }
    } else if (key == "arm") {
      try {
        cfg.fibre.arm = parse_arm(r.string_at(key, v));
      } catch (const Error& e) {
        throw Error(ErrorKind::config, r.where(key) + ": " + e.what());
      }
    } else if (key == "lengths" || key.starts_with("lengths_")) {
      static const std::map<std::string, double, std::less<>> units = {{"lengths_cm", 1.0}, {"lengths_mm", 0.1}, {"lengths_m", 100.0}};
      const auto u = units.find(key);
      if (u == units.end()) {
        if (key == "lengths") throw Error(ErrorKind::config, "missing unit on " + r.where(key) + " (use lengths_cm)");
        r.unknown(key);
      }
      if (!v.is_array()) throw Error(ErrorKind::config, r.where(key) + " must be an array of numbers");
      cfg.fibre.lengths_cm.clear();
      for (const auto& x : v) {
        if (!x.is_number()) throw Error(ErrorKind::config, r.where(key) + " must be an array of numbers");
        cfg.fibre.lengths_cm.push_back(x.get<double>() * u->second);
      }
    } else if (key == "remove_group_delay") {
      cfg.fibre.remove_group_delay = r.bool_at(key, v);
    } else if (key == "sweep") {
      ObjectReader s(v, r.where(key));
      s.each([&](const std::string& k2, const nlohmann::json& v2) {
        if (auto a = s.dimensional(k2, v2, length_cm_units("start"))) cfg.fibre.sweep_start_cm = a->second;
        else if (auto b = s.dimensional(k2, v2, length_cm_units("stop"))) cfg.fibre.sweep_stop_cm = b->second;
        else if (k2 == "count") cfg.fibre.sweep_count = s.count_at(k2, v2);
        else s.unknown(k2);
      });
    } else {
      r.unknown(key);
    }
  });
}

inline void read_grid(const nlohmann::json& j, RunConfig& cfg) {
  static const std::vector<UnitField> fields = {
      {"window_lo", {{"nm", 1.0}, {"um", 1e3}}},
      {"window_hi", {{"nm", 1.0}, {"um", 1e3}}},
  };
  ObjectReader r(j, "grid");
  r.each([&](const std::string& key, const nlohmann::json& v) {
    if (auto d = r.dimensional(key, v, fields)) {
      (d->first == "window_lo" ? cfg.grid.window_lo_nm : cfg.grid.window_hi_nm) = d->second;
    } else if (key == "points") {
      cfg.grid.count = r.count_at(key, v);
    } else if (key == "span_factor") {
      cfg.grid.span_factor = r.number_at(key, v);
    } else if (key == "min_fwhm_samples") {
      cfg.time.min_fwhm_samples = r.count_at(key, v);
    } else {
      r.unknown(key);
    }
  });
}

inline void read_conditions(const nlohmann::json& j, RunConfig& cfg) {
  ObjectReader r(j, "conditions");
  r.each([&](const std::string& key, const nlohmann::json& v) {
    if (key == "broadening_min") cfg.thresholds.broadening_min = r.number_at(key, v);
    else if (key == "gvd_max") cfg.thresholds.gvd_max = r.number_at(key, v);
    else r.unknown(key);
  });
}

}  // namespace detail

inline void validate(const RunConfig& cfg) {
  auto fail = [](const std::string& key, const std::string& why) {
    throw Error(ErrorKind::config, key + ": " + why);
  };
  const auto& c = cfg.crystal;
  if (!(c.length_cm > 0.0)) fail("crystal.L_cm", "must be positive");
  if (!(c.pump_nm > 0.0)) fail("crystal.pump_nm", "must be positive");
  if (!(c.grating_k0_per_cm > 0.0)) fail("crystal.K0_per_cm", "must be positive");
  if (!(c.min_local_grating() > 0.0))
    fail("crystal.alpha_cm2", "local grating wavenumber K0 - |alpha| L must stay positive");
  const auto& f = cfg.fibre;
  if (!(f.length_cm >= 0.0)) fail("fibre.length_cm", "must be non-negative");
  if (!(f.sweep_start_cm >= 0.0)) fail("fibre.sweep.start_cm", "must be non-negative");
  if (!(f.sweep_stop_cm >= f.sweep_start_cm)) fail("fibre.sweep.stop_cm", "must not be below start");
  if (f.sweep_count < 1) fail("fibre.sweep.count", "must be at least 1");
  for (double l : f.lengths_cm)
    if (!(l >= 0.0)) fail("fibre.lengths_cm", "lengths must be non-negative");
  const auto& g = cfg.grid;
  if (!std::has_single_bit(g.count) || g.count < 16) fail("grid.points", "must be a power of two >= 16");
  if (!(g.span_factor > 0.0)) fail("grid.span_factor", "must be positive");
  if (!(g.window_lo_nm > 0.0 && g.window_lo_nm < g.window_hi_nm)) fail("grid.window_lo_nm", "must be below window_hi_nm");
  if (!(cfg.refine_tol_cm > 0.0)) fail("refine_tol_cm", "must be positive");
}

inline RunConfig parse_config_document(const nlohmann::json& doc) {
  RunConfig cfg;
  if (doc.is_null()) return cfg;
  detail::ObjectReader r(doc, "");
  r.each([&](const std::string& key, const nlohmann::json& v) {
    if (key == "crystal") detail::read_crystal(v, cfg);
    else if (key == "fibre") detail::read_fibre(v, cfg);
    else if (key == "grid") detail::read_grid(v, cfg);
    else if (key == "conditions") detail::read_conditions(v, cfg);
    else if (key == "tpsa_mode") {
      try {
        cfg.tpsa_mode = parse_tpsa_kind(r.string_at(key, v));
      } catch (const Error& e) {
        throw Error(ErrorKind::config, "tpsa_mode: " + std::string(e.what()));
      }
    } else if (key == "materials_file") cfg.materials_file = r.string_at(key, v);
    else if (key == "output_dir") cfg.output_dir = r.string_at(key, v);
    else if (auto d = r.dimensional(key, v, detail::length_cm_units("refine_tol"))) cfg.refine_tol_cm = d->second;
    else r.unknown(key);
  });
  validate(cfg);
  return cfg;
}

// Empty or whitespace-only text yields the default configuration.
inline RunConfig parse_config(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return RunConfig{};
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::config, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config_document(doc);
}

// Fully resolved configuration in canonical (internal-unit) form.
inline nlohmann::json to_json(const RunConfig& cfg) {
  const auto& c = cfg.crystal;
  const auto& f = cfg.fibre;
  nlohmann::json j;
  j["crystal"] = {{"material", c.material},
                  {"L_cm", c.length_cm},
                  {"K0_per_cm", c.grating_k0_per_cm},
                  {"alpha_cm2", c.alpha_per_cm2},
                  {"pump_nm", c.pump_nm},
                  {"polarization",
                   {{"pump", std::string(to_string(c.polarization.pump))},
                    {"signal", std::string(to_string(c.polarization.signal))},
                    {"idler", std::string(to_string(c.polarization.idler))}}}};
  j["fibre"] = {{"material", f.material},
                {"model", std::string(to_string(f.model))},
                {"arm", std::string(to_string(f.arm))},
                {"remove_group_delay", f.remove_group_delay},
                {"length_cm", f.length_cm},
                {"sweep", {{"start_cm", f.sweep_start_cm}, {"stop_cm", f.sweep_stop_cm}, {"count", f.sweep_count}}},
                {"lengths_cm", f.lengths_cm}};
  j["grid"] = {{"points", cfg.grid.count},
               {"span_factor", cfg.grid.span_factor},
               {"window_lo_nm", cfg.grid.window_lo_nm},
               {"window_hi_nm", cfg.grid.window_hi_nm},
               {"min_fwhm_samples", cfg.time.min_fwhm_samples}};
  j["conditions"] = {{"broadening_min", cfg.thresholds.broadening_min}, {"gvd_max", cfg.thresholds.gvd_max}};
  j["tpsa_mode"] = cfg.tpsa_mode ? nlohmann::json(std::string(to_string(*cfg.tpsa_mode))) : nlohmann::json(nullptr);
  j["materials_file"] = cfg.materials_file;
  j["refine_tol_cm"] = cfg.refine_tol_cm;
  return j;
}

// 64-bit FNV-1a of the canonical config dump (output_dir excluded).
inline std::string config_hash(const RunConfig& cfg) {
  const std::string text = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xf];
  return out;
}

}  // namespace biphoton
