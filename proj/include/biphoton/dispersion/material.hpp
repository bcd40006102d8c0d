#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "biphoton/numerics/error.hpp"

namespace biphoton {

enum class Axis { x, y, z, isotropic };

inline std::string_view to_string(Axis a) {
  switch (a) {
    case Axis::x: return "x";
    case Axis::y: return "y";
    case Axis::z: return "z";
    case Axis::isotropic: return "isotropic";
  }
  return "?";
}

inline Axis parse_axis(std::string_view s) {
  if (s == "x") return Axis::x;
  if (s == "y") return Axis::y;
  if (s == "z") return Axis::z;
  if (s == "isotropic") return Axis::isotropic;
  throw Error(ErrorKind::config, "unknown axis '" + std::string(s) + "'");
}

// Supported dispersion formulas (wavelength in micrometres):
//   sellmeier-3term     n^2 = 1 + sum_i B_i l^2 / (l^2 - C_i)       [B1, C1, B2, C2, B3, C3]
//   sellmeier-pole-ir   n^2 = A + B / (1 - C / l^2) - D l^2          [A, B, C, D]
//   constant            n = A                                        [A]
enum class SellmeierForm { three_term, pole_ir, constant };

inline std::string_view to_string(SellmeierForm f) {
  switch (f) {
    case SellmeierForm::three_term: return "sellmeier-3term";
    case SellmeierForm::pole_ir: return "sellmeier-pole-ir";
    case SellmeierForm::constant: return "constant";
  }
  return "?";
}

inline SellmeierForm parse_form(std::string_view s) {
  if (s == "sellmeier-3term") return SellmeierForm::three_term;
  if (s == "sellmeier-pole-ir") return SellmeierForm::pole_ir;
  if (s == "constant") return SellmeierForm::constant;
  throw Error(ErrorKind::config, "unknown dispersion form '" + std::string(s) + "'");
}

class MaterialModel {
 public:
  MaterialModel(std::string name, Axis axis, SellmeierForm form, std::vector<double> coefficients,
                double valid_lo_um, double valid_hi_um, std::string citation = {})
      : name_(std::move(name)),
        axis_(axis),
        form_(form),
        coefficients_(std::move(coefficients)),
        valid_lo_um_(valid_lo_um),
        valid_hi_um_(valid_hi_um),
        citation_(std::move(citation)) {
    const std::size_t expected = form_ == SellmeierForm::three_term ? 6
                                 : form_ == SellmeierForm::pole_ir  ? 4
                                                                    : 1;
    if (coefficients_.size() != expected)
      throw Error(ErrorKind::config, "material " + label() + ": form " +
                                         std::string(to_string(form_)) + " needs " +
                                         std::to_string(expected) + " coefficients");
    if (!(valid_lo_um_ > 0.0 && valid_lo_um_ < valid_hi_um_))
      throw Error(ErrorKind::config, "material " + label() + ": invalid validity range");
  }

  const std::string& name() const noexcept { return name_; }
  Axis axis() const noexcept { return axis_; }
  SellmeierForm form() const noexcept { return form_; }
  const std::vector<double>& coefficients() const noexcept { return coefficients_; }
  double valid_lo_um() const noexcept { return valid_lo_um_; }
  double valid_hi_um() const noexcept { return valid_hi_um_; }
  const std::string& citation() const noexcept { return citation_; }

  std::string label() const { return name_ + "/" + std::string(to_string(axis_)); }

  bool in_range(double lambda_um) const noexcept {
    return lambda_um >= valid_lo_um_ && lambda_um <= valid_hi_um_;
  }

  double refractive_index(double lambda_um) const {
    if (!in_range(lambda_um)) {
      std::ostringstream msg;
      msg << "wavelength " << lambda_um << " um outside validity range [" << valid_lo_um_ << ", "
          << valid_hi_um_ << "] um of " << label();
      throw Error(ErrorKind::range, msg.str());
    }
    const auto& c = coefficients_;
    const double l2 = lambda_um * lambda_um;
    double n2 = 0.0;
    switch (form_) {
      case SellmeierForm::three_term:
        n2 = 1.0 + c[0] * l2 / (l2 - c[1]) + c[2] * l2 / (l2 - c[3]) + c[4] * l2 / (l2 - c[5]);
        break;
      case SellmeierForm::pole_ir:
        n2 = c[0] + c[1] / (1.0 - c[2] / l2) - c[3] * l2;
        break;
      case SellmeierForm::constant:
        return c[0];
    }
    if (!(n2 > 0.0)) throw Error(ErrorKind::range, "non-real refractive index for " + label());
    return std::sqrt(n2);
  }

 private:
  std::string name_;
  Axis axis_;
  SellmeierForm form_;
  std::vector<double> coefficients_;
  double valid_lo_um_;
  double valid_hi_um_;
  std::string citation_;
};

class MaterialLibrary {
 public:
  MaterialLibrary() = default;
  explicit MaterialLibrary(std::vector<MaterialModel> models) : models_(std::move(models)) {}

  const std::vector<MaterialModel>& models() const noexcept { return models_; }

  void add(MaterialModel model) { models_.push_back(std::move(model)); }

  const MaterialModel* find(std::string_view name, Axis axis) const noexcept {
    for (const auto& m : models_)
      if (m.name() == name && (m.axis() == axis || m.axis() == Axis::isotropic)) return &m;
    return nullptr;
  }

  const MaterialModel& get(std::string_view name, Axis axis) const {
    if (const auto* m = find(name, axis)) return *m;
    throw Error(ErrorKind::config, "no dispersion data for material '" + std::string(name) +
                                       "' axis " + std::string(to_string(axis)));
  }

  static MaterialLibrary from_json(const nlohmann::json& doc) {
    MaterialLibrary lib;
    if (!doc.contains("materials") || !doc["materials"].is_array())
      throw Error(ErrorKind::config, "material file: top-level 'materials' array missing");
    std::size_t index = 0;
    for (const auto& entry : doc["materials"]) {
      const std::string where = "materials[" + std::to_string(index++) + "]";
      try {
        const auto range = entry.at("valid_um").get<std::vector<double>>();
        if (range.size() != 2) throw Error(ErrorKind::config, "valid_um needs two values");
        lib.add(MaterialModel(entry.at("name").get<std::string>(),
                              parse_axis(entry.at("axis").get<std::string>()),
                              parse_form(entry.at("form").get<std::string>()),
                              entry.at("coefficients").get<std::vector<double>>(), range[0],
                              range[1], entry.value("citation", std::string{})));
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::config, "material file " + where + ": " + e.what());
      } catch (const Error& e) {
        throw Error(ErrorKind::config, "material file " + where + ": " + e.what());
      }
    }
    return lib;
  }

  static MaterialLibrary from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::config, "cannot open material file " + path);
    try {
      return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::config, "material file " + path + ": " + e.what());
    }
  }

  nlohmann::json to_json() const {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& m : models_) {
      list.push_back({{"name", m.name()},
                      {"axis", std::string(to_string(m.axis()))},
                      {"form", std::string(to_string(m.form()))},
                      {"coefficients", m.coefficients()},
                      {"valid_um", {m.valid_lo_um(), m.valid_hi_um()}},
                      {"citation", m.citation()}});
    }
    return {{"materials", list}};
  }

 private:
  std::vector<MaterialModel> models_;
};

// Shipped coefficient sets (mirrored in data/materials.json).
//
// KTP y and z: Bierlein & Vanherzeele 1989. The x axis is not needed for
// propagation along x and is not shipped.
// Fused silica: Malitson 1965 three-term form.
inline MaterialLibrary builtin_materials() {
  return MaterialLibrary({
      MaterialModel("KTP", Axis::y, SellmeierForm::pole_ir, {2.19229, 0.83547, 0.04970, 0.01621},
                    0.40, 3.50,
                    "J. D. Bierlein and H. Vanherzeele, J. Opt. Soc. Am. B 6, 622 (1989)"),
      MaterialModel("KTP", Axis::z, SellmeierForm::pole_ir, {2.25411, 1.06543, 0.05486, 0.02140},
                    0.40, 3.50,
                    "J. D. Bierlein and H. Vanherzeele, J. Opt. Soc. Am. B 6, 622 (1989)"),
      MaterialModel("fused_silica", Axis::isotropic, SellmeierForm::three_term,
                    {0.6961663, 0.0684043 * 0.0684043, 0.4079426, 0.1162414 * 0.1162414, 0.8974794,
                     9.896161 * 9.896161},
                    0.21, 3.71, "I. H. Malitson, J. Opt. Soc. Am. 55, 1205 (1965)"),
  });
}

}  // namespace biphoton
