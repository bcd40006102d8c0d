#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>

#include "CLI11.hpp"
#include "biphoton/cli/run.hpp"

namespace {

using namespace biphoton;

// "a:b:n" (inclusive linspace) or a comma-separated list.
std::vector<double> parse_lengths(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw Error(ErrorKind::config, "--lengths-cm: bad number '" + s + "'");
    return v;
  };
  std::vector<std::string> parts;
  const char sep = text.find(':') != std::string::npos ? ':' : ',';
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);) parts.push_back(item);
  if (sep == ':') {
    if (parts.size() != 3) throw Error(ErrorKind::config, "--lengths-cm expects start:stop:count");
    const double count = number(parts[2]);
    if (!(count >= 1.0) || count != static_cast<double>(static_cast<std::size_t>(count)))
      throw Error(ErrorKind::config, "--lengths-cm count must be a positive integer");
    return linspace(number(parts[0]), number(parts[1]), static_cast<std::size_t>(count));
  }
  std::vector<double> out;
  for (const auto& p : parts) out.push_back(number(p));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::config, "cannot open config " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SPDC biphoton spectra from chirped poled crystals and their fibre compression"};
  app.require_subcommand(1, 1);

  std::string config_path, out_dir, alpha_sign, fibre_model, tpsa_mode, lengths;
  double length_cm = -1.0;
  const std::pair<const char*, const char*> commands[] = {
      {"spectrum", "|F(Omega)|^2 of the crystal and of its periodic counterpart"},
      {"g2", "G2(tau) after each fibre length"},
      {"sweep", "G2 width against fibre length for both chirp signs"},
      {"design", "dispersion constants, poling periods and compression length"},
      {"check", "validity ratios of the closed-form approximations"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--alpha-sign", alpha_sign, "sign applied to |alpha|")->check(CLI::IsMember({"+", "-"}));
    sub->add_option("--fibre-model", fibre_model)->check(CLI::IsMember({"quadratic", "full"}));
    sub->add_option("--tpsa-mode", tpsa_mode)->check(CLI::IsMember({"exact", "quadratic", "linear", "erf", "rect"}));
    sub->add_option("--length-cm", length_cm, "fibre length for g2");
    sub->add_option("--lengths-cm", lengths, "fibre lengths as start:stop:count or a comma list");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << error_json(ErrorKind::config, e.what()).dump(2) << '\n';
    return 2;
  }

  const Command command = parse_command(app.get_subcommands().front()->get_name());
  RunConfig cfg;
  try {
    cfg = parse_config(config_path.empty() ? std::string() : read_file(config_path));
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (!alpha_sign.empty())
      cfg.crystal.alpha_per_cm2 = (alpha_sign == "-" ? -1.0 : 1.0) * std::abs(cfg.crystal.alpha_per_cm2);
    if (!fibre_model.empty()) cfg.fibre.model = parse_fibre_model(fibre_model);
    if (!tpsa_mode.empty()) cfg.tpsa_mode = parse_tpsa_kind(tpsa_mode);
    if (length_cm >= 0.0 || app.get_subcommands().front()->count("--length-cm")) cfg.fibre.length_cm = length_cm;
    if (!lengths.empty()) cfg.fibre.lengths_cm = parse_lengths(lengths);
    validate(cfg);
  } catch (const Error& e) {
    std::cout << error_json(ErrorKind::config, e.what()).dump(2) << '\n';
    return 2;
  }
  return run(command, cfg, std::cout);
}
