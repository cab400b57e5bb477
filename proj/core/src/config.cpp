#include "qdot/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qdot/constants.hpp"
#include "qdot/result_table.hpp"

namespace qdot::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config: " + path + ": " + what);
}

double parse_quantity(const json& value, const std::string& unit,
                      const std::string& path) {
  if (!value.is_string())
    fail(path, "expected a string with unit suffix \"<number> " + unit + "\"");
  const std::string text = value.get<std::string>();
  std::istringstream ss(text);
  double number = 0.0;
  std::string suffix, extra;
  if (!(ss >> number >> suffix) || (ss >> extra))
    fail(path, "cannot parse quantity '" + text + "'");
  if (suffix != unit)
    fail(path, "unit '" + suffix + "' does not match required '" + unit + "'");
  if (!std::isfinite(number)) fail(path, "value is not finite");
  return number;
}

// Section view that tracks consumed keys so unknown ones are rejected.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  double quantity(const std::string& key, const std::string& unit) {
    return parse_quantity(require(key), unit, path_ + "." + key);
  }
  double quantity_or(const std::string& key, const std::string& unit, double fallback) {
    if (!has(key)) return fallback;
    return quantity(key, unit);
  }

  double number(const std::string& key) {
    const json& v = require(key);
    if (!v.is_number()) fail(path_ + "." + key, "expected a plain number");
    return v.get<double>();
  }
  double number_or(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  int integer(const std::string& key) {
    const json& v = require(key);
    if (!v.is_number_integer()) fail(path_ + "." + key, "expected an integer");
    return v.get<int>();
  }
  int integer_or(const std::string& key, int fallback) {
    return has(key) ? integer(key) : fallback;
  }

  std::uint64_t uint64_or(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = require(key);
    if (!v.is_number_unsigned() && !v.is_number_integer())
      fail(path_ + "." + key, "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean_or(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = require(key);
    if (!v.is_boolean()) fail(path_ + "." + key, "expected a boolean");
    return v.get<bool>();
  }

  std::string text(const std::string& key) {
    const json& v = require(key);
    if (!v.is_string()) fail(path_ + "." + key, "expected a string");
    return v.get<std::string>();
  }
  std::string text_or(const std::string& key, const std::string& fallback) {
    return has(key) ? text(key) : fallback;
  }

  std::array<double, 4> quantity4(const std::string& key, const std::string& unit) {
    const json& v = require(key);
    if (!v.is_array() || v.size() != 4)
      fail(path_ + "." + key, "expected an array of 4 quantities");
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i)
      out[i] = parse_quantity(v[i], unit, path_ + "." + key);
    return out;
  }
  std::array<double, 4> quantity4_or(const std::string& key, const std::string& unit,
                                     std::array<double, 4> fallback) {
    return has(key) ? quantity4(key, unit) : fallback;
  }

  std::array<double, 4> number4_or(const std::string& key,
                                   std::array<double, 4> fallback) {
    if (!has(key)) return fallback;
    const json& v = require(key);
    if (!v.is_array() || v.size() != 4)
      fail(path_ + "." + key, "expected an array of 4 numbers");
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i) {
      if (!v[i].is_number()) fail(path_ + "." + key, "expected numbers");
      out[i] = v[i].get<double>();
    }
    return out;
  }

  std::vector<double> number_list_or(const std::string& key,
                                     std::vector<double> fallback) {
    if (!has(key)) return fallback;
    const json& v = require(key);
    if (!v.is_array()) fail(path_ + "." + key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) fail(path_ + "." + key, "expected numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  const json& raw(const std::string& key) { return require(key); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.contains(it.key()))
        fail(path_ + "." + it.key(), "unknown key");
  }

 private:
  const json& require(const std::string& key) {
    if (!j_.contains(key)) fail(path_ + "." + key, "missing required key");
    seen_.insert(key);
    return j_.at(key);
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string quantity_string(double v, const std::string& unit) {
  return format_double(v) + " " + unit;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text,
                           std::optional<std::uint64_t> seed_override) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");

  static const std::set<std::string> known_sections = {
      "material", "geometry", "effective", "array", "protocol", "ed", "output", "seed"};
  for (auto it = root.begin(); it != root.end(); ++it)
    if (!known_sections.contains(it.key()))
      throw ConfigError("config: unknown section '" + it.key() + "'");

  RunConfig cfg;
  json resolved = json::object();

  if (root.contains("seed")) {
    if (!root["seed"].is_number_integer() && !root["seed"].is_number_unsigned())
      throw ConfigError("config: seed must be an integer");
    cfg.seed = root["seed"].get<std::uint64_t>();
  }
  if (seed_override) cfg.seed = *seed_override;
  resolved["seed"] = cfg.seed;

  if (root.contains("material")) {
    Section s(root["material"], "material");
    model::MaterialParams m;
    m.effective_mass_ratio = s.number_or("effective_mass_ratio", m.effective_mass_ratio);
    m.relative_permittivity = s.number_or("relative_permittivity", m.relative_permittivity);
    m.g_factor = s.number_or("g_factor", m.g_factor);
    s.finish();
    try {
      m.validate();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config: material: ") + e.what());
    }
    cfg.material = m;
    resolved["material"] = {{"effective_mass_ratio", m.effective_mass_ratio},
                            {"relative_permittivity", m.relative_permittivity},
                            {"g_factor", m.g_factor}};
  }

  if (root.contains("geometry")) {
    Section s(root["geometry"], "geometry");
    model::DotGeometry g;
    g.side_length_nm = s.quantity("side_length", "nm");
    g.effective_area_nm2 =
        s.quantity_or("effective_area", "nm2", g.side_length_nm * g.side_length_nm);
    g.corner_bias_ueV = s.quantity4_or("corner_bias", "ueV", {});
    s.finish();
    try {
      g.validate();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config: geometry: ") + e.what());
    }
    cfg.geometry = g;
    resolved["geometry"] = {
        {"side_length", quantity_string(g.side_length_nm, "nm")},
        {"effective_area", quantity_string(g.effective_area_nm2, "nm2")},
        {"corner_bias", {quantity_string(g.corner_bias_ueV[0], "ueV"),
                         quantity_string(g.corner_bias_ueV[1], "ueV"),
                         quantity_string(g.corner_bias_ueV[2], "ueV"),
                         quantity_string(g.corner_bias_ueV[3], "ueV")}}};
  }

  if (root.contains("effective")) {
    Section s(root["effective"], "effective");
    EffectiveSection e;
    if (s.has("eps0")) {
      e.eps0_ueV = s.quantity4("eps0", "ueV");
    } else if (cfg.geometry) {
      e.eps0_ueV = model::site_energies_from_bias(*cfg.geometry);
    }
    e.delta_ueV = s.quantity("delta", "ueV");
    if (s.has("zeeman_per_flux")) {
      e.zeeman_per_flux_ueV = s.quantity("zeeman_per_flux", "ueV");
    } else if (cfg.material && cfg.geometry) {
      // field of one flux quantum through the effective area
      const double b1 = qdot::constants::flux_quantum_T_nm2 / cfg.geometry->effective_area_nm2;
      e.zeeman_per_flux_ueV = model::zeeman_energy(*cfg.material, b1);
    }
    e.diamagnetic_ueV = s.quantity_or("diamagnetic_coeff", "ueV", 0.0);
    e.flux_from = s.number_or("flux_from", 0.0);
    e.flux_to = s.number_or("flux_to", 1.0);
    e.flux_points = s.integer_or("flux_points", 101);
    s.finish();
    if (e.flux_points < 1) throw ConfigError("config: effective.flux_points must be >= 1");
    if (e.delta_ueV < 0.0) throw ConfigError("config: effective.delta must be >= 0");
    cfg.effective = e;
    resolved["effective"] = {
        {"eps0", {quantity_string(e.eps0_ueV[0], "ueV"), quantity_string(e.eps0_ueV[1], "ueV"),
                  quantity_string(e.eps0_ueV[2], "ueV"), quantity_string(e.eps0_ueV[3], "ueV")}},
        {"delta", quantity_string(e.delta_ueV, "ueV")},
        {"zeeman_per_flux", quantity_string(e.zeeman_per_flux_ueV, "ueV")},
        {"diamagnetic_coeff", quantity_string(e.diamagnetic_ueV, "ueV")},
        {"flux_from", e.flux_from},
        {"flux_to", e.flux_to},
        {"flux_points", e.flux_points}};
  }

  if (root.contains("array")) {
    Section s(root["array"], "array");
    ArraySection a;
    a.geometry.n_dots = s.integer("n_dots");
    a.geometry.spacing_nm = s.quantity("spacing", "nm");
    a.geometry.side_nm = s.quantity("side", "nm");
    a.geometry.image_distance_nm = s.quantity_or("image_distance", "nm", 0.0);
    a.geometry.permittivity = s.number_or("permittivity", 12.9);
    s.finish();
    try {
      a.geometry.validate();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config: array: ") + e.what());
    }
    cfg.array = a;
    resolved["array"] = {{"n_dots", a.geometry.n_dots},
                         {"spacing", quantity_string(a.geometry.spacing_nm, "nm")},
                         {"side", quantity_string(a.geometry.side_nm, "nm")},
                         {"image_distance", quantity_string(a.geometry.image_distance_nm, "nm")},
                         {"permittivity", a.geometry.permittivity}};
  }

  if (root.contains("protocol")) {
    Section s(root["protocol"], "protocol");
    ProtocolSection p;
    p.kind = s.text("kind");
    static const std::set<std::string> kinds = {
        "gate", "rotation", "schedule", "rootswap", "computational", "detuned", "preserve"};
    if (!kinds.contains(p.kind))
      throw ConfigError("config: protocol.kind '" + p.kind + "' is not recognised");

    json schedule_json = json::array();
    if (p.kind == "gate") {
      p.gate = s.text("gate");
      if (p.gate != "hadamard" && p.gate != "not")
        throw ConfigError("config: protocol.gate must be 'hadamard' or 'not'");
    } else if (p.kind == "rotation") {
      p.theta_rad = s.number("theta");
      p.phase_rad = s.number_or("phase", 0.0);
      p.gate_energy_ueV = s.quantity("gate_energy", "ueV");
    } else if (p.kind == "schedule") {
      const json& seg = s.raw("segments");
      if (!seg.is_array() || seg.empty())
        throw ConfigError("config: protocol.segments must be a nonempty array");
      for (std::size_t i = 0; i < seg.size(); ++i) {
        Section e(seg[i], "protocol.segments[" + std::to_string(i) + "]");
        ScheduleEntry entry;
        entry.duration_ps = e.quantity("duration", "ps");
        entry.e0_ueV = e.quantity_or("e0", "ueV", 0.0);
        entry.e1_ueV = e.quantity_or("e1", "ueV", 0.0);
        entry.gamma_ueV = e.quantity_or("gamma", "ueV", 0.0);
        e.finish();
        // round-trip the entries into the resolved document
        schedule_json.push_back({{"duration", quantity_string(entry.duration_ps, "ps")},
                                 {"e0", quantity_string(entry.e0_ueV, "ueV")},
                                 {"e1", quantity_string(entry.e1_ueV, "ueV")},
                                 {"gamma", quantity_string(entry.gamma_ueV, "ueV")}});
        p.schedule.push_back(entry);
      }
    } else {
      p.gamma_ueV = s.quantity_or("gamma", "ueV", 0.0);
      if (s.has("v")) p.v_ueV = s.quantity("v", "ueV");
      p.v_over_gamma = s.number_list_or("v_over_gamma", {});
      p.start = s.text_or("start", "00");
    }
    p.t_max_ps = s.quantity_or("t_max", "ps", 0.0);
    p.points = s.integer_or("points", 2000);
    p.shots = s.uint64_or("shots", 0);
    s.finish();
    if (p.points < 2) throw ConfigError("config: protocol.points must be >= 2");
    cfg.protocol = p;
    resolved["protocol"] = {{"kind", p.kind},
                            {"gate", p.gate},
                            {"theta", p.theta_rad},
                            {"phase", p.phase_rad},
                            {"gate_energy", quantity_string(p.gate_energy_ueV, "ueV")},
                            {"gamma", quantity_string(p.gamma_ueV, "ueV")},
                            {"v", quantity_string(p.v_ueV, "ueV")},
                            {"v_over_gamma", p.v_over_gamma},
                            {"start", p.start},
                            {"t_max", quantity_string(p.t_max_ps, "ps")},
                            {"points", p.points},
                            {"shots", p.shots},
                            {"segments", schedule_json}};
  }

  if (root.contains("ed")) {
    Section s(root["ed"], "ed");
    EdSection e;
    e.config.L_over_a = s.number("L_over_a");
    e.config.sp_cutoff = s.integer("cutoff");
    e.config.quadrature_order = s.integer_or("quadrature_order", 64);
    e.config.corner_bias = s.number4_or("corner_bias", {});  // effective Hartree
    e.config.interaction_scale = s.boolean_or("noninteracting", false) ? 0.0 : 1.0;
    e.channel = s.text_or("channel", "both");
    e.n_lowest = s.integer_or("n_lowest", 6);
    e.grid_n = s.integer_or("grid_n", 161);
    e.cache_dir = s.text_or("cache_dir", "");
    s.finish();
    if (e.channel != "singlet" && e.channel != "triplet" && e.channel != "both")
      throw ConfigError("config: ed.channel must be singlet, triplet or both");
    if (e.n_lowest < 1) throw ConfigError("config: ed.n_lowest must be >= 1");
    try {
      e.config.validate();
    } catch (const std::exception& ex) {
      throw ConfigError(std::string("config: ed: ") + ex.what());
    }
    cfg.ed = e;
    resolved["ed"] = {{"L_over_a", e.config.L_over_a},
                      {"cutoff", e.config.sp_cutoff},
                      {"quadrature_order", e.config.quadrature_order},
                      {"corner_bias", e.config.corner_bias},
                      {"noninteracting", e.config.interaction_scale == 0.0},
                      {"channel", e.channel},
                      {"n_lowest", e.n_lowest},
                      {"grid_n", e.grid_n},
                      {"cache_dir", e.cache_dir}};
  }

  if (root.contains("output")) {
    Section s(root["output"], "output");
    cfg.output.prefix = s.text_or("prefix", "");
    s.finish();
  }
  resolved["output"] = {{"prefix", cfg.output.prefix}};

  cfg.resolved_json = resolved.dump(2);
  cfg.config_hash = fnv1a_hash(cfg.resolved_json);
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path,
                          std::optional<std::uint64_t> seed_override) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_run_config(ss.str(), seed_override);
}

}  // namespace qdot::io
