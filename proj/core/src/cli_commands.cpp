#include "qdot/cli_commands.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "qdot/constants.hpp"
#include "qdot/coupling.hpp"
#include "qdot/dynamics.hpp"
#include "qdot/entanglement.hpp"
#include "qdot/exact_ed.hpp"

namespace qdot::io {

namespace {

constexpr double kHbar = qdot::constants::hbar_ueV_ps;

void stamp(ResultTable& t, const RunConfig& cfg, const std::string& command) {
  t.metadata["tool"] = "qdot";
  t.metadata["tool_version"] = kToolVersion;
  t.metadata["command"] = command;
  t.metadata["config_hash"] = hash_hex(cfg.config_hash);
  t.metadata["seed"] = std::to_string(cfg.seed);
}

std::string prefixed(const RunConfig& cfg, const std::string& name) {
  return cfg.output.prefix.empty() ? name : cfg.output.prefix + "_" + name;
}

const EffectiveSection& need_effective(const RunConfig& cfg) {
  if (!cfg.effective) throw ConfigError("config: section 'effective' is required");
  return *cfg.effective;
}

const ProtocolSection& need_protocol(const RunConfig& cfg) {
  if (!cfg.protocol) throw ConfigError("config: section 'protocol' is required");
  return *cfg.protocol;
}

std::string ratio_tag(double r) {
  std::string s = format_double(r);
  for (char& c : s)
    if (c == '.') c = 'p';
  return s;
}

}  // namespace

CommandOutput cmd_spectrum(const RunConfig& cfg) {
  const EffectiveSection& eff = need_effective(cfg);

  std::vector<double> grid(eff.flux_points);
  for (int i = 0; i < eff.flux_points; ++i)
    grid[i] = eff.flux_points == 1
                  ? eff.flux_from
                  : eff.flux_from + (eff.flux_to - eff.flux_from) * i / (eff.flux_points - 1);

  model::EffectiveParams base;
  base.eps0_ueV = eff.eps0_ueV;
  base.delta_ueV = eff.delta_ueV;
  base.zeeman_ueV = eff.zeeman_per_flux_ueV;
  const auto table = model::spectrum_vs_flux(base, grid, eff.diamagnetic_ueV);

  ResultTable out;
  out.columns = {"flux_quanta [1]",
                 "E_singlet_minus [ueV]",
                 "E_singlet_plus [ueV]",
                 "E_triplet_m-1_minus [ueV]",
                 "E_triplet_m-1_plus [ueV]",
                 "E_triplet_m0_minus [ueV]",
                 "E_triplet_m0_plus [ueV]",
                 "E_triplet_m+1_minus [ueV]",
                 "E_triplet_m+1_plus [ueV]"};
  for (const auto& row : table)
    out.add_row({row.flux_quanta, row.singlet_minus, row.singlet_plus,
                 row.triplet[0][0], row.triplet[0][1], row.triplet[1][0],
                 row.triplet[1][1], row.triplet[2][0], row.triplet[2][1]});
  stamp(out, cfg, "spectrum");
  out.metadata["delta_ueV"] = format_double(eff.delta_ueV);
  out.metadata["zeeman_per_flux_ueV"] = format_double(eff.zeeman_per_flux_ueV);

  CommandOutput result;
  result.tables.emplace_back(prefixed(cfg, "spectrum.csv"), std::move(out));
  return result;
}

CommandOutput cmd_evolve(const RunConfig& cfg) {
  const ProtocolSection& proto = need_protocol(cfg);

  dynamics::GateSchedule schedule;
  std::string label = proto.kind;
  if (proto.kind == "gate") {
    const double delta = need_effective(cfg).delta_ueV;
    if (delta <= 0.0) throw ConfigError("config: effective.delta must be > 0 for gates");
    Eigen::Matrix2d h;
    h << 0.0, 2.0 * delta, 2.0 * delta, 0.0;
    const double t_not = std::numbers::pi * kHbar / (4.0 * delta);
    schedule.segments.push_back({proto.gate == "not" ? t_not : 0.5 * t_not, h});
    label = proto.gate;
  } else if (proto.kind == "rotation") {
    schedule = dynamics::synthesize_rotation(proto.theta_rad, proto.phase_rad,
                                             need_effective(cfg).delta_ueV,
                                             proto.gate_energy_ueV);
  } else if (proto.kind == "schedule") {
    for (const auto& e : proto.schedule) {
      Eigen::Matrix2d h;
      h << e.e0_ueV, e.gamma_ueV, e.gamma_ueV, e.e1_ueV;
      schedule.segments.push_back({e.duration_ps, h});
    }
  } else {
    throw ConfigError("config: protocol.kind '" + proto.kind + "' is not an evolve protocol");
  }

  double total = 0.0;
  for (const auto& seg : schedule.segments) total += seg.duration_ps;
  if (total <= 0.0) throw ConfigError("config: schedule has zero total duration");

  ResultTable out;
  out.columns = {"t [ps]", "P0 [1]", "P1 [1]", "re_a0 [1]", "im_a0 [1]",
                 "re_a1 [1]", "im_a1 [1]"};

  const dynamics::QState initial = dynamics::QState::computational(1, 0);
  dynamics::QState final_state = initial;
  for (int i = 0; i < proto.points; ++i) {
    const double t = total * i / (proto.points - 1);
    // truncate the schedule at time t
    dynamics::GateSchedule partial;
    double remaining = t;
    for (const auto& seg : schedule.segments) {
      if (remaining <= 0.0) break;
      auto s = seg;
      s.duration_ps = std::min(seg.duration_ps, remaining);
      remaining -= s.duration_ps;
      partial.segments.push_back(std::move(s));
    }
    const dynamics::QState psi = dynamics::run_schedule(initial, partial);
    out.add_row({t, psi.population(0), psi.population(1), psi.amps(0).real(),
                 psi.amps(0).imag(), psi.amps(1).real(), psi.amps(1).imag()});
    if (i == proto.points - 1) final_state = psi;
  }
  stamp(out, cfg, "evolve");
  out.metadata["protocol"] = label;
  out.metadata["total_duration_ps"] = format_double(total);

  CommandOutput result;
  result.tables.emplace_back(prefixed(cfg, "evolve.csv"), std::move(out));

  if (proto.shots > 0) {
    const auto counts = dynamics::measure_computational(final_state, proto.shots, cfg.seed);
    ResultTable hist;
    hist.columns = {"outcome [bitstring]", "count [1]"};
    for (const auto& [bits, count] : counts)
      hist.add_row({static_cast<double>(std::stoull(bits, nullptr, 2)),
                    static_cast<double>(count)});
    // first column doubles as the numeric value of the bitstring
    stamp(hist, cfg, "evolve");
    hist.metadata["shots"] = std::to_string(proto.shots);
    result.tables.emplace_back(prefixed(cfg, "histogram.csv"), std::move(hist));
  }
  return result;
}

CommandOutput cmd_couple(const RunConfig& cfg) {
  if (!cfg.array) throw ConfigError("config: section 'array' is required");
  const auto& g = cfg.array->geometry;

  const int n_max = std::max(1, g.n_dots - 1);
  ResultTable out;
  out.columns = {"n [1]",           "v_exact [ueV]",   "v_dipole [ueV]",
                 "v_screened [ueV]", "exact_ratio [1]", "dipole_ratio [1]",
                 "screened_ratio [1]"};

  const double e1 = coupling::v_exact(1, g);
  const double d1 = coupling::v_dipole(1, g);
  const double s1 = g.image_distance_nm > 0.0 ? coupling::v_screened(1, g) : 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const double ve = coupling::v_exact(n, g);
    const double vd = coupling::v_dipole(n, g);
    const double vs = g.image_distance_nm > 0.0 ? coupling::v_screened(n, g) : 0.0;
    out.add_row({static_cast<double>(n), ve, vd, vs, ve / e1, vd / d1,
                 s1 > 0.0 ? vs / s1 : 0.0});
  }
  stamp(out, cfg, "couple");

  CommandOutput result;
  result.tables.emplace_back(prefixed(cfg, "couplings.csv"), std::move(out));
  return result;
}

CommandOutput cmd_concurrence(const RunConfig& cfg) {
  const ProtocolSection& proto = need_protocol(cfg);
  static const std::set<std::string> kinds = {"rootswap", "computational", "detuned",
                                              "preserve"};
  if (!kinds.contains(proto.kind))
    throw ConfigError("config: protocol.kind must be one of rootswap, computational, "
                      "detuned, preserve");

  // the sweep is over v/gamma; a direct v is a one-element sweep
  struct RunPoint {
    double gamma, v, ratio;
  };
  std::vector<RunPoint> runs;
  if (!proto.v_over_gamma.empty()) {
    if (proto.gamma_ueV <= 0.0)
      throw ConfigError("config: protocol.gamma must be > 0 with a v_over_gamma sweep");
    for (double r : proto.v_over_gamma)
      runs.push_back({proto.gamma_ueV, proto.gamma_ueV * r, r});
  } else if (proto.v_ueV > 0.0) {
    const double g = proto.gamma_ueV;
    runs.push_back({g, proto.v_ueV, g > 0.0 ? proto.v_ueV / g : 0.0});
  } else {
    throw ConfigError("config: protocol needs v or a v_over_gamma sweep");
  }

  CommandOutput result;
  for (const auto& [gamma, v, ratio] : runs) {
    if (v <= 0.0) throw ConfigError("config: v/gamma sweep produced v <= 0");

    // long enough to cover both the envelope and the rapid oscillations
    const double envelope = std::numbers::pi * kHbar / v;
    const double t_max = proto.t_max_ps > 0.0 ? proto.t_max_ps : 2.0 * envelope;
    const auto grid = entangle::time_grid(t_max, proto.points);

    entangle::ProtocolTrace trace;
    if (proto.kind == "rootswap") {
      trace = entangle::root_swap_trace(v, grid);
    } else if (proto.kind == "computational") {
      trace = entangle::computational_start_trace(v, gamma, proto.start, grid);
    } else if (proto.kind == "detuned") {
      trace = entangle::detuned_trace(gamma, v, grid);
    } else {
      trace = entangle::preservation_trace(gamma, v, grid);
    }

    ResultTable out;
    const bool has_ref = !trace.closed_form.empty();
    out.columns = {"t [ps]", "concurrence [1]", "transfer_prob [1]"};
    if (has_ref) out.columns.push_back("closed_form [1]");
    for (std::size_t i = 0; i < trace.times_ps.size(); ++i) {
      std::vector<double> row = {trace.times_ps[i], trace.concurrence[i],
                                 trace.transfer_prob[i]};
      if (has_ref) row.push_back(trace.closed_form[i]);
      out.rows.push_back(std::move(row));
    }
    stamp(out, cfg, "concurrence");
    out.metadata["protocol"] = trace.label;
    out.metadata["gamma_ueV"] = format_double(gamma);
    out.metadata["v_ueV"] = format_double(v);
    out.metadata["v_over_gamma"] = format_double(gamma > 0 ? v / gamma : 1.0);
    if (!trace.note.empty()) out.metadata["note"] = trace.note;

    result.tables.emplace_back(
        prefixed(cfg, "concurrence_" + proto.kind + "_r" + ratio_tag(ratio) + ".csv"),
        std::move(out));
  }
  return result;
}

CommandOutput cmd_ed(const RunConfig& cfg, const std::filesystem::path& out_dir) {
  if (!cfg.ed) throw ConfigError("config: section 'ed' is required");
  const EdSection& section = *cfg.ed;

  const std::filesystem::path cache_dir =
      section.cache_dir.empty() ? out_dir / "cache" : std::filesystem::path(section.cache_dir);
  std::filesystem::create_directories(cache_dir);

  // tensor cache keyed by (cutoff, order)
  ed::EDConfig base = section.config;
  base.channel = model::SpinKind::Singlet;
  const std::string key = "coulomb_c" + std::to_string(base.sp_cutoff) + "_q" +
                          std::to_string(base.quadrature_order) + ".qdt";
  const std::filesystem::path cache_path = cache_dir / key;

  bool cache_hit = false;
  ed::CoulombTensor tensor = [&] {
    if (auto loaded = ed::CoulombTensor::load(cache_path, base.sp_cutoff,
                                              base.quadrature_order)) {
      cache_hit = true;
      return std::move(*loaded);
    }
    auto built = ed::CoulombTensor::build(base.sp_cutoff, base.quadrature_order);
    built.save(cache_path);
    return built;
  }();

  std::vector<model::SpinKind> channels;
  if (section.channel == "singlet" || section.channel == "both")
    channels.push_back(model::SpinKind::Singlet);
  if (section.channel == "triplet" || section.channel == "both")
    channels.push_back(model::SpinKind::Triplet);

  ResultTable spectrum;
  spectrum.columns = {"index [1]", "channel [0=S,1=T]", "energy [Eh*]", "energy [ueV]"};

  const model::MaterialParams material = cfg.material.value_or(model::MaterialParams{});
  const double hartree_ueV = ed::effective_hartree_ueV(material);

  std::optional<ed::SpectrumResult> singlets, triplets;
  std::int64_t flagged = 0, terms = 0;
  int krylov_dim = 0;
  double max_residual = 0.0;

  for (model::SpinKind kind : channels) {
    ed::EDConfig c = base;
    c.channel = kind;
    ed::EDMatrix hm;
    try {
      hm = ed::build_h(c, tensor);
    } catch (const std::length_error& e) {
      throw ResourceCapError(e.what());
    }
    flagged += hm.flagged_terms;
    terms += hm.coulomb_terms;

    ed::SpectrumResult res;
    try {
      res = ed::solve_lowest(hm, std::min<int>(section.n_lowest,
                                               static_cast<int>(hm.h.rows())));
    } catch (const std::runtime_error& e) {
      throw NonConvergenceError(e.what());
    }
    krylov_dim = std::max(krylov_dim, res.iterations);
    max_residual = std::max(max_residual, res.max_residual);

    if (kind == model::SpinKind::Singlet) {
      singlets = res;
    } else {
      triplets = res;
    }
  }

  int index = 0;
  for (const auto* res : {singlets ? &*singlets : nullptr, triplets ? &*triplets : nullptr}) {
    if (!res) continue;
    for (double e : res->energies_eh)
      spectrum.add_row({static_cast<double>(index++),
                        res->channel == model::SpinKind::Singlet ? 0.0 : 1.0, e,
                        e * hartree_ueV});
  }

  stamp(spectrum, cfg, "ed");
  spectrum.metadata["L_over_a"] = format_double(base.L_over_a);
  spectrum.metadata["cutoff"] = std::to_string(base.sp_cutoff);
  spectrum.metadata["quadrature_order"] = std::to_string(base.quadrature_order);
  spectrum.metadata["tensor_cache"] = cache_hit ? "hit" : "miss";
  spectrum.metadata["tensor_hash"] = hash_hex(base.tensor_hash());
  spectrum.metadata["coulomb_terms"] = std::to_string(terms);
  spectrum.metadata["flagged_terms"] = std::to_string(flagged);
  spectrum.metadata["max_residual"] = format_double(max_residual);
  spectrum.metadata["krylov_dim"] = std::to_string(krylov_dim);
  spectrum.metadata["effective_hartree_ueV"] = format_double(hartree_ueV);

  CommandOutput result;
  if (singlets && triplets) {
    const auto extraction = ed::extract_delta(*singlets, *triplets);
    spectrum.metadata["delta_eff_Eh"] = format_double(extraction.delta_eh);
    spectrum.metadata["delta_eff_ueV"] = format_double(extraction.delta_eh * hartree_ueV);
    spectrum.metadata["midway_ratio"] = format_double(extraction.midway_ratio);
    spectrum.metadata["manifold_isolated"] = extraction.isolated ? "true" : "false";
    if (!extraction.isolated)
      result.notes.push_back("warning: ground manifold is not isolated");
  }

  if (singlets && singlets->vectors.cols() > 0) {
    ed::EDConfig c = base;
    c.channel = model::SpinKind::Singlet;
    const auto density =
        ed::charge_density(c, singlets->vectors.col(0), section.grid_n | 1);
    ResultTable dens;
    dens.columns = {"x [L]", "y [L]", "rho [1/L^2]"};
    for (int a = 0; a < density.grid_n; ++a)
      for (int b = 0; b < density.grid_n; ++b)
        dens.add_row({static_cast<double>(a) / (density.grid_n - 1),
                      static_cast<double>(b) / (density.grid_n - 1),
                      density.rho(a, b)});
    stamp(dens, cfg, "ed");
    dens.metadata["integral_grid"] = format_double(density.integral_grid);
    dens.metadata["integral_exact"] = format_double(density.integral_exact);
    result.tables.emplace_back(prefixed(cfg, "ed_density.csv"), std::move(dens));
  }

  result.tables.emplace_back(prefixed(cfg, "ed_spectrum.csv"), std::move(spectrum));
  if (flagged > 0)
    result.notes.push_back("warning: " + std::to_string(flagged) +
                           " Coulomb elements flagged for quadrature non-convergence");
  return result;
}

}  // namespace qdot::io
