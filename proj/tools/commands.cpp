/******************************************************************************
 * Copyright 2026 The Platoon Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "platoon/analysis.hpp"
#include "platoon/config.hpp"
#include "platoon/control.hpp"
#include "platoon/errors.hpp"
#include "platoon/simulation.hpp"
#include "platoon/topology.hpp"

#ifndef PLATOON_VERSION
#define PLATOON_VERSION "0.0.0"
#endif

namespace platoon::cli {
namespace fs = std::filesystem;
namespace {

Config load_config(const CommonOptions& options) {
  Config cfg;
  if (!options.config_path.empty()) cfg = Config::load(options.config_path);
  for (const auto& o : options.overrides) cfg.apply_override(o);
  return cfg;
}

fs::path prepare_out_dir(const std::string& dir) {
  const fs::path path = dir.empty() ? fs::path("platoon_out") : fs::path(dir);
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) {
    throw InvalidArgument(
        fmt::format("cannot create output directory '{}': {}", path.string(),
                    ec.message()));
  }
  return path;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw InvalidArgument(fmt::format("cannot write '{}'", path.string()));
  return f;
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const CommonOptions& options,
                    const std::vector<std::string>& outputs) {
  auto f = open_out(dir / "manifest.txt");
  f << "command = " << command << "\n"
    << "config = " << (options.config_path.empty() ? "<defaults>" : options.config_path)
    << "\n"
    << "out = " << dir.string() << "\n"
    << "version = " << PLATOON_VERSION << "\n"
    << "determinism = no random seeds; identical inputs give identical files\n";
  for (const auto& o : options.overrides) f << "override = " << o << "\n";
  for (const auto& o : outputs) f << "output = " << o << "\n";
}

std::string format_complex(std::complex<double> z) {
  if (z.imag() == 0.0) return fmt::format("{:.6g}", z.real());
  return fmt::format("{:.6g}{:+.6g}i", z.real(), z.imag());
}

// Groups numerically equal neighbours of a sorted list: "1 (×9)".
std::string format_eigenvalues(const std::vector<std::complex<double>>& eig) {
  std::string s;
  std::size_t i = 0;
  while (i < eig.size()) {
    std::size_t j = i + 1;
    while (j < eig.size() &&
           std::abs(eig[j] - eig[i]) <= 1e-9 * std::max(1.0, std::abs(eig[i]))) {
      ++j;
    }
    if (!s.empty()) s += ", ";
    s += format_complex(eig[i]);
    if (j - i > 1) s += fmt::format(" (×{})", j - i);
    i = j;
  }
  return s;
}

std::string describe(const Topology& topo) {
  return fmt::format("{} N={} r={}", to_string(topo.kind()), topo.n_followers(),
                     topo.range());
}

std::string describe(const GainVector& g) {
  return fmt::format("kappa_s={:g} kappa_p={:g} kappa_v={:g} kappa_a={:g}",
                     g.kappa_s, g.kappa_p, g.kappa_v, g.kappa_a);
}

std::string kind_tag(TopologyKind kind) { return std::string(to_string(kind)); }

int certify_one(const Config& cfg, TopologyKind kind, std::ostream& out) {
  const Topology topo = topology_from_config(cfg, kind);
  const GainVector gains = gains_from_config(cfg, kind);
  const double tau = vehicle_from_config(cfg).powertrain_tau;
  out << "topology: " << describe(topo) << "\n"
      << "gains: " << describe(gains) << "\n";

  const CouplingSpectrum spectrum = coupling_spectrum(topo);
  out << "eigenvalues: " << format_eigenvalues(spectrum.eigenvalues) << "\n";
  StabilityCertificate cert;
  try {
    cert = certify_gains(gains, spectrum, tau);
  } catch (const NotApplicable&) {
    out << "theorem not applicable: L + P is neither triangular nor symmetric\n";
    throw;
  }
  out << fmt::format("family: {} ({})\n", to_string(cert.family),
                     cert.integral_action ? "integral action" : "no integral action");
  for (const auto& c : cert.binding_constraints) {
    out << fmt::format("  {:<18} margin {:>12.6g}  {}\n", c.name, c.margin,
                       c.margin > 0.0 ? "ok" : "VIOLATED");
  }
  out << "certificate: " << (cert.holds ? "holds" : "fails") << "\n";
  if (!cert.holds) {
    std::string names;
    for (const auto& v : cert.violated()) names += (names.empty() ? "" : ", ") + v;
    out << "violated: " << names << "\n";
  }
  out << "extremal-eigenvalue form: "
      << (cert.extremal_form_holds ? "holds" : "fails")
      << (cert.extremal_form_agrees() ? "" : " (disagrees with the certificate)")
      << "\n";

  const int order = gains.has_integral_action() ? 4 : 3;
  const ClosedLoopSystem sys = build_closed_loop(topo, gains, tau, order);
  out << fmt::format("numerical check: spectral abscissa {:.6g} ({})\n",
                     sys.spectral_abscissa,
                     is_hurwitz(sys, 1e-9) ? "Hurwitz" : "not Hurwitz");
  if (gains.kappa_p > 0.0 && gains.kappa_s >= 0.0 &&
      gains.kappa_a > -1.0 / spectrum.max_eig) {
    out << fmt::format("kappa_v lower bound: {:.6g}\n",
                       kappa_v_lower_bound(gains.kappa_s, gains.kappa_p,
                                           gains.kappa_a, spectrum, tau));
  }
  return cert.holds ? kExitOk : kExitUnstable;
}

}  // namespace

int cmd_topo(const std::string& kind_label, int n, std::optional<int> range,
             const std::string& out_dir, std::ostream& out) {
  const TopologyKind kind = parse_topology_kind(kind_label);
  if (range && *range < 1) {
    throw InvalidArgument(fmt::format("range must be >= 1, got {}", *range));
  }
  const Topology topo = build_named(
      kind, n, range.value_or(std::min(reference_range(kind), std::max(n, 1))));
  const CouplingSpectrum spectrum = coupling_spectrum(topo);
  out << "topology: " << describe(topo) << "\n"
      << "eigenvalues: " << format_eigenvalues(spectrum.eigenvalues) << "\n"
      << fmt::format("lambda_min: {:.17g}\nlambda_max: {:.17g}\n",
                     spectrum.min_eig, spectrum.max_eig)
      << "gershgorin: " << (gershgorin_certificate(spectrum) ? "ok" : "fails")
      << "\n";
  if (!out_dir.empty()) {
    const fs::path dir = prepare_out_dir(out_dir);
    const std::string tag = kind_tag(kind);
    {
      auto f = open_out(dir / ("topology_" + tag + ".txt"));
      write_topology(f, topo);
    }
    auto f = open_out(dir / ("eigenvalues_" + tag + ".csv"));
    f << "index,real,imag\n";
    for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i) {
      f << fmt::format("{},{:.17g},{:.17g}\n", i, spectrum.eigenvalues[i].real(),
                       spectrum.eigenvalues[i].imag());
    }
    spdlog::info("wrote topology and eigenvalues to {}", dir.string());
  }
  return kExitOk;
}

int cmd_certify(const CommonOptions& options, std::ostream& out) {
  const Config cfg = load_config(options);
  int code = kExitOk;
  bool first = true;
  for (TopologyKind kind : topology_kinds(cfg)) {
    if (!first) out << "\n";
    first = false;
    code = std::max(code, certify_one(cfg, kind, out));
  }
  return code;
}

int cmd_simulate(const CommonOptions& options, std::ostream& out) {
  const Config cfg = load_config(options);
  const MetricsOptions mopt = metrics_options(cfg);
  std::vector<std::pair<TopologyKind, SimConfig>> runs;
  for (TopologyKind kind : topology_kinds(cfg)) {
    runs.emplace_back(kind, sim_config_from_config(cfg, kind));
  }
  const fs::path dir = prepare_out_dir(options.out_dir);

  std::vector<std::string> outputs;
  std::vector<std::string> csvs;
  std::vector<std::string> titles;
  for (const auto& [kind, sim] : runs) {
    const std::string tag = kind_tag(kind);
    spdlog::info("simulating {} ({})", tag, describe(sim.gains));
    const Trajectory traj = run(sim);
    const Metrics metrics = compute_metrics(traj, mopt.settle_window, mopt.settle_band);

    const std::string traj_name = "trajectory_" + tag + ".csv";
    const std::string metrics_name = "metrics_" + tag + ".csv";
    {
      auto f = open_out(dir / traj_name);
      write_trajectory_csv(f, traj);
    }
    {
      auto f = open_out(dir / metrics_name);
      write_metrics_csv(f, metrics);
    }
    outputs.push_back(traj_name);
    outputs.push_back(metrics_name);
    csvs.push_back(traj_name);
    titles.push_back(fmt::format("{} ({})", describe(sim.topology),
                                 sim.gains.has_integral_action() ? "integral"
                                                                 : "no integral"));

    out << describe(sim.topology) << ": " << describe(sim.gains) << "\n";
    for (std::size_t e = 0; e < metrics.epochs.size(); ++e) {
      const auto& em = metrics.epochs[e];
      double worst = 0.0;
      for (double v : em.steady_state_error) worst = std::max(worst, std::abs(v));
      out << fmt::format("  epoch {} [{:.2f}, {:.2f}] s: max |e_ss| = {:.3e} m\n",
                         e, em.t_start, em.t_end, worst);
    }
    double min_e = 0.0;
    for (double v : metrics.min_spacing_error) min_e = std::min(min_e, v);
    out << fmt::format("  min spacing error {:.4f} m, collision: {}\n", min_e,
                       metrics.collision ? "yes" : "no");
  }
  {
    auto f = open_out(dir / "plot_spacing.py");
    write_plot_script(f, csvs, titles, "spacing_error.png");
  }
  outputs.push_back("plot_spacing.py");
  write_manifest(dir, "simulate", options, outputs);
  return kExitOk;
}

int cmd_sweep(const CommonOptions& options, std::ostream& out) {
  const Config cfg = load_config(options);
  const auto axes = sweep_axes(cfg);
  const double tau = vehicle_from_config(cfg).powertrain_tau;
  const fs::path dir = prepare_out_dir(options.out_dir);
  const std::string file = "stability_map.csv";
  auto f = open_out(dir / file);
  f << "topology,x_name,x,y_name,y,certificate,hurwitz,spectral_abscissa\n";

  const int ny = axes.size() > 1 ? axes[1].points : 1;
  int agree = 0;
  int total = 0;
  for (TopologyKind kind : topology_kinds(cfg)) {
    const Topology topo = topology_from_config(cfg, kind);
    const GainVector base = gains_from_config(cfg, kind);
    const CouplingSpectrum spectrum = coupling_spectrum(topo);
    for (int ix = 0; ix < axes[0].points; ++ix) {
      for (int iy = 0; iy < ny; ++iy) {
        GainVector g = base;
        const double x = axes[0].value(ix);
        set_gain(g, axes[0].gain, x);
        double y = std::nan("");
        if (axes.size() > 1) {
          y = axes[1].value(iy);
          set_gain(g, axes[1].gain, y);
        }
        std::string verdict;
        bool cert_holds = false;
        try {
          cert_holds = certify_gains(g, spectrum, tau).holds;
          verdict = cert_holds ? "stable" : "unstable";
        } catch (const NotApplicable&) {
          verdict = "not_applicable";
        }
        const int order = g.has_integral_action() ? 4 : 3;
        const ClosedLoopSystem sys = build_closed_loop(topo, g, tau, order);
        const bool hurwitz = is_hurwitz(sys, 1e-9);
        if (verdict != "not_applicable") {
          ++total;
          if (hurwitz == cert_holds) ++agree;
        }
        f << fmt::format("{},{},{:.17g},{},{:.17g},{},{},{:.17g}\n", kind_tag(kind),
                         axes[0].gain, x, axes.size() > 1 ? axes[1].gain : "", y,
                         verdict, hurwitz ? 1 : 0, sys.spectral_abscissa);
      }
    }
  }
  out << fmt::format("{} grid points, certificate and eigenvalues agree on {}\n",
                     total, agree);
  write_manifest(dir, "sweep", options, {file});
  return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  if (const char* level = std::getenv("PLATOON_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  } else {
    spdlog::set_level(spdlog::level::warn);
  }

  CLI::App app{"Distributed platoon control: topology, certification, simulation"};
  app.set_version_flag("--version", PLATOON_VERSION);
  app.require_subcommand(1);

  std::string kind;
  int n = 0;
  std::optional<int> range;
  std::string topo_out;
  auto* topo = app.add_subcommand("topo", "Coupling matrix and spectrum of a named topology");
  topo->add_option("kind", kind, "PF, PFL, TPF, TPFL, rPF, rPFL, BD, BDL, rBD, rBDL")
      ->required();
  topo->add_option("n", n, "number of followers")->required();
  topo->add_option("-r,--range", range,
                  "communication range for r-kinds (default: reference range)");
  topo->add_option("--out", topo_out, "directory for topology and eigenvalue files");

  CommonOptions common;
  auto add_common = [&](CLI::App* sub, bool with_out) {
    sub->add_option("--config", common.config_path, "sectioned key = value file");
    sub->add_option("--override", common.overrides, "key=value, repeatable");
    if (with_out) sub->add_option("--out", common.out_dir, "output directory");
  };
  auto* certify = app.add_subcommand("certify", "Check gains against the stability conditions");
  add_common(certify, false);
  auto* simulate = app.add_subcommand("simulate", "Run the disturbance scenario");
  add_common(simulate, true);
  auto* sweep = app.add_subcommand("sweep", "Stability map over a gain grid");
  add_common(sweep, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitBadInput;
  }

  try {
    if (*topo) return cmd_topo(kind, n, range, topo_out, out);
    if (*certify) return cmd_certify(common, out);
    if (*simulate) return cmd_simulate(common, out);
    if (*sweep) return cmd_sweep(common, out);
  } catch (const NotApplicable& e) {
    err << "error: " << e.what() << "\n";
    return kExitNotApplicable;
  } catch (const NumericalFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}

}  // namespace platoon::cli
