// Copyright 2026 The waveqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// waveqed: eigen | evolve | spectrum | pvcheck
//
// Exit codes: 0 ok, 2 bad configuration or flags, 3 verification failure,
// 4 I/O error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "waveqed/commands.hpp"

namespace {

using namespace waveqed;

struct Options {
  std::string config_path;
  std::optional<double> gamma, gamma0, omega, kd, delta_omega;
  std::optional<int> excited;
  std::string out;
  bool verify = false;
  unsigned threads = 0;

  Grid kd_grid{0.0, 2.0 * pi, 1000};
  std::string delta_list;
  double t_max = 20.0;
  std::optional<double> dt;
  std::string method;
  std::size_t stride = 1;
  Grid omega_grid{-5.0, 5.0, 401};
  Grid a_grid{0.05, 6.0, 200};
};

void add_chain_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_path, "JSON config (gamma, gamma0, omega, delta_omega, kd, excited_index)");
  cmd->add_option("--gamma", o.gamma, "edge-qubit decay rate");
  cmd->add_option("--gamma0", o.gamma0, "central-qubit decay rate");
  cmd->add_option("--omega", o.omega, "edge-qubit frequency (only gamma/omega matters)");
  cmd->add_option("--kd", o.kd, "phase kd between neighbours");
  cmd->add_option("--delta-omega", o.delta_omega, "central-qubit detuning omega - omega0");
  cmd->add_option("--excited", o.excited, "initially excited qubit (1, 2 or 3)");
}

void add_common_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--out", o.out, "output CSV path (stdout if omitted)");
  cmd->add_flag("--verify", o.verify, "cross-check against an independent method");
  cmd->add_option("--threads", o.threads, "worker threads (WAVEQED_THREADS overrides)");
}

ChainConfig resolve_config(const Options& o) {
  ChainConfig c = o.config_path.empty() ? ChainConfig{} : load_config(o.config_path);
  if (o.gamma) c.gamma = *o.gamma;
  if (o.gamma0) c.gamma0 = *o.gamma0;
  else if (o.gamma && o.config_path.empty()) c.gamma0 = *o.gamma;
  if (o.omega) c.omega = *o.omega;
  if (o.kd) c.kd = *o.kd;
  if (o.delta_omega) c.delta_omega = *o.delta_omega;
  if (o.excited) c.excited_index = *o.excited;
  return validate_config(c);
}

unsigned resolve_threads(unsigned requested) {
  if (const char* env = std::getenv("WAVEQED_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 4096) throw config_error("WAVEQED_THREADS must be a positive integer");
    return static_cast<unsigned>(v);
  }
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw config_error("bad number in list: " + item);
    }
  }
  if (v.empty()) throw config_error("empty list");
  return v;
}

int emit(const RunManifest& manifest, const CommandResult& r, const Options& o) {
  const std::string hash = manifest_hash(manifest);
  const std::string csv = csv_string(r.table, hash);
  if (o.out.empty()) {
    std::cout << csv;
  } else {
    write_text_file(o.out, csv);
    write_text_file(o.out + ".manifest.json", manifest_to_json(manifest).dump(2) + "\n");
    if (r.sidecar) {
      nlohmann::json side = *r.sidecar;
      side["manifest_fnv1a64"] = hash;
      write_text_file(o.out + ".peaks.json", side.dump(2) + "\n");
    }
  }
  if (o.verify) {
    std::cerr << "verify: max deviation " << format_number(r.verify_deviation) << " (tolerance "
              << format_number(r.verify_tolerance) << ") " << (r.verify_failed ? "FAIL" : "PASS") << "\n";
    if (r.verify_failed) return kExitVerify;
  }
  return kExitOk;
}

RunManifest base_manifest(const std::string& command, const ChainConfig& c, const Options& o) {
  RunManifest m;
  m.command = command;
  m.config = c;
  if (!o.out.empty()) {
    m.outputs = {o.out, o.out + ".manifest.json"};
    if (command == "spectrum") m.outputs.push_back(o.out + ".peaks.json");
  }
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-qubit waveguide QED chain: roots, dynamics, spectra, principal-value check"};
  app.require_subcommand(1);
  Options o;

  auto* eigen = app.add_subcommand("eigen", "characteristic roots over a kd x delta_omega grid");
  add_chain_flags(eigen, o);
  add_common_flags(eigen, o);
  eigen->add_option("--kd-min", o.kd_grid.min, "kd grid start");
  eigen->add_option("--kd-max", o.kd_grid.max, "kd grid end");
  eigen->add_option("--kd-points", o.kd_grid.points, "kd grid size");
  eigen->add_option("--delta-list", o.delta_list, "comma-separated detunings (overrides --delta-omega)");

  auto* evolve = app.add_subcommand("evolve", "amplitude trajectory");
  add_chain_flags(evolve, o);
  add_common_flags(evolve, o);
  evolve->add_option("--t-max", o.t_max, "final time (1/gamma)");
  evolve->add_option("--dt", o.dt, "time step (default 1e-3/gamma)");
  evolve->add_option("--method", o.method, "ode | closed | collective")->default_str("ode");
  evolve->add_option("--stride", o.stride, "write every n-th sample");

  auto* spectrum = app.add_subcommand("spectrum", "spectral density S(omega, t)");
  add_chain_flags(spectrum, o);
  add_common_flags(spectrum, o);
  spectrum->add_option("--t-max", o.t_max, "evaluation time t (1/gamma)");
  spectrum->add_option("--dt", o.dt, "trajectory time step (default 1e-3/gamma)");
  spectrum->add_option("--omega-min", o.omega_grid.min, "(omega - Omega)/gamma start");
  spectrum->add_option("--omega-max", o.omega_grid.max, "(omega - Omega)/gamma end");
  spectrum->add_option("--omega-points", o.omega_grid.points, "frequency grid size");
  spectrum->add_option("--method", o.method, "numeric | closed")->default_str("numeric");

  auto* pvcheck = app.add_subcommand("pvcheck", "principal-value integral: exact, approximation, quadrature");
  add_common_flags(pvcheck, o);
  pvcheck->add_option("--a-min", o.a_grid.min, "a/pi grid start");
  pvcheck->add_option("--a-max", o.a_grid.max, "a/pi grid end");
  pvcheck->add_option("--a-points", o.a_grid.points, "a grid size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const unsigned threads = resolve_threads(o.threads);
    if (eigen->parsed()) {
      ChainConfig c = resolve_config(o);
      const std::vector<double> kds = o.kd ? std::vector<double>{*o.kd} : o.kd_grid.values();
      const std::vector<double> deltas =
          o.delta_list.empty() ? std::vector<double>{c.delta_omega} : parse_list(o.delta_list);
      RunManifest m = base_manifest("eigen", c, o);
      m.grids = {{"kd", kds}, {"delta_omega", deltas}};
      return emit(m, cmd_eigen(c, kds, deltas, o.verify, threads), o);
    }
    if (evolve->parsed()) {
      ChainConfig c = resolve_config(o);
      const double dt = o.dt.value_or(default_dt_factor / c.gamma);
      const std::string method = o.method.empty() ? "ode" : o.method;
      RunManifest m = base_manifest("evolve", c, o);
      m.grids = {{"t_max", o.t_max}, {"dt", dt}, {"method", method}, {"stride", o.stride}};
      return emit(m, cmd_evolve(c, o.t_max, dt, parse_method(method), o.verify, o.stride), o);
    }
    if (spectrum->parsed()) {
      ChainConfig c = resolve_config(o);
      const double dt = o.dt.value_or(default_dt_factor / c.gamma);
      const std::string method = o.method.empty() ? "numeric" : o.method;
      RunManifest m = base_manifest("spectrum", c, o);
      m.grids = {{"omega", o.omega_grid.to_json()}, {"t", o.t_max}, {"dt", dt}, {"method", method}};
      return emit(m, cmd_spectrum(c, o.omega_grid.values(), o.t_max, dt, method, o.verify, threads), o);
    }
    if (pvcheck->parsed()) {
      RunManifest m = base_manifest("pvcheck", ChainConfig{}, o);
      m.grids = {{"a_over_pi", o.a_grid.to_json()}};
      return emit(m, cmd_pvcheck(o.a_grid.values(), o.verify, threads), o);
    }
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const io_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const numeric_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitVerify;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
