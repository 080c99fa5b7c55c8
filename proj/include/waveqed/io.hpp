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

// Run manifests and deterministic CSV output.

#pragma once

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "waveqed/chain_model.hpp"

namespace waveqed {

inline constexpr const char* kToolVersion = "0.1.0";

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Everything that determines an output file. Thread count is deliberately
// absent: results are independent of it.
struct RunManifest {
  std::string command;
  ChainConfig config;
  nlohmann::json grids = nlohmann::json::object();
  std::vector<std::string> outputs;
  std::string tool_version = kToolVersion;

  bool operator==(const RunManifest&) const = default;
};

inline nlohmann::json manifest_to_json(const RunManifest& m) {
  return {{"command", m.command}, {"config", config_to_json(m.config)}, {"grids", m.grids},
          {"outputs", m.outputs}, {"tool_version", m.tool_version}};
}

inline RunManifest manifest_from_json(const nlohmann::json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.config = config_from_json(j.at("config"));
  m.grids = j.at("grids");
  m.outputs = j.at("outputs").get<std::vector<std::string>>();
  m.tool_version = j.at("tool_version").get<std::string>();
  return m;
}

// FNV-1a (64 bit) of the canonical (sorted-key, compact) manifest JSON.
inline std::string manifest_hash(const RunManifest& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : manifest_to_json(m).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Header row, data rows, then "# manifest fnv1a64=<hash>".
inline void write_csv(std::ostream& os, const Table& table, const std::string& hash) {
  for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
  os << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) throw io_error("row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
  os << "# manifest fnv1a64=" << hash << '\n';
}

inline std::string csv_string(const Table& table, const std::string& hash) {
  std::ostringstream os;
  write_csv(os, table, hash);
  return os.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw io_error("cannot open " + path + " for writing");
  f << text;
  f.close();
  if (!f) throw io_error("failed writing " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline ChainConfig load_config(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

}  // namespace waveqed
