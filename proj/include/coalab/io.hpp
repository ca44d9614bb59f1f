// Copyright 2026 The coalab Authors
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

#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "coalab/grid.hpp"
#include "coalab/kmc.hpp"

namespace coalab {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);
double parse_double(const std::string& s);

/// First line of every CSV written by the tools.
std::string hash_line(const std::string& config_hash);

/// Writes `dir`/header.json and `dir`/order_<n>.csv (columns i1..in, value).
void write_family_bundle(const std::string& dir, const SymmetricGridFamily& u, const std::string& config_hash);

struct FamilyBundle {
    SymmetricGridFamily family;
    std::string config_hash;
};

/// Reads a bundle back; values round-trip bit-exactly.
FamilyBundle read_family_bundle(const std::string& dir);

/// Rows traj_id, t, x_1[, ...]: one row per trajectory and snapshot time.
void write_snapshots_csv(const std::string& path, const Ensemble& ens, const std::string& config_hash);

/// k1.csv-style (bin, center..., k1_hat, se1) and k2.csv-style (bin_i, bin_j, k2_hat, se2) tables.
void write_k1_csv(const std::string& path, const CorrelationEstimate& est, const std::string& config_hash);
void write_k2_csv(const std::string& path, const CorrelationEstimate& est, const std::string& config_hash);

/// Generic numeric table with a header row.
void write_table_csv(const std::string& path, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows, const std::string& config_hash);

void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

/// Config hash recorded in a CSV ("# config_hash=...") or JSON ("config_hash") artifact; empty if absent.
std::string artifact_hash(const std::string& path);

}  // namespace coalab
