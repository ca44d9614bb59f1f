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

#include "coalab/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "coalab/common.hpp"

namespace coalab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_out(const std::string& path)
{
    const fs::path p(path);
    if (p.has_parent_path())
        fs::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write '" + path + "'");
    return out;
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ','))
        out.push_back(cur);
    return out;
}

}  // namespace

std::string format_double(double x)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

double parse_double(const std::string& s)
{
    double x = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw Error("cannot parse number '" + s + "'");
    return x;
}

std::string hash_line(const std::string& config_hash)
{
    return "# config_hash=" + config_hash;
}

void write_family_bundle(const std::string& dir, const SymmetricGridFamily& u, const std::string& config_hash)
{
    fs::create_directories(dir);
    const GridSpec& g = u.grid();
    json header = {{"grid", {{"d", g.d}, {"a", g.a}, {"b", g.b}, {"m", g.m}}},
                   {"n_max", u.n_max()},
                   {"config_hash", config_hash}};
    write_json(dir + "/header.json", header);
    for (int n = 0; n <= u.n_max(); ++n) {
        auto out = open_out(dir + "/order_" + std::to_string(n) + ".csv");
        out << hash_line(config_hash) << '\n';
        for (int i = 1; i <= n; ++i)
            out << 'i' << i << ',';
        out << "value\n";
        for (std::size_t r = 0; r < u.size(n); ++r) {
            for (int x : u.tuple(n, r))
                out << x << ',';
            out << format_double(u.comp(n)[r]) << '\n';
        }
    }
}

FamilyBundle read_family_bundle(const std::string& dir)
{
    const json header = read_json(dir + "/header.json");
    const json& g = header.at("grid");
    const GridSpec grid = GridSpec::make(g.at("d").get<int>(), g.at("a").get<double>(), g.at("b").get<double>(),
                                         g.at("m").get<int>());
    FamilyBundle b{SymmetricGridFamily(grid, header.at("n_max").get<int>()),
                   header.at("config_hash").get<std::string>()};
    std::vector<int> tuple;
    for (int n = 0; n <= b.family.n_max(); ++n) {
        const std::string path = dir + "/order_" + std::to_string(n) + ".csv";
        std::ifstream in(path);
        if (!in)
            throw Error("missing bundle file '" + path + "'");
        std::string line;
        bool seen_header = false;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#')
                continue;
            if (!seen_header) {
                seen_header = true;
                continue;
            }
            const auto f = split(line);
            if (static_cast<int>(f.size()) != n + 1)
                throw Error("malformed row in '" + path + "'");
            tuple.clear();
            for (int i = 0; i < n; ++i)
                tuple.push_back(std::stoi(f[i]));
            b.family.ref(tuple) = parse_double(f[n]);
        }
    }
    return b;
}

void write_snapshots_csv(const std::string& path, const Ensemble& ens, const std::string& config_hash)
{
    auto out = open_out(path);
    out << hash_line(config_hash) << '\n';
    out << "traj_id,t,positions\n";
    for (std::size_t s = 0; s < ens.times.size(); ++s) {
        for (std::size_t i = 0; i < ens.snapshots[s].size(); ++i) {
            out << i << ',' << format_double(ens.times[s]);
            for (double x : ens.snapshots[s][i].coords())
                out << ',' << format_double(x);
            out << '\n';
        }
    }
}

void write_k1_csv(const std::string& path, const CorrelationEstimate& est, const std::string& config_hash)
{
    auto out = open_out(path);
    out << hash_line(config_hash) << '\n';
    out << "bin";
    for (int a = 0; a < est.bins.d; ++a)
        out << ",center_" << a;
    out << ",k1_hat,se1\n";
    for (int b = 0; b < est.bins.num_nodes(); ++b) {
        out << b;
        for (double x : est.bins.point(b))
            out << ',' << format_double(x);
        out << ',' << format_double(est.k1_hat[b]) << ',' << format_double(est.se1[b]) << '\n';
    }
}

void write_k2_csv(const std::string& path, const CorrelationEstimate& est, const std::string& config_hash)
{
    auto out = open_out(path);
    out << hash_line(config_hash) << '\n';
    out << "bin_i,bin_j,k2_hat,se2\n";
    const int M = est.bins.num_nodes();
    for (int b = 0; b < M; ++b)
        for (int c = 0; c < M; ++c)
            out << b << ',' << c << ',' << format_double(est.k2_hat[b * M + c]) << ','
                << format_double(est.se2[b * M + c]) << '\n';
}

void write_table_csv(const std::string& path, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows, const std::string& config_hash)
{
    auto out = open_out(path);
    out << hash_line(config_hash) << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
}

void write_json(const std::string& path, const json& j)
{
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot read '" + path + "'");
    json j;
    in >> j;
    return j;
}

std::string artifact_hash(const std::string& path)
{
    if (fs::path(path).extension() == ".json") {
        const json j = read_json(path);
        return j.contains("config_hash") ? j["config_hash"].get<std::string>() : std::string();
    }
    std::ifstream in(path);
    std::string line;
    if (!std::getline(in, line))
        return {};
    const std::string prefix = "# config_hash=";
    return line.rfind(prefix, 0) == 0 ? line.substr(prefix.size()) : std::string();
}

}  // namespace coalab
