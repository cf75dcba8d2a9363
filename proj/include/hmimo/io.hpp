// SPDX-License-Identifier: Apache-2.0
//
// hmimo - hybrid millimeter-wave multiuser MIMO link-level simulator
// Copyright (C) 2026 The hmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef HMIMO_IO_HPP
#define HMIMO_IO_HPP

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "experiments.hpp"

namespace hmimo
{
    using json = nlohmann::json;

    // ---- configuration ------------------------------------------------------

    inline json to_json(const ClusterConfig &c)
    {
        return json{{"num_clusters", c.num_clusters}, {"paths_per_cluster", c.paths_per_cluster}, {"angle_spread", c.angle_spread}};
    }

    inline json to_json(const ExperimentConfig &c)
    {
        json j;
        j["M"] = c.bs_antennas;
        j["N"] = c.num_users;
        j["P"] = c.ue_antennas;
        j["J"] = c.grid_points;
        j["spacing_ratio"] = c.spacing_ratio;
        j["kappa"] = c.kappa;
        j["scatter_mode"] = scatter_mode_name(c.scatter_mode);
        if (c.cluster)
            j["cluster"] = to_json(*c.cluster);
        j["snr_db"] = c.snr_db;
        j["trials"] = c.trials;
        j["master_seed"] = c.master_seed;
        j["pilot_energy_db"] = c.pilot_energy_db;
        if (c.estimation_snr_db)
            j["estimation_snr_db"] = *c.estimation_snr_db;
        j["estimation"] = estimation_name(c.estimation);
        json curves = json::array();
        for (Curve cv : c.curves)
            curves.push_back(curve_name(cv));
        j["curves"] = curves;
        if (c.bs_aoa_rad)
            j["bs_aoa_rad"] = *c.bs_aoa_rad;
        if (c.ue_aoa_rad)
            j["ue_aoa_rad"] = *c.ue_aoa_rad;
        return j;
    }

    namespace detail
    {
        inline void reject_unknown_keys(const json &obj, const std::set<std::string> &known, const std::string &where)
        {
            std::vector<std::string> unknown;
            for (const auto &item : obj.items())
                if (!known.count(item.key()))
                    unknown.push_back(item.key());
            if (!unknown.empty())
            {
                std::string msg = where + ": unknown key(s):";
                for (const auto &k : unknown)
                    msg += " " + k;
                throw ConfigError(msg);
            }
        }

        template <typename T>
        T get_field(const json &obj, const char *key)
        {
            try
            {
                return obj.at(key).get<T>();
            }
            catch (const json::exception &e)
            {
                throw ConfigError(std::string(key) + ": " + e.what());
            }
        }

        template <typename T>
        void read_optional(const json &obj, const char *key, T &out)
        {
            if (obj.contains(key))
                out = get_field<T>(obj, key);
        }

        inline int get_int(const json &obj, const char *key)
        {
            const json &v = obj.at(key);
            if (!v.is_number_integer())
                throw ConfigError(std::string(key) + ": expected an integer");
            return get_field<int>(obj, key);
        }
    } // namespace detail

    inline ClusterConfig cluster_from_json(const json &j)
    {
        if (!j.is_object())
            throw ConfigError("cluster: expected an object");
        detail::reject_unknown_keys(j, {"num_clusters", "paths_per_cluster", "angle_spread"}, "cluster");
        ClusterConfig c;
        if (!j.contains("num_clusters") || !j.contains("paths_per_cluster"))
            throw ConfigError("cluster: num_clusters and paths_per_cluster are required");
        c.num_clusters = detail::get_int(j, "num_clusters");
        c.paths_per_cluster = detail::get_field<std::vector<int>>(j, "paths_per_cluster");
        detail::read_optional(j, "angle_spread", c.angle_spread);
        return c;
    }

    /// Builds a validated config from a JSON document. M, N and P are required;
    /// everything else falls back to ExperimentConfig defaults.
    inline ExperimentConfig config_from_json(const json &j)
    {
        if (!j.is_object())
            throw ConfigError("config: top level must be an object");
        detail::reject_unknown_keys(j,
                                    {"M", "N", "P", "J", "spacing_ratio", "kappa", "scatter_mode", "cluster", "snr_db",
                                     "trials", "master_seed", "pilot_energy_db", "estimation_snr_db", "estimation",
                                     "curves", "bs_aoa_rad", "ue_aoa_rad"},
                                    "config");
        for (const char *req : {"M", "N", "P"})
            if (!j.contains(req))
                throw ConfigError(std::string(req) + ": required field missing");

        ExperimentConfig c;
        c.bs_antennas = detail::get_int(j, "M");
        c.num_users = detail::get_int(j, "N");
        c.ue_antennas = detail::get_int(j, "P");
        if (j.contains("J"))
            c.grid_points = detail::get_int(j, "J");
        if (j.contains("trials"))
            c.trials = detail::get_int(j, "trials");
        detail::read_optional(j, "spacing_ratio", c.spacing_ratio);
        detail::read_optional(j, "kappa", c.kappa);
        detail::read_optional(j, "snr_db", c.snr_db);
        detail::read_optional(j, "pilot_energy_db", c.pilot_energy_db);
        if (j.contains("master_seed"))
        {
            const json &v = j.at("master_seed");
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
                throw ConfigError("master_seed: expected a non-negative 64-bit integer");
            c.master_seed = v.get<std::uint64_t>();
        }
        if (j.contains("estimation_snr_db"))
            c.estimation_snr_db = detail::get_field<double>(j, "estimation_snr_db");
        if (j.contains("scatter_mode"))
        {
            const auto s = detail::get_field<std::string>(j, "scatter_mode");
            if (s == "iid")
                c.scatter_mode = ScatterMode::iid;
            else if (s == "clustered")
                c.scatter_mode = ScatterMode::clustered;
            else
                throw ConfigError("scatter_mode: expected iid or clustered, got " + s);
        }
        if (j.contains("cluster"))
            c.cluster = cluster_from_json(j.at("cluster"));
        if (j.contains("estimation"))
        {
            const auto s = detail::get_field<std::string>(j, "estimation");
            if (s == "proposed")
                c.estimation = EstimationMode::proposed;
            else if (s == "perfect_equivalent")
                c.estimation = EstimationMode::perfect_equivalent;
            else if (s == "perfect_full")
                c.estimation = EstimationMode::perfect_full;
            else
                throw ConfigError("estimation: expected proposed, perfect_equivalent or perfect_full, got " + s);
        }
        if (j.contains("curves"))
        {
            c.curves.clear();
            for (const auto &name : detail::get_field<std::vector<std::string>>(j, "curves"))
            {
                const auto cv = curve_from_name(name);
                if (!cv)
                    throw ConfigError("curves: unknown curve " + name);
                c.curves.push_back(*cv);
            }
        }
        if (j.contains("bs_aoa_rad"))
            c.bs_aoa_rad = detail::get_field<std::vector<double>>(j, "bs_aoa_rad");
        if (j.contains("ue_aoa_rad"))
            c.ue_aoa_rad = detail::get_field<std::vector<double>>(j, "ue_aoa_rad");
        c.validate();
        return c;
    }

    inline ExperimentConfig parse_config_text(const std::string &text)
    {
        json j;
        try
        {
            j = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError(std::string("config: malformed JSON: ") + e.what());
        }
        return config_from_json(j);
    }

    inline ExperimentConfig parse_config(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("config: cannot open " + path.string());
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return parse_config_text(text);
    }

    // ---- curves CSV ---------------------------------------------------------

    inline constexpr const char *kCurvesHeader = "curve_id,snr_db,mean_rate_bps_hz,std_err,trials_used,outages";

    inline std::string format_number(double v)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.9g", v);
        return buf;
    }

    /// Canonical CSV text: rows sorted by (curve_id, snr_db), 9 significant digits.
    inline std::string format_curves(std::vector<CurvePoint> points)
    {
        std::stable_sort(points.begin(), points.end(), [](const CurvePoint &a, const CurvePoint &b) {
            if (a.curve != b.curve)
                return curve_name(a.curve) < curve_name(b.curve);
            return a.snr_db < b.snr_db;
        });
        std::string out = kCurvesHeader;
        out += '\n';
        for (const auto &p : points)
        {
            out += curve_name(p.curve);
            out += ',' + format_number(p.snr_db) + ',' + format_number(p.mean_rate) + ',' + format_number(p.std_err) +
                   ',' + std::to_string(p.trials_used) + ',' + std::to_string(p.outages) + '\n';
        }
        return out;
    }

    inline void write_curves(const std::vector<CurvePoint> &points, const std::filesystem::path &path)
    {
        if (points.empty())
            throw InvalidArgument("write_curves: no curve points to write");
        const std::string text = format_curves(points);
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("write_curves: cannot open " + path.string() + " for writing");
        out << text;
        if (!out)
            throw Error("write_curves: write to " + path.string() + " failed");
    }

    inline std::vector<CurvePoint> parse_curves(const std::string &text)
    {
        std::istringstream in(text);
        std::string line;
        if (!std::getline(in, line) || line != kCurvesHeader)
            throw Error("parse_curves: missing or unexpected header");
        std::vector<CurvePoint> points;
        while (std::getline(in, line))
        {
            if (line.empty())
                continue;
            std::vector<std::string> cells;
            std::stringstream row(line);
            std::string cell;
            while (std::getline(row, cell, ','))
                cells.push_back(cell);
            if (cells.size() != 6)
                throw Error("parse_curves: expected 6 columns in: " + line);
            const auto curve = curve_from_name(cells[0]);
            if (!curve)
                throw Error("parse_curves: unknown curve " + cells[0]);
            CurvePoint p;
            p.curve = *curve;
            p.snr_db = std::stod(cells[1]);
            p.mean_rate = std::stod(cells[2]);
            p.std_err = std::stod(cells[3]);
            p.trials_used = std::stoi(cells[4]);
            p.outages = std::stoi(cells[5]);
            points.push_back(p);
        }
        return points;
    }

    inline std::vector<CurvePoint> read_curves(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw Error("read_curves: cannot open " + path.string());
        return parse_curves(std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>()));
    }

    // ---- run manifest -------------------------------------------------------

    struct RunManifest
    {
        ExperimentConfig config_echo;
        std::string tool_version = kVersion;
        std::string started_at;
        std::string finished_at;
        std::uint64_t master_seed = 0;
    };

    inline std::string utc_timestamp(std::chrono::system_clock::time_point t = std::chrono::system_clock::now())
    {
        const std::time_t tt = std::chrono::system_clock::to_time_t(t);
        std::tm tm{};
        gmtime_r(&tt, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }

    inline json to_json(const RunManifest &m)
    {
        return json{{"tool_version", m.tool_version},
                    {"started_at", m.started_at},
                    {"finished_at", m.finished_at},
                    {"master_seed", m.master_seed},
                    {"config_echo", to_json(m.config_echo)}};
    }

    inline RunManifest manifest_from_json(const json &j)
    {
        RunManifest m;
        try
        {
            m.tool_version = j.at("tool_version").get<std::string>();
            m.started_at = j.at("started_at").get<std::string>();
            m.finished_at = j.at("finished_at").get<std::string>();
            m.master_seed = j.at("master_seed").get<std::uint64_t>();
        }
        catch (const json::exception &e)
        {
            throw ConfigError(std::string("manifest: ") + e.what());
        }
        m.config_echo = config_from_json(j.at("config_echo"));
        return m;
    }

    inline void write_manifest(const RunManifest &m, const std::filesystem::path &path)
    {
        std::ofstream out(path, std::ios::trunc);
        if (!out)
            throw Error("write_manifest: cannot open " + path.string() + " for writing");
        out << to_json(m).dump(2) << '\n';
    }

    /// Runs an experiment and writes curves.csv plus manifest.json into out_dir.
    inline std::vector<CurvePoint> run_to_directory(const ExperimentConfig &cfg, const std::filesystem::path &out_dir,
                                                    unsigned threads = 1)
    {
        cfg.validate();
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec)
            throw Error("cannot create output directory " + out_dir.string() + ": " + ec.message());
        RunManifest manifest;
        manifest.config_echo = cfg;
        manifest.master_seed = cfg.master_seed;
        manifest.started_at = utc_timestamp();
        auto points = run_experiment(cfg, threads);
        manifest.finished_at = utc_timestamp();
        write_curves(points, out_dir / "curves.csv");
        write_manifest(manifest, out_dir / "manifest.json");
        return points;
    }
} // namespace hmimo

#endif
