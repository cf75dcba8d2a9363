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

// hmimo command-line front end.
//
//   hmimo run  --config <path> --out <dir>
//   hmimo fig4 --out <dir>
//   hmimo fig5 --out <dir>
//   hmimo check
//
// Global flags: --seed, --trials, --threads (HMIMO_THREADS is used when --threads is absent).
// Exit codes: 0 success, 1 configuration error, 2 runtime error or failed check.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "hmimo/acceptance.hpp"
#include "hmimo/hmimo.hpp"

namespace
{
    constexpr int kExitConfig = 1;
    constexpr int kExitRuntime = 2;

    unsigned resolve_threads(const std::optional<unsigned> &flag)
    {
        if (flag)
            return std::max(1u, *flag);
        if (const char *env = std::getenv("HMIMO_THREADS"))
        {
            try
            {
                const long v = std::stol(env);
                if (v >= 1)
                    return static_cast<unsigned>(v);
            }
            catch (const std::exception &)
            {
            }
            throw hmimo::ConfigError(std::string("HMIMO_THREADS: expected a positive integer, got ") + env);
        }
        return 1;
    }

    void apply_overrides(hmimo::ExperimentConfig &cfg, const std::optional<std::uint64_t> &seed,
                         const std::optional<int> &trials)
    {
        if (seed)
            cfg.master_seed = *seed;
        if (trials)
            cfg.trials = *trials;
        cfg.validate();
    }

    void report(const std::vector<hmimo::CurvePoint> &points, const std::filesystem::path &out)
    {
        std::cout << "wrote " << points.size() << " curve points to " << (out / "curves.csv").string() << '\n';
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Hybrid mmWave multiuser MIMO link-level simulator"};
    app.set_version_flag("--version", std::string(hmimo::kVersion));
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<unsigned> threads;
    app.add_option("--seed", seed, "Master seed (overrides the config)");
    app.add_option("--trials", trials, "Monte Carlo trials (overrides the config)")->check(CLI::PositiveNumber);
    app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

    std::string config_path;
    std::string out_dir;
    auto *run = app.add_subcommand("run", "Run an experiment from a JSON config");
    run->add_option("--config", config_path, "Config file")->required();
    run->add_option("--out", out_dir, "Output directory")->required();
    run->fallthrough();

    auto *fig4 = app.add_subcommand("fig4", "Hybrid vs fully digital preset with rate bounds");
    fig4->add_option("--out", out_dir, "Output directory")->required();
    fig4->fallthrough();

    auto *fig5 = app.add_subcommand("fig5", "Clustered-channel preset: ZF vs analog-only steering");
    fig5->add_option("--out", out_dir, "Output directory")->required();
    fig5->fallthrough();

    auto *check = app.add_subcommand("check", "Run the property and oracle checks");
    check->fallthrough();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try
    {
        const unsigned nthreads = resolve_threads(threads);
        if (*check)
        {
            const std::uint64_t s = seed.value_or(7);
            const auto results = hmimo::acceptance::run_all(
                [&] { return hmimo::acceptance::figure4_csv(s, nthreads); }, nthreads);
            bool all = true;
            for (const auto &r : results)
            {
                std::cout << hmimo::acceptance::format_result(r) << '\n';
                all = all && r.passed;
            }
            return all ? 0 : kExitRuntime;
        }

        hmimo::ExperimentConfig cfg;
        if (*run)
            cfg = hmimo::parse_config(config_path);
        else if (*fig4)
            cfg = hmimo::figure4_config();
        else
            cfg = hmimo::figure5_config();
        apply_overrides(cfg, seed, trials);
        const auto points = hmimo::run_to_directory(cfg, out_dir, nthreads);
        report(points, out_dir);
        return 0;
    }
    catch (const hmimo::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
