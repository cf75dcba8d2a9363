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

#ifndef HMIMO_EXPERIMENTS_HPP
#define HMIMO_EXPERIMENTS_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "bounds.hpp"
#include "precoding.hpp"

namespace hmimo
{
    enum class EstimationMode
    {
        proposed,           // three-step estimation with noisy sweeps and LS pilots
        perfect_equivalent, // noiseless sweeps, exact H_eq
        perfect_full        // beams matched to the true LOS angles, exact H_eq
    };

    enum class Curve
    {
        analog_only,
        bound_cor1,
        bound_cor2,
        bound_thm1,
        fully_digital,
        hybrid_zf
    };

    inline constexpr Curve kAllCurves[] = {Curve::hybrid_zf, Curve::analog_only, Curve::fully_digital,
                                           Curve::bound_thm1, Curve::bound_cor1, Curve::bound_cor2};

    inline std::string_view curve_name(Curve c)
    {
        switch (c)
        {
        case Curve::analog_only: return "analog_only";
        case Curve::bound_cor1: return "bound_cor1";
        case Curve::bound_cor2: return "bound_cor2";
        case Curve::bound_thm1: return "bound_thm1";
        case Curve::fully_digital: return "fully_digital";
        case Curve::hybrid_zf: return "hybrid_zf";
        }
        return "unknown";
    }

    inline std::optional<Curve> curve_from_name(std::string_view name)
    {
        for (Curve c : kAllCurves)
            if (curve_name(c) == name)
                return c;
        return std::nullopt;
    }

    inline std::string_view estimation_name(EstimationMode e)
    {
        switch (e)
        {
        case EstimationMode::proposed: return "proposed";
        case EstimationMode::perfect_equivalent: return "perfect_equivalent";
        case EstimationMode::perfect_full: return "perfect_full";
        }
        return "unknown";
    }

    inline std::string_view scatter_mode_name(ScatterMode s) { return s == ScatterMode::iid ? "iid" : "clustered"; }

    struct ExperimentConfig
    {
        int bs_antennas = 8;   // M
        int num_users = 2;     // N (= number of RF chains)
        int ue_antennas = 2;   // P
        int grid_points = 180; // J
        double spacing_ratio = 0.5;
        double kappa = 2.0;
        ScatterMode scatter_mode = ScatterMode::iid;
        std::optional<ClusterConfig> cluster;
        std::vector<double> snr_db{-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
        int trials = 500;
        std::uint64_t master_seed = 1;
        double pilot_energy_db = 0.0; // E_P relative to the data symbol energy E_s = 1
        // Noise level of the estimation phase; when absent it follows each data SNR point.
        std::optional<double> estimation_snr_db;
        EstimationMode estimation = EstimationMode::proposed;
        std::vector<Curve> curves{std::begin(kAllCurves), std::end(kAllCurves)};
        // Fixed LOS angles per user (radians); drawn uniformly on [0, pi] when absent.
        std::optional<std::vector<double>> bs_aoa_rad;
        std::optional<std::vector<double>> ue_aoa_rad;

        ArrayGeometry bs_geometry() const { return ArrayGeometry(bs_antennas, spacing_ratio); }
        ArrayGeometry ue_geometry() const { return ArrayGeometry(ue_antennas, spacing_ratio); }

        bool has_curve(Curve c) const { return std::find(curves.begin(), curves.end(), c) != curves.end(); }

        void validate() const
        {
            auto fail = [](const std::string &msg) { throw ConfigError(msg); };
            if (bs_antennas < 1)
                fail("M: must be >= 1");
            if (num_users < 1)
                fail("N: must be >= 1");
            if (ue_antennas < 1)
                fail("P: must be >= 1");
            if (grid_points < 1)
                fail("J: must be >= 1");
            if (num_users > bs_antennas)
                fail("N <= M invariant violated: N=" + std::to_string(num_users) + " > M=" + std::to_string(bs_antennas));
            if (!(spacing_ratio > 0.0) || !std::isfinite(spacing_ratio))
                fail("spacing_ratio: must be finite and > 0");
            if (std::isnan(kappa) || kappa < 0.0)
                fail("kappa: must be >= 0");
            if (snr_db.empty())
                fail("snr_db: must contain at least one SNR point");
            for (double s : snr_db)
                if (!std::isfinite(s))
                    fail("snr_db: values must be finite");
            if (trials < 1)
                fail("trials: must be >= 1");
            if (!std::isfinite(pilot_energy_db))
                fail("pilot_energy_db: must be finite");
            if (estimation_snr_db && !std::isfinite(*estimation_snr_db))
                fail("estimation_snr_db: must be finite");
            if (curves.empty())
                fail("curves: must name at least one curve");
            for (std::size_t i = 0; i < curves.size(); ++i)
                if (std::find(curves.begin() + static_cast<std::ptrdiff_t>(i) + 1, curves.end(), curves[i]) != curves.end())
                    fail("curves: duplicate entry " + std::string(curve_name(curves[i])));
            if (scatter_mode == ScatterMode::clustered && !cluster)
                fail("cluster: required when scatter_mode is clustered");
            if (cluster)
            {
                try
                {
                    cluster->validate();
                }
                catch (const InvalidArgument &e)
                {
                    fail(std::string("cluster: ") + e.what());
                }
            }
            auto check_angles = [&](const std::optional<std::vector<double>> &a, const char *name) {
                if (!a)
                    return;
                if (static_cast<int>(a->size()) != num_users)
                    fail(std::string(name) + ": need exactly N angles");
                for (double v : *a)
                    if (!std::isfinite(v) || v < 0.0 || v > kPi)
                        fail(std::string(name) + ": angles must lie in [0, pi]");
            };
            check_angles(bs_aoa_rad, "bs_aoa_rad");
            check_angles(ue_aoa_rad, "ue_aoa_rad");
        }

        bool operator==(const ExperimentConfig &) const = default;
    };

    struct CurvePoint
    {
        double snr_db = 0.0;
        Curve curve = Curve::hybrid_zf;
        double mean_rate = 0.0;
        double std_err = 0.0;
        int trials_used = 0;
        int outages = 0;

        bool operator==(const CurvePoint &) const = default;
    };

    /// fig4 preset: hybrid against fully digital, with bounds.
    inline ExperimentConfig figure4_config()
    {
        ExperimentConfig c;
        c.bs_antennas = 100;
        c.num_users = 10;
        c.ue_antennas = 1;
        c.kappa = 2.0;
        c.scatter_mode = ScatterMode::iid;
        c.estimation = EstimationMode::perfect_equivalent;
        c.curves = {Curve::hybrid_zf, Curve::fully_digital, Curve::bound_thm1, Curve::bound_cor1, Curve::bound_cor2};
        c.trials = 500;
        return c;
    }

    /// fig5 preset: non-sparse clustered channel, ZF against analog-only steering.
    inline ExperimentConfig figure5_config()
    {
        ExperimentConfig c;
        c.bs_antennas = 100;
        c.num_users = 4;
        c.ue_antennas = 16;
        c.kappa = 1.0;
        c.scatter_mode = ScatterMode::clustered;
        c.cluster = ClusterConfig{8, std::vector<int>(8, 1), 0.1};
        c.estimation = EstimationMode::perfect_equivalent;
        c.curves = {Curve::hybrid_zf, Curve::analog_only, Curve::fully_digital};
        c.trials = 500;
        return c;
    }

    /// Smaller array for quick runs.
    inline ExperimentConfig quick_config()
    {
        ExperimentConfig c;
        c.bs_antennas = 64;
        c.num_users = 4;
        c.ue_antennas = 8;
        c.kappa = 2.0;
        c.trials = 200;
        return c;
    }

    namespace detail
    {
        enum : std::uint64_t
        {
            kChannelStream = 1,
            kEstimationStream = 2
        };

        inline double data_noise_power(double snr_db) { return 1.0 / db_to_linear(snr_db); }
    } // namespace detail

    /// Channels of every user in one trial; user k draws from stream (seed, trial, k).
    inline std::vector<UserChannel> draw_trial_users(const ExperimentConfig &cfg, int trial)
    {
        const ArrayGeometry bs = cfg.bs_geometry();
        const ArrayGeometry ue = cfg.ue_geometry();
        std::vector<UserChannel> users;
        users.reserve(static_cast<std::size_t>(cfg.num_users));
        for (int k = 0; k < cfg.num_users; ++k)
        {
            Rng rng = make_rng(cfg.master_seed, {static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(k),
                                                 detail::kChannelStream});
            std::optional<double> theta, phi;
            if (cfg.bs_aoa_rad)
                theta = (*cfg.bs_aoa_rad)[static_cast<std::size_t>(k)];
            if (cfg.ue_aoa_rad)
                phi = (*cfg.ue_aoa_rad)[static_cast<std::size_t>(k)];
            users.push_back(draw_user_channel(bs, ue, RicianFactor(cfg.kappa), cfg.scatter_mode, cfg.cluster, rng, theta, phi));
        }
        return users;
    }

    /// Beams and the equivalent channel handed to the precoder.
    struct CsiOutcome
    {
        BeamformerSet beams;
        CMatrix h_eq_for_precoding;
    };

    /// Beams steered at the grid directions closest (in beam gain) to each user's LOS angles.
    inline BeamformerSet los_matched_beams(std::span<const UserChannel> users, const CMatrix &bs_detection,
                                           const CMatrix &ue_detection)
    {
        const auto n = static_cast<Eigen::Index>(users.size());
        SweepResult bs{CMatrix(bs_detection.rows(), n), std::vector<int>(users.size())};
        SweepResult ue{CMatrix(ue_detection.rows(), n), std::vector<int>(users.size())};
        for (Eigen::Index k = 0; k < n; ++k)
        {
            const auto &u = users[static_cast<std::size_t>(k)];
            // los = h_bs h_ue^H with unit first entries: column 0 is h_bs, row 0 is h_ue^H
            const int bi = argmax_magnitude(bs_detection.transpose() * u.los.col(0));
            const int ui = argmax_magnitude(ue_detection.adjoint() * u.los.row(0).transpose());
            bs.indices[static_cast<std::size_t>(k)] = bi;
            ue.indices[static_cast<std::size_t>(k)] = ui;
            bs.beams.col(k) = bs_detection.col(bi);
            ue.beams.col(k) = ue_detection.col(ui).conjugate();
        }
        return combine_sweeps(std::move(bs), std::move(ue));
    }

    /// Acquires CSI for one trial in the configured mode. estimation_noise is used for
    /// sweeps and pilots in proposed mode only.
    inline CsiOutcome acquire_csi(const ExperimentConfig &cfg, std::span<const UserChannel> users,
                                  const CMatrix &bs_detection, const CMatrix &ue_detection, double estimation_noise,
                                  Rng &rng)
    {
        CsiOutcome out;
        switch (cfg.estimation)
        {
        case EstimationMode::perfect_full:
            out.beams = los_matched_beams(users, bs_detection, ue_detection);
            out.h_eq_for_precoding = true_equivalent_channel(users, out.beams);
            break;
        case EstimationMode::perfect_equivalent:
        {
            auto bs = step1_uplink_aoa(users, bs_detection, 0.0, rng);
            auto ue = step2_downlink_aoa(users, bs.beams, ue_detection, 0.0, rng);
            out.beams = combine_sweeps(std::move(bs), std::move(ue));
            out.h_eq_for_precoding = true_equivalent_channel(users, out.beams);
            break;
        }
        case EstimationMode::proposed:
        {
            auto bs = step1_uplink_aoa(users, bs_detection, estimation_noise, rng);
            auto ue = step2_downlink_aoa(users, bs.beams, ue_detection, estimation_noise, rng);
            out.beams = combine_sweeps(std::move(bs), std::move(ue));
            const PilotMatrix pilots = make_pilots(cfg.num_users, db_to_linear(cfg.pilot_energy_db));
            out.h_eq_for_precoding = step3_ls_estimate(users, out.beams, pilots, estimation_noise, rng).estimate;
            break;
        }
        }
        return out;
    }

    /// Per-trial results. rates[c][s] is the user-averaged rate of cfg.curves[c] at
    /// cfg.snr_db[s]; an empty value marks an outage (singular ZF channel).
    struct TrialOutcome
    {
        std::vector<std::vector<std::optional<double>>> rates;
        std::vector<double> frf_gram_fro_sq; // per SNR point
    };

    inline double mean_rate(const std::vector<LinkResult> &links)
    {
        double s = 0.0;
        for (const auto &l : links)
            s += l.rate;
        return s / static_cast<double>(links.size());
    }

    /// Runs every requested curve on one trial. Channels are drawn once and shared
    /// across curves and SNR points.
    inline TrialOutcome run_trial(const ExperimentConfig &cfg, int trial)
    {
        const auto users = draw_trial_users(cfg, trial);
        const CMatrix bs_detection = detection_matrix(cfg.bs_geometry(), AngleGrid(cfg.grid_points));
        const CMatrix ue_detection = detection_matrix(cfg.ue_geometry(), AngleGrid(cfg.grid_points));
        const std::size_t num_snr = cfg.snr_db.size();

        // CSI per SNR point; shared across points unless estimation noise follows the data SNR.
        const bool per_point = cfg.estimation == EstimationMode::proposed && !cfg.estimation_snr_db;
        std::vector<CsiOutcome> csi;
        for (std::size_t s = 0; s < (per_point ? num_snr : 1); ++s)
        {
            const double est_snr_db = cfg.estimation_snr_db ? *cfg.estimation_snr_db : cfg.snr_db[s];
            Rng rng = make_rng(cfg.master_seed, {static_cast<std::uint64_t>(trial), detail::kEstimationStream,
                                                 static_cast<std::uint64_t>(s)});
            csi.push_back(acquire_csi(cfg, users, bs_detection, ue_detection, detail::data_noise_power(est_snr_db), rng));
        }
        auto csi_at = [&](std::size_t s) -> const CsiOutcome & { return csi[per_point ? s : 0]; };

        std::vector<std::optional<CMatrix>> zf_gains(csi.size());
        std::vector<CMatrix> analog_gains(csi.size());
        for (std::size_t i = 0; i < csi.size(); ++i)
        {
            if (cfg.has_curve(Curve::hybrid_zf))
            {
                try
                {
                    zf_gains[i] = downlink_gains(users, csi[i].beams, zf_precoder(csi[i].h_eq_for_precoding));
                }
                catch (const SingularChannelError &)
                {
                }
            }
            if (cfg.has_curve(Curve::analog_only))
                analog_gains[i] = downlink_gains(users, csi[i].beams, analog_only_precoder(cfg.num_users));
        }
        std::optional<CMatrix> digital_gains;
        if (cfg.has_curve(Curve::fully_digital))
        {
            try
            {
                digital_gains = fully_digital_gains(users);
            }
            catch (const SingularChannelError &)
            {
            }
        }

        TrialOutcome out;
        out.rates.assign(cfg.curves.size(), std::vector<std::optional<double>>(num_snr));
        out.frf_gram_fro_sq.resize(num_snr);
        for (std::size_t s = 0; s < num_snr; ++s)
        {
            const double noise = detail::data_noise_power(cfg.snr_db[s]);
            const std::size_t ci = per_point ? s : 0;
            const double gram = csi_at(s).beams.bs_gram_fro_sq();
            out.frf_gram_fro_sq[s] = gram;
            BoundInputs bound{cfg.bs_antennas, cfg.ue_antennas, cfg.num_users, cfg.kappa, 1.0 / noise, gram};
            for (std::size_t c = 0; c < cfg.curves.size(); ++c)
            {
                auto &slot = out.rates[c][s];
                switch (cfg.curves[c])
                {
                case Curve::hybrid_zf:
                    if (zf_gains[ci])
                        slot = mean_rate(link_results(*zf_gains[ci], 1.0, noise));
                    break;
                case Curve::analog_only:
                    slot = mean_rate(link_results(analog_gains[ci], 1.0, noise));
                    break;
                case Curve::fully_digital:
                    if (digital_gains)
                        slot = mean_rate(link_results(*digital_gains, 1.0, noise));
                    break;
                case Curve::bound_thm1:
                    slot = theorem1_upper(bound);
                    break;
                case Curve::bound_cor1:
                    slot = corollary1_asymptotic(bound);
                    break;
                case Curve::bound_cor2:
                    slot = corollary2_fully_digital(bound);
                    break;
                }
            }
        }
        return out;
    }

    /// Runs all trials on up to `threads` workers and aggregates them in trial order,
    /// so the result does not depend on scheduling. Points are sorted by (curve, snr).
    inline std::vector<CurvePoint> run_experiment(const ExperimentConfig &cfg, unsigned threads = 1)
    {
        cfg.validate();
        std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));
        std::atomic<int> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;

        auto worker = [&] {
            for (;;)
            {
                const int t = next.fetch_add(1);
                if (t >= cfg.trials)
                    return;
                try
                {
                    outcomes[static_cast<std::size_t>(t)] = run_trial(cfg, t);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next.store(cfg.trials);
                    return;
                }
            }
        };

        const unsigned workers = std::clamp(threads, 1u, static_cast<unsigned>(cfg.trials));
        if (workers == 1)
            worker();
        else
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back(worker);
        }
        if (failure)
            std::rethrow_exception(failure);

        std::vector<CurvePoint> points;
        for (std::size_t c = 0; c < cfg.curves.size(); ++c)
            for (std::size_t s = 0; s < cfg.snr_db.size(); ++s)
            {
                double sum = 0.0, sum_sq = 0.0;
                int used = 0;
                for (const auto &o : outcomes)
                    if (const auto &v = o.rates[c][s])
                    {
                        sum += *v;
                        ++used;
                    }
                CurvePoint p;
                p.snr_db = cfg.snr_db[s];
                p.curve = cfg.curves[c];
                p.trials_used = used;
                p.outages = cfg.trials - used;
                if (used > 0)
                {
                    p.mean_rate = sum / used;
                    // deterministic curves (corollary bounds) report an exact zero
                    std::optional<double> first;
                    bool constant = true;
                    for (const auto &o : outcomes)
                        if (const auto &v = o.rates[c][s])
                        {
                            sum_sq += (*v - p.mean_rate) * (*v - p.mean_rate);
                            if (!first)
                                first = *v;
                            constant = constant && *v == *first;
                        }
                    if (used > 1 && !constant)
                        p.std_err = std::sqrt(sum_sq / (used - 1) / used);
                }
                points.push_back(p);
            }
        std::stable_sort(points.begin(), points.end(), [](const CurvePoint &a, const CurvePoint &b) {
            if (a.curve != b.curve)
                return curve_name(a.curve) < curve_name(b.curve);
            return a.snr_db < b.snr_db;
        });
        return points;
    }
} // namespace hmimo

#endif
