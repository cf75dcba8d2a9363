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

#ifndef HMIMO_ACCEPTANCE_HPP
#define HMIMO_ACCEPTANCE_HPP

// Exit-gate checks shared by the acceptance test binary and `hmimo check`.

#include <chrono>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "io.hpp"

namespace hmimo::acceptance
{
    struct CriterionResult
    {
        int id = 0;
        std::string name;
        bool passed = false;
        std::string detail;
        double seconds = 0.0;
    };

    namespace detail
    {
        inline std::vector<double> figure_snr_grid() { return {-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0}; }

        struct MeanSe
        {
            double mean = 0.0;
            double se = 0.0;
            std::size_t n = 0;
        };

        inline MeanSe mean_se(const std::vector<double> &v)
        {
            MeanSe out;
            out.n = v.size();
            if (v.empty())
                return out;
            out.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
            if (v.size() > 1)
            {
                double ss = 0.0;
                for (double x : v)
                    ss += (x - out.mean) * (x - out.mean);
                out.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
            }
            return out;
        }

        inline const CurvePoint &find_point(const std::vector<CurvePoint> &pts, Curve c, double snr)
        {
            for (const auto &p : pts)
                if (p.curve == c && p.snr_db == snr)
                    return p;
            throw Error("acceptance: missing curve point");
        }

        template <typename F>
        CriterionResult timed(int id, std::string name, F &&body)
        {
            CriterionResult r;
            r.id = id;
            r.name = std::move(name);
            const auto t0 = std::chrono::steady_clock::now();
            try
            {
                body(r);
            }
            catch (const std::exception &e)
            {
                r.passed = false;
                r.detail = std::string("exception: ") + e.what();
            }
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            return r;
        }

        inline ExperimentConfig desk_config()
        {
            ExperimentConfig c;
            c.bs_antennas = 64;
            c.num_users = 4;
            c.ue_antennas = 8;
            c.kappa = 2.0;
            c.scatter_mode = ScatterMode::iid;
            c.estimation = EstimationMode::perfect_equivalent;
            c.snr_db = figure_snr_grid();
            return c;
        }
    } // namespace detail

    /// Per-trial hybrid ZF rate never exceeds the F_RF-dependent upper bound.
    inline CriterionResult bound_dominance(unsigned threads = 1)
    {
        return detail::timed(1, "bound dominance (per-trial ZF rate <= realized-F_RF bound)", [&](CriterionResult &r) {
            ExperimentConfig cfg = detail::desk_config();
            cfg.trials = 500;
            cfg.curves = {Curve::hybrid_zf, Curve::bound_thm1};
            const auto t0 = std::chrono::steady_clock::now();
            std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));
            {
                std::atomic<int> next{0};
                auto work = [&] {
                    for (int t = next++; t < cfg.trials; t = next++)
                        outcomes[static_cast<std::size_t>(t)] = run_trial(cfg, t);
                };
                std::vector<std::jthread> pool;
                for (unsigned w = 1; w < std::max(1u, threads); ++w)
                    pool.emplace_back(work);
                work();
            }
            const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

            int checked = 0, violations = 0, violating_trials = 0, outages = 0;
            double worst = -std::numeric_limits<double>::infinity();
            for (const auto &o : outcomes)
            {
                bool trial_violates = false;
                for (std::size_t s = 0; s < cfg.snr_db.size(); ++s)
                {
                    if (!o.rates[0][s])
                    {
                        ++outages;
                        continue;
                    }
                    const double excess = *o.rates[0][s] - *o.rates[1][s];
                    worst = std::max(worst, excess);
                    ++checked;
                    if (excess > 1e-9)
                    {
                        ++violations;
                        trial_violates = true;
                    }
                }
                violating_trials += trial_violates ? 1 : 0;
            }
            r.passed = violations == 0 && runtime < 60.0;
            std::ostringstream d;
            d << "checked=" << checked << " violations=" << violations << " (in " << violating_trials
              << " trials) worst_excess=" << worst << " bits outage_points=" << outages << " runtime=" << runtime
              << "s (limit 60s)";
            r.detail = d.str();
        });
    }

    /// Hybrid and fully digital large-M bounds coincide as kappa grows.
    inline CriterionResult corollary_coincidence()
    {
        return detail::timed(2, "corollary coincidence at kappa=1e9", [](CriterionResult &r) {
            double worst = 0.0;
            for (double snr_db : detail::figure_snr_grid())
            {
                const BoundInputs in{100, 1, 10, 1e9, db_to_linear(snr_db), 10.0};
                worst = std::max(worst, std::abs(corollary1_asymptotic(in) - corollary2_fully_digital(in)));
            }
            r.passed = worst < 1e-3;
            r.detail = "max |cor1 - cor2| = " + format_number(worst) + " (limit 1e-3)";
        });
    }

    /// The fully digital minus hybrid gap is smaller at kappa=10 than at kappa=1.
    inline CriterionResult gap_shrinks_with_kappa(unsigned threads = 1)
    {
        return detail::timed(3, "hybrid-vs-digital gap shrinks with kappa", [&](CriterionResult &r) {
            ExperimentConfig cfg;
            cfg.bs_antennas = 100;
            cfg.num_users = 10;
            cfg.ue_antennas = 1;
            cfg.scatter_mode = ScatterMode::iid;
            cfg.estimation = EstimationMode::proposed;
            cfg.snr_db = {10.0};
            cfg.trials = 500;
            cfg.curves = {Curve::fully_digital, Curve::hybrid_zf};

            auto gaps = [&](double kappa) {
                ExperimentConfig c = cfg;
                c.kappa = kappa;
                std::vector<std::optional<double>> out(static_cast<std::size_t>(c.trials));
                std::atomic<int> next{0};
                auto work = [&] {
                    for (int t = next++; t < c.trials; t = next++)
                    {
                        const auto o = run_trial(c, t);
                        if (o.rates[0][0] && o.rates[1][0])
                            out[static_cast<std::size_t>(t)] = *o.rates[0][0] - *o.rates[1][0];
                    }
                };
                std::vector<std::jthread> pool;
                for (unsigned w = 1; w < std::max(1u, threads); ++w)
                    pool.emplace_back(work);
                work();
                pool.clear();
                return out;
            };
            const auto g1 = gaps(1.0);
            const auto g10 = gaps(10.0);
            std::vector<double> a, b, diff;
            for (std::size_t t = 0; t < g1.size(); ++t)
                if (g1[t] && g10[t])
                {
                    a.push_back(*g1[t]);
                    b.push_back(*g10[t]);
                    diff.push_back(*g1[t] - *g10[t]);
                }
            const auto m1 = detail::mean_se(a), m10 = detail::mean_se(b), md = detail::mean_se(diff);
            r.passed = md.n > 1 && md.mean > 2.0 * md.se;
            std::ostringstream d;
            d << "gap(kappa=1)=" << m1.mean << " gap(kappa=10)=" << m10.mean << " paired diff=" << md.mean
              << " +- " << md.se << " over " << md.n << " common trials (need diff > 2 se)";
            r.detail = d.str();
        });
    }

    /// ZF on the hybrid system beats analog-only steering on the clustered preset.
    inline CriterionResult figure5_ordering(unsigned threads = 1)
    {
        return detail::timed(4, "figure-5 ordering (hybrid ZF >= analog-only)", [&](CriterionResult &r) {
            ExperimentConfig cfg = figure5_config();
            cfg.trials = 300;
            cfg.curves = {Curve::hybrid_zf, Curve::analog_only};
            const auto pts = run_experiment(cfg, threads);
            bool ok = true;
            std::ostringstream d;
            for (double snr : cfg.snr_db)
            {
                const auto &h = detail::find_point(pts, Curve::hybrid_zf, snr);
                const auto &a = detail::find_point(pts, Curve::analog_only, snr);
                const double se = std::sqrt(h.std_err * h.std_err + a.std_err * a.std_err);
                const double margin = h.mean_rate - a.mean_rate;
                const bool point_ok = snr >= 0.0 ? margin >= 2.0 * se : margin >= 0.0;
                ok = ok && point_ok;
                d << snr << "dB:" << format_number(h.mean_rate) << " vs " << format_number(a.mean_rate)
                  << (point_ok ? "" : "(FAIL)") << "; ";
            }
            r.passed = ok;
            r.detail = d.str();
        });
    }

    /// Exact-H_eq ZF leaves no inter-user leakage.
    inline CriterionResult zf_nulling()
    {
        return detail::timed(5, "ZF nulling with exact H_eq", [](CriterionResult &r) {
            const ExperimentConfig cfg = detail::desk_config();
            const CMatrix bsd = detection_matrix(cfg.bs_geometry(), AngleGrid(cfg.grid_points));
            const CMatrix ued = detection_matrix(cfg.ue_geometry(), AngleGrid(cfg.grid_points));
            int draws = 0, singular = 0;
            double worst = 0.0;
            for (int t = 0; draws < 100; ++t)
            {
                const auto users = draw_trial_users(cfg, t);
                Rng rng(0);
                const auto csi = acquire_csi(cfg, users, bsd, ued, 0.0, rng);
                Precoder p;
                try
                {
                    p = zf_precoder(csi.h_eq_for_precoding);
                }
                catch (const SingularChannelError &)
                {
                    ++singular;
                    continue;
                }
                for (const auto &l : evaluate_downlink(users, csi.beams, p, 1.0, 1.0))
                    worst = std::max(worst, l.interference_power / l.desired_power);
                ++draws;
            }
            r.passed = worst < 1e-20;
            r.detail = "max I/D over 100 draws = " + format_number(worst) + " (limit 1e-20), skipped singular draws=" +
                       std::to_string(singular);
        });
    }

    /// Noiseless sweeps recover on-grid LOS angles exactly.
    inline CriterionResult on_grid_recovery()
    {
        return detail::timed(6, "on-grid AoA recovery (noiseless, kappa=1e9)", [](CriterionResult &r) {
            const int m = 32, p = 8, n = 4, j = 180;
            const ArrayGeometry bs(m), ue(p);
            const AngleGrid grid(j);
            const CMatrix bsd = detection_matrix(bs, grid), ued = detection_matrix(ue, grid);
            int exact = 0;
            for (int t = 0; t < 100; ++t)
            {
                Rng rng = make_rng(2024, {static_cast<std::uint64_t>(t)});
                std::vector<int> bs_idx, ue_idx;
                std::vector<UserChannel> users;
                std::uniform_int_distribution<int> pick(0, j - 1);
                while (static_cast<int>(bs_idx.size()) < n)
                {
                    const int bi = pick(rng);
                    if (std::find(bs_idx.begin(), bs_idx.end(), bi) == bs_idx.end())
                    {
                        bs_idx.push_back(bi);
                        ue_idx.push_back(pick(rng));
                    }
                }
                for (int k = 0; k < n; ++k)
                    users.push_back(draw_user_channel(bs, ue, RicianFactor(1e9), ScatterMode::iid, std::nullopt, rng,
                                                      grid.angle(bs_idx[static_cast<std::size_t>(k)]),
                                                      grid.angle(ue_idx[static_cast<std::size_t>(k)])));
                const auto s1 = step1_uplink_aoa(users, bsd, 0.0, rng);
                const auto s2 = step2_downlink_aoa(users, s1.beams, ued, 0.0, rng);
                exact += (s1.indices == bs_idx && s2.indices == ue_idx) ? 1 : 0;
            }
            r.passed = exact == 100;
            r.detail = std::to_string(exact) + "/100 trials recovered every grid index";
        });
    }

    /// LS estimate error follows the sigma^2 / E_P scaling.
    inline CriterionResult ls_consistency()
    {
        return detail::timed(7, "LS consistency at E_P/sigma^2 = 1e6", [](CriterionResult &r) {
            const ExperimentConfig cfg = detail::desk_config();
            const CMatrix bsd = detection_matrix(cfg.bs_geometry(), AngleGrid(cfg.grid_points));
            const CMatrix ued = detection_matrix(cfg.ue_geometry(), AngleGrid(cfg.grid_points));
            const PilotMatrix pilots = make_pilots(cfg.num_users, 1e6);
            double sum = 0.0;
            for (int t = 0; t < 100; ++t)
            {
                const auto users = draw_trial_users(cfg, t);
                Rng rng = make_rng(99, {static_cast<std::uint64_t>(t)});
                auto s1 = step1_uplink_aoa(users, bsd, 0.0, rng);
                auto s2 = step2_downlink_aoa(users, s1.beams, ued, 0.0, rng);
                const auto beams = combine_sweeps(std::move(s1), std::move(s2));
                const auto eq = step3_ls_estimate(users, beams, pilots, 1.0, rng);
                sum += (eq.estimate - eq.true_matrix).norm() / eq.true_matrix.norm();
            }
            const double mean = sum / 100.0;
            r.passed = mean < 1e-2;
            r.detail = "mean relative Frobenius error = " + format_number(mean) + " (limit 1e-2)";
        });
    }

    /// 1/tr(A^-1) <= tr(A)/N^2 on random Hermitian PD matrices, equality at A = cI.
    inline CriterionResult trace_inequality()
    {
        return detail::timed(8, "trace / inverse-trace inequality", [](CriterionResult &r) {
            Rng rng = make_rng(8, {});
            std::uniform_int_distribution<int> dim(2, 16);
            int violations = 0;
            double worst_eq = 0.0;
            for (int t = 0; t < 1000; ++t)
            {
                const int n = dim(rng);
                const CMatrix b = complex_normal_matrix(n, n, rng);
                const CMatrix a = b.adjoint() * b + 1e-3 * CMatrix::Identity(n, n);
                const CMatrix herm = (a + a.adjoint()) / 2.0;
                violations += trace_inverse_bound_check(herm).holds ? 0 : 1;

                const double c = uniform(rng, 0.1, 10.0);
                const auto eq = trace_inverse_bound_check(c * CMatrix::Identity(n, n));
                worst_eq = std::max(worst_eq, std::abs(eq.inverse_trace_reciprocal - eq.scaled_trace) / eq.scaled_trace);
            }
            r.passed = violations == 0 && worst_eq < 1e-12;
            r.detail = "violations=" + std::to_string(violations) + "/1000, equality-case relative gap=" +
                       format_number(worst_eq) + " (limit 1e-12)";
        });
    }

    /// Pure scattering through beams that do not depend on the scattering draw gives
    /// E||H_eq||_F^2 = N^2.
    inline CriterionResult scatter_expectation()
    {
        return detail::timed(9, "scatter-term expectation E||H_eq||^2 = N^2 at kappa=0", [](CriterionResult &r) {
            ExperimentConfig cfg = detail::desk_config();
            cfg.kappa = 0.0;
            cfg.estimation = EstimationMode::perfect_full;
            const CMatrix bsd = detection_matrix(cfg.bs_geometry(), AngleGrid(cfg.grid_points));
            const CMatrix ued = detection_matrix(cfg.ue_geometry(), AngleGrid(cfg.grid_points));
            double sum = 0.0;
            const int draws = 2000;
            for (int t = 0; t < draws; ++t)
            {
                const auto users = draw_trial_users(cfg, t);
                Rng rng(0);
                sum += acquire_csi(cfg, users, bsd, ued, 0.0, rng).h_eq_for_precoding.squaredNorm();
            }
            const double mean = sum / draws;
            const double target = static_cast<double>(cfg.num_users * cfg.num_users);
            r.passed = std::abs(mean - target) <= 0.05 * target;
            r.detail = "mean ||H_eq||^2 = " + format_number(mean) + " vs N^2 = " + format_number(target) + " (within 5%)";
        });
    }

    /// `fig4 --seed 7` twice gives byte-identical CSV. `produce` returns the CSV text of one run.
    inline CriterionResult determinism(const std::function<std::string()> &produce)
    {
        return detail::timed(10, "determinism (fig4 --seed 7 twice)", [&](CriterionResult &r) {
            const std::string first = produce();
            const std::string second = produce();
            r.passed = !first.empty() && first == second;
            r.detail = "csv bytes=" + std::to_string(first.size()) + (first == second ? " identical" : " DIFFER");
        });
    }

    /// In-process variant of the determinism run.
    inline std::string figure4_csv(std::uint64_t seed, unsigned threads = 1)
    {
        ExperimentConfig cfg = figure4_config();
        cfg.master_seed = seed;
        return format_curves(run_experiment(cfg, threads));
    }

    inline std::vector<CriterionResult> run_all(const std::function<std::string()> &determinism_run, unsigned threads = 1)
    {
        std::vector<CriterionResult> out;
        out.push_back(bound_dominance(threads));
        out.push_back(corollary_coincidence());
        out.push_back(gap_shrinks_with_kappa(threads));
        out.push_back(figure5_ordering(threads));
        out.push_back(zf_nulling());
        out.push_back(on_grid_recovery());
        out.push_back(ls_consistency());
        out.push_back(trace_inequality());
        out.push_back(scatter_expectation());
        out.push_back(determinism(determinism_run));
        return out;
    }

    inline std::string format_result(const CriterionResult &r)
    {
        std::ostringstream o;
        o << (r.passed ? "[PASS] " : "[FAIL] ") << "criterion " << r.id << ": " << r.name << " -- " << r.detail << " ("
          << format_number(r.seconds) << "s)";
        return o.str();
    }
} // namespace hmimo::acceptance

#endif
