// SPDX-License-Identifier: Apache-2.0
//
// gprclutter: medium-induced clutter covariance modelling for FDA-MIMO GPR
// Copyright (C) 2026 The gprclutter Authors
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

#include "gprclutter/experiments.hpp"
#include "gprclutter/cmat.hpp"
#include "gprclutter/error.hpp"
#include "gprclutter/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <numeric>

#ifndef GPRC_VERSION_STRING
#define GPRC_VERSION_STRING "unknown"
#endif

namespace gprc
{
    using nlohmann::json;

    std::string library_version() { return GPRC_VERSION_STRING; }

    const MetricTable &ExperimentResult::table(std::string_view table_name) const
    {
        for (const auto &t : tables)
            if (t.name == table_name)
                return t;
        throw std::out_of_range("experiment '" + name + "' has no table '" + std::string(table_name) + "'");
    }

    std::vector<double> StructuralMetrics::row() const
    {
        return {effective_rank, double(p90), double(p95), eta, gamma, trace};
    }

    StructuralMetrics structural_metrics(const SpectralSummary &summary, const SteeringVector &steering)
    {
        StructuralMetrics m;
        m.effective_rank = summary.effective_rank;
        m.p90 = summary.p90();
        m.p95 = summary.p95();
        const auto ov = target_overlap(summary, steering, m.p90);
        m.eta = ov.eta;
        m.gamma = ov.gamma;
        m.trace = summary.trace;
        return m;
    }

    StructuralMetrics structural_metrics(const ClutterCovariance &R, const SteeringVector &steering)
    {
        return structural_metrics(spectral_summary(R), steering);
    }

    namespace
    {
        ClutterCovariance covariance_with(const RandomFieldConfig &rf, const Scenario &scenario,
                                          const SceneGeometry &geometry, const ForwardMatrix &A)
        {
            const auto cov = make_perturbation_covariance(scenario, geometry, rf.corr_length, rf.rho_c, rf.weights,
                                                          rf.amplitude);
            return clutter_covariance(A, cov);
        }

        // Runs body(scenario) for every id, recording failures instead of propagating them.
        template <typename F>
        void for_scenarios(ExperimentResult &result, const ExperimentConfig &config,
                           const std::vector<std::string> &ids, F &&body)
        {
            for (const auto &id : ids)
            {
                try
                {
                    body(config.scenario(id));
                }
                catch (const std::exception &e)
                {
                    result.errors.push_back(id + ": " + e.what());
                }
            }
        }

        std::string hex64(std::uint64_t v)
        {
            char buf[17];
            std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
            return buf;
        }

        json matrix_sidecar(const ForwardMatrix &A, const SceneGeometry &g)
        {
            return {{"scenario", A.scenario_id},
                    {"kernel", A.kernel_name},
                    {"geometry_fingerprint", hex64(A.geometry_fingerprint)},
                    {"rows", A.rows()},
                    {"cols", A.cols()},
                    {"rx_count", A.rx_count},
                    {"tx_count", A.tx_count},
                    {"cell_count", A.cell_count},
                    {"nx", g.nx},
                    {"nz", g.nz},
                    {"row_index", "n * M + m (transmit-major)"},
                    {"col_index", "q * P + p, q in (eps_inf, delta_eps, tau, alpha, sigma), p = k * nx + i"},
                    {"frequencies_hz", g.frequencies}};
        }
    }

    ClutterCovariance scenario_covariance(const ExperimentConfig &config, const Scenario &scenario,
                                          const SceneGeometry &geometry)
    {
        return covariance_with(config.random_field, scenario, geometry, assemble_forward(scenario, geometry));
    }

    ExperimentResult run_derivative_check(const ExperimentConfig &config, DerivativeCheckOptions options)
    {
        ExperimentResult r;
        r.name = "check-derivatives";
        MetricTable t("derivative_check", {"eps_inf", "delta_eps", "tau", "alpha", "sigma", "max_error"});
        const auto geom = build_geometry(config.geometry);
        const double tol = config.validity.derivative_tolerance;
        for_scenarios(r, config, config.scenarios,
                      [&](const Scenario &s)
                      {
                          ParamVector worst{};
                          for (std::size_t n = 0; n < geom.tx_count(); ++n)
                          {
                              const double omega = geom.omega(n);
                              auto psi = sensitivities(s.background, omega);
                              if (options.inject_fault)
                                  psi[0] *= 1.0 + 1e-3;
                              const auto fd =
                                  finite_difference_sensitivities(s.background, omega, config.validity.derivative_step);
                              for (std::size_t q = 0; q < kParamCount; ++q)
                                  worst[q] = std::max(worst[q], std::abs(psi[q] - fd[q]) / std::max(std::abs(fd[q]), 1e-30));
                          }
                          const double max_error = *std::max_element(worst.begin(), worst.end());
                          std::vector<double> row(worst.begin(), worst.end());
                          row.push_back(max_error);
                          t.add(s.id, "max-over-frequencies", row);
                          if (!(max_error < tol))
                              r.passed = false;
                      });
        r.details["tolerance"] = tol;
        r.details["rel_step"] = config.validity.derivative_step;
        r.tables.push_back(std::move(t));
        return r;
    }

    ExperimentResult run_validity_scan(const ExperimentConfig &config)
    {
        ExperimentResult r;
        r.name = "scan-validity";
        MetricTable grid("validity", {"s_mu", "p95_contrast_error", "p95_snapshot_error"});
        MetricTable summary("validity_summary", {"recommended_s_mu", "worst_p95_contrast", "worst_p95_snapshot",
                                                 "contrast_slope", "snapshot_slope", "monotone"});
        const auto geom = build_geometry(config.geometry);
        const auto &rf = config.random_field;
        const auto &v = config.validity;
        for_scenarios(r, config, config.scenarios,
                      [&](const Scenario &s)
                      {
                          const auto cov =
                              make_perturbation_covariance(s, geom, rf.corr_length, rf.rho_c, rf.weights, 1.0);
                          const auto rep = validity_scan(s, geom, cov, v.amplitudes, v.samples, v.threshold, rf.seed);
                          for (std::size_t i = 0; i < rep.amplitude_grid.size(); ++i)
                              grid.add(s.id, "s_mu=" + format_number(rep.amplitude_grid[i]),
                                       {rep.amplitude_grid[i], rep.p95_contrast_error[i], rep.p95_snapshot_error[i]});
                          summary.add(s.id, "worst-case",
                                      {rep.recommended_s_mu.value_or(std::numeric_limits<double>::quiet_NaN()),
                                       rep.worst_contrast(), rep.worst_snapshot(), rep.contrast_slope,
                                       rep.snapshot_slope, rep.monotone() ? 1.0 : 0.0});
                      });
        r.details["threshold"] = v.threshold;
        r.details["samples_per_amplitude"] = v.samples;
        r.tables.push_back(std::move(grid));
        r.tables.push_back(std::move(summary));
        return r;
    }

    ExperimentResult run_build_forward(const ExperimentConfig &config)
    {
        ExperimentResult r;
        r.name = "build-forward";
        MetricTable t("forward", {"rows", "cols", "frobenius_norm", "max_abs"});
        const auto geom = build_geometry(config.geometry);
        r.details["matrices"] = json::object();
        for_scenarios(r, config, config.scenarios,
                      [&](const Scenario &s)
                      {
                          auto A = assemble_forward(s, geom);
                          t.add(s.id, A.kernel_name,
                                {double(A.rows()), double(A.cols()), A.entries.norm(), A.entries.cwiseAbs().maxCoeff()});
                          const std::string stem = "forward_" + s.id;
                          r.details["matrices"][stem] = matrix_sidecar(A, geom);
                          r.matrices.emplace_back(stem, std::move(A.entries));
                      });
        r.tables.push_back(std::move(t));
        return r;
    }

    ExperimentResult run_kernel_diff(const ExperimentConfig &config)
    {
        ExperimentResult r;
        r.name = "kernel-diff";
        MetricTable t("kernel_diff", {"delta_source_ref", "delta_target_ref"});
        const auto geom = build_geometry(config.geometry);
        std::map<std::string, ForwardMatrix> cache;
        auto forward = [&](const std::string &id) -> const ForwardMatrix &
        {
            auto it = cache.find(id);
            if (it == cache.end())
                it = cache.emplace(id, assemble_forward(config.scenario(id), geom)).first;
            return it->second;
        };
        std::vector<std::string> seen;
        for (const auto &[a, b] : config.kernel_diff.pairs)
        {
            try
            {
                const auto &A1 = forward(a);
                const auto &A2 = forward(b);
                t.add(a + "|" + b, "pair", {forward_discrepancy(A2, A1), forward_discrepancy(A1, A2)});
                for (const auto &id : {a, b})
                    if (std::find(seen.begin(), seen.end(), id) == seen.end())
                        seen.push_back(id);
            }
            catch (const std::exception &e)
            {
                r.errors.push_back(a + "|" + b + ": " + e.what());
            }
        }
        if (config.kernel_diff.free_space)
        {
            const FreeSpaceKernel vacuum;
            for_scenarios(r, config, seen,
                          [&](const Scenario &s)
                          {
                              const auto &A = forward(s.id);
                              const auto F = assemble_forward(s, geom, vacuum);
                              t.add(s.id + "|free-space", "kernel", {forward_discrepancy(F, A), forward_discrepancy(A, F)});
                          });
        }
        r.details["definition"] = "delta(S->T) = ||A_S - A_T||_F / ||A_S||_F (source_ref) and / ||A_T||_F (target_ref)";
        r.tables.push_back(std::move(t));
        return r;
    }

    ExperimentResult run_closure(const ExperimentConfig &config)
    {
        ExperimentResult r;
        r.name = "closure";
        MetricTable t("closure", {"samples", "p", "eps_cov_lin", "eps_cov_exact", "eps_lambda", "eps_sub",
                                  "lin_exact_gap", "check_samples", "eps_cov_lin_check", "eps_cov_exact_check",
                                  "ratio_lin_single", "ratio_exact_single", "replicates", "ratio_rms"});
        const auto geom = build_geometry(config.geometry);
        const auto &rf = config.random_field;
        const auto L = rf.samples, Lc = config.closure.check_samples;
        for_scenarios(r, config, config.closure.scenarios,
                      [&](const Scenario &s)
                      {
                          const auto A = assemble_forward(s, geom);
                          const auto cov =
                              make_perturbation_covariance(s, geom, rf.corr_length, rf.rho_c, rf.weights, rf.amplitude);
                          const auto theory = clutter_covariance(A, cov);
                          const PerturbationSampler sampler(cov);
                          const Eigen::MatrixXd delta = sampler.draw(L, rf.seed);
                          const SnapshotSynthesizer synth(A, s, geom);
                          const Eigen::MatrixXcd lin = synth.linear(delta);
                          const Eigen::MatrixXcd exact = synth.exact(delta);
                          const auto est_lin = sample_covariance(lin, Provenance::monte_carlo_linear);
                          const auto est_exact = sample_covariance(exact, Provenance::monte_carlo_exact);
                          check_covariance_invariants(theory.matrix);
                          check_covariance_invariants(est_lin.matrix);
                          check_covariance_invariants(est_exact.matrix);
                          const auto full = closure_report(theory, est_lin, est_exact, L);
                          const auto check = closure_report(theory, Eigen::MatrixXcd(lin.leftCols(Eigen::Index(Lc))),
                                                            Eigen::MatrixXcd(exact.leftCols(Eigen::Index(Lc))));
                          const auto rate = closure_convergence(theory, LinearSnapshotMap(A, sampler), L, Lc,
                                                                config.closure.replicates, rf.seed);
                          t.add(s.id, "L=" + std::to_string(L),
                                {double(L), double(full.subspace_dim), full.eps_cov_lin, full.eps_cov_exact,
                                 full.eps_lambda, full.eps_sub, std::abs(full.eps_cov_lin - full.eps_cov_exact),
                                 double(Lc), check.eps_cov_lin, check.eps_cov_exact,
                                 check.eps_cov_lin / full.eps_cov_lin, check.eps_cov_exact / full.eps_cov_exact,
                                 double(rate.replicates), rate.ratio});
                      });
        r.details["estimator"] = "zero-mean (1/L) sum c c^H";
        r.details["invariants"] = "theory and both estimates checked Hermitian (1e-12) and PSD (-1e-10 lambda_max)";
        r.details["eps_lambda"] = "||lambda_exact - lambda_theory||_2 / ||lambda_theory||_2";
        r.details["eps_sub"] = "||P_theory - P_exact||_F / sqrt(2 p), p = p90 of theory";
        r.details["ratio_rms"] = "rms error over replicate ensembles at check_samples / rms at samples; replicate 0 "
                                 "is the reported ensemble";
        r.tables.push_back(std::move(t));
        return r;
    }

    ExperimentResult run_fda_scan(const ExperimentConfig &config)
    {
        ExperimentResult r;
        r.name = "scan-fda";
        auto columns = kStructuralColumns;
        columns.insert(columns.begin(), "df_mhz");
        MetricTable t("fda_scan", columns);
        for_scenarios(r, config, config.fda.scenarios,
                      [&](const Scenario &s)
                      {
                          for (double df : config.fda.df_mhz)
                          {
                              auto gcfg = config.geometry;
                              gcfg.df = df * 1e6;
                              const auto geom = build_geometry(gcfg);
                              const auto R = scenario_covariance(config, s, geom);
                              const auto a = steering_vector(geom, s, config.targets.representative);
                              auto row = structural_metrics(R, a).row();
                              row.insert(row.begin(), df);
                              t.add(s.id, "df=" + format_number(df) + "MHz", row);
                          }
                      });
        r.details["target"] = {config.targets.representative.x, config.targets.representative.z};
        r.tables.push_back(std::move(t));
        return r;
    }

    ExperimentResult run_lx_scan(const ExperimentConfig &config)
    {
        ExperimentResult r;
        r.name = "scan-lx";
        auto columns = kStructuralColumns;
        columns.insert(columns.begin(), "corr_length");
        MetricTable t("lx_scan", columns);
        const auto geom = build_geometry(config.geometry);
        for_scenarios(r, config, {config.lx.scenario},
                      [&](const Scenario &s)
                      {
                          const auto A = assemble_forward(s, geom);
                          const auto a = steering_vector(geom, s, config.targets.representative);
                          for (double l : config.lx.lengths)
                          {
                              auto rf = config.random_field;
                              rf.corr_length = l;
                              auto row = structural_metrics(covariance_with(rf, s, geom, A), a).row();
                              row.insert(row.begin(), l);
                              t.add(s.id, "lx=" + format_number(l), row);
                          }
                      });
        r.tables.push_back(std::move(t));
        return r;
    }

    ExperimentResult run_coupling_scan(const ExperimentConfig &config)
    {
        ExperimentResult r;
        r.name = "scan-coupling";
        auto columns = kStructuralColumns;
        columns.insert(columns.begin(), "rho_c");
        MetricTable t("coupling_scan", columns);
        const auto geom = build_geometry(config.geometry);
        for_scenarios(r, config, {config.coupling.scenario},
                      [&](const Scenario &s)
                      {
                          const auto A = assemble_forward(s, geom);
                          const auto a = steering_vector(geom, s, config.targets.representative);
                          for (double rho : config.coupling.rho)
                          {
                              auto rf = config.random_field;
                              rf.rho_c = rho;
                              auto row = structural_metrics(covariance_with(rf, s, geom, A), a).row();
                              row.insert(row.begin(), rho);
                              t.add(s.id, "rho_c=" + format_number(rho), row);
                          }
                          for (const auto &preset : config.coupling.presets)
                          {
                              auto rf = config.random_field;
                              rf.weights = preset.weights;
                              auto row = structural_metrics(covariance_with(rf, s, geom, A), a).row();
                              row.insert(row.begin(), rf.rho_c);
                              t.add(s.id, preset.name, row);
                          }
                      });
        r.details["presets"] = json::array();
        for (const auto &p : config.coupling.presets)
            r.details["presets"].push_back({{"name", p.name}, {"weights", p.weights}});
        r.tables.push_back(std::move(t));
        return r;
    }

    ExperimentResult run_target_scan(const ExperimentConfig &config)
    {
        ExperimentResult r;
        r.name = "scan-targets";
        MetricTable per("target_scan", {"x", "z", "p90", "eta", "gamma"});
        MetricTable agg("target_summary", {"eta_mean", "eta_std", "eta_min", "eta_max"});
        const auto geom = build_geometry(config.geometry);
        for_scenarios(r, config, config.targets.scenarios,
                      [&](const Scenario &s)
                      {
                          const auto summary = spectral_summary(scenario_covariance(config, s, geom));
                          const int p = summary.p90();
                          std::vector<double> etas;
                          for (const auto &pt : config.targets.points)
                          {
                              const auto ov = target_overlap(summary, steering_vector(geom, s, pt), p);
                              etas.push_back(ov.eta);
                              per.add(s.id, "x=" + format_number(pt.x), {pt.x, pt.z, double(p), ov.eta, ov.gamma});
                          }
                          const double n = double(etas.size());
                          const double mean = std::accumulate(etas.begin(), etas.end(), 0.0) / n;
                          double var = 0.0;
                          for (double e : etas)
                              var += (e - mean) * (e - mean);
                          agg.add(s.id, "eta", {mean, std::sqrt(var / n), *std::min_element(etas.begin(), etas.end()),
                                                *std::max_element(etas.begin(), etas.end())});
                      });
        r.details["std"] = "population (divide by the number of targets)";
        r.tables.push_back(std::move(per));
        r.tables.push_back(std::move(agg));
        return r;
    }

    ExperimentResult run_boundary_scale(const ExperimentConfig &config)
    {
        ExperimentResult r;
        r.name = "boundary-scale";
        auto columns = kStructuralColumns;
        columns.insert(columns.begin(), "kappa");
        columns.push_back("trace_rel_error");
        MetricTable t("boundary_scale", columns);
        const auto geom = build_geometry(config.geometry);
        for_scenarios(r, config, config.boundary.scenarios,
                      [&](const Scenario &s)
                      {
                          const auto R = scenario_covariance(config, s, geom);
                          const auto a = steering_vector(geom, s, config.targets.representative);
                          const double tr = R.trace();
                          for (double kappa : config.boundary.kappa)
                          {
                              const auto m = structural_metrics(scale_covariance(R, kappa), a);
                              auto row = m.row();
                              row.insert(row.begin(), kappa);
                              row.push_back(std::abs(m.trace - kappa * tr) / (kappa * tr));
                              t.add(s.id, "kappa=" + format_number(kappa), row);
                          }
                      });
        r.tables.push_back(std::move(t));
        return r;
    }

    ExperimentResult run_boundary_noise(const ExperimentConfig &config)
    {
        ExperimentResult r;
        r.name = "boundary-noise";
        auto columns = kStructuralColumns;
        columns.insert(columns.begin(), "snr_db");
        columns.push_back("noise_variance");
        MetricTable t("boundary_noise", columns);
        const auto geom = build_geometry(config.geometry);
        for_scenarios(r, config, config.boundary.scenarios,
                      [&](const Scenario &s)
                      {
                          const auto R = scenario_covariance(config, s, geom);
                          const auto a = steering_vector(geom, s, config.targets.representative);
                          auto base = structural_metrics(R, a).row();
                          base.insert(base.begin(), std::numeric_limits<double>::infinity());
                          base.push_back(0.0);
                          t.add(s.id, "noise-free", base);
                          for (double snr : config.boundary.snr_db)
                          {
                              const auto Ry = add_noise_floor(R, snr);
                              auto row = structural_metrics(Ry, a).row();
                              row.insert(row.begin(), snr);
                              row.push_back((Ry.trace() - R.trace()) / double(R.dimension()));
                              t.add(s.id, "snr=" + format_number(snr) + "dB", row);
                          }
                      });
        r.details["snr_definition"] = "sigma_n^2 = tr(R_c) / (MN 10^(SNR_dB / 10))";
        r.tables.push_back(std::move(t));
        return r;
    }

    ExperimentResult run_report(const ExperimentConfig &config)
    {
        ExperimentResult r;
        r.name = "report";
        auto columns = kStructuralColumns;
        columns.push_back("numerical_rank");
        MetricTable t("baseline", columns);
        const auto geom = build_geometry(config.geometry);
        r.details["spectra"] = json::object();
        for_scenarios(r, config, config.scenarios,
                      [&](const Scenario &s)
                      {
                          const auto R = scenario_covariance(config, s, geom);
                          check_covariance_invariants(R.matrix);
                          const auto summary = spectral_summary(R);
                          const auto a = steering_vector(geom, s, config.targets.representative);
                          auto row = structural_metrics(summary, a).row();
                          row.push_back(double(numerical_rank(R.matrix)));
                          t.add(s.id, "baseline", row);
                          r.details["spectra"][s.id] = {
                              {"provenance", provenance_name(summary.provenance)},
                              {"eigenvalues", std::vector<double>(summary.eigenvalues.begin(), summary.eigenvalues.end())},
                              {"normalized_eigenvalues", std::vector<double>(summary.normalized_eigenvalues.begin(),
                                                                             summary.normalized_eigenvalues.end())}};
                          r.matrices.emplace_back("clutter_" + s.id, R.matrix);
                      });
        r.tables.push_back(std::move(t));
        return r;
    }

    const std::vector<std::string> &experiment_names()
    {
        static const std::vector<std::string> names = {
            "check-derivatives", "scan-validity", "build-forward",  "kernel-diff",    "closure",        "scan-fda",
            "scan-lx",           "scan-coupling", "scan-targets",   "boundary-scale", "boundary-noise", "report"};
        return names;
    }

    ExperimentResult run_experiment(std::string_view name, const ExperimentConfig &config)
    {
        config.validate();
        using Runner = ExperimentResult (*)(const ExperimentConfig &);
        static const std::map<std::string, Runner, std::less<>> runners = {
            {"check-derivatives", [](const ExperimentConfig &c) { return run_derivative_check(c); }},
            {"scan-validity", run_validity_scan},
            {"build-forward", run_build_forward},
            {"kernel-diff", run_kernel_diff},
            {"closure", run_closure},
            {"scan-fda", run_fda_scan},
            {"scan-lx", run_lx_scan},
            {"scan-coupling", run_coupling_scan},
            {"scan-targets", run_target_scan},
            {"boundary-scale", run_boundary_scale},
            {"boundary-noise", run_boundary_noise},
            {"report", run_report}};
        const auto it = runners.find(name);
        if (it == runners.end())
            throw ConfigError("unknown experiment '" + std::string(name) + "'");
        auto result = it->second(config);
        for (const auto &t : result.tables)
        {
            try
            {
                t.check_invariants();
            }
            catch (const NumericalError &e)
            {
                result.errors.push_back(e.what());
            }
        }
        return result;
    }

    json result_json(const ExperimentResult &result, const ExperimentConfig &config)
    {
        json tables = json::object();
        for (const auto &t : result.tables)
            tables[t.name] = t.to_json();
        const auto &g = config.geometry;
        return {{"experiment", result.name},
                {"version", library_version()},
                {"config_hash", hex64(config_hash(config))},
                {"seed", config.random_field.seed},
                {"rng", "std::mt19937_64 per sample, seeded by std::seed_seq over 32-bit halves of (seed, sample "
                        "index); std::normal_distribution"},
                {"conventions",
                 {{"time_dependence", "exp(+j omega t)"},
                  {"snr", "sigma_n^2 = tr(R_c) / (MN 10^(SNR_dB / 10))"},
                  {"grid", std::to_string(g.nx) + " x " + std::to_string(g.nz) + " cells, dx = " + format_number(g.dx) +
                               " m, dz = " + format_number(g.dz) + " m"},
                  {"row_index", "n * M + m"},
                  {"col_index", "q * P + p"}}},
                {"passed", result.passed},
                {"errors", result.errors},
                {"tables", tables},
                {"details", result.details}};
    }

    std::vector<std::string> write_outputs(const ExperimentResult &result, const ExperimentConfig &config)
    {
        const std::filesystem::path dir = std::filesystem::path(config.output_dir) / result.name;
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec)
            throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
        std::vector<std::string> written;
        auto put = [&](const std::filesystem::path &p, const std::string &text)
        {
            write_file_atomic(p, text);
            written.push_back(p.string());
        };
        for (const auto &t : result.tables)
        {
            put(dir / (t.name + ".csv"), t.to_csv());
            put(dir / (t.name + ".json"), t.to_json().dump(2) + "\n");
        }
        for (const auto &[stem, m] : result.matrices)
        {
            save_matrix(dir / (stem + ".cmat"), m);
            written.push_back((dir / (stem + ".cmat")).string());
            if (result.details.contains("matrices") && result.details["matrices"].contains(stem))
                put(dir / (stem + ".json"), result.details["matrices"][stem].dump(2) + "\n");
        }
        put(dir / "summary.json", result_json(result, config).dump(2) + "\n");
        return written;
    }

    int result_exit_code(const ExperimentResult &result)
    {
        return (result.errors.empty() && result.passed) ? 0 : static_cast<int>(ErrorKind::numerical);
    }
}
