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

#ifndef GPRCLUTTER_EXPERIMENTS_HPP
#define GPRCLUTTER_EXPERIMENTS_HPP

#include "gprclutter/config.hpp"
#include "gprclutter/metric_table.hpp"
#include "gprclutter/spectra.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gprc
{
    struct ExperimentResult
    {
        std::string name;
        std::vector<MetricTable> tables;
        std::vector<std::pair<std::string, Eigen::MatrixXcd>> matrices; // file stem, matrix
        nlohmann::json details = nlohmann::json::object();
        std::vector<std::string> errors; // "<scenario>: <message>", collected instead of aborting
        bool passed = true;              // experiment-level check (derivative tolerance, validity threshold)

        const MetricTable &table(std::string_view table_name) const;
    };

    // Metrics shared by the structural experiments. eta and gamma use p = p90.
    struct StructuralMetrics
    {
        double effective_rank = 0.0;
        int p90 = 0;
        int p95 = 0;
        double eta = 0.0;
        double gamma = 1.0;
        double trace = 0.0;

        std::vector<double> row() const;
    };

    inline const std::vector<std::string> kStructuralColumns = {"r_eff", "p90", "p95", "eta", "gamma", "trace"};

    StructuralMetrics structural_metrics(const ClutterCovariance &R, const SteeringVector &steering);
    StructuralMetrics structural_metrics(const SpectralSummary &summary, const SteeringVector &steering);

    // Theoretical clutter covariance for one scenario under the config's random-field block.
    ClutterCovariance scenario_covariance(const ExperimentConfig &config, const Scenario &scenario,
                                          const SceneGeometry &geometry);

    struct DerivativeCheckOptions
    {
        bool inject_fault = false; // corrupts the analytic eps_inf sensitivity; exercises the failure path
    };

    ExperimentResult run_derivative_check(const ExperimentConfig &config, DerivativeCheckOptions options = {});
    ExperimentResult run_validity_scan(const ExperimentConfig &config);
    ExperimentResult run_build_forward(const ExperimentConfig &config);
    ExperimentResult run_kernel_diff(const ExperimentConfig &config);
    ExperimentResult run_closure(const ExperimentConfig &config);
    ExperimentResult run_fda_scan(const ExperimentConfig &config);
    ExperimentResult run_lx_scan(const ExperimentConfig &config);
    ExperimentResult run_coupling_scan(const ExperimentConfig &config);
    ExperimentResult run_target_scan(const ExperimentConfig &config);
    ExperimentResult run_boundary_scale(const ExperimentConfig &config);
    ExperimentResult run_boundary_noise(const ExperimentConfig &config);
    ExperimentResult run_report(const ExperimentConfig &config);

    // CLI subcommand names, in suite order.
    const std::vector<std::string> &experiment_names();

    // Validates the config, then dispatches by subcommand name. Throws ConfigError for unknown names.
    ExperimentResult run_experiment(std::string_view name, const ExperimentConfig &config);

    // Provenance, tables, errors and status as one JSON document.
    nlohmann::json result_json(const ExperimentResult &result, const ExperimentConfig &config);

    // Writes <output_dir>/<name>/{summary.json, <table>.csv, <table>.json, <matrix>.cmat}, each atomically.
    // Returns the written paths.
    std::vector<std::string> write_outputs(const ExperimentResult &result, const ExperimentConfig &config);

    // 0 success, 2 when any scenario failed, a table invariant broke or the experiment check failed.
    int result_exit_code(const ExperimentResult &result);

    std::string library_version();
}

#endif
