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

#ifndef GPRCLUTTER_CONFIG_HPP
#define GPRCLUTTER_CONFIG_HPP

#include "gprclutter/montecarlo.hpp"
#include "gprclutter/randfield.hpp"
#include "gprclutter/scene.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gprc
{
    struct RandomFieldConfig
    {
        double corr_length = 0.15;
        double rho_c = 0.3;
        ParamVector weights{1.0, 1.0, 1.0, 1.0, 1.0};
        double amplitude = 1.0;
        std::size_t samples = 2000;
        std::uint64_t seed = kDefaultSeed;

        bool operator==(const RandomFieldConfig &) const = default;
    };

    struct ValidityConfig
    {
        std::vector<double> amplitudes = kDefaultAmplitudeGrid;
        std::size_t samples = 200;
        double threshold = 0.05;
        double derivative_step = 1e-5;
        double derivative_tolerance = 1e-5;

        bool operator==(const ValidityConfig &) const = default;
    };

    struct KernelDiffConfig
    {
        std::vector<std::pair<std::string, std::string>> pairs = {{"S1", "S2"}, {"S1", "S3"}, {"S2", "S3"}};
        bool free_space = true;

        bool operator==(const KernelDiffConfig &) const = default;
    };

    struct ClosureConfig
    {
        std::vector<std::string> scenarios = physical_scenario_ids();
        std::size_t check_samples = 500; // smaller ensemble for the convergence-rate check
        std::size_t replicates = 32;     // independent linear ensembles behind the rate estimate

        bool operator==(const ClosureConfig &) const = default;
    };

    struct FdaConfig
    {
        std::vector<std::string> scenarios = physical_scenario_ids();
        std::vector<double> df_mhz = {0.0, 20.0, 40.0};

        bool operator==(const FdaConfig &) const = default;
    };

    struct LxConfig
    {
        std::string scenario = "S2";
        std::vector<double> lengths = {0.05, 0.10, 0.20, 0.40};

        bool operator==(const LxConfig &) const = default;
    };

    struct WeightPreset
    {
        std::string name;
        ParamVector weights{};

        bool operator==(const WeightPreset &) const = default;
    };

    // Enhanced presets double the weight of the named channels.
    std::vector<WeightPreset> default_weight_presets();

    struct CouplingConfig
    {
        std::string scenario = "S_balance";
        std::vector<double> rho = {0.0, 0.3, 0.6, 0.9};
        std::vector<WeightPreset> presets = default_weight_presets();

        bool operator==(const CouplingConfig &) const = default;
    };

    struct TargetConfig
    {
        std::vector<std::string> scenarios = physical_scenario_ids();
        std::vector<Point3> points = {{-0.4, 0.0, 0.2625}, {-0.2, 0.0, 0.2625}, {0.0, 0.0, 0.2625},
                                      {0.2, 0.0, 0.2625},  {0.4, 0.0, 0.2625}};
        Point3 representative{0.0, 0.0, 0.2625};

        bool operator==(const TargetConfig &) const = default;
    };

    struct BoundaryConfig
    {
        std::vector<std::string> scenarios = {"S2", "S4"};
        std::vector<double> kappa = {0.25, 0.5, 1.0, 2.0, 4.0};
        std::vector<double> snr_db = {0.0, 20.0};

        bool operator==(const BoundaryConfig &) const = default;
    };

    struct ExperimentConfig
    {
        std::vector<std::string> scenarios = {"S1", "S2", "S3", "S4", "S_syn", "S_balance"};
        std::vector<Scenario> custom_scenarios; // extend or override registry entries
        GeometryConfig geometry;
        RandomFieldConfig random_field;
        ValidityConfig validity;
        KernelDiffConfig kernel_diff;
        ClosureConfig closure;
        FdaConfig fda;
        LxConfig lx;
        CouplingConfig coupling;
        TargetConfig targets;
        BoundaryConfig boundary;
        std::string output_dir = "out";

        // Custom scenarios take precedence over the registry. Throws ConfigError for unknown ids.
        const Scenario &scenario(std::string_view id) const;

        // Throws ConfigError describing the first inconsistency.
        void validate() const;

        // Restricts every experiment to the given scenario id. Throws ConfigError if the id is unknown.
        void filter_scenario(const std::string &id);

        bool operator==(const ExperimentConfig &) const = default;
    };

    // Structured-text (JSON) config. Missing keys take defaults; unknown keys are rejected.
    ExperimentConfig parse_config(std::string_view text);
    std::string serialize_config(const ExperimentConfig &config);
    ExperimentConfig load_config(const std::string &path);

    // FNV-1a of the serialized config.
    std::uint64_t config_hash(const ExperimentConfig &config);
}

#endif
