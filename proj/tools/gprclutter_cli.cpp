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

// Command-line front end. Talks to the library only through the C API.

#include "gprclutter/gprclutter.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

namespace
{
    struct ConfigDeleter
    {
        void operator()(gprc_config *c) const { gprc_config_free(c); }
    };
    using ConfigPtr = std::unique_ptr<gprc_config, ConfigDeleter>;

    int fail(gprc_status status)
    {
        std::cerr << "error: " << gprc_last_error() << "\n";
        return static_cast<int>(status);
    }

    void print_tables(const nlohmann::json &doc)
    {
        for (const auto &[name, table] : doc["tables"].items())
        {
            std::cout << "# " << name << "\n";
            std::cout << "scenario,label";
            for (const auto &c : table["columns"])
                std::cout << "," << c.get<std::string>();
            std::cout << "\n";
            for (const auto &row : table["rows"])
            {
                std::cout << row["scenario"].get<std::string>() << "," << row["label"].get<std::string>();
                for (const auto &c : table["columns"])
                    std::cout << "," << row[c.get<std::string>()].dump();
                std::cout << "\n";
            }
        }
        for (const auto &e : doc["errors"])
            std::cerr << "scenario error: " << e.get<std::string>() << "\n";
        if (!doc["passed"].get<bool>())
            std::cerr << "check failed: " << doc["experiment"].get<std::string>() << "\n";
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"gprclutter: medium-induced clutter covariance experiments for FDA-MIMO GPR"};
    app.require_subcommand(0, 1);

    std::string config_path, out_dir, scenario;
    std::optional<std::uint64_t> seed;
    bool dump_config = false, quiet = false;
    app.add_option("--config", config_path, "JSON experiment config");
    app.add_option("--out", out_dir, "Output directory (overrides the config)");
    app.add_option("--seed", seed, "Random seed (overrides the config)");
    app.add_option("--scenario", scenario, "Restrict every experiment to one scenario id");
    app.add_flag("--dump-config", dump_config, "Print the effective config and exit");
    app.add_flag("-q,--quiet", quiet, "Do not print result tables");
    app.set_version_flag("--version", std::string(gprc_version()));

    const char *descriptions[] = {
        "Analytic vs finite-difference sensitivities",   "Linearization validity over the amplitude grid",
        "Assemble and save forward matrices",            "Forward-matrix discrepancies between media",
        "Monte Carlo closure of the clutter covariance", "FDA frequency-increment scan",
        "Spatial correlation-length scan",               "Parameter coupling and weighting scan",
        "Target-position robustness of the overlap",     "Covariance scaling boundary",
        "Noise-floor boundary",                          "Baseline structural metrics and spectra"};
    for (size_t i = 0; i < gprc_experiment_count(); ++i)
        app.add_subcommand(gprc_experiment_name(i), descriptions[i]);

    CLI11_PARSE(app, argc, argv);

    gprc_config *raw = nullptr;
    gprc_status st = config_path.empty() ? gprc_config_default(&raw) : gprc_config_load(config_path.c_str(), &raw);
    if (st != GPRC_OK)
        return fail(st);
    ConfigPtr cfg(raw);

    if (!out_dir.empty() && (st = gprc_config_set_output_dir(cfg.get(), out_dir.c_str())) != GPRC_OK)
        return fail(st);
    if (seed && (st = gprc_config_set_seed(cfg.get(), *seed)) != GPRC_OK)
        return fail(st);
    if (!scenario.empty() && (st = gprc_config_filter_scenario(cfg.get(), scenario.c_str())) != GPRC_OK)
        return fail(st);
    if ((st = gprc_config_validate(cfg.get())) != GPRC_OK)
        return fail(st);

    if (dump_config)
    {
        char *text = nullptr;
        if ((st = gprc_config_serialize(cfg.get(), &text)) != GPRC_OK)
            return fail(st);
        std::cout << text;
        gprc_string_free(text);
        return 0;
    }

    const auto subs = app.get_subcommands();
    if (subs.empty())
    {
        std::cout << app.help();
        return 0;
    }

    char *json_text = nullptr;
    int exit_code = 0;
    st = gprc_experiment_run(cfg.get(), subs.front()->get_name().c_str(), 1, &json_text, &exit_code);
    if (st != GPRC_OK)
        return fail(st);
    const auto doc = nlohmann::json::parse(json_text);
    gprc_string_free(json_text);
    if (!quiet)
        print_tables(doc);
    return exit_code;
}
