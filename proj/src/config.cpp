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

#include "gprclutter/config.hpp"
#include "gprclutter/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace gprc
{
    using nlohmann::json;

    std::vector<WeightPreset> default_weight_presets()
    {
        return {{"uniform", {1.0, 1.0, 1.0, 1.0, 1.0}},
                {"permittivity-enhanced", {2.0, 2.0, 1.0, 1.0, 1.0}},
                {"relaxation-enhanced", {1.0, 1.0, 2.0, 2.0, 1.0}},
                {"conductivity-enhanced", {1.0, 1.0, 1.0, 1.0, 2.0}}};
    }

    namespace
    {
        void check_keys(const json &j, std::string_view block, std::initializer_list<std::string_view> allowed)
        {
            if (!j.is_object())
                throw ConfigError(std::string(block) + ": expected an object");
            for (const auto &item : j.items())
                if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
                    throw ConfigError(std::string(block) + ": unknown key '" + item.key() + "'");
        }

        template <typename T>
        void read(const json &j, const char *key, T &out)
        {
            if (auto it = j.find(key); it != j.end())
                out = it->get<T>();
        }

        json point_to_json(const Point3 &p) { return json::array({p.x, p.z}); }

        Point3 point_from_json(const json &j)
        {
            if (!j.is_array() || j.size() != 2)
                throw ConfigError("target points are [x, z] pairs");
            return {j[0].get<double>(), 0.0, j[1].get<double>()};
        }

        json params_to_json(const ColeColeParams &p)
        {
            return {{"eps_inf", p.eps_inf}, {"delta_eps", p.delta_eps}, {"tau", p.tau}, {"alpha", p.alpha}, {"sigma", p.sigma}};
        }

        ColeColeParams params_from_json(const json &j)
        {
            check_keys(j, "background", {"eps_inf", "delta_eps", "tau", "alpha", "sigma"});
            ColeColeParams p;
            for (const char *key : {"eps_inf", "delta_eps", "tau", "alpha", "sigma"})
                if (!j.contains(key))
                    throw ConfigError(std::string("background: missing '") + key + "'");
            read(j, "eps_inf", p.eps_inf);
            read(j, "delta_eps", p.delta_eps);
            read(j, "tau", p.tau);
            read(j, "alpha", p.alpha);
            read(j, "sigma", p.sigma);
            return p;
        }

        json to_json(const ExperimentConfig &c)
        {
            json j;
            j["scenarios"] = c.scenarios;
            j["custom_scenarios"] = json::array();
            for (const auto &s : c.custom_scenarios)
                j["custom_scenarios"].push_back({{"id", s.id}, {"background", params_to_json(s.background)}, {"d_mu", s.d_mu}});

            const auto &g = c.geometry;
            j["geometry"] = {{"tx_count", g.tx_count}, {"rx_count", g.rx_count},   {"f0", g.f0},
                             {"df", g.df},             {"element_spacing", g.element_spacing},
                             {"nx", g.nx},             {"nz", g.nz},               {"dx", g.dx},
                             {"dz", g.dz},             {"strip_width", g.strip_width}};
            if (g.cell_count)
                j["geometry"]["cell_count"] = *g.cell_count;

            const auto &r = c.random_field;
            j["random_field"] = {{"corr_length", r.corr_length}, {"rho_c", r.rho_c}, {"weights", r.weights},
                                 {"amplitude", r.amplitude},     {"samples", r.samples}, {"seed", r.seed}};
            const auto &v = c.validity;
            j["validity"] = {{"amplitudes", v.amplitudes},
                             {"samples", v.samples},
                             {"threshold", v.threshold},
                             {"derivative_step", v.derivative_step},
                             {"derivative_tolerance", v.derivative_tolerance}};
            j["kernel_diff"] = {{"pairs", json::array()}, {"free_space", c.kernel_diff.free_space}};
            for (const auto &[a, b] : c.kernel_diff.pairs)
                j["kernel_diff"]["pairs"].push_back(json::array({a, b}));
            j["closure"] = {{"scenarios", c.closure.scenarios}, {"check_samples", c.closure.check_samples},
                          {"replicates", c.closure.replicates}};
            j["fda"] = {{"scenarios", c.fda.scenarios}, {"df_mhz", c.fda.df_mhz}};
            j["lx"] = {{"scenario", c.lx.scenario}, {"lengths", c.lx.lengths}};
            j["coupling"] = {{"scenario", c.coupling.scenario}, {"rho", c.coupling.rho}, {"presets", json::array()}};
            for (const auto &p : c.coupling.presets)
                j["coupling"]["presets"].push_back({{"name", p.name}, {"weights", p.weights}});
            j["targets"] = {{"scenarios", c.targets.scenarios},
                            {"points", json::array()},
                            {"representative", point_to_json(c.targets.representative)}};
            for (const auto &p : c.targets.points)
                j["targets"]["points"].push_back(point_to_json(p));
            j["boundary"] = {{"scenarios", c.boundary.scenarios}, {"kappa", c.boundary.kappa}, {"snr_db", c.boundary.snr_db}};
            j["output_dir"] = c.output_dir;
            return j;
        }

        ExperimentConfig from_json(const json &j)
        {
            check_keys(j, "config",
                       {"scenarios", "custom_scenarios", "geometry", "random_field", "validity", "kernel_diff", "closure",
                        "fda", "lx", "coupling", "targets", "boundary", "output_dir"});
            ExperimentConfig c;
            read(j, "scenarios", c.scenarios);
            read(j, "output_dir", c.output_dir);

            if (auto it = j.find("custom_scenarios"); it != j.end())
            {
                if (!it->is_array())
                    throw ConfigError("custom_scenarios: expected an array");
                for (const auto &e : *it)
                {
                    check_keys(e, "custom_scenarios", {"id", "background", "d_mu"});
                    if (!e.contains("id") || !e.contains("background"))
                        throw ConfigError("custom_scenarios: 'id' and 'background' are required");
                    Scenario s;
                    s.id = e["id"].get<std::string>();
                    s.background = params_from_json(e["background"]);
                    s.d_mu = default_perturbation_scale(s.background);
                    read(e, "d_mu", s.d_mu);
                    c.custom_scenarios.push_back(std::move(s));
                }
            }

            if (auto it = j.find("geometry"); it != j.end())
            {
                check_keys(*it, "geometry",
                           {"tx_count", "rx_count", "f0", "df", "element_spacing", "nx", "nz", "dx", "dz", "strip_width",
                            "cell_count"});
                auto &g = c.geometry;
                read(*it, "tx_count", g.tx_count);
                read(*it, "rx_count", g.rx_count);
                read(*it, "f0", g.f0);
                read(*it, "df", g.df);
                read(*it, "element_spacing", g.element_spacing);
                read(*it, "nx", g.nx);
                read(*it, "nz", g.nz);
                read(*it, "dx", g.dx);
                read(*it, "dz", g.dz);
                read(*it, "strip_width", g.strip_width);
                if (it->contains("cell_count"))
                    g.cell_count = (*it)["cell_count"].get<int>();
            }
            if (auto it = j.find("random_field"); it != j.end())
            {
                check_keys(*it, "random_field", {"corr_length", "rho_c", "weights", "amplitude", "samples", "seed"});
                auto &r = c.random_field;
                read(*it, "corr_length", r.corr_length);
                read(*it, "rho_c", r.rho_c);
                read(*it, "weights", r.weights);
                read(*it, "amplitude", r.amplitude);
                read(*it, "samples", r.samples);
                read(*it, "seed", r.seed);
            }
            if (auto it = j.find("validity"); it != j.end())
            {
                check_keys(*it, "validity", {"amplitudes", "samples", "threshold", "derivative_step", "derivative_tolerance"});
                auto &v = c.validity;
                read(*it, "amplitudes", v.amplitudes);
                read(*it, "samples", v.samples);
                read(*it, "threshold", v.threshold);
                read(*it, "derivative_step", v.derivative_step);
                read(*it, "derivative_tolerance", v.derivative_tolerance);
            }
            if (auto it = j.find("kernel_diff"); it != j.end())
            {
                check_keys(*it, "kernel_diff", {"pairs", "free_space"});
                read(*it, "free_space", c.kernel_diff.free_space);
                if (it->contains("pairs"))
                {
                    c.kernel_diff.pairs.clear();
                    for (const auto &p : (*it)["pairs"])
                    {
                        if (!p.is_array() || p.size() != 2)
                            throw ConfigError("kernel_diff.pairs: expected [id, id] pairs");
                        c.kernel_diff.pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
                    }
                }
            }
            if (auto it = j.find("closure"); it != j.end())
            {
                check_keys(*it, "closure", {"scenarios", "check_samples", "replicates"});
                read(*it, "scenarios", c.closure.scenarios);
                read(*it, "check_samples", c.closure.check_samples);
                read(*it, "replicates", c.closure.replicates);
            }
            if (auto it = j.find("fda"); it != j.end())
            {
                check_keys(*it, "fda", {"scenarios", "df_mhz"});
                read(*it, "scenarios", c.fda.scenarios);
                read(*it, "df_mhz", c.fda.df_mhz);
            }
            if (auto it = j.find("lx"); it != j.end())
            {
                check_keys(*it, "lx", {"scenario", "lengths"});
                read(*it, "scenario", c.lx.scenario);
                read(*it, "lengths", c.lx.lengths);
            }
            if (auto it = j.find("coupling"); it != j.end())
            {
                check_keys(*it, "coupling", {"scenario", "rho", "presets"});
                read(*it, "scenario", c.coupling.scenario);
                read(*it, "rho", c.coupling.rho);
                if (it->contains("presets"))
                {
                    c.coupling.presets.clear();
                    for (const auto &p : (*it)["presets"])
                    {
                        check_keys(p, "coupling.presets", {"name", "weights"});
                        WeightPreset w;
                        w.name = p.at("name").get<std::string>();
                        w.weights = p.at("weights").get<ParamVector>();
                        c.coupling.presets.push_back(std::move(w));
                    }
                }
            }
            if (auto it = j.find("targets"); it != j.end())
            {
                check_keys(*it, "targets", {"scenarios", "points", "representative"});
                read(*it, "scenarios", c.targets.scenarios);
                if (it->contains("points"))
                {
                    c.targets.points.clear();
                    for (const auto &p : (*it)["points"])
                        c.targets.points.push_back(point_from_json(p));
                }
                if (it->contains("representative"))
                    c.targets.representative = point_from_json((*it)["representative"]);
            }
            if (auto it = j.find("boundary"); it != j.end())
            {
                check_keys(*it, "boundary", {"scenarios", "kappa", "snr_db"});
                read(*it, "scenarios", c.boundary.scenarios);
                read(*it, "kappa", c.boundary.kappa);
                read(*it, "snr_db", c.boundary.snr_db);
            }
            return c;
        }

        void require_positive(double v, const char *what)
        {
            if (!(v > 0.0) || !std::isfinite(v))
                throw ConfigError(std::string(what) + " must be positive and finite");
        }

        template <typename F>
        void for_each_scenario_list(ExperimentConfig &c, F &&f)
        {
            f(c.scenarios);
            f(c.closure.scenarios);
            f(c.fda.scenarios);
            f(c.targets.scenarios);
            f(c.boundary.scenarios);
        }
    }

    const Scenario &ExperimentConfig::scenario(std::string_view id) const
    {
        for (const auto &s : custom_scenarios)
            if (s.id == id)
                return s;
        return find_scenario(id);
    }

    void ExperimentConfig::validate() const
    {
        std::set<std::string> custom_ids;
        for (const auto &s : custom_scenarios)
        {
            if (!custom_ids.insert(s.id).second)
                throw ConfigError("duplicate custom scenario '" + s.id + "'");
            validate_scenario(s);
        }
        auto check_ids = [&](const std::vector<std::string> &ids, const char *block)
        {
            for (const auto &id : ids)
                try
                {
                    (void)scenario(id);
                }
                catch (const ConfigError &)
                {
                    throw ConfigError(std::string(block) + ": unknown scenario '" + id + "'");
                }
        };
        check_ids(scenarios, "scenarios");
        check_ids(closure.scenarios, "closure");
        check_ids(fda.scenarios, "fda");
        check_ids(targets.scenarios, "targets");
        check_ids(boundary.scenarios, "boundary");
        check_ids({lx.scenario}, "lx");
        check_ids({coupling.scenario}, "coupling");
        for (const auto &[a, b] : kernel_diff.pairs)
            check_ids({a, b}, "kernel_diff");

        validate_geometry_config(geometry);

        require_positive(random_field.corr_length, "random_field.corr_length");
        if (!(random_field.rho_c >= 0.0 && random_field.rho_c < 1.0))
            throw ConfigError("random_field.rho_c must lie in [0, 1)");
        for (double w : random_field.weights)
            if (!(w >= 0.0) || !std::isfinite(w))
                throw ConfigError("random_field.weights must be non-negative");
        if (!(random_field.amplitude >= 0.0) || !std::isfinite(random_field.amplitude))
            throw ConfigError("random_field.amplitude must be non-negative");
        if (random_field.samples < 2)
            throw ConfigError("random_field.samples must be at least 2");

        if (validity.amplitudes.empty())
            throw ConfigError("validity.amplitudes must not be empty");
        for (double s : validity.amplitudes)
            require_positive(s, "validity.amplitudes");
        if (!std::is_sorted(validity.amplitudes.begin(), validity.amplitudes.end()))
            throw ConfigError("validity.amplitudes must be increasing");
        if (validity.samples < 1)
            throw ConfigError("validity.samples must be at least 1");
        require_positive(validity.threshold, "validity.threshold");
        require_positive(validity.derivative_step, "validity.derivative_step");
        require_positive(validity.derivative_tolerance, "validity.derivative_tolerance");

        if (closure.check_samples < 2 || closure.check_samples > random_field.samples)
            throw ConfigError("closure.check_samples must lie in [2, random_field.samples]");
        if (closure.replicates < 1)
            throw ConfigError("closure.replicates must be at least 1");
        for (double df : fda.df_mhz)
            if (!(df >= 0.0) || !std::isfinite(df))
                throw ConfigError("fda.df_mhz must be non-negative");
        for (double l : lx.lengths)
            require_positive(l, "lx.lengths");
        for (double r : coupling.rho)
            if (!(r >= 0.0 && r < 1.0))
                throw ConfigError("coupling.rho must lie in [0, 1)");
        for (const auto &p : coupling.presets)
            for (double w : p.weights)
                if (!(w >= 0.0) || !std::isfinite(w))
                    throw ConfigError("coupling preset '" + p.name + "' has a negative weight");
        if (targets.points.empty())
            throw ConfigError("targets.points must not be empty");
        for (double k : boundary.kappa)
            require_positive(k, "boundary.kappa");
        for (double s : boundary.snr_db)
            if (!std::isfinite(s))
                throw ConfigError("boundary.snr_db must be finite");
        if (output_dir.empty())
            throw ConfigError("output_dir must not be empty");
    }

    void ExperimentConfig::filter_scenario(const std::string &id)
    {
        (void)scenario(id);
        for_each_scenario_list(*this,
                               [&](std::vector<std::string> &ids)
                               {
                                   if (std::find(ids.begin(), ids.end(), id) != ids.end())
                                       ids = {id};
                                   else
                                       ids.clear();
                               });
        std::erase_if(kernel_diff.pairs, [&](const auto &p) { return p.first != id && p.second != id; });
        lx.scenario = id;
        coupling.scenario = id;
    }

    ExperimentConfig parse_config(std::string_view text)
    {
        json j;
        try
        {
            j = json::parse(text.begin(), text.end());
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        try
        {
            return from_json(j);
        }
        catch (const json::exception &e)
        {
            throw ConfigError(std::string("config has a wrongly typed value: ") + e.what());
        }
    }

    std::string serialize_config(const ExperimentConfig &config) { return to_json(config).dump(2) + "\n"; }

    ExperimentConfig load_config(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw IoError("cannot open config file '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_config(ss.str());
    }

    std::uint64_t config_hash(const ExperimentConfig &config)
    {
        std::uint64_t h = 1469598103934665603ull;
        for (unsigned char ch : serialize_config(config))
        {
            h ^= ch;
            h *= 1099511628211ull;
        }
        return h;
    }
}
