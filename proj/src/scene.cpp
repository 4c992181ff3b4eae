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

#include "gprclutter/scene.hpp"
#include "gprclutter/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

namespace gprc
{
    double distance(const Point3 &a, const Point3 &b)
    {
        return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
    }

    ParamVector default_perturbation_scale(const ColeColeParams &bg)
    {
        const ParamVector floors = {0.01, 0.01, 0.01 * bg.tau, 0.005, 1e-6};
        ParamVector d{};
        for (std::size_t q = 0; q < kParamCount; ++q)
            d[q] = std::max(0.01 * std::abs(bg[q]), floors[q]);
        return d;
    }

    void validate_scenario(const Scenario &s)
    {
        if (s.id.empty())
            throw ConfigError("scenario id must not be empty");
        try
        {
            validate_background(s.background);
        }
        catch (const ConfigError &e)
        {
            throw ConfigError("scenario " + s.id + ": " + e.what());
        }
        for (std::size_t q = 0; q < kParamCount; ++q)
            if (!(s.d_mu[q] > 0.0) || !std::isfinite(s.d_mu[q]))
                throw ConfigError("scenario " + s.id + ": d_mu[" + std::string(param_name(q)) + "] must be positive");
    }

    const std::vector<Scenario> &scenario_registry()
    {
        static const std::vector<Scenario> registry = []
        {
            const std::vector<std::pair<std::string, ColeColeParams>> rows = {
                {"S1", {3.0285, 0.0, 1e-12, 0.0, 1e-5}},
                {"S2", {9.0, 0.0, 1e-12, 0.0, 1e-5}},
                {"S3", {3.16, 88.34, 2.1e-5, 0.0, 1e-5}},
                {"S4", {21.60, 30.49, 3.60e-8, 0.45, 1.95e-2}},
                {"S_syn", {4.0, 2.0, 1.0610e-9, 0.25, 5e-3}},
                {"S_balance", {5.43374, 0.110543, 6.12549e-6, 0.49, 6.89221e-5}},
            };
            std::vector<Scenario> out;
            for (const auto &[id, bg] : rows)
                out.push_back({id, bg, default_perturbation_scale(bg)});
            return out;
        }();
        return registry;
    }

    const Scenario &find_scenario(std::string_view id)
    {
        const auto &reg = scenario_registry();
        auto it = std::find_if(reg.begin(), reg.end(), [&](const Scenario &s) { return s.id == id; });
        if (it == reg.end())
            throw ConfigError("unknown scenario id: " + std::string(id));
        return *it;
    }

    std::vector<std::string> physical_scenario_ids() { return {"S1", "S2", "S3", "S4"}; }

    std::uint64_t SceneGeometry::fingerprint() const
    {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](double v)
        {
            unsigned char bytes[sizeof(double)];
            std::memcpy(bytes, &v, sizeof(double));
            for (unsigned char b : bytes)
            {
                h ^= b;
                h *= 1099511628211ull;
            }
        };
        for (const auto *set : {&tx, &rx, &cells})
            for (const auto &p : *set)
            {
                mix(p.x);
                mix(p.y);
                mix(p.z);
            }
        for (double f : frequencies)
            mix(f);
        mix(cell_volume);
        mix(static_cast<double>(nx));
        mix(static_cast<double>(nz));
        return h;
    }

    void validate_geometry_config(const GeometryConfig &c)
    {
        std::ostringstream why;
        if (c.tx_count < 1)
            why << "tx_count must be >= 1; ";
        if (c.rx_count < 1)
            why << "rx_count must be >= 1; ";
        if (!(c.f0 > 0.0) || !std::isfinite(c.f0))
            why << "f0 must be positive; ";
        if (!(c.df >= 0.0) || !std::isfinite(c.df))
            why << "df must be >= 0; ";
        if (!(c.element_spacing > 0.0))
            why << "element_spacing must be positive; ";
        if (c.nx < 1 || c.nz < 1)
            why << "grid dims must be positive; ";
        if (!(c.dx > 0.0) || !(c.dz > 0.0) || !(c.strip_width > 0.0))
            why << "dx, dz and strip_width must be positive; ";
        if (c.cell_count && *c.cell_count != c.nx * c.nz)
            why << "cell_count " << *c.cell_count << " != nx * nz = " << c.nx * c.nz << "; ";
        const auto msg = why.str();
        if (!msg.empty())
            throw ConfigError("invalid geometry: " + msg.substr(0, msg.size() - 2));
    }

    SceneGeometry build_geometry(const GeometryConfig &c)
    {
        validate_geometry_config(c);

        SceneGeometry g;
        g.nx = c.nx;
        g.nz = c.nz;
        g.cell_volume = c.dx * c.dz * c.strip_width;

        // Positions in units of the element spacing so that mirrored elements negate exactly.
        const double pitch = c.element_spacing;
        const double span = std::max(c.tx_count - 1.0, c.rx_count - 0.5);
        const double center = 0.5 * span;
        for (int n = 0; n < c.tx_count; ++n)
            g.tx.push_back({(n - center) * pitch, 0.0, 0.0});
        for (int m = 0; m < c.rx_count; ++m)
            g.rx.push_back({(m + 0.5 - center) * pitch, 0.0, 0.0});

        for (int n = 0; n < c.tx_count; ++n)
            g.frequencies.push_back(c.f0 + n * c.df);

        g.cells.reserve(static_cast<std::size_t>(c.nx) * c.nz);
        const double mid = 0.5 * (c.nx - 1);
        for (int k = 0; k < c.nz; ++k)
            for (int i = 0; i < c.nx; ++i)
                g.cells.push_back({(i - mid) * c.dx, 0.0, (k + 0.5) * c.dz});
        return g;
    }
}
