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

#ifndef GPRCLUTTER_SCENE_HPP
#define GPRCLUTTER_SCENE_HPP

#include "gprclutter/constitutive.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gprc
{
    // Position in meters. x runs along the array, y across the strip, z is depth (positive downward).
    struct Point3
    {
        double x = 0.0;
        double y = 0.0;
        double z = 0.0;

        bool operator==(const Point3 &) const = default;
    };

    double distance(const Point3 &a, const Point3 &b);

    struct Scenario
    {
        std::string id;
        ColeColeParams background;
        ParamVector d_mu{}; // physical size of one standardized perturbation unit, per parameter

        bool operator==(const Scenario &) const = default;
    };

    // Default scale: d_q = max(0.01 * |mu_b,q|, floor_q), floors {0.01, 0.01, 0.01 tau_b, 0.005, 1e-6 S/m}.
    ParamVector default_perturbation_scale(const ColeColeParams &background);

    // Throws ConfigError when the background is not admissible or any d_mu entry is not positive.
    void validate_scenario(const Scenario &s);

    // The six reference backgrounds: S1 lunar regolith, S2 dry basalt, S3 pure ice,
    // S4 moist sandy loam, S_syn synthetic reference, S_balance balanced synthetic case.
    const std::vector<Scenario> &scenario_registry();

    // Registry lookup; throws ConfigError for unknown ids.
    const Scenario &find_scenario(std::string_view id);

    // S1..S4 are the physically interpretable backgrounds.
    std::vector<std::string> physical_scenario_ids();

    struct GeometryConfig
    {
        int tx_count = 8;
        int rx_count = 8;
        double f0 = 100e6;           // first transmit frequency [Hz]
        double df = 20e6;            // FDA increment [Hz]
        double element_spacing = 0.05; // spacing between elements of the same kind [m]
        int nx = 25;
        int nz = 21;
        double dx = 0.05;
        double dz = 0.025;
        double strip_width = 1.0;    // enters only through the cell volume
        std::optional<int> cell_count; // if given, must equal nx * nz

        bool operator==(const GeometryConfig &) const = default;
    };

    struct SceneGeometry
    {
        std::vector<Point3> tx;          // N transmit elements
        std::vector<Point3> rx;          // M receive elements
        std::vector<double> frequencies; // N transmit frequencies [Hz], frequencies[n] = f0 + n df
        std::vector<Point3> cells;       // P cell centers, x fastest
        double cell_volume = 0.0;
        int nx = 0;
        int nz = 0;

        std::size_t tx_count() const { return tx.size(); }
        std::size_t rx_count() const { return rx.size(); }
        std::size_t channel_count() const { return tx.size() * rx.size(); }
        std::size_t cell_count() const { return cells.size(); }
        double omega(std::size_t n) const { return 2.0 * kPi * frequencies.at(n); }

        // Stacked snapshot row for receive element m and transmit element n.
        std::size_t row(std::size_t m, std::size_t n) const { return n * rx.size() + m; }

        // FNV-1a hash over every coordinate, frequency and the cell volume.
        std::uint64_t fingerprint() const;
    };

    // Throws ConfigError on non-positive counts or spacings, or inconsistent cell_count.
    void validate_geometry_config(const GeometryConfig &config);

    // TX and RX elements interleaved on the surface line (z = 0), RX offset by half the
    // element spacing, with the combined aperture centered over the grid (x = 0).
    // Cell centers: x = (i - (nx-1)/2) dx, z = (k + 1/2) dz.
    SceneGeometry build_geometry(const GeometryConfig &config = {});
}

#endif
