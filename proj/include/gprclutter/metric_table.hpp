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

#ifndef GPRCLUTTER_METRIC_TABLE_HPP
#define GPRCLUTTER_METRIC_TABLE_HPP

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gprc
{
    // Rows of numeric metrics keyed by scenario and a free-form label.
    struct MetricTable
    {
        struct Row
        {
            std::string scenario;
            std::string label;
            std::vector<double> values;
        };

        std::string name;
        std::vector<std::string> columns;
        std::vector<Row> rows;

        MetricTable() = default;
        MetricTable(std::string name, std::vector<std::string> columns);

        void add(std::string scenario, std::string label, std::vector<double> values);

        std::optional<std::size_t> column_index(std::string_view column) const;

        // Throws std::out_of_range for unknown columns.
        double at(std::size_t row, std::string_view column) const;

        // Rows belonging to one scenario, in insertion order.
        std::vector<const Row *> rows_for(std::string_view scenario) const;

        // Non-finite values are written as nan / inf (CSV) or strings (JSON).
        std::string to_csv() const;
        nlohmann::json to_json() const;

        // gamma = 1 - eta to 1e-12 and p95 >= p90 wherever those columns are present.
        // Throws NumericalError on violation.
        void check_invariants() const;
    };

    // Shortest representation that round-trips.
    std::string format_number(double v);
}

#endif
