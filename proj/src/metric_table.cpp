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

#include "gprclutter/metric_table.hpp"
#include "gprclutter/error.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace gprc
{
    std::string format_number(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, res.ptr);
    }

    MetricTable::MetricTable(std::string name_, std::vector<std::string> columns_)
        : name(std::move(name_)), columns(std::move(columns_))
    {
    }

    void MetricTable::add(std::string scenario, std::string label, std::vector<double> values)
    {
        if (values.size() != columns.size())
            throw std::invalid_argument("metric table '" + name + "': row width does not match the columns");
        rows.push_back({std::move(scenario), std::move(label), std::move(values)});
    }

    std::optional<std::size_t> MetricTable::column_index(std::string_view column) const
    {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == column)
                return i;
        return std::nullopt;
    }

    double MetricTable::at(std::size_t row, std::string_view column) const
    {
        auto c = column_index(column);
        if (!c)
            throw std::out_of_range("metric table '" + name + "' has no column '" + std::string(column) + "'");
        return rows.at(row).values[*c];
    }

    std::vector<const MetricTable::Row *> MetricTable::rows_for(std::string_view scenario) const
    {
        std::vector<const Row *> out;
        for (const auto &r : rows)
            if (r.scenario == scenario)
                out.push_back(&r);
        return out;
    }

    std::string MetricTable::to_csv() const
    {
        std::string out = "scenario,label";
        for (const auto &c : columns)
            out += "," + c;
        out += "\n";
        for (const auto &r : rows)
        {
            out += r.scenario + "," + r.label;
            for (double v : r.values)
                out += "," + format_number(v);
            out += "\n";
        }
        return out;
    }

    nlohmann::json MetricTable::to_json() const
    {
        nlohmann::json rows_json = nlohmann::json::array();
        for (const auto &r : rows)
        {
            nlohmann::json row = {{"scenario", r.scenario}, {"label", r.label}};
            for (std::size_t i = 0; i < columns.size(); ++i)
            {
                if (std::isfinite(r.values[i]))
                    row[columns[i]] = r.values[i];
                else
                    row[columns[i]] = format_number(r.values[i]);
            }
            rows_json.push_back(std::move(row));
        }
        return {{"name", name}, {"columns", columns}, {"rows", rows_json}};
    }

    void MetricTable::check_invariants() const
    {
        const auto eta = column_index("eta"), gamma = column_index("gamma");
        const auto p90 = column_index("p90"), p95 = column_index("p95");
        for (const auto &r : rows)
        {
            if (eta && gamma && std::abs(r.values[*gamma] - (1.0 - r.values[*eta])) > 1e-12)
                throw NumericalError("metric table '" + name + "': gamma != 1 - eta for " + r.scenario + " " + r.label);
            if (p90 && p95 && r.values[*p95] < r.values[*p90])
                throw NumericalError("metric table '" + name + "': p95 < p90 for " + r.scenario + " " + r.label);
        }
    }
}
