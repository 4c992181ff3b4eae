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

#include <doctest.h>

#include "gprclutter/cmat.hpp"
#include "gprclutter/config.hpp"
#include "gprclutter/error.hpp"
#include "gprclutter/metric_table.hpp"

#include <json.hpp>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>

using namespace gprc;
namespace fs = std::filesystem;

namespace
{
    fs::path scratch(const std::string &name)
    {
        const auto dir = fs::temp_directory_path() / "gprclutter_test_io";
        fs::create_directories(dir);
        return dir / name;
    }

    std::uint64_t format_offset(const std::string &bytes)
    {
        try
        {
            (void)decode_cmat(bytes);
        }
        catch (const FormatError &e)
        {
            return e.offset();
        }
        FAIL("expected FormatError");
        return 0;
    }
}

TEST_CASE("CMAT round trip is bit-identical")
{
    Eigen::MatrixXcd C(3, 4);
    C.setRandom();
    C(1, 2) = cplx(-0.0, std::numeric_limits<double>::denorm_min());
    const auto bytes = encode_cmat(C);
    CHECK(bytes.size() == kCmatHeaderSize + 3 * 4 * 16);
    CHECK(bytes.substr(0, 4) == "CMAT");
    const auto back = std::get<Eigen::MatrixXcd>(decode_cmat(bytes));
    CHECK(std::memcmp(back.data(), C.data(), sizeof(cplx) * 12) == 0);

    Eigen::MatrixXd R(2, 5);
    R.setRandom();
    const auto rb = std::get<Eigen::MatrixXd>(decode_cmat(encode_cmat(R)));
    CHECK(rb == R);

    // payload is row-major: the second value is entry (0, 1)
    double second = 0.0;
    std::memcpy(&second, encode_cmat(R).data() + kCmatHeaderSize + 8, 8);
    CHECK(second == R(0, 1));

    const auto path = scratch("roundtrip.cmat");
    save_matrix(path, C);
    CHECK(load_complex_matrix(path) == C);
    const auto h = read_cmat_header(path);
    CHECK(h.rows == 3);
    CHECK(h.cols == 4);
    CHECK(h.kind == CmatKind::complex128);
    CHECK(h.version == kCmatVersion);
    save_matrix(path, R);
    CHECK(load_complex_matrix(path) == R.cast<cplx>()); // real payloads are promoted
}

TEST_CASE("CMAT decoding reports byte offsets")
{
    Eigen::MatrixXd R = Eigen::MatrixXd::Ones(2, 2);
    const auto good = encode_cmat(R);
    CHECK(format_offset(good.substr(0, 2)) == 2);
    std::string bad = good;
    bad[0] = 'X';
    CHECK(format_offset(bad) == 0);
    CHECK(format_offset(good.substr(0, 10)) == 10);
    bad = good;
    bad[4] = 9;
    CHECK(format_offset(bad) == 4);
    bad = good;
    bad[6] = 7;
    CHECK(format_offset(bad) == 6);
    CHECK(format_offset(good.substr(0, good.size() - 3)) == good.size() - 3);
    CHECK(format_offset(good + "x") == good.size());
    CHECK_THROWS_AS(load_matrix(scratch("does_not_exist.cmat")), IoError);
}

TEST_CASE("Toy forward CMAT header")
{
    GeometryConfig c;
    c.tx_count = 2;
    c.rx_count = 2;
    c.nx = 3;
    c.nz = 1;
    const auto A = assemble_forward(find_scenario("S2"), build_geometry(c));
    const auto h = decode_cmat_header(encode_cmat(A.entries));
    CHECK(h.rows == 4);
    CHECK(h.cols == 15);
    CHECK(h.kind == CmatKind::complex128);
}

TEST_CASE("Atomic text writes")
{
    const auto path = scratch("note.txt");
    write_file_atomic(path, "first");
    write_file_atomic(path, "second");
    CHECK(read_file(path) == "second");
    for (const auto &e : fs::directory_iterator(path.parent_path()))
        CHECK(e.path().filename().string().find(".tmp") == std::string::npos);
    const auto nested = scratch("nested") / "x" / "y.txt";
    write_file_atomic(nested, "z"); // parent directories are created
    CHECK(read_file(nested) == "z");
    // a regular file in place of the parent directory cannot work
    CHECK_THROWS_AS(write_file_atomic(path / "child.txt", "z"), IoError);
}

TEST_CASE("Config serialization is a fixed point")
{
    ExperimentConfig c;
    c.random_field.seed = 17;
    c.random_field.corr_length = 0.1 + 0.2; // not exactly representable in short decimal
    c.geometry.df = 33.3e6;
    Scenario custom;
    custom.id = "wet";
    custom.background = {6.0, 12.0, 2e-9, 0.2, 0.05};
    custom.d_mu = default_perturbation_scale(custom.background);
    c.custom_scenarios.push_back(custom);
    const auto text = serialize_config(c);
    const auto back = parse_config(text);
    CHECK(back == c);
    CHECK(serialize_config(back) == text);
    CHECK(config_hash(back) == config_hash(c));
    c.random_field.seed = 18;
    CHECK(config_hash(back) != config_hash(c));
    CHECK(parse_config("{}") == ExperimentConfig{});
}

TEST_CASE("Config parsing rejects bad input")
{
    CHECK_THROWS_AS(parse_config(R"({"geometry": {"nx": 5, "bogus": 1}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"unknown_block": {}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"geometry": {"nx": "five"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"custom_scenarios": [{"id": "x"}]})"), ConfigError);
    CHECK_THROWS_AS(load_config(scratch("missing.json").string()), IoError);
    try
    {
        (void)parse_config(R"({"random_field": {"rho": 0.3}})");
        FAIL("expected ConfigError");
    }
    catch (const ConfigError &e)
    {
        CHECK(std::string(e.what()).find("rho") != std::string::npos);
    }
}

TEST_CASE("Config validation")
{
    ExperimentConfig c;
    CHECK_NOTHROW(c.validate());
    c.random_field.rho_c = 1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.scenarios.push_back("S9");
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.geometry.nx = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.random_field.samples = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.geometry.cell_count = 7;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("Custom scenarios override the registry")
{
    const auto c = parse_config(R"({"scenarios": ["S4"], "custom_scenarios": [
        {"id": "S4", "background": {"eps_inf": 4.0, "delta_eps": 8.0, "tau": 1e-9, "alpha": 0.3, "sigma": 0.01},
         "d_mu": [0.04, 0.08, 1e-11, 0.001, 1e-4]}]})");
    CHECK(c.scenario("S4").background.eps_inf == 4.0);
    CHECK(c.scenario("S4").d_mu[3] == 0.001);
    CHECK(c.scenario("S1") == find_scenario("S1"));
    CHECK_THROWS_AS(c.scenario("nope"), ConfigError);
}

TEST_CASE("Scenario filter narrows every experiment")
{
    ExperimentConfig c;
    c.filter_scenario("S3");
    CHECK(c.scenarios == std::vector<std::string>{"S3"});
    CHECK(c.closure.scenarios == std::vector<std::string>{"S3"});
    CHECK(c.boundary.scenarios.empty());
    CHECK(c.kernel_diff.pairs.size() == 2);
    for (const auto &[a, b] : c.kernel_diff.pairs)
        CHECK((a == "S3" || b == "S3"));
    CHECK(c.lx.scenario == "S3");
    CHECK(c.coupling.scenario == "S3");
    ExperimentConfig d;
    CHECK_THROWS_AS(d.filter_scenario("S7"), ConfigError);
}

TEST_CASE("Metric table output")
{
    MetricTable t("demo", {"r_eff", "p90", "p95", "eta", "gamma"});
    t.add("S1", "base", {2.5, 2, 3, 0.25, 0.75});
    t.add("S2", "noisy", {1.0 / 3.0, 1, 1, 1.0, 0.0});
    t.add("S2", "inf", {std::numeric_limits<double>::infinity(), 1, 2, 0.5, 0.5});
    CHECK(t.column_index("p95") == std::size_t(2));
    CHECK(!t.column_index("missing"));
    CHECK(t.at(0, "eta") == 0.25);
    CHECK_THROWS_AS(t.at(0, "missing"), std::out_of_range);
    CHECK(t.rows_for("S2").size() == 2);
    CHECK_THROWS(t.add("S3", "short", {1.0}));

    const auto csv = t.to_csv();
    CHECK(csv.rfind("scenario,label,r_eff,p90,p95,eta,gamma\n", 0) == 0);
    CHECK(csv.find("S2,noisy,0.3333333333333333,") != std::string::npos);
    CHECK(csv.find("S2,inf,inf,") != std::string::npos);
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);

    const auto j = t.to_json();
    CHECK(j["rows"][1]["r_eff"].get<double>() == 1.0 / 3.0);
    CHECK(j["rows"][2]["r_eff"] == "inf");
    CHECK(nlohmann::json::parse(j.dump()) == j);

    CHECK_NOTHROW(t.check_invariants());
    t.add("S4", "broken", {1, 3, 2, 0.5, 0.5});
    CHECK_THROWS_AS(t.check_invariants(), NumericalError);
    MetricTable g("g", {"eta", "gamma"});
    g.add("S1", "off", {0.3, 0.6});
    CHECK_THROWS_AS(g.check_invariants(), NumericalError);
}
