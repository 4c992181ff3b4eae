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

#include "gprclutter/error.hpp"
#include "gprclutter/randfield.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <vector>

using namespace gprc;

namespace
{
    SceneGeometry small_grid(int nx, int nz)
    {
        GeometryConfig c;
        c.nx = nx;
        c.nz = nz;
        return build_geometry(c);
    }

    Scenario unit_scenario()
    {
        Scenario s = find_scenario("S_syn");
        s.d_mu = {1.0, 1.0, 1.0, 1.0, 1.0};
        return s;
    }

    constexpr ParamVector kUnitWeights{1.0, 1.0, 1.0, 1.0, 1.0};

    double covariance_error(const PerturbationCovariance &cov, std::size_t L, std::uint64_t seed)
    {
        const Eigen::MatrixXd X = PerturbationSampler(cov).draw(L, seed);
        const Eigen::MatrixXd R = cov.materialize();
        const Eigen::MatrixXd Rhat = X * X.transpose() / double(L);
        return (Rhat - R).norm() / R.norm();
    }
}

TEST_CASE("Spatial factor entries")
{
    const std::vector<Point3> cells{{0, 0, 0}, {0.15, 0, 0}, {0, 0, 0.15}, {0.3, 0, 0.4}};
    const auto C = build_spatial_factor(cells, 0.15);
    for (int i = 0; i < 4; ++i)
        CHECK(C(i, i) == 1.0 + 1e-10);
    CHECK(C(0, 1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    CHECK(C(0, 2) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    CHECK(C(0, 3) == doctest::Approx(std::exp(-0.25 / (2 * 0.0225))).epsilon(1e-14));
    CHECK(C == C.transpose());

    const auto E = build_spatial_factor(cells, 0.15, SpatialKernelFamily::exponential);
    CHECK(E(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));

    // tiny correlation length: identity up to the nugget
    const auto I = build_spatial_factor(small_grid(5, 4).cells, 1e-6);
    CHECK((I - Eigen::MatrixXd::Identity(20, 20) * (1.0 + 1e-10)).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(build_spatial_factor(cells, 0.0), ConfigError);
    CHECK_THROWS_AS(build_spatial_factor(cells, -1.0), ConfigError);
}

TEST_CASE("Parameter factor structure")
{
    const auto S0 = build_param_factor(find_scenario("S2"), kUnitWeights, 0.0);
    const auto &d = find_scenario("S2").d_mu;
    for (int q = 0; q < 5; ++q)
        for (int r = 0; r < 5; ++r)
            CHECK(S0(q, r) == (q == r ? d[q] * d[q] : 0.0));

    const auto S3 = build_param_factor(unit_scenario(), kUnitWeights, 0.3);
    CHECK(S3(0, 0) == 1.0);
    CHECK(S3(1, 4) == doctest::Approx(0.3).epsilon(1e-15));

    const ParamVector w{2.0, 1.0, 0.0, 1.0, 0.5};
    const auto Sw = build_param_factor(unit_scenario(), w, 0.3);
    CHECK(Sw(0, 0) == 4.0);
    CHECK(Sw(2, 2) == 0.0);
    CHECK(Sw(0, 4) == doctest::Approx(0.3).epsilon(1e-15));

    Eigen::SelfAdjointEigenSolver<ParamMatrix> es(build_param_factor(unit_scenario(), kUnitWeights, 0.9));
    const auto ev = es.eigenvalues();
    for (int i = 0; i < 4; ++i)
        CHECK(ev(i) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(ev(4) == doctest::Approx(4.6).epsilon(1e-12));

    CHECK_THROWS_AS(build_param_factor(unit_scenario(), kUnitWeights, 1.0), ConfigError);
    CHECK_THROWS_AS(build_param_factor(unit_scenario(), kUnitWeights, -0.1), ConfigError);
    CHECK_THROWS_AS(build_param_factor(unit_scenario(), ParamVector{1, 1, -1, 1, 1}, 0.3), ConfigError);
}

TEST_CASE("Trace and amplitude bookkeeping")
{
    const auto g = small_grid(4, 3);
    const auto cov = make_perturbation_covariance(find_scenario("S4"), g, 0.15, 0.3, kUnitWeights, 2.0);
    CHECK(cov.size() == 60);
    CHECK(cov.trace() == doctest::Approx(cov.materialize().trace()).epsilon(1e-14));
    const auto half = cov.with_amplitude(1.0);
    CHECK(&half.spatial_factor() == &cov.spatial_factor());
    CHECK(cov.trace() == doctest::Approx(4.0 * half.trace()).epsilon(1e-15));
    CHECK_THROWS_AS(cov.with_amplitude(-1.0), ConfigError);
}

TEST_CASE("Materialized covariance is the Kronecker product")
{
    const auto g = small_grid(3, 2);
    const auto cov = make_perturbation_covariance(find_scenario("S3"), g, 0.1, 0.6, kUnitWeights, 1.5);
    const Eigen::MatrixXd R = cov.materialize();
    const Eigen::Index P = 6;
    for (Eigen::Index i = 0; i < 5 * P; ++i)
        for (Eigen::Index j = 0; j < 5 * P; ++j)
        {
            const double expected = 2.25 * cov.param_factor()(i / P, j / P) * cov.spatial_factor()(i % P, j % P);
            CHECK(std::abs(R(i, j) - expected) <= 1e-12 * std::abs(expected));
        }

    // single cell: R_mu is the parameter factor itself
    const auto one = make_perturbation_covariance(find_scenario("S3"), small_grid(1, 1), 0.1, 0.3, kUnitWeights, 1.0);
    CHECK((one.materialize() - one.param_factor() * (1.0 + 1e-10)).cwiseAbs().maxCoeff() < 1e-25);

    CHECK_THROWS_AS(cov.materialize(29), ConfigError);
    CHECK_NOTHROW(cov.materialize(30));
}

TEST_CASE("Semidefinite Cholesky handles zero channels")
{
    const ParamVector w{1.0, 0.0, 1.0, 0.0, 1.0};
    const auto S = build_param_factor(unit_scenario(), w, 0.3);
    const auto L = semidefinite_cholesky(S);
    CHECK((L * L.transpose() - S).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(L.col(1).cwiseAbs().maxCoeff() == 0.0);
    CHECK(L.col(3).cwiseAbs().maxCoeff() == 0.0);
    CHECK(semidefinite_cholesky(ParamMatrix::Zero()).isZero());

    ParamMatrix bad = ParamMatrix::Identity();
    bad(4, 4) = -1.0;
    CHECK_THROWS_AS(semidefinite_cholesky(bad), NumericalError);
}

TEST_CASE("Kronecker sampler matches the dense Cholesky with shared draws")
{
    for (int P : {1, 4, 6, 12})
    {
        const auto g = small_grid(P, 1);
        const auto cov = make_perturbation_covariance(find_scenario("S_syn"), g, 0.1, 0.3, kUnitWeights, 1.7);
        PerturbationSampler sampler(cov);
        Eigen::MatrixXd z(5 * P, 7);
        for (Eigen::Index i = 0; i < 7; ++i)
            z.col(i) = PerturbationSampler::standard_normal(std::size_t(5 * P), 11, std::uint64_t(i));
        const Eigen::MatrixXd kron = sampler.apply(z);
        const Eigen::MatrixXd full = Eigen::LLT<Eigen::MatrixXd>(cov.materialize()).matrixL() * z;
        CHECK((kron - full).norm() <= 1e-12 * full.norm());
    }
}

TEST_CASE("Sample streams are deterministic and index-addressable")
{
    const auto g = small_grid(4, 2);
    const auto cov = make_perturbation_covariance(find_scenario("S1"), g, 0.15, 0.3, kUnitWeights, 1.0);
    PerturbationSampler sampler(cov);
    const auto a = sampler.draw(10, 42);
    const auto b = sampler.draw(10, 42);
    CHECK(a == b);
    const auto tail = sampler.draw(4, 42, 6);
    CHECK(tail == a.rightCols(4));
    CHECK(sampler.draw(10, 43) != a);
    CHECK(sample_perturbations(cov, 10, 42) == a);
    CHECK_THROWS_AS(sampler.draw(0, 42), ConfigError);
    CHECK_THROWS_AS(sampler.apply(Eigen::MatrixXd::Zero(3, 2)), ConfigError);
}

TEST_CASE("Zero amplitude gives zero perturbations")
{
    const auto cov = make_perturbation_covariance(find_scenario("S2"), small_grid(3, 3), 0.15, 0.3, kUnitWeights, 0.0);
    CHECK(PerturbationSampler(cov).draw(5, 1).isZero(0.0));
}

TEST_CASE("Sample mean and covariance converge")
{
    const auto g = small_grid(3, 2);
    const auto cov = make_perturbation_covariance(unit_scenario(), g, 0.15, 0.3, kUnitWeights, 1.0);
    const std::size_t L = 200000;
    const Eigen::MatrixXd X = PerturbationSampler(cov).draw(L, kDefaultSeed);
    const Eigen::VectorXd mean = X.rowwise().mean();
    const Eigen::VectorXd sd = cov.materialize().diagonal().cwiseSqrt();
    // 5 standard errors per component
    CHECK((mean.cwiseQuotient(sd)).cwiseAbs().maxCoeff() < 5.0 / std::sqrt(double(L)));
    const Eigen::MatrixXd R = cov.materialize();
    const Eigen::MatrixXd Rhat = X * X.transpose() / double(L);
    CHECK((Rhat - R).norm() / R.norm() < 0.02);
}

TEST_CASE("Sample covariance error decays like 1/sqrt(L)")
{
    const auto g = small_grid(3, 2);
    const auto cov = make_perturbation_covariance(find_scenario("S4"), g, 0.15, 0.3, kUnitWeights, 1.0);
    const std::vector<std::size_t> sizes{500, 2000, 8000};
    std::vector<double> rms;
    const int reps = 16;
    for (std::size_t L : sizes)
    {
        double acc = 0.0;
        for (int r = 0; r < reps; ++r)
        {
            const double e = covariance_error(cov, L, 1000 + std::uint64_t(r));
            acc += e * e;
        }
        rms.push_back(std::sqrt(acc / reps));
    }
    for (std::size_t i = 1; i < rms.size(); ++i)
    {
        const double ratio = rms[i - 1] / rms[i];
        CHECK(ratio > 1.5);
        CHECK(ratio < 2.7);
    }
}

TEST_CASE("Spatial factor that is not positive definite is rejected by the sampler")
{
    Eigen::MatrixXd C = Eigen::MatrixXd::Ones(3, 3);
    C(0, 0) = 0.5;
    PerturbationCovariance cov(ParamMatrix::Identity(), C, 1.0);
    CHECK_THROWS_AS((PerturbationSampler{cov}), NumericalError);
    CHECK_THROWS_AS(PerturbationCovariance(ParamMatrix::Identity(), Eigen::MatrixXd::Identity(2, 3), 1.0), ConfigError);
}

TEST_CASE("Semidefinite Cholesky keeps channels with tiny physical variance")
{
    for (const auto &s : scenario_registry())
    {
        const auto S = build_param_factor(s, kUnitWeights, 0.3);
        const auto L = semidefinite_cholesky(S);
        const Eigen::Matrix<double, 5, 1> d = S.diagonal().cwiseSqrt();
        // compare in standardized units so every channel counts equally
        const ParamMatrix err = d.cwiseInverse().asDiagonal() * (L * L.transpose() - S) * d.cwiseInverse().asDiagonal();
        CHECK(err.cwiseAbs().maxCoeff() < 1e-14);
        for (int q = 0; q < 5; ++q)
            CHECK(L(q, q) > 0.0);
    }
}
