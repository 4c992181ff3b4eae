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

#ifndef GPRCLUTTER_RANDFIELD_HPP
#define GPRCLUTTER_RANDFIELD_HPP

#include "gprclutter/scene.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <span>

namespace gprc
{
    using ParamMatrix = Eigen::Matrix<double, kParamCount, kParamCount>;

    inline constexpr double kSpatialNugget = 1e-10;
    inline constexpr std::size_t kDefaultMaterializeCap = 10000;
    inline constexpr std::uint64_t kDefaultSeed = 20260405;

    enum class SpatialKernelFamily
    {
        squared_exponential, // exp(-d^2 / (2 l^2))
        exponential          // exp(-d / l)
    };

    // Isotropic stationary correlation over the (x, z) distance between cell centers, with
    // kSpatialNugget added on the diagonal.
    Eigen::MatrixXd build_spatial_factor(std::span<const Point3> cells, double corr_length,
                                         SpatialKernelFamily family = SpatialKernelFamily::squared_exponential);

    // Entry (q, q') = d_q w_q rho_qq' w_q' d_q' with rho_qq = 1 and rho_qq' = rho_c off the diagonal.
    // Throws ConfigError unless rho_c is in [0, 1) and all weights are non-negative.
    ParamMatrix build_param_factor(const Scenario &scenario, const ParamVector &weights, double rho_c);

    // R_mu = amplitude^2 (param_factor kron spatial_factor), stored in factored form.
    class PerturbationCovariance
    {
    public:
        PerturbationCovariance(const ParamMatrix &param_factor, Eigen::MatrixXd spatial_factor, double amplitude,
                               double corr_length = 0.0);

        const ParamMatrix &param_factor() const { return param_; }
        const Eigen::MatrixXd &spatial_factor() const { return *spatial_; }
        double amplitude() const { return amplitude_; }
        double corr_length() const { return corr_length_; }
        std::size_t cell_count() const { return static_cast<std::size_t>(spatial_->rows()); }
        std::size_t size() const { return kParamCount * cell_count(); }

        // Same factors, different amplitude; the spatial factor is shared, not copied.
        PerturbationCovariance with_amplitude(double amplitude) const;

        // tr(R_mu) = amplitude^2 tr(param) tr(spatial).
        double trace() const;

        // Dense 5P x 5P matrix. Throws ConfigError if 5P exceeds the cap.
        Eigen::MatrixXd materialize(std::size_t cap = kDefaultMaterializeCap) const;

    private:
        ParamMatrix param_;
        std::shared_ptr<const Eigen::MatrixXd> spatial_;
        double amplitude_;
        double corr_length_;
    };

    PerturbationCovariance make_perturbation_covariance(const Scenario &scenario, const SceneGeometry &geometry,
                                                        double corr_length, double rho_c,
                                                        const ParamVector &weights, double amplitude);

    // Lower-triangular F with F F^T = S for a symmetric PSD matrix. Pivots below
    // tol * S(j, j) are treated as zero, so channels with zero weight are accepted.
    ParamMatrix semidefinite_cholesky(const ParamMatrix &s, double tol = 1e-14);

    // Draws delta_mu = amplitude (L_param kron L_spatial) z with z ~ N(0, I).
    // Sample i depends only on (seed, i): the generator is std::mt19937_64 seeded through
    // std::seed_seq from the 32-bit halves of seed and i, feeding std::normal_distribution.
    class PerturbationSampler
    {
    public:
        // Throws NumericalError if the spatial factor is not numerically positive definite.
        explicit PerturbationSampler(const PerturbationCovariance &cov);

        const ParamMatrix &param_cholesky() const { return param_chol_; }
        const Eigen::MatrixXd &spatial_cholesky() const { return spatial_chol_; }
        double amplitude() const { return amplitude_; }
        std::size_t cell_count() const { return cells_; }

        // Standard normal vector for sample `index`.
        static Eigen::VectorXd standard_normal(std::size_t length, std::uint64_t seed, std::uint64_t index);

        // Columns first .. first+count-1 of the sample stream, as a 5P x count matrix.
        Eigen::MatrixXd draw(std::size_t count, std::uint64_t seed, std::size_t first = 0) const;

        // Maps standard-normal columns (5P x L) to perturbations using the Kronecker factorization.
        Eigen::MatrixXd apply(const Eigen::MatrixXd &z) const;

    private:
        ParamMatrix param_chol_;
        Eigen::MatrixXd spatial_chol_;
        double amplitude_;
        std::size_t cells_;
    };

    // Convenience wrapper: sampler construction plus draw().
    Eigen::MatrixXd sample_perturbations(const PerturbationCovariance &cov, std::size_t count, std::uint64_t seed);
}

#endif
