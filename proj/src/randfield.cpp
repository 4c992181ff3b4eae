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

#include "gprclutter/randfield.hpp"
#include "gprclutter/error.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <random>
#include <sstream>

namespace gprc
{
    Eigen::MatrixXd build_spatial_factor(std::span<const Point3> cells, double corr_length,
                                         SpatialKernelFamily family)
    {
        if (!(corr_length > 0.0) || !std::isfinite(corr_length))
            throw ConfigError("correlation length must be positive, got " + std::to_string(corr_length));

        const auto P = static_cast<Eigen::Index>(cells.size());
        Eigen::MatrixXd C(P, P);
        for (Eigen::Index i = 0; i < P; ++i)
        {
            C(i, i) = 1.0 + kSpatialNugget;
            for (Eigen::Index j = 0; j < i; ++j)
            {
                const double dx = cells[i].x - cells[j].x;
                const double dz = cells[i].z - cells[j].z;
                double v = 0.0;
                if (family == SpatialKernelFamily::squared_exponential)
                    v = std::exp(-(dx * dx + dz * dz) / (2.0 * corr_length * corr_length));
                else
                    v = std::exp(-std::hypot(dx, dz) / corr_length);
                C(i, j) = v;
                C(j, i) = v;
            }
        }
        return C;
    }

    ParamMatrix build_param_factor(const Scenario &scenario, const ParamVector &weights, double rho_c)
    {
        if (!(rho_c >= 0.0 && rho_c < 1.0))
            throw ConfigError("rho_c must lie in [0, 1), got " + std::to_string(rho_c));
        for (std::size_t q = 0; q < kParamCount; ++q)
            if (!(weights[q] >= 0.0) || !std::isfinite(weights[q]))
                throw ConfigError("weight for " + std::string(param_name(q)) + " must be non-negative");

        ParamMatrix S;
        for (std::size_t q = 0; q < kParamCount; ++q)
            for (std::size_t r = 0; r < kParamCount; ++r)
            {
                const double rho = q == r ? 1.0 : rho_c;
                S(q, r) = scenario.d_mu[q] * weights[q] * rho * weights[r] * scenario.d_mu[r];
            }
        return S;
    }

    PerturbationCovariance::PerturbationCovariance(const ParamMatrix &param_factor, Eigen::MatrixXd spatial_factor,
                                                   double amplitude, double corr_length)
        : param_(param_factor),
          spatial_(std::make_shared<const Eigen::MatrixXd>(std::move(spatial_factor))),
          amplitude_(amplitude),
          corr_length_(corr_length)
    {
        if (spatial_->rows() != spatial_->cols() || spatial_->rows() == 0)
            throw ConfigError("spatial factor must be a non-empty square matrix");
        if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
            throw ConfigError("perturbation amplitude must be non-negative, got " + std::to_string(amplitude));
    }

    PerturbationCovariance PerturbationCovariance::with_amplitude(double amplitude) const
    {
        PerturbationCovariance out = *this;
        if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
            throw ConfigError("perturbation amplitude must be non-negative, got " + std::to_string(amplitude));
        out.amplitude_ = amplitude;
        return out;
    }

    double PerturbationCovariance::trace() const
    {
        return amplitude_ * amplitude_ * param_.trace() * spatial_->trace();
    }

    Eigen::MatrixXd PerturbationCovariance::materialize(std::size_t cap) const
    {
        const std::size_t n = size();
        if (n > cap)
            throw ConfigError("refusing to materialize a " + std::to_string(n) + "x" + std::to_string(n) +
                              " covariance (cap " + std::to_string(cap) + ")");
        const auto P = static_cast<Eigen::Index>(cell_count());
        Eigen::MatrixXd R(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        const double s2 = amplitude_ * amplitude_;
        for (std::size_t q = 0; q < kParamCount; ++q)
            for (std::size_t r = 0; r < kParamCount; ++r)
                R.block(static_cast<Eigen::Index>(q) * P, static_cast<Eigen::Index>(r) * P, P, P) =
                    (s2 * param_(q, r)) * (*spatial_);
        return R;
    }

    PerturbationCovariance make_perturbation_covariance(const Scenario &scenario, const SceneGeometry &geometry,
                                                        double corr_length, double rho_c,
                                                        const ParamVector &weights, double amplitude)
    {
        return PerturbationCovariance(build_param_factor(scenario, weights, rho_c),
                                      build_spatial_factor(geometry.cells, corr_length), amplitude, corr_length);
    }

    ParamMatrix semidefinite_cholesky(const ParamMatrix &s, double tol)
    {
        // Pivots are judged against each channel's own variance: the channels differ by many
        // orders of magnitude in physical units (tau variances sit near 1e-22).
        ParamMatrix L = ParamMatrix::Zero();
        for (Eigen::Index j = 0; j < s.rows(); ++j)
        {
            const double scale = s(j, j);
            if (scale < 0.0)
                throw NumericalError("parameter factor is not positive semidefinite");
            double d = scale;
            for (Eigen::Index k = 0; k < j; ++k)
                d -= L(j, k) * L(j, k);
            if (d < -1e-10 * scale)
                throw NumericalError("parameter factor is not positive semidefinite");
            if (d <= tol * scale)
                continue; // zero column
            const double ljj = std::sqrt(d);
            L(j, j) = ljj;
            for (Eigen::Index i = j + 1; i < s.rows(); ++i)
            {
                double v = s(i, j);
                for (Eigen::Index k = 0; k < j; ++k)
                    v -= L(i, k) * L(j, k);
                L(i, j) = v / ljj;
            }
        }
        return L;
    }

    PerturbationSampler::PerturbationSampler(const PerturbationCovariance &cov)
        : param_chol_(semidefinite_cholesky(cov.param_factor())),
          amplitude_(cov.amplitude()),
          cells_(cov.cell_count())
    {
        Eigen::LLT<Eigen::MatrixXd> llt(cov.spatial_factor());
        if (llt.info() != Eigen::Success)
            throw NumericalError("spatial correlation factor is not positive definite after the nugget "
                                 "(Cholesky failed)");
        spatial_chol_ = llt.matrixL();
    }

    Eigen::VectorXd PerturbationSampler::standard_normal(std::size_t length, std::uint64_t seed, std::uint64_t index)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
        std::mt19937_64 engine(seq);
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::VectorXd z(static_cast<Eigen::Index>(length));
        for (auto &v : z)
            v = normal(engine);
        return z;
    }

    Eigen::MatrixXd PerturbationSampler::apply(const Eigen::MatrixXd &z) const
    {
        const auto P = static_cast<Eigen::Index>(cells_);
        const auto n = static_cast<Eigen::Index>(kParamCount) * P;
        if (z.rows() != n)
            throw ConfigError("standard-normal block has " + std::to_string(z.rows()) + " rows, expected " +
                              std::to_string(n));
        const auto L = z.cols();

        // (L_param kron L_spatial) vec(Z) = vec(L_spatial Z L_param^T) with Z the P x 5 reshape of a column.
        // Stacking the reshaped columns side by side gives a P x 5L matrix sharing z's storage.
        Eigen::Map<const Eigen::MatrixXd> stacked(z.data(), P, static_cast<Eigen::Index>(kParamCount) * L);
        Eigen::MatrixXd left = spatial_chol_.triangularView<Eigen::Lower>() * stacked;

        Eigen::MatrixXd out(n, L);
        const ParamMatrix right = amplitude_ * param_chol_.transpose();
        for (Eigen::Index i = 0; i < L; ++i)
        {
            Eigen::Map<const Eigen::MatrixXd> zi(left.data() + i * n, P, static_cast<Eigen::Index>(kParamCount));
            Eigen::Map<Eigen::MatrixXd> oi(out.data() + i * n, P, static_cast<Eigen::Index>(kParamCount));
            oi.noalias() = zi * right;
        }
        return out;
    }

    Eigen::MatrixXd PerturbationSampler::draw(std::size_t count, std::uint64_t seed, std::size_t first) const
    {
        if (count < 1)
            throw ConfigError("sample count must be >= 1");
        const std::size_t n = kParamCount * cells_;
        Eigen::MatrixXd z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(count));
        const auto total = static_cast<long long>(count);
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < total; ++i)
            z.col(i) = standard_normal(n, seed, first + static_cast<std::uint64_t>(i));
        return apply(z);
    }

    Eigen::MatrixXd sample_perturbations(const PerturbationCovariance &cov, std::size_t count, std::uint64_t seed)
    {
        return PerturbationSampler(cov).draw(count, seed);
    }
}
