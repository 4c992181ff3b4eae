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

#ifndef GPRCLUTTER_FORWARD_HPP
#define GPRCLUTTER_FORWARD_HPP

#include "gprclutter/constitutive.hpp"
#include "gprclutter/scene.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <string>

namespace gprc
{
    // Minimum source-observation separation accepted by the scalar kernels [m].
    inline constexpr double kMinSeparation = 1e-6;

    // Background wavenumber k = omega sqrt(mu0 eps_b), branch with Im k <= 0 (decaying under exp(+j omega t)).
    cplx wavenumber(const ColeColeParams &background, double omega);

    // Scalar whole-space Green function exp(-j k r) / (4 pi r) in the homogeneous dispersive background.
    // Throws NumericalError when |dst - src| < kMinSeparation.
    cplx green_kernel(const Point3 &src, const Point3 &dst, double omega, const ColeColeParams &background);

    // Interchangeable scalar propagation kernel used for both transmit and receive legs.
    class PropagationKernel
    {
    public:
        virtual ~PropagationKernel() = default;
        virtual cplx operator()(const Point3 &src, const Point3 &dst, double omega) const = 0;
        virtual std::string name() const = 0;
    };

    class HomogeneousKernel final : public PropagationKernel
    {
    public:
        explicit HomogeneousKernel(const ColeColeParams &background) : background_(background) {}
        cplx operator()(const Point3 &src, const Point3 &dst, double omega) const override;
        std::string name() const override { return "homogeneous-dispersive-scalar"; }

    private:
        ColeColeParams background_;
    };

    // Vacuum kernel, used as the free-space surrogate in discrepancy diagnostics.
    class FreeSpaceKernel final : public PropagationKernel
    {
    public:
        cplx operator()(const Point3 &src, const Point3 &dst, double omega) const override;
        std::string name() const override { return "free-space-scalar"; }
    };

    // Born kernel products G_r(r_m, x_p; w_n) G_t(x_p, s_n; w_n) dV, one row per channel (row = n M + m),
    // one column per cell.
    Eigen::MatrixXcd kernel_products(const SceneGeometry &geometry, const PropagationKernel &kernel);

    struct ForwardMatrix
    {
        Eigen::MatrixXcd entries; // MN x 5P
        std::size_t rx_count = 0;
        std::size_t tx_count = 0;
        std::size_t cell_count = 0;
        std::string scenario_id;
        std::string kernel_name;
        std::uint64_t geometry_fingerprint = 0;

        std::size_t rows() const { return static_cast<std::size_t>(entries.rows()); }
        std::size_t cols() const { return static_cast<std::size_t>(entries.cols()); }
        std::size_t row(std::size_t m, std::size_t n) const { return n * rx_count + m; }
        std::size_t col(std::size_t q, std::size_t p) const { return q * cell_count + p; }

        // Channel matrix A_q (MN x P) of one Cole-Cole parameter.
        auto block(std::size_t q) const
        {
            return entries.middleCols(static_cast<Eigen::Index>(q * cell_count), static_cast<Eigen::Index>(cell_count));
        }
    };

    // A[(m,n), (q,p)] = G_r(r_m, x_p; w_n) psi_q(w_n) G_t(x_p, s_n; w_n) dV with the scenario's
    // homogeneous kernel (or the supplied one). Throws NumericalError naming (m, n, q, p) on a non-finite entry.
    ForwardMatrix assemble_forward(const Scenario &scenario, const SceneGeometry &geometry);
    ForwardMatrix assemble_forward(const Scenario &scenario, const SceneGeometry &geometry,
                                   const PropagationKernel &kernel);

    struct SteeringVector
    {
        Eigen::VectorXcd values; // unit norm, length MN
        Point3 target;
    };

    // Normalized G_r(r_m, x_t; w_n) G_t(x_t, s_n; w_n) over all channels. Target must lie below the surface.
    SteeringVector steering_vector(const SceneGeometry &geometry, const Scenario &scenario, const Point3 &target);

    // ||A1 - A2||_F / ||A2||_F, with the second argument as reference.
    double forward_discrepancy(const ForwardMatrix &a1, const ForwardMatrix &a2);
}

#endif
