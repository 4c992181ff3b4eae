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

#include "gprclutter/forward.hpp"
#include "gprclutter/error.hpp"

#include <cmath>
#include <sstream>

namespace gprc
{
    namespace
    {
        cplx scalar_green(const Point3 &src, const Point3 &dst, cplx k)
        {
            const double r = distance(src, dst);
            if (!(r >= kMinSeparation))
            {
                std::ostringstream os;
                os << "near-singular kernel evaluation: separation " << r << " m is below " << kMinSeparation
                   << " m";
                throw NumericalError(os.str());
            }
            return std::exp(cplx(0.0, -1.0) * k * r) / (4.0 * kPi * r);
        }
    }

    cplx wavenumber(const ColeColeParams &background, double omega)
    {
        cplx k = omega * std::sqrt(kVacuumPermeability * permittivity(background, omega));
        // The principal root of a lossy (Im eps <= 0) permittivity already has Im <= 0; the flip
        // only matters for non-physical inputs.
        if (k.imag() > 0.0)
            k = -k;
        return k;
    }

    cplx green_kernel(const Point3 &src, const Point3 &dst, double omega, const ColeColeParams &background)
    {
        return scalar_green(src, dst, wavenumber(background, omega));
    }

    cplx HomogeneousKernel::operator()(const Point3 &src, const Point3 &dst, double omega) const
    {
        return green_kernel(src, dst, omega, background_);
    }

    cplx FreeSpaceKernel::operator()(const Point3 &src, const Point3 &dst, double omega) const
    {
        if (!(omega > 0.0))
            throw ConfigError("angular frequency must be positive");
        return scalar_green(src, dst, omega * std::sqrt(kVacuumPermeability * kVacuumPermittivity));
    }

    Eigen::MatrixXcd kernel_products(const SceneGeometry &g, const PropagationKernel &kernel)
    {
        const auto M = g.rx_count(), N = g.tx_count(), P = g.cell_count();
        Eigen::MatrixXcd K(static_cast<Eigen::Index>(M * N), static_cast<Eigen::Index>(P));
        for (std::size_t n = 0; n < N; ++n)
        {
            const double omega = g.omega(n);
            for (std::size_t p = 0; p < P; ++p)
            {
                const cplx gt = kernel(g.tx[n], g.cells[p], omega);
                for (std::size_t m = 0; m < M; ++m)
                {
                    const cplx gr = kernel(g.cells[p], g.rx[m], omega);
                    K(static_cast<Eigen::Index>(g.row(m, n)), static_cast<Eigen::Index>(p)) = gr * gt * g.cell_volume;
                }
            }
        }
        return K;
    }

    ForwardMatrix assemble_forward(const Scenario &scenario, const SceneGeometry &geometry)
    {
        return assemble_forward(scenario, geometry, HomogeneousKernel(scenario.background));
    }

    ForwardMatrix assemble_forward(const Scenario &scenario, const SceneGeometry &g, const PropagationKernel &kernel)
    {
        validate_background(scenario.background);
        const auto M = g.rx_count(), N = g.tx_count(), P = g.cell_count();
        if (M == 0 || N == 0 || P == 0)
            throw ConfigError("geometry must contain at least one element of each kind and one cell");

        const Eigen::MatrixXcd K = kernel_products(g, kernel);

        ForwardMatrix A;
        A.rx_count = M;
        A.tx_count = N;
        A.cell_count = P;
        A.scenario_id = scenario.id;
        A.kernel_name = kernel.name();
        A.geometry_fingerprint = g.fingerprint();
        A.entries.resize(static_cast<Eigen::Index>(M * N), static_cast<Eigen::Index>(kParamCount * P));

        for (std::size_t n = 0; n < N; ++n)
        {
            const auto psi = sensitivities(scenario.background, g.omega(n));
            for (std::size_t q = 0; q < kParamCount; ++q)
                for (std::size_t p = 0; p < P; ++p)
                    for (std::size_t m = 0; m < M; ++m)
                    {
                        const auto r = static_cast<Eigen::Index>(A.row(m, n));
                        const cplx v = K(r, static_cast<Eigen::Index>(p)) * psi[q];
                        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                        {
                            std::ostringstream os;
                            os << "non-finite forward entry at (m=" << m << ", n=" << n << ", q=" << param_name(q)
                               << ", p=" << p << ")";
                            throw NumericalError(os.str());
                        }
                        A.entries(r, static_cast<Eigen::Index>(A.col(q, p))) = v;
                    }
        }
        return A;
    }

    SteeringVector steering_vector(const SceneGeometry &g, const Scenario &scenario, const Point3 &target)
    {
        if (!(target.z > 0.0))
            throw ConfigError("steering target must lie strictly below the surface (z > 0)");
        const HomogeneousKernel kernel(scenario.background);
        const auto M = g.rx_count(), N = g.tx_count();
        SteeringVector a;
        a.target = target;
        a.values.resize(static_cast<Eigen::Index>(M * N));
        for (std::size_t n = 0; n < N; ++n)
        {
            const double omega = g.omega(n);
            const cplx gt = kernel(g.tx[n], target, omega);
            for (std::size_t m = 0; m < M; ++m)
                a.values(static_cast<Eigen::Index>(g.row(m, n))) = kernel(target, g.rx[m], omega) * gt;
        }
        const double norm = a.values.norm();
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw NumericalError("steering vector has zero or non-finite norm");
        a.values /= norm;
        return a;
    }

    double forward_discrepancy(const ForwardMatrix &a1, const ForwardMatrix &a2)
    {
        if (a1.entries.rows() != a2.entries.rows() || a1.entries.cols() != a2.entries.cols())
        {
            std::ostringstream os;
            os << "forward matrix shape mismatch: " << a1.entries.rows() << "x" << a1.entries.cols() << " vs "
               << a2.entries.rows() << "x" << a2.entries.cols();
            throw ConfigError(os.str());
        }
        const double ref = a2.entries.norm();
        if (!(ref > 0.0))
            throw NumericalError("reference forward matrix has zero norm");
        return (a1.entries - a2.entries).norm() / ref;
    }
}
