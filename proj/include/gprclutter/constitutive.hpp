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

#ifndef GPRCLUTTER_CONSTITUTIVE_HPP
#define GPRCLUTTER_CONSTITUTIVE_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <string_view>

namespace gprc
{
    using cplx = std::complex<double>;

    inline constexpr double kVacuumPermittivity = 8.8541878128e-12; // F/m
    inline constexpr double kVacuumPermeability = 1.25663706212e-6; // H/m
    inline constexpr double kPi = 3.14159265358979323846;

    // Index of each Cole-Cole parameter in stacked vectors and matrices.
    enum class Param : std::size_t
    {
        eps_inf = 0,
        delta_eps = 1,
        tau = 2,
        alpha = 3,
        sigma = 4
    };
    inline constexpr std::size_t kParamCount = 5;

    std::string_view param_name(std::size_t q);

    // One value per Cole-Cole parameter, in Param order.
    using ParamVector = std::array<double, kParamCount>;

    // Complex contrast sensitivities psi_q, one per parameter, per unit of that parameter.
    using Sensitivities = std::array<cplx, kParamCount>;

    struct ColeColeParams
    {
        double eps_inf = 1.0;   // high-frequency relative permittivity
        double delta_eps = 0.0; // relaxation strength
        double tau = 1e-9;      // relaxation time [s]
        double alpha = 0.0;     // broadening, [0, 1)
        double sigma = 0.0;     // conductivity [S/m]

        double operator[](std::size_t q) const;
        double &operator[](std::size_t q);

        ParamVector values() const;
        static ColeColeParams from_values(const ParamVector &v);

        bool operator==(const ColeColeParams &) const = default;
    };

    // Parameter state + perturbation, component-wise.
    ColeColeParams perturbed(const ColeColeParams &background, const ParamVector &delta);

    // Throws ConfigError when a background state violates tau > 0, alpha in [0,1),
    // sigma >= 0, eps_inf > 0 or delta_eps >= 0.
    void validate_background(const ColeColeParams &params);

    // Absolute complex permittivity [F/m] under the exp(+j omega t) convention:
    //   eps0 * [eps_inf + delta_eps / (1 + (j omega tau)^(1 - alpha)) - j sigma / (omega eps0)]
    // The fractional power uses the principal branch. Perturbed states (small negative
    // delta_eps, alpha slightly outside [0,1)) are accepted; tau must stay positive.
    cplx permittivity(const ColeColeParams &params, double omega);

    // Relative permittivity eps_c / eps0.
    cplx relative_permittivity(const ColeColeParams &params, double omega);

    // Closed-form derivatives dF/dmu_q of the permittivity, [F/m per parameter unit].
    std::array<cplx, kParamCount> permittivity_gradient(const ColeColeParams &params, double omega);

    // psi_q = (1 / eps_b) dF/dmu_q evaluated at the background state.
    Sensitivities sensitivities(const ColeColeParams &background, double omega);

    // Step used for the central difference of parameter q: max(rel_step * |mu_q|, floor_q).
    double finite_difference_step(const ColeColeParams &params, std::size_t q, double rel_step);

    // Sensitivities from central differences of permittivity().
    Sensitivities finite_difference_sensitivities(const ColeColeParams &background, double omega,
                                                  double rel_step = 1e-5);

    // Per-channel relative error |psi_analytic - psi_fd| / max(|psi_fd|, 1e-30).
    ParamVector finite_difference_check(const ColeColeParams &background, double omega,
                                        double rel_step = 1e-5);

    // Exact contrast (F(mu_b + delta) - eps_b) / eps_b. Throws NumericalError when the
    // perturbed relaxation time falls below 1e-3 * tau_b.
    cplx exact_contrast(const ColeColeParams &background, const ParamVector &delta, double omega);

    // Same, with the background permittivity supplied by the caller.
    cplx exact_contrast(const ColeColeParams &background, cplx background_permittivity,
                        const ParamVector &delta, double omega);

    // First-order contrast sum_q psi_q * delta_q.
    cplx linear_contrast(const Sensitivities &psi, const ParamVector &delta);
}

#endif
