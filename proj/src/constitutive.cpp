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

#include "gprclutter/constitutive.hpp"
#include "gprclutter/error.hpp"

#include <cmath>
#include <sstream>

namespace gprc
{
    namespace
    {
        constexpr std::array<std::string_view, kParamCount> kNames = {"eps_inf", "delta_eps", "tau", "alpha",
                                                                      "sigma"};

        // Absolute floors for finite-difference steps of zero-valued parameters.
        constexpr ParamVector kStepFloor = {1e-5, 1e-5, 1e-17, 1e-5, 1e-9};

        constexpr double kTauFloorFraction = 1e-3;

        bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

        void require_frequency(double omega)
        {
            if (!(omega > 0.0) || !std::isfinite(omega))
                throw ConfigError("angular frequency must be positive and finite, got " + std::to_string(omega));
        }

        // (j omega tau)^(1 - alpha) on the principal branch, written as exp((1 - alpha) Log(j omega tau)).
        // Log(j omega tau) = ln(omega tau) + j pi/2 for omega tau > 0.
        struct Relaxation
        {
            cplx log_base;
            cplx power;
        };

        Relaxation relaxation(const ColeColeParams &p, double omega)
        {
            const cplx log_base(std::log(omega * p.tau), 0.5 * kPi);
            return {log_base, std::exp((1.0 - p.alpha) * log_base)};
        }
    }

    std::string_view param_name(std::size_t q)
    {
        if (q >= kParamCount)
            throw ConfigError("parameter index out of range: " + std::to_string(q));
        return kNames[q];
    }

    double ColeColeParams::operator[](std::size_t q) const
    {
        switch (static_cast<Param>(q))
        {
        case Param::eps_inf: return eps_inf;
        case Param::delta_eps: return delta_eps;
        case Param::tau: return tau;
        case Param::alpha: return alpha;
        case Param::sigma: return sigma;
        }
        throw ConfigError("parameter index out of range: " + std::to_string(q));
    }

    double &ColeColeParams::operator[](std::size_t q)
    {
        switch (static_cast<Param>(q))
        {
        case Param::eps_inf: return eps_inf;
        case Param::delta_eps: return delta_eps;
        case Param::tau: return tau;
        case Param::alpha: return alpha;
        case Param::sigma: return sigma;
        }
        throw ConfigError("parameter index out of range: " + std::to_string(q));
    }

    ParamVector ColeColeParams::values() const { return {eps_inf, delta_eps, tau, alpha, sigma}; }

    ColeColeParams ColeColeParams::from_values(const ParamVector &v) { return {v[0], v[1], v[2], v[3], v[4]}; }

    ColeColeParams perturbed(const ColeColeParams &background, const ParamVector &delta)
    {
        ColeColeParams out = background;
        for (std::size_t q = 0; q < kParamCount; ++q)
            out[q] += delta[q];
        return out;
    }

    void validate_background(const ColeColeParams &p)
    {
        std::ostringstream why;
        if (!(p.eps_inf > 0.0))
            why << "eps_inf must be > 0 (got " << p.eps_inf << "); ";
        if (!(p.delta_eps >= 0.0))
            why << "delta_eps must be >= 0 (got " << p.delta_eps << "); ";
        if (!(p.tau > 0.0))
            why << "tau must be > 0 (got " << p.tau << "); ";
        if (!(p.alpha >= 0.0 && p.alpha < 1.0))
            why << "alpha must lie in [0, 1) (got " << p.alpha << "); ";
        if (!(p.sigma >= 0.0))
            why << "sigma must be >= 0 (got " << p.sigma << "); ";
        for (std::size_t q = 0; q < kParamCount; ++q)
            if (!std::isfinite(p[q]))
                why << param_name(q) << " is not finite; ";
        const auto msg = why.str();
        if (!msg.empty())
            throw ConfigError("invalid Cole-Cole background: " + msg.substr(0, msg.size() - 2));
    }

    cplx permittivity(const ColeColeParams &p, double omega)
    {
        require_frequency(omega);
        if (!(p.tau > 0.0))
            throw NumericalError("tau must be positive for permittivity evaluation, got " + std::to_string(p.tau));

        const auto relax = relaxation(p, omega);
        if (!finite(relax.power))
        {
            std::ostringstream os;
            os << "relaxation term (j omega tau)^(1-alpha) is not finite: tau=" << p.tau << ", alpha=" << p.alpha;
            throw NumericalError(os.str());
        }

        const cplx dispersion = p.delta_eps / (1.0 + relax.power);
        const cplx loss(0.0, -p.sigma / (omega * kVacuumPermittivity));
        const cplx eps = kVacuumPermittivity * (p.eps_inf + dispersion + loss);
        if (!finite(eps))
        {
            std::ostringstream os;
            os << "permittivity is not finite (eps_inf=" << p.eps_inf << ", delta_eps=" << p.delta_eps
               << ", sigma=" << p.sigma << ")";
            throw NumericalError(os.str());
        }
        return eps;
    }

    cplx relative_permittivity(const ColeColeParams &params, double omega)
    {
        return permittivity(params, omega) / kVacuumPermittivity;
    }

    std::array<cplx, kParamCount> permittivity_gradient(const ColeColeParams &p, double omega)
    {
        require_frequency(omega);
        if (!(p.tau > 0.0))
            throw NumericalError("tau must be positive for derivative evaluation, got " + std::to_string(p.tau));

        const auto [log_base, x] = relaxation(p, omega);
        const cplx one_plus = 1.0 + x;
        const cplx x_over_sq = x / (one_plus * one_plus);

        std::array<cplx, kParamCount> grad;
        grad[0] = kVacuumPermittivity;
        grad[1] = kVacuumPermittivity / one_plus;
        // dx/dtau = (1 - alpha) x / tau
        grad[2] = -kVacuumPermittivity * p.delta_eps * (1.0 - p.alpha) * x_over_sq / p.tau;
        // dx/dalpha = -Log(j omega tau) x
        grad[3] = kVacuumPermittivity * p.delta_eps * log_base * x_over_sq;
        grad[4] = cplx(0.0, -1.0 / omega);

        for (std::size_t q = 0; q < kParamCount; ++q)
            if (!finite(grad[q]))
                throw NumericalError("derivative with respect to " + std::string(param_name(q)) + " is not finite");
        return grad;
    }

    Sensitivities sensitivities(const ColeColeParams &background, double omega)
    {
        const cplx eps_b = permittivity(background, omega);
        if (eps_b == cplx(0.0, 0.0))
            throw NumericalError("singular background: permittivity is zero");
        const auto grad = permittivity_gradient(background, omega);
        Sensitivities psi;
        for (std::size_t q = 0; q < kParamCount; ++q)
            psi[q] = grad[q] / eps_b;
        return psi;
    }

    double finite_difference_step(const ColeColeParams &params, std::size_t q, double rel_step)
    {
        if (!(rel_step > 0.0 && rel_step <= 1e-2))
            throw ConfigError("finite-difference relative step must lie in (0, 1e-2], got " +
                              std::to_string(rel_step));
        return std::max(rel_step * std::abs(params[q]), kStepFloor[q]);
    }

    Sensitivities finite_difference_sensitivities(const ColeColeParams &background, double omega, double rel_step)
    {
        const cplx eps_b = permittivity(background, omega);
        if (eps_b == cplx(0.0, 0.0))
            throw NumericalError("singular background: permittivity is zero");

        Sensitivities psi;
        for (std::size_t q = 0; q < kParamCount; ++q)
        {
            const double h = finite_difference_step(background, q, rel_step);
            ColeColeParams up = background, down = background;
            up[q] += h;
            down[q] -= h;
            // divide by the step actually represented in floating point
            psi[q] = (permittivity(up, omega) - permittivity(down, omega)) / (up[q] - down[q]) / eps_b;
        }
        return psi;
    }

    ParamVector finite_difference_check(const ColeColeParams &background, double omega, double rel_step)
    {
        const auto analytic = sensitivities(background, omega);
        const auto numeric = finite_difference_sensitivities(background, omega, rel_step);
        ParamVector err{};
        for (std::size_t q = 0; q < kParamCount; ++q)
            err[q] = std::abs(analytic[q] - numeric[q]) / std::max(std::abs(numeric[q]), 1e-30);
        return err;
    }

    cplx exact_contrast(const ColeColeParams &background, cplx eps_b, const ParamVector &delta, double omega)
    {
        const ColeColeParams state = perturbed(background, delta);
        if (!(state.tau >= kTauFloorFraction * background.tau))
        {
            std::ostringstream os;
            os << "perturbed tau " << state.tau << " s fell below the floor " << kTauFloorFraction * background.tau
               << " s; the perturbation scale or amplitude is too large";
            throw NumericalError(os.str());
        }
        return (permittivity(state, omega) - eps_b) / eps_b;
    }

    cplx exact_contrast(const ColeColeParams &background, const ParamVector &delta, double omega)
    {
        const cplx eps_b = permittivity(background, omega);
        if (eps_b == cplx(0.0, 0.0))
            throw NumericalError("singular background: permittivity is zero");
        return exact_contrast(background, eps_b, delta, omega);
    }

    cplx linear_contrast(const Sensitivities &psi, const ParamVector &delta)
    {
        cplx sum = 0.0;
        for (std::size_t q = 0; q < kParamCount; ++q)
            sum += psi[q] * delta[q];
        return sum;
    }
}
