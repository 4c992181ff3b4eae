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

#ifndef GPRCLUTTER_SPECTRA_HPP
#define GPRCLUTTER_SPECTRA_HPP

#include "gprclutter/forward.hpp"
#include "gprclutter/randfield.hpp"

#include <Eigen/Dense>

#include <string_view>
#include <vector>

namespace gprc
{
    enum class Provenance
    {
        theoretical,
        monte_carlo_linear,
        monte_carlo_exact,
        scaled,
        noise_floor
    };

    std::string_view provenance_name(Provenance p);

    struct ClutterCovariance
    {
        Eigen::MatrixXcd matrix; // Hermitian, MN x MN
        Provenance provenance = Provenance::theoretical;

        Eigen::Index dimension() const { return matrix.rows(); }
        double trace() const { return matrix.trace().real(); }
    };

    // Throws NumericalError unless the matrix is Hermitian to 1e-12 (relative Frobenius) and its
    // smallest eigenvalue is >= -1e-10 * largest.
    void check_covariance_invariants(const Eigen::MatrixXcd &R);

    // s^2 sum_{q,q'} param(q,q') A_q C A_q'^H, evaluated block by block without forming R_mu,
    // then Hermitian-symmetrized.
    ClutterCovariance clutter_covariance(const ForwardMatrix &A, const PerturbationCovariance &R_mu);

    struct ModalDecomposition
    {
        Eigen::VectorXd weights; // lambda_l, descending, >= 0
        Eigen::MatrixXcd images; // b_l = A u_l, one column per mode

        // sum_l lambda_l b_l b_l^H
        Eigen::MatrixXcd reconstruction() const;
    };

    // Eigenpairs of R_mu come from its Kronecker factors: lambda = s^2 pi_i c_j and u = v_i kron w_j.
    // Refuses (ConfigError) when 5P exceeds the cap.
    ModalDecomposition modal_decomposition(const ForwardMatrix &A, const PerturbationCovariance &R_mu,
                                           std::size_t cap = kDefaultMaterializeCap);

    inline constexpr double kRho90 = 0.9;
    inline constexpr double kRho95 = 0.95;

    struct SpectralSummary
    {
        Eigen::VectorXd eigenvalues;            // descending, negatives within tolerance clipped to 0
        Eigen::VectorXd normalized_eigenvalues; // sum to 1
        Eigen::MatrixXcd eigenvectors;          // columns match eigenvalues
        double effective_rank = 0.0;
        double trace = 0.0;
        Provenance provenance = Provenance::theoretical;

        // Smallest p whose leading eigenvalues hold a fraction rho of the total.
        int energy_dimension(double rho) const;
        int p90() const { return energy_dimension(kRho90); }
        int p95() const { return energy_dimension(kRho95); }
        Eigen::Index dimension() const { return eigenvalues.size(); }
    };

    // exp(-sum nu_i ln nu_i) over normalized eigenvalues, with 0 ln 0 = 0.
    double effective_rank(const Eigen::VectorXd &normalized_eigenvalues);

    // Smallest p with cumulative normalized energy >= rho (compared with a 1e-12 allowance).
    int energy_dimension(const Eigen::VectorXd &normalized_descending, double rho);

    // Throws NumericalError for zero trace or eigenvalues below -1e-10 * largest.
    SpectralSummary spectral_summary(const ClutterCovariance &R);

    struct TargetOverlap
    {
        double eta = 0.0;   // target energy inside the top-p clutter subspace
        double gamma = 1.0; // 1 - eta
    };

    TargetOverlap target_overlap(const SpectralSummary &summary, const Eigen::VectorXcd &steering, int p);
    TargetOverlap target_overlap(const SpectralSummary &summary, const SteeringVector &steering, int p);

    ClutterCovariance scale_covariance(const ClutterCovariance &R, double kappa);

    // R + sigma_n^2 I with sigma_n^2 = tr(R) / (MN 10^(snr_db / 10)).
    ClutterCovariance add_noise_floor(const ClutterCovariance &R, double snr_db);

    // Numerical rank: eigenvalues above rel_tol * largest.
    int numerical_rank(const Eigen::MatrixXcd &R, double rel_tol = 1e-10);
}

#endif
