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

#ifndef GPRCLUTTER_MONTECARLO_HPP
#define GPRCLUTTER_MONTECARLO_HPP

#include "gprclutter/spectra.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace gprc
{
    enum class SnapshotMode
    {
        linear, // c = A delta_mu
        exact   // Born sum with the exact constitutive contrast per cell and frequency
    };

    // Noise-free snapshot synthesis for one scenario and geometry. Both modes share the same
    // kernels and discretization; they differ only in how the contrast is evaluated.
    class SnapshotSynthesizer
    {
    public:
        SnapshotSynthesizer(const ForwardMatrix &A, const Scenario &scenario, const SceneGeometry &geometry);

        // MN x L snapshots for 5P x L perturbation columns.
        Eigen::MatrixXcd linear(const Eigen::MatrixXd &perturbations) const;
        Eigen::MatrixXcd exact(const Eigen::MatrixXd &perturbations) const;

        // Exact snapshots plus the per-(sample, cell, frequency) relative contrast error
        // |xi_exact - xi_lin| / max(|xi_exact|, 1e-30).
        Eigen::MatrixXcd exact(const Eigen::MatrixXd &perturbations, std::vector<double> &contrast_errors) const;

    private:
        Eigen::MatrixXcd exact_impl(const Eigen::MatrixXd &perturbations, std::vector<double> *contrast_errors) const;

        const ForwardMatrix *forward_;
        ColeColeParams background_;
        std::vector<double> omegas_;
        std::vector<cplx> eps_b_;
        std::vector<Sensitivities> psi_;
        Eigen::MatrixXcd kernels_; // MN x P Born kernel products
        std::size_t rx_count_;
        std::size_t cells_;
    };

    // Linear snapshots straight from standard-normal draws, c = A s (L_param kron L_spatial) z, with the
    // composite MN x 5P operator formed once. Agrees with linear(sampler.apply(z)) up to rounding.
    class LinearSnapshotMap
    {
    public:
        LinearSnapshotMap(const ForwardMatrix &A, const PerturbationSampler &sampler);

        const Eigen::MatrixXcd &composite() const { return composite_; }
        Eigen::MatrixXcd operator()(const Eigen::MatrixXd &z) const;

        // Snapshots for columns first .. first+count-1 of the sampler stream with this seed.
        Eigen::MatrixXcd draw(std::size_t count, std::uint64_t seed, std::size_t first = 0) const;

    private:
        Eigen::MatrixXcd composite_;
    };

    // Convergence-rate estimate for the linear closure error. Replicate k uses stream columns
    // [k large, (k+1) large); its small-ensemble error uses the first `small` of those columns.
    // ratio = rms_small / rms_large, which is sqrt(large / small) for an unbiased estimator.
    struct ConvergenceReport
    {
        std::size_t small = 0;
        std::size_t large = 0;
        std::size_t replicates = 0;
        double rms_small = 0.0;
        double rms_large = 0.0;
        double ratio = 0.0;
    };

    ConvergenceReport closure_convergence(const ClutterCovariance &theory, const LinearSnapshotMap &map,
                                          std::size_t large, std::size_t small, std::size_t replicates,
                                          std::uint64_t seed);

    // Draws L perturbations from cov with the given seed and synthesizes snapshots in the requested mode.
    Eigen::MatrixXcd simulate_snapshots(const ForwardMatrix &A, const Scenario &scenario,
                                        const SceneGeometry &geometry, const PerturbationCovariance &cov,
                                        std::size_t count, std::uint64_t seed, SnapshotMode mode);

    // Zero-mean estimator (1/L) sum c c^H over the first `count` columns (all columns when count == 0).
    ClutterCovariance sample_covariance(const Eigen::MatrixXcd &snapshots, Provenance provenance,
                                        std::size_t count = 0);

    struct ClosureReport
    {
        double eps_cov_lin = 0.0;
        double eps_cov_exact = 0.0;
        double eps_lambda = 0.0; // relative eigenvalue-vector error of the exact-mode estimate
        double eps_sub = 0.0;    // projector distance / sqrt(2p), in [0, 1]
        std::size_t sample_count = 0;
        int subspace_dim = 0;
    };

    // Closure of sample covariances against the theoretical covariance. p <= 0 selects p_0.9 of the theory.
    ClosureReport closure_report(const ClutterCovariance &theory, const ClutterCovariance &estimate_lin,
                                 const ClutterCovariance &estimate_exact, std::size_t sample_count, int p = 0);

    ClosureReport closure_report(const ClutterCovariance &theory, const Eigen::MatrixXcd &samples_lin,
                                 const Eigen::MatrixXcd &samples_exact, int p = 0);

    // Relative Frobenius distance ||est - ref||_F / ||ref||_F.
    double relative_frobenius(const Eigen::MatrixXcd &estimate, const Eigen::MatrixXcd &reference);

    // Nearest-rank percentile: the ceil(q N)-th smallest value. q in (0, 1].
    double nearest_rank_percentile(std::vector<double> values, double q);

    struct ValidityReport
    {
        std::vector<double> amplitude_grid;
        std::vector<double> p95_contrast_error;
        std::vector<double> p95_snapshot_error;
        std::optional<double> recommended_s_mu; // largest amplitude of the admissible prefix of the grid
        double threshold = 0.05;
        double snapshot_slope = 0.0; // least-squares log-log slope of p95 snapshot error vs amplitude
        double contrast_slope = 0.0;
        std::size_t samples_per_amplitude = 0;

        double worst_contrast() const;
        double worst_snapshot() const;
        // Errors nondecreasing in amplitude up to a slack factor.
        bool monotone(double slack = 1.5) const;
    };

    inline const std::vector<double> kDefaultAmplitudeGrid = {0.0625, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0};

    // The unit-amplitude field is drawn once and rescaled for every grid point, so all amplitudes
    // see the same standardized realizations.
    ValidityReport validity_scan(const Scenario &scenario, const SceneGeometry &geometry,
                                 const PerturbationCovariance &cov_template,
                                 const std::vector<double> &amplitude_grid = kDefaultAmplitudeGrid,
                                 std::size_t samples = 200, double threshold = 0.05,
                                 std::uint64_t seed = kDefaultSeed);

    // Least-squares slope of log(y) against log(x).
    double loglog_slope(const std::vector<double> &x, const std::vector<double> &y);
}

#endif
