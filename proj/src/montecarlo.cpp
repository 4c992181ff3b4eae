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

#include "gprclutter/montecarlo.hpp"
#include "gprclutter/error.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

namespace gprc
{
    SnapshotSynthesizer::SnapshotSynthesizer(const ForwardMatrix &A, const Scenario &scenario,
                                             const SceneGeometry &geometry)
        : forward_(&A),
          background_(scenario.background),
          kernels_(kernel_products(geometry, HomogeneousKernel(scenario.background))),
          rx_count_(geometry.rx_count()),
          cells_(geometry.cell_count())
    {
        if (A.rows() != geometry.channel_count() || A.cell_count != geometry.cell_count())
            throw ConfigError("forward matrix does not match the geometry");
        if (A.geometry_fingerprint != geometry.fingerprint())
            throw ConfigError("forward matrix was assembled for a different geometry");
        for (std::size_t n = 0; n < geometry.tx_count(); ++n)
        {
            omegas_.push_back(geometry.omega(n));
            eps_b_.push_back(permittivity(background_, omegas_.back()));
            psi_.push_back(sensitivities(background_, omegas_.back()));
        }
    }

    Eigen::MatrixXcd SnapshotSynthesizer::linear(const Eigen::MatrixXd &perturbations) const
    {
        if (perturbations.rows() != static_cast<Eigen::Index>(forward_->cols()))
            throw ConfigError("perturbation length does not match the forward matrix");
        Eigen::MatrixXcd Y(forward_->entries.rows(), perturbations.cols());
        Y.real() = forward_->entries.real() * perturbations;
        Y.imag() = forward_->entries.imag() * perturbations;
        return Y;
    }

    Eigen::MatrixXcd SnapshotSynthesizer::exact(const Eigen::MatrixXd &perturbations) const
    {
        return exact_impl(perturbations, nullptr);
    }

    Eigen::MatrixXcd SnapshotSynthesizer::exact(const Eigen::MatrixXd &perturbations,
                                                std::vector<double> &contrast_errors) const
    {
        return exact_impl(perturbations, &contrast_errors);
    }

    Eigen::MatrixXcd SnapshotSynthesizer::exact_impl(const Eigen::MatrixXd &perturbations,
                                                     std::vector<double> *errors) const
    {
        const auto P = static_cast<Eigen::Index>(cells_);
        const auto N = static_cast<Eigen::Index>(omegas_.size());
        const auto M = static_cast<Eigen::Index>(rx_count_);
        const Eigen::Index L = perturbations.cols();
        if (perturbations.rows() != static_cast<Eigen::Index>(kParamCount) * P)
            throw ConfigError("perturbation length does not match the forward matrix");

        // contrast[n] is P x L
        std::vector<Eigen::MatrixXcd> contrast(static_cast<std::size_t>(N), Eigen::MatrixXcd(P, L));
        if (errors)
            errors->assign(static_cast<std::size_t>(L * P * N), 0.0);

        std::mutex failure_mutex;
        std::string failure;
#pragma omp parallel for schedule(static)
        for (Eigen::Index i = 0; i < L; ++i)
        {
            ParamVector delta{};
            for (Eigen::Index p = 0; p < P; ++p)
            {
                for (std::size_t q = 0; q < kParamCount; ++q)
                    delta[q] = perturbations(static_cast<Eigen::Index>(q) * P + p, i);
                for (Eigen::Index n = 0; n < N; ++n)
                {
                    const auto nn = static_cast<std::size_t>(n);
                    cplx xi;
                    try
                    {
                        xi = exact_contrast(background_, eps_b_[nn], delta, omegas_[nn]);
                    }
                    catch (const Error &e)
                    {
                        std::lock_guard lock(failure_mutex);
                        if (failure.empty())
                        {
                            std::ostringstream os;
                            os << "exact contrast failed at sample " << i << ", cell " << p << ", frequency index "
                               << n << ": " << e.what();
                            failure = os.str();
                        }
                        xi = 0.0;
                    }
                    contrast[nn](p, i) = xi;
                    if (errors)
                    {
                        const cplx lin = linear_contrast(psi_[nn], delta);
                        (*errors)[static_cast<std::size_t>((i * P + p) * N + n)] =
                            std::abs(xi - lin) / std::max(std::abs(xi), 1e-30);
                    }
                }
            }
        }
        if (!failure.empty())
            throw NumericalError(failure);

        Eigen::MatrixXcd Y(M * N, L);
        for (Eigen::Index n = 0; n < N; ++n)
            Y.middleRows(n * M, M).noalias() = kernels_.middleRows(n * M, M) * contrast[static_cast<std::size_t>(n)];
        return Y;
    }

    Eigen::MatrixXcd simulate_snapshots(const ForwardMatrix &A, const Scenario &scenario,
                                        const SceneGeometry &geometry, const PerturbationCovariance &cov,
                                        std::size_t count, std::uint64_t seed, SnapshotMode mode)
    {
        const SnapshotSynthesizer synth(A, scenario, geometry);
        const Eigen::MatrixXd delta = sample_perturbations(cov, count, seed);
        return mode == SnapshotMode::linear ? synth.linear(delta) : synth.exact(delta);
    }

    LinearSnapshotMap::LinearSnapshotMap(const ForwardMatrix &A, const PerturbationSampler &sampler)
    {
        const auto P = static_cast<Eigen::Index>(sampler.cell_count());
        if (static_cast<Eigen::Index>(A.cell_count) != P)
            throw ConfigError("forward matrix and sampler disagree on the cell count");
        composite_.resize(static_cast<Eigen::Index>(A.rows()), static_cast<Eigen::Index>(kParamCount) * P);
        const Eigen::MatrixXcd spatial = sampler.spatial_cholesky().cast<cplx>();
        std::vector<Eigen::MatrixXcd> filtered(kParamCount);
        for (std::size_t q = 0; q < kParamCount; ++q)
            filtered[q] = A.block(q) * spatial;
        const auto &Lp = sampler.param_cholesky();
        for (std::size_t j = 0; j < kParamCount; ++j)
        {
            Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(composite_.rows(), P);
            for (std::size_t q = 0; q < kParamCount; ++q)
                if (Lp(Eigen::Index(q), Eigen::Index(j)) != 0.0)
                    acc += Lp(Eigen::Index(q), Eigen::Index(j)) * filtered[q];
            composite_.middleCols(static_cast<Eigen::Index>(j) * P, P) = sampler.amplitude() * acc;
        }
    }

    Eigen::MatrixXcd LinearSnapshotMap::operator()(const Eigen::MatrixXd &z) const
    {
        if (z.rows() != composite_.cols())
            throw ConfigError("standard-normal block has the wrong length");
        return composite_ * z.cast<cplx>();
    }

    Eigen::MatrixXcd LinearSnapshotMap::draw(std::size_t count, std::uint64_t seed, std::size_t first) const
    {
        const auto len = static_cast<std::size_t>(composite_.cols());
        Eigen::MatrixXd z(composite_.cols(), static_cast<Eigen::Index>(count));
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(count); ++i)
            z.col(i) = PerturbationSampler::standard_normal(len, seed, first + static_cast<std::size_t>(i));
        return (*this)(z);
    }

    ConvergenceReport closure_convergence(const ClutterCovariance &theory, const LinearSnapshotMap &map,
                                          std::size_t large, std::size_t small, std::size_t replicates,
                                          std::uint64_t seed)
    {
        if (small < 2 || small > large || replicates < 1)
            throw ConfigError("closure convergence needs 2 <= small <= large and at least one replicate");
        ConvergenceReport r;
        r.small = small;
        r.large = large;
        r.replicates = replicates;
        double ss = 0.0, sl = 0.0;
        for (std::size_t k = 0; k < replicates; ++k)
        {
            const Eigen::MatrixXcd c = map.draw(large, seed, k * large);
            const double el = relative_frobenius(sample_covariance(c, Provenance::monte_carlo_linear).matrix, theory.matrix);
            const double es =
                relative_frobenius(sample_covariance(c, Provenance::monte_carlo_linear, small).matrix, theory.matrix);
            sl += el * el;
            ss += es * es;
        }
        r.rms_small = std::sqrt(ss / double(replicates));
        r.rms_large = std::sqrt(sl / double(replicates));
        r.ratio = r.rms_small / r.rms_large;
        return r;
    }

    ClutterCovariance sample_covariance(const Eigen::MatrixXcd &snapshots, Provenance provenance, std::size_t count)
    {
        const Eigen::Index L = count == 0 ? snapshots.cols() : static_cast<Eigen::Index>(count);
        if (L < 1 || L > snapshots.cols())
            throw ConfigError("sample covariance needs 1 <= count <= available snapshots");
        const auto Y = snapshots.leftCols(L);
        Eigen::MatrixXcd R = Y * Y.adjoint();
        R /= static_cast<double>(L);
        return {0.5 * (R + R.adjoint()), provenance};
    }

    double relative_frobenius(const Eigen::MatrixXcd &estimate, const Eigen::MatrixXcd &reference)
    {
        const double ref = reference.norm();
        if (!(ref > 0.0))
            throw NumericalError("undefined closure: reference covariance is zero");
        return (estimate - reference).norm() / ref;
    }

    ClosureReport closure_report(const ClutterCovariance &theory, const ClutterCovariance &estimate_lin,
                                 const ClutterCovariance &estimate_exact, std::size_t sample_count, int p)
    {
        if (theory.matrix.norm() == 0.0)
            throw NumericalError("undefined closure: theoretical covariance is zero");

        const auto th = spectral_summary(theory);
        const auto ex = spectral_summary(estimate_exact);

        ClosureReport r;
        r.sample_count = sample_count;
        r.subspace_dim = p > 0 ? p : th.p90();
        if (r.subspace_dim > th.dimension())
            throw ConfigError("subspace dimension exceeds the covariance dimension");
        r.eps_cov_lin = relative_frobenius(estimate_lin.matrix, theory.matrix);
        r.eps_cov_exact = relative_frobenius(estimate_exact.matrix, theory.matrix);
        r.eps_lambda = (ex.eigenvalues - th.eigenvalues).norm() / th.eigenvalues.norm();

        const auto Ut = th.eigenvectors.leftCols(r.subspace_dim);
        const auto Ue = ex.eigenvectors.leftCols(r.subspace_dim);
        const Eigen::MatrixXcd diff = Ut * Ut.adjoint() - Ue * Ue.adjoint();
        r.eps_sub = std::min(1.0, diff.norm() / std::sqrt(2.0 * r.subspace_dim));
        return r;
    }

    ClosureReport closure_report(const ClutterCovariance &theory, const Eigen::MatrixXcd &samples_lin,
                                 const Eigen::MatrixXcd &samples_exact, int p)
    {
        if (samples_lin.cols() < 2 || samples_exact.cols() < 2)
            throw ConfigError("closure needs at least two samples per mode");
        if (samples_lin.cols() != samples_exact.cols())
            throw ConfigError("linear and exact ensembles must have the same size");
        return closure_report(theory, sample_covariance(samples_lin, Provenance::monte_carlo_linear),
                              sample_covariance(samples_exact, Provenance::monte_carlo_exact),
                              static_cast<std::size_t>(samples_lin.cols()), p);
    }

    double nearest_rank_percentile(std::vector<double> values, double q)
    {
        if (values.empty())
            throw ConfigError("percentile of an empty set");
        if (!(q > 0.0 && q <= 1.0))
            throw ConfigError("percentile level must lie in (0, 1]");
        const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
        const auto idx = std::clamp<std::size_t>(rank, 1, values.size()) - 1;
        std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(idx), values.end());
        return values[idx];
    }

    double ValidityReport::worst_contrast() const
    {
        return p95_contrast_error.empty() ? 0.0 : *std::max_element(p95_contrast_error.begin(), p95_contrast_error.end());
    }

    double ValidityReport::worst_snapshot() const
    {
        return p95_snapshot_error.empty() ? 0.0 : *std::max_element(p95_snapshot_error.begin(), p95_snapshot_error.end());
    }

    bool ValidityReport::monotone(double slack) const
    {
        for (std::size_t k = 1; k < amplitude_grid.size(); ++k)
            if (p95_contrast_error[k] * slack < p95_contrast_error[k - 1] ||
                p95_snapshot_error[k] * slack < p95_snapshot_error[k - 1])
                return false;
        return true;
    }

    double loglog_slope(const std::vector<double> &x, const std::vector<double> &y)
    {
        if (x.size() != y.size() || x.size() < 2)
            throw ConfigError("slope fit needs at least two matching points");
        double mx = 0.0, my = 0.0;
        const double n = static_cast<double>(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            if (!(x[i] > 0.0) || !(y[i] > 0.0))
                throw NumericalError("log-log slope needs positive values");
            mx += std::log(x[i]);
            my += std::log(y[i]);
        }
        mx /= n;
        my /= n;
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            const double dx = std::log(x[i]) - mx;
            sxy += dx * (std::log(y[i]) - my);
            sxx += dx * dx;
        }
        if (sxx == 0.0)
            throw ConfigError("slope fit needs distinct abscissae");
        return sxy / sxx;
    }

    ValidityReport validity_scan(const Scenario &scenario, const SceneGeometry &geometry,
                                 const PerturbationCovariance &cov_template, const std::vector<double> &grid,
                                 std::size_t samples, double threshold, std::uint64_t seed)
    {
        if (grid.empty())
            throw ConfigError("validity scan needs a non-empty amplitude grid");
        for (std::size_t k = 0; k < grid.size(); ++k)
            if (!(grid[k] > 0.0) || (k > 0 && !(grid[k] > grid[k - 1])))
                throw ConfigError("amplitude grid must be positive and strictly ascending");
        if (samples < 1)
            throw ConfigError("validity scan needs at least one sample per amplitude");

        const ForwardMatrix A = assemble_forward(scenario, geometry);
        const SnapshotSynthesizer synth(A, scenario, geometry);
        const Eigen::MatrixXd unit = sample_perturbations(cov_template.with_amplitude(1.0), samples, seed);

        ValidityReport rep;
        rep.amplitude_grid = grid;
        rep.threshold = threshold;
        rep.samples_per_amplitude = samples;
        for (double s : grid)
        {
            const Eigen::MatrixXd delta = s * unit;
            std::vector<double> contrast_errors;
            const Eigen::MatrixXcd y_exact = synth.exact(delta, contrast_errors);
            const Eigen::MatrixXcd y_lin = synth.linear(delta);

            std::vector<double> snapshot_errors(samples);
            for (std::size_t i = 0; i < samples; ++i)
            {
                const auto c = static_cast<Eigen::Index>(i);
                snapshot_errors[i] = (y_exact.col(c) - y_lin.col(c)).norm() / std::max(y_exact.col(c).norm(), 1e-300);
            }
            rep.p95_contrast_error.push_back(nearest_rank_percentile(std::move(contrast_errors), 0.95));
            rep.p95_snapshot_error.push_back(nearest_rank_percentile(std::move(snapshot_errors), 0.95));
        }

        for (std::size_t k = 0; k < grid.size(); ++k)
        {
            if (rep.p95_contrast_error[k] < threshold && rep.p95_snapshot_error[k] < threshold)
                rep.recommended_s_mu = grid[k];
            else
                break;
        }
        if (grid.size() >= 2)
        {
            rep.snapshot_slope = loglog_slope(grid, rep.p95_snapshot_error);
            rep.contrast_slope = loglog_slope(grid, rep.p95_contrast_error);
        }
        return rep;
    }
}
