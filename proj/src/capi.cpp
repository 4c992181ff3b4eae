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

#include "gprclutter/gprclutter.h"
#include "gprclutter/cmat.hpp"
#include "gprclutter/error.hpp"
#include "gprclutter/experiments.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

struct gprc_config
{
    gprc::ExperimentConfig value;
};

struct gprc_geometry
{
    gprc::SceneGeometry value;
};

struct gprc_forward
{
    gprc::ForwardMatrix value;
};

struct gprc_clutter
{
    gprc::ClutterCovariance value;
};

struct gprc_spectrum
{
    gprc::SpectralSummary value;
};

namespace
{
    thread_local std::string last_error;

    template <typename F>
    gprc_status guard(F &&body)
    {
        last_error.clear();
        try
        {
            body();
            return GPRC_OK;
        }
        catch (const gprc::Error &e)
        {
            last_error = e.what();
            return static_cast<gprc_status>(e.kind());
        }
        catch (const std::bad_alloc &)
        {
            last_error = "out of memory";
            return GPRC_ERR_INTERNAL;
        }
        catch (const std::exception &e)
        {
            last_error = e.what();
            return GPRC_ERR_INTERNAL;
        }
    }

    void require(const void *p, const char *what)
    {
        if (!p)
            throw gprc::ConfigError(std::string(what) + " must not be null");
    }

    char *dup_string(const std::string &s)
    {
        auto *out = static_cast<char *>(std::malloc(s.size() + 1));
        if (!out)
            throw std::bad_alloc();
        std::memcpy(out, s.c_str(), s.size() + 1);
        return out;
    }

    gprc::ColeColeParams params_from(const double p[5])
    {
        require(p, "params");
        return gprc::ColeColeParams::from_values({p[0], p[1], p[2], p[3], p[4]});
    }

    // Sensitivities and contrasts are defined about an admissible background state.
    gprc::ColeColeParams background_from(const double p[5])
    {
        auto b = params_from(p);
        gprc::validate_background(b);
        return b;
    }

    const gprc::Scenario &lookup(const gprc_config *cfg, const char *id)
    {
        require(id, "scenario id");
        return cfg ? cfg->value.scenario(id) : gprc::find_scenario(id);
    }

    void copy_interleaved(const Eigen::MatrixXcd &m, double *buffer, size_t len)
    {
        require(buffer, "buffer");
        const auto n = static_cast<size_t>(m.size());
        if (len < 2 * n)
            throw gprc::ConfigError("buffer too small: need " + std::to_string(2 * n) + " doubles");
        size_t k = 0;
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c)
            {
                buffer[k++] = m(r, c).real();
                buffer[k++] = m(r, c).imag();
            }
    }
}

extern "C"
{
    const char *gprc_last_error(void) { return last_error.c_str(); }

    const char *gprc_version(void) { return GPRC_VERSION_STRING; }

    void gprc_string_free(char *s) { std::free(s); }

    gprc_status gprc_permittivity(const double params[5], double omega, double out[2])
    {
        return guard(
            [&]
            {
                require(out, "out");
                const auto eps = gprc::permittivity(params_from(params), omega);
                out[0] = eps.real();
                out[1] = eps.imag();
            });
    }

    gprc_status gprc_sensitivities(const double params[5], double omega, double out[10])
    {
        return guard(
            [&]
            {
                require(out, "out");
                const auto psi = gprc::sensitivities(background_from(params), omega);
                for (size_t q = 0; q < gprc::kParamCount; ++q)
                {
                    out[2 * q] = psi[q].real();
                    out[2 * q + 1] = psi[q].imag();
                }
            });
    }

    gprc_status gprc_fd_check(const double params[5], double omega, double rel_step, double out[5])
    {
        return guard(
            [&]
            {
                require(out, "out");
                const auto err = gprc::finite_difference_check(background_from(params), omega, rel_step);
                std::copy(err.begin(), err.end(), out);
            });
    }

    gprc_status gprc_exact_contrast(const double params[5], const double delta[5], double omega, double out[2])
    {
        return guard(
            [&]
            {
                require(delta, "delta");
                require(out, "out");
                const auto xi =
                    gprc::exact_contrast(background_from(params), {delta[0], delta[1], delta[2], delta[3], delta[4]}, omega);
                out[0] = xi.real();
                out[1] = xi.imag();
            });
    }

    size_t gprc_scenario_count(void) { return gprc::scenario_registry().size(); }

    const char *gprc_scenario_id(size_t index)
    {
        const auto &reg = gprc::scenario_registry();
        return index < reg.size() ? reg[index].id.c_str() : nullptr;
    }

    gprc_status gprc_scenario_params(const char *id, double background[5], double d_mu[5])
    {
        return guard(
            [&]
            {
                const auto &s = lookup(nullptr, id);
                if (background)
                {
                    const auto v = s.background.values();
                    std::copy(v.begin(), v.end(), background);
                }
                if (d_mu)
                    std::copy(s.d_mu.begin(), s.d_mu.end(), d_mu);
            });
    }

    gprc_status gprc_config_default(gprc_config **out)
    {
        return guard(
            [&]
            {
                require(out, "out");
                *out = new gprc_config{};
            });
    }

    gprc_status gprc_config_parse(const char *text, gprc_config **out)
    {
        return guard(
            [&]
            {
                require(text, "text");
                require(out, "out");
                *out = new gprc_config{gprc::parse_config(text)};
            });
    }

    gprc_status gprc_config_load(const char *path, gprc_config **out)
    {
        return guard(
            [&]
            {
                require(path, "path");
                require(out, "out");
                *out = new gprc_config{gprc::load_config(path)};
            });
    }

    gprc_status gprc_config_serialize(const gprc_config *cfg, char **out)
    {
        return guard(
            [&]
            {
                require(cfg, "config");
                require(out, "out");
                *out = dup_string(gprc::serialize_config(cfg->value));
            });
    }

    gprc_status gprc_config_set_seed(gprc_config *cfg, uint64_t seed)
    {
        return guard(
            [&]
            {
                require(cfg, "config");
                cfg->value.random_field.seed = seed;
            });
    }

    gprc_status gprc_config_set_output_dir(gprc_config *cfg, const char *dir)
    {
        return guard(
            [&]
            {
                require(cfg, "config");
                require(dir, "dir");
                cfg->value.output_dir = dir;
            });
    }

    gprc_status gprc_config_filter_scenario(gprc_config *cfg, const char *id)
    {
        return guard(
            [&]
            {
                require(cfg, "config");
                require(id, "scenario id");
                cfg->value.filter_scenario(id);
            });
    }

    gprc_status gprc_config_validate(const gprc_config *cfg)
    {
        return guard(
            [&]
            {
                require(cfg, "config");
                cfg->value.validate();
            });
    }

    void gprc_config_free(gprc_config *cfg) { delete cfg; }

    gprc_status gprc_experiment_run(const gprc_config *cfg, const char *name, int write_outputs, char **json_out,
                                    int *exit_code)
    {
        return guard(
            [&]
            {
                require(cfg, "config");
                require(name, "experiment name");
                const auto result = gprc::run_experiment(name, cfg->value);
                if (write_outputs)
                    gprc::write_outputs(result, cfg->value);
                if (json_out)
                    *json_out = dup_string(gprc::result_json(result, cfg->value).dump(2));
                if (exit_code)
                    *exit_code = gprc::result_exit_code(result);
            });
    }

    size_t gprc_experiment_count(void) { return gprc::experiment_names().size(); }

    const char *gprc_experiment_name(size_t index)
    {
        const auto &names = gprc::experiment_names();
        return index < names.size() ? names[index].c_str() : nullptr;
    }

    gprc_status gprc_geometry_create(const gprc_config *cfg, gprc_geometry **out)
    {
        return guard(
            [&]
            {
                require(out, "out");
                *out = new gprc_geometry{gprc::build_geometry(cfg ? cfg->value.geometry : gprc::GeometryConfig{})};
            });
    }

    gprc_status gprc_geometry_shape(const gprc_geometry *g, size_t *tx_count, size_t *rx_count, size_t *cell_count)
    {
        return guard(
            [&]
            {
                require(g, "geometry");
                if (tx_count)
                    *tx_count = g->value.tx_count();
                if (rx_count)
                    *rx_count = g->value.rx_count();
                if (cell_count)
                    *cell_count = g->value.cell_count();
            });
    }

    void gprc_geometry_free(gprc_geometry *g) { delete g; }

    gprc_status gprc_forward_assemble(const gprc_config *cfg, const gprc_geometry *g, const char *scenario_id,
                                      gprc_forward **out)
    {
        return guard(
            [&]
            {
                require(g, "geometry");
                require(out, "out");
                *out = new gprc_forward{gprc::assemble_forward(lookup(cfg, scenario_id), g->value)};
            });
    }

    gprc_status gprc_forward_shape(const gprc_forward *f, size_t *rows, size_t *cols)
    {
        return guard(
            [&]
            {
                require(f, "forward");
                if (rows)
                    *rows = f->value.rows();
                if (cols)
                    *cols = f->value.cols();
            });
    }

    gprc_status gprc_forward_copy(const gprc_forward *f, double *buffer, size_t len)
    {
        return guard(
            [&]
            {
                require(f, "forward");
                copy_interleaved(f->value.entries, buffer, len);
            });
    }

    gprc_status gprc_forward_discrepancy(const gprc_forward *a, const gprc_forward *reference, double *out)
    {
        return guard(
            [&]
            {
                require(a, "forward");
                require(reference, "reference");
                require(out, "out");
                *out = gprc::forward_discrepancy(a->value, reference->value);
            });
    }

    gprc_status gprc_forward_save(const gprc_forward *f, const char *path)
    {
        return guard(
            [&]
            {
                require(f, "forward");
                require(path, "path");
                gprc::save_matrix(path, f->value.entries);
            });
    }

    void gprc_forward_free(gprc_forward *f) { delete f; }

    gprc_status gprc_steering_vector(const gprc_config *cfg, const gprc_geometry *g, const char *scenario_id, double x,
                                     double z, double *buffer, size_t len)
    {
        return guard(
            [&]
            {
                require(g, "geometry");
                const auto a = gprc::steering_vector(g->value, lookup(cfg, scenario_id), {x, 0.0, z});
                copy_interleaved(a.values, buffer, len);
            });
    }

    gprc_status gprc_clutter_compute(const gprc_config *cfg, const gprc_geometry *g, const gprc_forward *f,
                                     gprc_clutter **out)
    {
        return guard(
            [&]
            {
                require(cfg, "config");
                require(g, "geometry");
                require(f, "forward");
                require(out, "out");
                const auto &rf = cfg->value.random_field;
                const auto &s = lookup(cfg, f->value.scenario_id.c_str());
                const auto cov =
                    gprc::make_perturbation_covariance(s, g->value, rf.corr_length, rf.rho_c, rf.weights, rf.amplitude);
                *out = new gprc_clutter{gprc::clutter_covariance(f->value, cov)};
            });
    }

    gprc_status gprc_clutter_dimension(const gprc_clutter *c, size_t *dim)
    {
        return guard(
            [&]
            {
                require(c, "clutter");
                require(dim, "dim");
                *dim = static_cast<size_t>(c->value.dimension());
            });
    }

    gprc_status gprc_clutter_copy(const gprc_clutter *c, double *buffer, size_t len)
    {
        return guard(
            [&]
            {
                require(c, "clutter");
                copy_interleaved(c->value.matrix, buffer, len);
            });
    }

    gprc_status gprc_clutter_trace(const gprc_clutter *c, double *out)
    {
        return guard(
            [&]
            {
                require(c, "clutter");
                require(out, "out");
                *out = c->value.trace();
            });
    }

    gprc_status gprc_clutter_scale(const gprc_clutter *c, double kappa, gprc_clutter **out)
    {
        return guard(
            [&]
            {
                require(c, "clutter");
                require(out, "out");
                *out = new gprc_clutter{gprc::scale_covariance(c->value, kappa)};
            });
    }

    gprc_status gprc_clutter_add_noise(const gprc_clutter *c, double snr_db, gprc_clutter **out)
    {
        return guard(
            [&]
            {
                require(c, "clutter");
                require(out, "out");
                *out = new gprc_clutter{gprc::add_noise_floor(c->value, snr_db)};
            });
    }

    gprc_status gprc_clutter_save(const gprc_clutter *c, const char *path)
    {
        return guard(
            [&]
            {
                require(c, "clutter");
                require(path, "path");
                gprc::save_matrix(path, c->value.matrix);
            });
    }

    void gprc_clutter_free(gprc_clutter *c) { delete c; }

    gprc_status gprc_spectrum_compute(const gprc_clutter *c, gprc_spectrum **out)
    {
        return guard(
            [&]
            {
                require(c, "clutter");
                require(out, "out");
                *out = new gprc_spectrum{gprc::spectral_summary(c->value)};
            });
    }

    gprc_status gprc_spectrum_metrics(const gprc_spectrum *s, double *effective_rank, int *p90, int *p95,
                                      double *trace)
    {
        return guard(
            [&]
            {
                require(s, "spectrum");
                if (effective_rank)
                    *effective_rank = s->value.effective_rank;
                if (p90)
                    *p90 = s->value.p90();
                if (p95)
                    *p95 = s->value.p95();
                if (trace)
                    *trace = s->value.trace;
            });
    }

    gprc_status gprc_spectrum_eigenvalues(const gprc_spectrum *s, double *buffer, size_t len)
    {
        return guard(
            [&]
            {
                require(s, "spectrum");
                require(buffer, "buffer");
                const auto n = static_cast<size_t>(s->value.eigenvalues.size());
                if (len < n)
                    throw gprc::ConfigError("buffer too small: need " + std::to_string(n) + " doubles");
                std::copy(s->value.eigenvalues.begin(), s->value.eigenvalues.end(), buffer);
            });
    }

    gprc_status gprc_spectrum_overlap(const gprc_spectrum *s, const double *steering, size_t len, int p, double *eta,
                                      double *gamma)
    {
        return guard(
            [&]
            {
                require(s, "spectrum");
                require(steering, "steering");
                const auto n = static_cast<size_t>(s->value.dimension());
                if (len < 2 * n)
                    throw gprc::ConfigError("steering vector too short: need " + std::to_string(2 * n) + " doubles");
                Eigen::VectorXcd a(static_cast<Eigen::Index>(n));
                for (size_t i = 0; i < n; ++i)
                    a(static_cast<Eigen::Index>(i)) = {steering[2 * i], steering[2 * i + 1]};
                const auto ov = gprc::target_overlap(s->value, a, p);
                if (eta)
                    *eta = ov.eta;
                if (gamma)
                    *gamma = ov.gamma;
            });
    }

    void gprc_spectrum_free(gprc_spectrum *s) { delete s; }

    gprc_status gprc_matrix_info(const char *path, int *kind, uint64_t *rows, uint64_t *cols)
    {
        return guard(
            [&]
            {
                require(path, "path");
                const auto h = gprc::read_cmat_header(path);
                if (kind)
                    *kind = static_cast<int>(h.kind);
                if (rows)
                    *rows = h.rows;
                if (cols)
                    *cols = h.cols;
            });
    }
}
