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

#ifndef GPRCLUTTER_H
#define GPRCLUTTER_H

#include <stddef.h>
#include <stdint.h>

#if defined(GPRC_BUILDING_LIBRARY)
#define GPRC_API __attribute__((visibility("default")))
#else
#define GPRC_API
#endif

#ifdef __cplusplus
extern "C"
{
#endif

    // Status codes; the non-zero values match the CLI exit codes.
    typedef enum
    {
        GPRC_OK = 0,
        GPRC_ERR_CONFIG = 1,
        GPRC_ERR_NUMERICAL = 2,
        GPRC_ERR_IO = 3,
        GPRC_ERR_INTERNAL = 4
    } gprc_status;

    typedef struct gprc_config gprc_config;
    typedef struct gprc_geometry gprc_geometry;
    typedef struct gprc_forward gprc_forward;
    typedef struct gprc_clutter gprc_clutter;
    typedef struct gprc_spectrum gprc_spectrum;

    // Message of the last failed call on this thread ("" if none). Valid until the next call.
    GPRC_API const char *gprc_last_error(void);
    GPRC_API const char *gprc_version(void);

    // Strings returned through char** are owned by the caller.
    GPRC_API void gprc_string_free(char *s);

    // Parameter arrays are ordered (eps_inf, delta_eps, tau, alpha, sigma).
    // Complex outputs are interleaved (re, im). Permittivity is absolute [F/m].
    // Sensitivities, fd_check and exact_contrast reject inadmissible backgrounds (GPRC_ERR_CONFIG).
    GPRC_API gprc_status gprc_permittivity(const double params[5], double omega, double out[2]);
    GPRC_API gprc_status gprc_sensitivities(const double params[5], double omega, double out[10]);
    GPRC_API gprc_status gprc_fd_check(const double params[5], double omega, double rel_step, double out[5]);
    GPRC_API gprc_status gprc_exact_contrast(const double params[5], const double delta[5], double omega,
                                             double out[2]);

    GPRC_API size_t gprc_scenario_count(void);
    GPRC_API const char *gprc_scenario_id(size_t index);
    GPRC_API gprc_status gprc_scenario_params(const char *id, double background[5], double d_mu[5]);

    GPRC_API gprc_status gprc_config_default(gprc_config **out);
    GPRC_API gprc_status gprc_config_parse(const char *text, gprc_config **out);
    GPRC_API gprc_status gprc_config_load(const char *path, gprc_config **out);
    GPRC_API gprc_status gprc_config_serialize(const gprc_config *cfg, char **out);
    GPRC_API gprc_status gprc_config_set_seed(gprc_config *cfg, uint64_t seed);
    GPRC_API gprc_status gprc_config_set_output_dir(gprc_config *cfg, const char *dir);
    GPRC_API gprc_status gprc_config_filter_scenario(gprc_config *cfg, const char *id);
    GPRC_API gprc_status gprc_config_validate(const gprc_config *cfg);
    GPRC_API void gprc_config_free(gprc_config *cfg);

    // Runs a named experiment. The result document (JSON) is returned in json_out when non-null;
    // exit_code receives 0 or 2 (scenario failures / failed checks). Outputs are written when write_outputs != 0.
    GPRC_API gprc_status gprc_experiment_run(const gprc_config *cfg, const char *name, int write_outputs,
                                             char **json_out, int *exit_code);
    GPRC_API size_t gprc_experiment_count(void);
    GPRC_API const char *gprc_experiment_name(size_t index);

    GPRC_API gprc_status gprc_geometry_create(const gprc_config *cfg, gprc_geometry **out);
    GPRC_API gprc_status gprc_geometry_shape(const gprc_geometry *g, size_t *tx_count, size_t *rx_count,
                                             size_t *cell_count);
    GPRC_API void gprc_geometry_free(gprc_geometry *g);

    // cfg may be NULL, in which case only the built-in scenarios are visible.
    GPRC_API gprc_status gprc_forward_assemble(const gprc_config *cfg, const gprc_geometry *g, const char *scenario_id,
                                               gprc_forward **out);
    GPRC_API gprc_status gprc_forward_shape(const gprc_forward *f, size_t *rows, size_t *cols);
    // Row-major, interleaved; len counts doubles and must be >= 2 * rows * cols.
    GPRC_API gprc_status gprc_forward_copy(const gprc_forward *f, double *buffer, size_t len);
    // ||a - b||_F / ||reference||_F.
    GPRC_API gprc_status gprc_forward_discrepancy(const gprc_forward *a, const gprc_forward *reference, double *out);
    GPRC_API gprc_status gprc_forward_save(const gprc_forward *f, const char *path);
    GPRC_API void gprc_forward_free(gprc_forward *f);

    // Unit-norm steering vector of length MN (interleaved, len >= 2 MN) for a target at (x, z).
    GPRC_API gprc_status gprc_steering_vector(const gprc_config *cfg, const gprc_geometry *g, const char *scenario_id,
                                              double x, double z, double *buffer, size_t len);

    // Theoretical clutter covariance under the config's random-field block.
    GPRC_API gprc_status gprc_clutter_compute(const gprc_config *cfg, const gprc_geometry *g, const gprc_forward *f,
                                              gprc_clutter **out);
    GPRC_API gprc_status gprc_clutter_dimension(const gprc_clutter *c, size_t *dim);
    GPRC_API gprc_status gprc_clutter_copy(const gprc_clutter *c, double *buffer, size_t len);
    GPRC_API gprc_status gprc_clutter_trace(const gprc_clutter *c, double *out);
    GPRC_API gprc_status gprc_clutter_scale(const gprc_clutter *c, double kappa, gprc_clutter **out);
    GPRC_API gprc_status gprc_clutter_add_noise(const gprc_clutter *c, double snr_db, gprc_clutter **out);
    GPRC_API gprc_status gprc_clutter_save(const gprc_clutter *c, const char *path);
    GPRC_API void gprc_clutter_free(gprc_clutter *c);

    GPRC_API gprc_status gprc_spectrum_compute(const gprc_clutter *c, gprc_spectrum **out);
    GPRC_API gprc_status gprc_spectrum_metrics(const gprc_spectrum *s, double *effective_rank, int *p90, int *p95,
                                               double *trace);
    // Descending eigenvalues; len must be >= dimension.
    GPRC_API gprc_status gprc_spectrum_eigenvalues(const gprc_spectrum *s, double *buffer, size_t len);
    GPRC_API gprc_status gprc_spectrum_overlap(const gprc_spectrum *s, const double *steering, size_t len, int p,
                                               double *eta, double *gamma);
    GPRC_API void gprc_spectrum_free(gprc_spectrum *s);

    // kind: 0 real64, 1 complex128.
    GPRC_API gprc_status gprc_matrix_info(const char *path, int *kind, uint64_t *rows, uint64_t *cols);

#ifdef __cplusplus
}
#endif

#endif
