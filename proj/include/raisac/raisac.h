// SPDX-License-Identifier: Apache-2.0
//
// ra-isac: joint beamforming and array rotation for rotatable-antenna ISAC
// Copyright (C) 2026 The ra-isac authors
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
/* C interface to the ra-isac library.
 *
 * Objects are opaque handles owned by the caller and released with the matching *_free
 * function. Every call returns an ra_status; on failure ra_last_error() describes the
 * problem (thread-local, valid until the next call on the same thread). Strings returned
 * through char** out-parameters are heap allocated and released with ra_string_free().
 */
#ifndef RAISAC_H
#define RAISAC_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#  define RAISAC_API __declspec(dllexport)
#else
#  define RAISAC_API __attribute__((visibility("default")))
#endif

typedef enum ra_status
{
    RA_OK = 0,
    RA_ERR_INVALID_ARGUMENT = 1,
    RA_ERR_CONFIG = 2,
    RA_ERR_IO = 3,
    RA_ERR_NUMERIC = 4,
    RA_ERR_INTERNAL = 5
} ra_status;

/* Experiment configuration plus command-line style overrides. */
typedef struct ra_config ra_config;

RAISAC_API const char *ra_version(void);
RAISAC_API const char *ra_last_error(void);

RAISAC_API ra_status ra_config_new_default(ra_config **out);
RAISAC_API ra_status ra_config_load_file(const char *path, ra_config **out);
RAISAC_API ra_status ra_config_load_json(const char *json_text, ra_config **out);
RAISAC_API void ra_config_free(ra_config *config);

/* Override keys: seed, grid_points, output, omega1, workers, mc_runs. Unknown keys and
 * unparsable values are rejected with RA_ERR_INVALID_ARGUMENT. */
RAISAC_API ra_status ra_config_set(ra_config *config, const char *key, const char *value);

/* Resolved configuration (file values with overrides applied) as a JSON document. */
RAISAC_API ra_status ra_config_to_json(const ra_config *config, char **out_json);

RAISAC_API void ra_string_free(char *text);

/* Commands. Each writes its data files and returns a JSON summary in *out_summary.
 *   solve            joint solve of realization 0 at omega1 -> JSON
 *   rotation_search  objective profile over the rotation grid -> CSV + JSON sidecar
 *   tradeoff         weight sweep over all schemes -> CSV + JSON sidecar
 *   beampattern      normalized transmit patterns for sensing/comm/joint weights -> CSV + JSON sidecar
 *   montecarlo       mean and standard error of every scheme metric at omega1 -> JSON
 */
RAISAC_API ra_status ra_run_solve(const ra_config *config, char **out_summary);
RAISAC_API ra_status ra_run_rotation_search(const ra_config *config, char **out_summary);
RAISAC_API ra_status ra_run_tradeoff(const ra_config *config, char **out_summary);
RAISAC_API ra_status ra_run_beampattern(const ra_config *config, char **out_summary);
RAISAC_API ra_status ra_run_montecarlo(const ra_config *config, char **out_summary);

/* Closed forms. Angles in radians, spacing in wavelengths. */
RAISAC_API ra_status ra_max_rotation_gain(double theta0, double theta1, int num_elements, double spacing,
                                          double *gain, double *rotation);
RAISAC_API ra_status ra_sensing_only_rotation(double theta, double region_lo, double region_hi, double *rotation);
RAISAC_API ra_status ra_crb_chi(int rx_elements, double spacing, double wavelength, int snapshots, double sensing_snr,
                                double *chi);

#ifdef __cplusplus
}
#endif

#endif
