/*
 * Copyright (C) 2026 The fdf Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef FDF_FDF_H
#define FDF_FDF_H

#include <stddef.h>
#include <stdint.h>

#if defined(FDF_BUILDING_LIBRARY)
#define FDF_API __attribute__((visibility("default")))
#else
#define FDF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum fdf_status {
    FDF_OK               = 0,
    FDF_ERR_INTERNAL     = 1,
    FDF_ERR_INPUT        = 2,
    FDF_ERR_EVALUATION   = 3,
    FDF_ERR_REPORT       = 4
} fdf_status;

typedef struct fdf_config fdf_config;
typedef struct fdf_model fdf_model;

FDF_API const char* fdf_version(void);

/* Details of the last failure on the calling thread. */
FDF_API const char* fdf_last_error(void);
FDF_API const char* fdf_last_error_code(void);
/* {"error": {"code", "category", "message"}} for the last failure. */
FDF_API const char* fdf_last_error_json(void);

/* Strings returned through char** out-parameters are owned by the caller. */
FDF_API void fdf_string_free(char* s);

FDF_API fdf_status fdf_config_load(const char* path, fdf_config** out);
FDF_API void fdf_config_free(fdf_config* config);
FDF_API fdf_status fdf_config_set_seed(fdf_config* config, uint64_t seed);
FDF_API fdf_status fdf_config_set_output_dir(fdf_config* config, const char* dir);
/* Effective output directory; valid until the config changes or is freed. */
FDF_API const char* fdf_config_output_dir(const fdf_config* config);
/* 0 = FDF_THREADS or hardware concurrency. */
FDF_API fdf_status fdf_config_set_threads(fdf_config* config, unsigned threads);

/* Each writes into the output directory; warnings go to the manifest. */
FDF_API fdf_status fdf_run_ingest(const fdf_config* config);
FDF_API fdf_status fdf_run_train(const fdf_config* config);
FDF_API fdf_status fdf_run_evaluate(const fdf_config* config);

/* format "table": *text_out receives the table (out_dir may be NULL).
 * format "svg": files are written to out_dir; *text_out lists them. */
FDF_API fdf_status fdf_render_report(const char* report_path, const char* format, const char* out_dir,
                                     char** text_out);

FDF_API fdf_status fdf_synth(const char* scenario, uint64_t seed, int n_regions, int n_periods,
                             const char* out_dir);

/* Flow aggregates on a row-major n x n matrix; negative cells are MISSING.
 * kind: "arrivals", "inflow", "outflow", "internal", "pairwise". */
FDF_API fdf_status fdf_flow_aggregate(const int64_t* cells, size_t n, const char* kind, size_t region,
                                      size_t partner, int64_t* value, int* is_missing);

/* X is row-major rows x cols. spec_json: {"family": ..., params}. */
FDF_API fdf_status fdf_model_fit(const char* spec_json, const double* X, size_t rows, size_t cols, const double* y,
                                 uint64_t seed, fdf_model** out);
FDF_API fdf_status fdf_model_predict(const fdf_model* model, const double* X, size_t rows, size_t cols,
                                     double* out);
FDF_API fdf_status fdf_model_to_json(const fdf_model* model, char** json_out);
FDF_API fdf_status fdf_model_from_json(const char* json, fdf_model** out);
FDF_API void fdf_model_free(fdf_model* model);

/* metric: "mse", "rmse", "mae", "mape", "asymmetric_se". */
FDF_API fdf_status fdf_metric(const char* metric, double lambda_over, const double* predictions,
                              const double* actuals, size_t n, double* out);

/* history ends at the issuance period; NaN marks MISSING. */
FDF_API fdf_status fdf_benchmark_predict(const char* kind, int n, int horizon, const double* history, size_t length,
                                         double* out, int* has_prediction);

#ifdef __cplusplus
}
#endif

#endif /* FDF_FDF_H */
