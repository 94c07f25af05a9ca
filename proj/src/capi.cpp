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
#include "fdf/fdf.h"

#include "benchmarks.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "error.hpp"
#include "flow_data.hpp"
#include "metrics.hpp"
#include "model.hpp"
#include "pipeline.hpp"
#include "render.hpp"
#include "scoring.hpp"
#include "synth.hpp"

#include <json.hpp>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <new>
#include <string>

struct fdf_config {
    fdf::PipelineConfig config;
    fdf::RunOptions options;
};

struct fdf_model {
    fdf::FittedModel model;
};

namespace
{

thread_local std::string g_message;
thread_local std::string g_code;
thread_local std::string g_json;

std::string_view category_name(fdf::ErrorCategory c)
{
    switch (c) {
    case fdf::ErrorCategory::Input:
        return "input";
    case fdf::ErrorCategory::Evaluation:
        return "evaluation";
    case fdf::ErrorCategory::Report:
        return "report";
    }
    return "input";
}

fdf_status record(fdf_status status, std::string code, std::string_view category, std::string message)
{
    g_code    = std::move(code);
    g_message = std::move(message);
    g_json    = nlohmann::json{{"error", {{"code", g_code}, {"category", category}, {"message", g_message}}}}.dump();
    return status;
}

template <typename F>
fdf_status guarded(F&& body)
{
    try {
        body();
        g_code.clear();
        g_message.clear();
        g_json.clear();
        return FDF_OK;
    }
    catch (const fdf::Error& e) {
        auto cat          = fdf::error_category(e.code());
        fdf_status status = cat == fdf::ErrorCategory::Input        ? FDF_ERR_INPUT
                            : cat == fdf::ErrorCategory::Evaluation ? FDF_ERR_EVALUATION
                                                                    : FDF_ERR_REPORT;
        return record(status, std::string(fdf::error_code_name(e.code())), category_name(cat), e.what());
    }
    catch (const std::filesystem::filesystem_error& e) {
        return record(FDF_ERR_INPUT, "Io", "input", e.what());
    }
    catch (const std::bad_alloc&) {
        return record(FDF_ERR_INTERNAL, "OutOfMemory", "internal", "out of memory");
    }
    catch (const std::exception& e) {
        return record(FDF_ERR_INTERNAL, "Internal", "internal", e.what());
    }
}

void require(const void* p, const char* what)
{
    if (!p) {
        fdf::fail(fdf::ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
    }
}

char* dup_string(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

Eigen::MatrixXd to_matrix(const double* X, size_t rows, size_t cols)
{
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = X[r * cols + c];
        }
    }
    return m;
}

} // namespace

extern "C" {

const char* fdf_version(void)
{
    return FDF_VERSION_STRING;
}

const char* fdf_last_error(void)
{
    return g_message.c_str();
}

const char* fdf_last_error_code(void)
{
    return g_code.c_str();
}

const char* fdf_last_error_json(void)
{
    return g_json.c_str();
}

void fdf_string_free(char* s)
{
    std::free(s);
}

fdf_status fdf_config_load(const char* path, fdf_config** out)
{
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new fdf_config{fdf::load_config(path), {}};
    });
}

void fdf_config_free(fdf_config* config)
{
    delete config;
}

fdf_status fdf_config_set_seed(fdf_config* config, uint64_t seed)
{
    return guarded([&] {
        require(config, "config");
        config->config.models.seed = seed;
    });
}

fdf_status fdf_config_set_output_dir(fdf_config* config, const char* dir)
{
    return guarded([&] {
        require(config, "config");
        require(dir, "dir");
        config->options.out_dir = dir;
    });
}

const char* fdf_config_output_dir(const fdf_config* config)
{
    if (!config) {
        return "";
    }
    const auto& dir = config->options.out_dir.empty() ? config->config.output_dir : config->options.out_dir;
    return dir.c_str();
}

fdf_status fdf_config_set_threads(fdf_config* config, unsigned threads)
{
    return guarded([&] {
        require(config, "config");
        config->options.threads = threads;
    });
}

fdf_status fdf_run_ingest(const fdf_config* config)
{
    return guarded([&] {
        require(config, "config");
        fdf::run_ingest(config->config, config->options);
    });
}

fdf_status fdf_run_train(const fdf_config* config)
{
    return guarded([&] {
        require(config, "config");
        fdf::run_train(config->config, config->options);
    });
}

fdf_status fdf_run_evaluate(const fdf_config* config)
{
    return guarded([&] {
        require(config, "config");
        fdf::run_evaluate(config->config, config->options);
    });
}

fdf_status fdf_render_report(const char* report_path, const char* format, const char* out_dir, char** text_out)
{
    return guarded([&] {
        require(report_path, "report_path");
        require(format, "format");
        std::string text;
        try {
            text = fdf::read_file(report_path);
        }
        catch (const fdf::Error& e) {
            fdf::fail(fdf::ErrorCode::MalformedReport, e.what());
        }
        nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
        if (j.is_discarded()) {
            fdf::fail(fdf::ErrorCode::MalformedReport, std::string(report_path) + " is not valid JSON");
        }
        fdf::ScoreReport report = fdf::ScoreReport::from_json(j);
        std::string fmt         = format;
        std::string result;
        if (fmt == "table") {
            result = fdf::render_table(report);
        }
        else if (fmt == "svg") {
            require(out_dir, "out_dir");
            for (const auto& [name, svg] : fdf::render_svgs(report)) {
                std::filesystem::path p = std::filesystem::path(out_dir) / name;
                fdf::write_file(p, svg);
                result += p.string() + "\n";
            }
        }
        else {
            fdf::fail(fdf::ErrorCode::InvalidArgument, "format must be table or svg");
        }
        if (text_out) {
            *text_out = dup_string(result);
        }
    });
}

fdf_status fdf_synth(const char* scenario, uint64_t seed, int n_regions, int n_periods, const char* out_dir)
{
    return guarded([&] {
        require(scenario, "scenario");
        require(out_dir, "out_dir");
        fdf::SynthOptions o;
        o.scenario  = fdf::parse_scenario(scenario);
        o.seed      = seed;
        o.n_regions = n_regions;
        o.n_periods = n_periods;
        fdf::write_synthetic(o, out_dir);
    });
}

fdf_status fdf_flow_aggregate(const int64_t* cells, size_t n, const char* kind, size_t region, size_t partner,
                              int64_t* value, int* is_missing)
{
    return guarded([&] {
        require(cells, "cells");
        require(kind, "kind");
        require(value, "value");
        require(is_missing, "is_missing");
        fdf::FlowMatrix m(fdf::Period{2000, 1}, n);
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) {
                int64_t c = cells[i * n + j];
                if (c >= 0) {
                    m.set(i, j, c);
                }
                else {
                    m.set(i, j, std::nullopt);
                }
            }
        }
        fdf::Count c = fdf::aggregate(m, fdf::parse_flow_aggregate(kind), region, partner);
        *is_missing  = c ? 0 : 1;
        *value       = c ? *c : 0;
    });
}

fdf_status fdf_model_fit(const char* spec_json, const double* X, size_t rows, size_t cols, const double* y,
                         uint64_t seed, fdf_model** out)
{
    return guarded([&] {
        require(spec_json, "spec_json");
        require(out, "out");
        if (rows > 0) {
            require(X, "X");
            require(y, "y");
        }
        nlohmann::json j = nlohmann::json::parse(spec_json, nullptr, false);
        if (j.is_discarded()) {
            fdf::fail(fdf::ErrorCode::InvalidConfig, "spec is not valid JSON");
        }
        fdf::Estimator est{fdf::spec_from_json(j), seed};
        Eigen::VectorXd yv =
            rows > 0 ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(y, static_cast<Eigen::Index>(rows)))
                     : Eigen::VectorXd();
        *out = new fdf_model{est.fit(to_matrix(X, rows, cols), yv)};
    });
}

fdf_status fdf_model_predict(const fdf_model* model, const double* X, size_t rows, size_t cols, double* out)
{
    return guarded([&] {
        require(model, "model");
        require(out, "out");
        if (rows > 0) {
            require(X, "X");
        }
        Eigen::VectorXd p = model->model.predict(to_matrix(X, rows, cols));
        for (size_t i = 0; i < rows; ++i) {
            out[i] = p(static_cast<Eigen::Index>(i));
        }
    });
}

fdf_status fdf_model_to_json(const fdf_model* model, char** json_out)
{
    return guarded([&] {
        require(model, "model");
        require(json_out, "json_out");
        *json_out = dup_string(model->model.to_json().dump());
    });
}

fdf_status fdf_model_from_json(const char* json, fdf_model** out)
{
    return guarded([&] {
        require(json, "json");
        require(out, "out");
        nlohmann::json j = nlohmann::json::parse(json, nullptr, false);
        if (j.is_discarded()) {
            fdf::fail(fdf::ErrorCode::MalformedModel, "model document is not valid JSON");
        }
        *out = new fdf_model{fdf::FittedModel::from_json(j)};
    });
}

void fdf_model_free(fdf_model* model)
{
    delete model;
}

fdf_status fdf_metric(const char* metric, double lambda_over, const double* predictions, const double* actuals,
                      size_t n, double* out)
{
    return guarded([&] {
        require(metric, "metric");
        require(out, "out");
        if (n > 0) {
            require(predictions, "predictions");
            require(actuals, "actuals");
        }
        *out = fdf::evaluate_metric(std::span<const double>(predictions, n), std::span<const double>(actuals, n),
                                    fdf::parse_metric(metric, lambda_over));
    });
}

fdf_status fdf_benchmark_predict(const char* kind, int n, int horizon, const double* history, size_t length,
                                 double* out, int* has_prediction)
{
    return guarded([&] {
        require(kind, "kind");
        require(out, "out");
        require(has_prediction, "has_prediction");
        if (length > 0) {
            require(history, "history");
        }
        if (horizon < 1 || n < 1) {
            fdf::fail(fdf::ErrorCode::InvalidArgument, "n and horizon must be >= 1");
        }
        fdf::BenchmarkSpec spec{fdf::parse_benchmark_kind(kind), n};
        auto v          = fdf::predict_benchmark(std::span<const double>(history, length), spec, horizon);
        *has_prediction = v ? 1 : 0;
        *out            = v ? *v : std::nan("");
    });
}

} // extern "C"
