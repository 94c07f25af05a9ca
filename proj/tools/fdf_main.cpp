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

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

namespace
{

int report_failure(fdf_status status)
{
    std::cerr << fdf_last_error_json() << '\n';
    return static_cast<int>(status);
}

struct ConfigHandle {
    fdf_config* ptr = nullptr;
    ~ConfigHandle()
    {
        fdf_config_free(ptr);
    }
};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Forecasting toolkit for regional displacement flows", "fdf"};
    app.require_subcommand(1);
    app.set_version_flag("--version", fdf_version());

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::string format = "table";
    std::string report_path;
    std::string scenario = "seasonal";
    std::uint64_t synth_seed = 42;
    int regions = 18;
    int periods = 120;

    auto add_run = [&](const char* name, const char* help) {
        auto* cmd = app.add_subcommand(name, help);
        cmd->add_option("--config", config_path, "Pipeline config (JSON)")->required();
        cmd->add_option("--out", out_dir, "Output directory (overrides the config)");
        cmd->add_option("--seed", seed, "Model seed (overrides the config)");
        return cmd;
    };
    auto* ingest   = add_run("ingest", "Validate inputs and write the engineered panel");
    auto* train    = add_run("train", "Select hyperparameters by CV and fit models");
    auto* evaluate = add_run("evaluate", "Train, then score the holdout partition");

    auto* report = app.add_subcommand("report", "Render a score report as a table or SVG plots");
    auto* report_config = report->add_option("--config", config_path, "Pipeline config; reads <out>/report.json");
    auto* report_file   = report->add_option("--report", report_path, "Report JSON to render");
    report_config->excludes(report_file);
    report->add_option("--out", out_dir, "Output directory");
    report->add_option("--format", format, "table or svg")->check(CLI::IsMember({"table", "svg"}));
    report->add_option("--seed", seed, "Ignored; accepted for uniformity");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset with a ready-to-run config");
    synth->add_option("--scenario", scenario, "seasonal, feature_driven or bursty")
        ->check(CLI::IsMember({"seasonal", "feature_driven", "bursty"}));
    synth->add_option("--seed", synth_seed, "Generator seed");
    synth->add_option("--regions", regions, "Number of regions (>= 2)");
    synth->add_option("--periods", periods, "Number of months (>= 24)");
    synth->add_option("--out", out_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (synth->parsed()) {
        fdf_status s = fdf_synth(scenario.c_str(), synth_seed, regions, periods, out_dir.c_str());
        return s == FDF_OK ? 0 : report_failure(s);
    }

    if (report->parsed()) {
        std::filesystem::path out = out_dir;
        if (report_path.empty()) {
            if (config_path.empty()) {
                std::cerr << "report needs --config or --report\n";
                return 2;
            }
            ConfigHandle cfg;
            if (fdf_status s = fdf_config_load(config_path.c_str(), &cfg.ptr); s != FDF_OK) {
                return report_failure(s);
            }
            if (!out_dir.empty()) {
                fdf_config_set_output_dir(cfg.ptr, out_dir.c_str());
            }
            out         = fdf_config_output_dir(cfg.ptr);
            report_path = (out / "report.json").string();
        }
        else if (out.empty()) {
            out = std::filesystem::path(report_path).parent_path();
        }
        std::filesystem::path target = format == "svg" ? out / "plots" : out;
        char* text                   = nullptr;
        fdf_status s = fdf_render_report(report_path.c_str(), format.c_str(), target.string().c_str(), &text);
        if (s != FDF_OK) {
            return report_failure(s);
        }
        std::fputs(text, stdout);
        fdf_string_free(text);
        return 0;
    }

    ConfigHandle cfg;
    if (fdf_status s = fdf_config_load(config_path.c_str(), &cfg.ptr); s != FDF_OK) {
        return report_failure(s);
    }
    if (!out_dir.empty()) {
        fdf_config_set_output_dir(cfg.ptr, out_dir.c_str());
    }
    if (seed) {
        fdf_config_set_seed(cfg.ptr, *seed);
    }
    fdf_status s = FDF_OK;
    if (ingest->parsed()) {
        s = fdf_run_ingest(cfg.ptr);
    }
    else if (train->parsed()) {
        s = fdf_run_train(cfg.ptr);
    }
    else if (evaluate->parsed()) {
        s = fdf_run_evaluate(cfg.ptr);
    }
    if (s != FDF_OK) {
        return report_failure(s);
    }
    std::cout << "wrote " << fdf_config_output_dir(cfg.ptr) << '\n';
    return 0;
}
