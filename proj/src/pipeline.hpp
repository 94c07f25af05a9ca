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
#ifndef FDF_PIPELINE_HPP
#define FDF_PIPELINE_HPP

#include "config.hpp"
#include "panel.hpp"
#include "scoring.hpp"
#include "selection.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace fdf
{

struct LoadedInputs {
    RegionRegistry registry;
    PeriodRange periods;
    std::vector<FlowMatrix> matrices;
    std::vector<FeatureTable> features;
    std::vector<std::filesystem::path> files; // every input read, in config order
    std::vector<std::string> warnings;
};

LoadedInputs load_inputs(const PipelineConfig& config);

/// Assembles the panel for one horizon and engineers lags, neighbor copies,
/// missingness flags and forward fill as configured.
PanelTable build_panel(const LoadedInputs& inputs, const PipelineConfig& config, int horizon);

/// Names of the columns models may use: calendar columns and lagged ones.
std::vector<std::string> model_columns(const PanelTable& panel);

/// Last training period: evaluation.train_end, or the last period minus a
/// fifth of the range (at least one period held out).
Period resolve_train_end(const PipelineConfig& config, const PeriodRange& periods);

SplitPlan make_plan(const PipelineConfig& config, const PeriodRange& train_periods);

struct RunOptions {
    std::filesystem::path out_dir; // empty: config output_dir
    unsigned threads = 0;
};

struct RunResult {
    std::vector<std::filesystem::path> outputs;
    std::vector<std::string> warnings;
};

/// panel_h<h>.csv per horizon, alerts.csv, flow_proportions.csv, manifest.json.
RunResult run_ingest(const PipelineConfig& config, const RunOptions& options = {});
/// cv.json and models/h<h>/<id>.json, manifest.json.
RunResult run_train(const PipelineConfig& config, const RunOptions& options = {});
/// Everything run_train writes plus report.json and report.csv.
RunResult run_evaluate(const PipelineConfig& config, const RunOptions& options = {});

/// CV selection on the training partition followed by holdout scoring.
ScoreReport build_report(const PipelineConfig& config, const LoadedInputs& inputs, unsigned threads,
                         std::vector<std::vector<PanelModel>>* models, std::vector<std::string>* warnings);

std::string report_model_label(const std::string& id, const ModelSpec& spec);

} // namespace fdf

#endif // FDF_PIPELINE_HPP
