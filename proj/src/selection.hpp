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
#ifndef FDF_SELECTION_HPP
#define FDF_SELECTION_HPP

#include "metrics.hpp"
#include "model.hpp"
#include "panel.hpp"
#include "scoring.hpp"
#include "splits.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fdf
{

/// A model bound to a panel layout: named predictor columns, their training
/// statistics, and the target transform. Benchmarks carry no fitted state and
/// forecast from the panel's raw target series.
struct PanelModel {
    ModelSpec spec;
    int horizon = 1;
    std::vector<std::string> columns;
    std::vector<ColumnStats> stats;
    TransformState transform;
    std::optional<FittedModel> fitted;

    /// Raw-scale forecasts for `rows`; NaN where no prediction exists.
    std::vector<double> predict(const PanelTable& panel, std::span<const std::size_t> rows) const;

    nlohmann::json to_json() const;
    static PanelModel from_json(const nlohmann::json& j);
};

/// Benchmark forecasts for `rows`: history is the row's region target up to
/// its issuance period. Throws LagShorterThanHorizon.
std::vector<double> benchmark_predictions(const PanelTable& panel, const BenchmarkSpec& spec, int horizon,
                                          std::span<const std::size_t> rows);

/// Fits `spec` on rows whose target period lies in `train` and whose
/// (transformed) target and features are present. Features are standardized
/// with statistics from exactly those rows. Throws InsufficientRows when none.
PanelModel fit_panel_model(const PanelTable& panel, const ModelSpec& spec, std::span<const std::string> columns,
                           const PeriodRange& train, const TargetTransform& transform, std::uint64_t seed,
                           std::vector<std::string>* warnings = nullptr);

/// Every row of `panel` in `range` with an observed target.
std::vector<std::size_t> scorable_rows(const PanelTable& panel, const PeriodRange& range);

struct CvEntry {
    ModelSpec spec;
    std::string key;
    std::vector<double> fold_scores;
    double mean_score = 0.0;
    double mean_nonzero = 0.0;
    bool failed = false;
    std::string failure;
};

struct CvResult {
    std::vector<CvEntry> entries;
    std::size_t best = 0;

    const ModelSpec& best_spec() const
    {
        return entries.at(best).spec;
    }
    nlohmann::json to_json() const;
};

struct CvOptions {
    Metric metric;
    TargetTransform transform;
    std::uint64_t seed = 42;
    /// 0 = FDF_THREADS or hardware concurrency.
    unsigned threads = 0;
};

/// Fits every spec on every fold and scores validation rows on the common
/// support of the surviving specs. Winner: lowest mean score, then fewer mean
/// nonzero parameters, then smallest spec key. Specs that fail on any fold are
/// excluded; AllSpecsFailed when none remain.
CvResult cross_validate(std::span<const ModelSpec> grid, const PanelTable& panel, const SplitPlan& plan,
                        std::span<const std::string> columns, const CvOptions& options);

/// Greedy forward selection by mean validation score; ties go to the smaller
/// column name; stops when nothing improves or `max_features` is reached.
std::vector<std::string> forward_select(std::span<const std::string> candidates, const ModelSpec& spec,
                                        const PanelTable& panel, const SplitPlan& plan, std::size_t max_features,
                                        const CvOptions& options);

/// A model entering the holdout comparison.
struct HoldoutCandidate {
    std::string id;
    ModelSpec spec;
    std::vector<std::string> columns;
};

struct HoldoutResult {
    HorizonScores scores;
    std::vector<PanelModel> models; // aligned with scores.models
};

/// Fits each candidate on target periods <= train_end and scores the train
/// and test partitions separately, each on its own common support. Lag
/// benchmarks with n < h are omitted. Throws EmptyTestPartition.
HoldoutResult holdout_evaluate(const PanelTable& panel, Period train_end, std::span<const HoldoutCandidate> candidates,
                               const CvOptions& options, std::vector<std::string>* warnings = nullptr);

/// Thread count from FDF_THREADS (0 or unset = hardware concurrency).
unsigned default_thread_count();

/// Runs task(i) for i in [0, n) on up to `threads` workers. Results must be
/// written to per-index slots; the first exception is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& task);

} // namespace fdf

#endif // FDF_SELECTION_HPP
