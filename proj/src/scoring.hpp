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
#ifndef FDF_SCORING_HPP
#define FDF_SCORING_HPP

#include "metrics.hpp"
#include "period.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fdf
{

/// Per-observation forecasts of one model; NaN marks NO_PREDICTION.
struct ModelPredictions {
    std::string model;
    std::vector<double> values;
};

/// Sorted indices (restricted to `candidates` when non-empty) where every model
/// predicted and the actual is observed. Throws NoCommonSupport when empty.
std::vector<std::size_t> common_support(std::span<const ModelPredictions> predictions,
                                        std::span<const double> actuals,
                                        std::span<const std::size_t> candidates = {});

struct ScoreTable {
    std::vector<std::string> models;
    std::vector<double> overall;
    std::size_t support               = 0;
    std::size_t excluded_zero_actuals = 0; // MAPE only
    std::vector<std::string> regions;      // regions with at least one supported row
    std::vector<std::size_t> region_support;
    std::vector<std::vector<double>> by_region; // [model][region]
};

/// Scores every model on the same common-support set; per-region scores
/// restrict that set to the region's rows. `region_of[i]` indexes
/// `region_names`. Under MAPE, zero actuals are dropped and counted.
ScoreTable score_models(std::span<const ModelPredictions> predictions, std::span<const double> actuals,
                        std::span<const std::size_t> region_of, std::span<const std::string> region_names,
                        const Metric& metric, std::span<const std::size_t> candidates = {});

/// Ascending ranks 1..M; tied scores share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> scores);

struct Score {
    double value      = 0.0;
    std::size_t support = 0;
};

struct ReportModel {
    std::string id;     // e.g. "lag_1", "ridge"
    std::string label;  // e.g. "1-month lag", "Ridge Regression"
    std::string family; // "benchmark", "ridge", ...
};

struct HorizonScores {
    int horizon = 1;
    std::vector<std::string> models;               // ids present at this horizon
    std::vector<nlohmann::json> selected_specs;    // per model
    std::vector<Score> train;                      // per model
    std::vector<Score> test;                       // per model
    std::vector<std::string> regions;              // regions with test support
    std::vector<std::size_t> region_support;
    std::vector<std::vector<double>> region_scores; // [model][region], test partition
    std::vector<std::vector<double>> ranks;         // [region][model]
    std::vector<double> actual;                     // per panel row
    std::vector<std::vector<double>> predictions;   // [model][panel row]
    nlohmann::json cv = nlohmann::json::object();
};

/// Models x horizons x {train, test}, per-region test scores and ranks, and
/// the series needed to redraw forecasts without re-training.
struct ScoreReport {
    int schema_version = 1;
    std::string toolkit_version;
    Metric metric;
    std::uint64_t seed = 0;
    PeriodRange periods;
    PeriodRange train;
    PeriodRange test;
    std::vector<std::string> regions;
    std::vector<ReportModel> models;
    std::vector<HorizonScores> horizons;

    const ReportModel* find_model(const std::string& id) const;

    nlohmann::json to_json() const;
    /// Throws MalformedReport.
    static ScoreReport from_json(const nlohmann::json& j);
    /// `model,horizon,region,metric,partition,score,support_n,rank`
    std::string to_csv() const;
};

inline constexpr int kReportSchemaVersion = 1;

/// Fills `ranks` from `region_scores`.
void rank_by_region(HorizonScores& scores);

} // namespace fdf

#endif // FDF_SCORING_HPP
