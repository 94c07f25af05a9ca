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
#ifndef FDF_CONFIG_HPP
#define FDF_CONFIG_HPP

#include "metrics.hpp"
#include "model.hpp"
#include "panel.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fdf
{

enum class CvKind { Expanding, Sliding };

struct PathsConfig {
    std::filesystem::path flows;
    std::filesystem::path regions;
    std::optional<std::filesystem::path> adjacency;
    std::optional<std::filesystem::path> distances;
    std::optional<std::filesystem::path> events;
    std::vector<std::filesystem::path> features;
};

struct TaskConfig {
    FlowAggregate target = FlowAggregate::Arrivals;
    RegionId partner;
    std::vector<int> horizons{1};
    TargetTransform transform;
};

struct PanelConfig {
    bool zero_as_missing = true;
    std::vector<int> target_lags{1, 2, 3, 6, 12};
    std::vector<int> feature_lags{1};
    /// Neighbor features: "none", "adjacent" or "all".
    std::optional<NeighborMode> neighbor_mode;
    /// Base columns ("target" or feature names) whose lags get neighbor copies.
    std::vector<std::string> neighbor_columns{"target"};
    bool missingness_flags = true;
    bool impute            = true;
    Period epoch{2010, 1};
    std::optional<PeriodRange> periods;
};

/// One entry of the comparison: a fixed spec or a family grid chosen by CV.
struct ModelEntry {
    std::string id;
    std::vector<ModelSpec> grid;
};

struct ModelsConfig {
    std::uint64_t seed = 42;
    std::vector<ModelEntry> entries;
};

struct EvaluationConfig {
    CvKind cv      = CvKind::Expanding;
    int k          = 5;
    int min_train  = 24;
    int train_len  = 24;
    Metric metric;
    std::optional<Period> train_end;
    std::size_t forward_selection = 0; // max features; 0 disables
};

struct PipelineConfig {
    int schema_version = 1;
    std::filesystem::path base_dir;
    std::filesystem::path output_dir;
    PathsConfig paths;
    TaskConfig task;
    PanelConfig panel;
    ModelsConfig models;
    EvaluationConfig evaluation;
    std::string source_text; // raw document, hashed into manifests
};

inline constexpr int kConfigSchemaVersion = 1;

/// Parses a config document; relative paths resolve against `base_dir`.
/// Throws InvalidConfig.
PipelineConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);

std::string_view cv_kind_name(CvKind kind);

} // namespace fdf

#endif // FDF_CONFIG_HPP
