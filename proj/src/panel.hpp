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
#ifndef FDF_PANEL_HPP
#define FDF_PANEL_HPP

#include "flow_data.hpp"
#include "period.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace fdf
{

/// Panel cells use a quiet NaN as the MISSING marker.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v)
{
    return std::isnan(v);
}

enum class TransformKind { Identity, Log1p, PerRegionZscore, PctChange, AlertLabels };

struct TargetTransform {
    TransformKind kind = TransformKind::Identity;
    double threshold   = 0.30; // alert_labels only
};

TransformKind parse_transform_kind(std::string_view name);
std::string_view transform_kind_name(TransformKind kind);

/// What is forecast and how far ahead. For a target period t the issuance
/// period is t - horizon; nothing after it may inform the prediction.
struct ForecastTask {
    int horizon          = 1;
    FlowAggregate target = FlowAggregate::Arrivals;
    /// Destination region for pairwise targets (the panel region is the origin).
    RegionId partner;
    TargetTransform transform;

    Period issuance(Period target_period) const
    {
        return target_period - horizon;
    }
};

struct ColumnMeta {
    std::string source; // "calendar", "target", or the feature table name
    int lag = 0;        // 0: value observed at the row's own target period
    std::string origin_region;
    bool is_missing_flag = false;

    /// True when the value is known at issuance time for every row.
    bool is_predictor() const
    {
        return source == "calendar" || lag >= 1;
    }
};

/// Complete (region x period) grid, region-major. Row r * |periods| + k holds
/// region r at period first + k.
class PanelTable
{
public:
    PanelTable() = default;
    PanelTable(std::vector<RegionId> regions, PeriodRange periods, int horizon);

    std::size_t rows() const
    {
        return regions_.size() * periods_.size();
    }
    std::size_t region_count() const
    {
        return regions_.size();
    }
    std::size_t period_count() const
    {
        return periods_.size();
    }
    const std::vector<RegionId>& regions() const
    {
        return regions_;
    }
    const PeriodRange& periods() const
    {
        return periods_;
    }
    int horizon() const
    {
        return horizon_;
    }

    std::size_t row(std::size_t region, std::size_t period_offset) const
    {
        return region * periods_.size() + period_offset;
    }
    std::size_t region_of(std::size_t row) const
    {
        return row / periods_.size();
    }
    std::size_t period_offset_of(std::size_t row) const
    {
        return row % periods_.size();
    }
    Period period_of(std::size_t row) const
    {
        return periods_.at(period_offset_of(row));
    }

    std::span<const double> target() const
    {
        return target_;
    }
    std::span<double> target()
    {
        return target_;
    }

    std::size_t column_count() const
    {
        return names_.size();
    }
    const std::string& column_name(std::size_t c) const
    {
        return names_.at(c);
    }
    const ColumnMeta& meta(std::size_t c) const
    {
        return meta_.at(c);
    }
    std::optional<std::size_t> find_column(const std::string& name) const;
    /// Throws InvalidArgument when absent.
    std::size_t column_index(const std::string& name) const;
    std::span<const double> column(std::size_t c) const
    {
        return columns_.at(c);
    }
    std::span<double> column(std::size_t c)
    {
        return columns_.at(c);
    }
    /// Throws ColumnCollision when the name is taken.
    std::size_t add_column(const std::string& name, ColumnMeta meta, std::vector<double> values);

    /// Columns whose values are known at issuance (see ColumnMeta::is_predictor).
    std::vector<std::size_t> predictor_columns() const;

    /// Share of MISSING target cells per region, recorded at assembly.
    std::vector<double> target_missing_proportion;

private:
    std::vector<RegionId> regions_;
    PeriodRange periods_;
    int horizon_ = 1;
    std::vector<double> target_;
    std::vector<std::string> names_;
    std::vector<ColumnMeta> meta_;
    std::vector<std::vector<double>> columns_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Contextual indicators keyed by (region, period). Empty CSV cells are MISSING.
struct FeatureTable {
    std::string source;
    std::vector<std::string> names;
    struct Row {
        RegionId region;
        Period period;
        std::vector<double> values;
    };
    std::vector<Row> rows;
};

/// `period,region,<feature>...`; duplicate (region, period) keys are MalformedRow.
FeatureTable parse_feature_table(const CsvTable& table, const RegionRegistry& registry, std::string source);
FeatureTable load_feature_table(const std::filesystem::path& path, const RegionRegistry& registry);
/// `incidents` and `fatalities` columns from bucketed events.
FeatureTable event_feature_table(std::span<const EventBucket> buckets, const RegionRegistry& registry,
                                 const PeriodRange& range);

struct AssembleOptions {
    bool zero_as_missing = true;
    Period epoch{2010, 1};
};

/// Full grid over the matrices' periods: target via the task's aggregation
/// (masked per `zero_as_missing`), feature-table values at the row's own
/// period, and calendar columns (region and month one-hots, months since epoch).
PanelTable assemble_panel(std::span<const FlowMatrix> matrices, std::span<const FeatureTable> features,
                          const RegionRegistry& registry, const ForecastTask& task,
                          const AssembleOptions& options = {});

/// target_lag_k at target period t = target at (t - h) - (k - 1).
PanelTable add_target_lags(const PanelTable& panel, std::span<const int> lags, const ForecastTask& task);
/// <column>_lag_k with the same indexing as add_target_lags.
PanelTable add_feature_lags(const PanelTable& panel, std::span<const std::string> columns, std::span<const int> lags,
                            const ForecastTask& task);

enum class NeighborMode { Adjacent, All };

/// <column>_from_<region> holding that region's value on the same row period.
/// Cells for non-neighbours (and the region itself) are MISSING.
PanelTable add_neighbor_features(const PanelTable& panel, const RegionRegistry& registry,
                                 std::span<const std::string> columns, NeighborMode mode);

/// <column>_missing in {0, 1}; source values untouched.
PanelTable add_missingness_flags(const PanelTable& panel, std::span<const std::string> columns);

/// Per region, carry the last earlier non-missing value forward; leading gaps become 0.
PanelTable impute_forward_fill(const PanelTable& panel, std::span<const std::string> columns);

struct TransformState {
    TargetTransform transform;
    std::size_t period_count = 0;
    std::vector<double> region_mean; // per_region_zscore
    std::vector<double> region_sd;
    std::vector<double> base;        // pct_change: previous-period target per row
};

struct TransformedPanel {
    PanelTable panel;
    TransformState state;
};

/// Rewrites the target column. z-score statistics come from rows inside
/// `train_range` only; a region with zero spread uses sd = 1.
TransformedPanel transform_target(const PanelTable& panel, const TargetTransform& transform,
                                  const PeriodRange& train_range);
/// Maps predictions for the given panel rows back to the raw scale.
/// Throws NonInvertibleTransform for alert labels.
std::vector<double> inverse_transform(std::span<const double> predictions, std::span<const std::size_t> rows,
                                      const TransformState& state);

enum class AlertLabel { LargeDecrease = -1, LittleChange = 0, LargeIncrease = 1 };

std::string_view alert_label_name(AlertLabel label);
/// Percentage change against the previous period; |pct| == threshold is LittleChange.
std::optional<AlertLabel> classify_change(double previous, double current, double threshold);
std::vector<std::optional<AlertLabel>> derive_alert_labels(const PanelTable& panel, double threshold);

struct ColumnStats {
    double mean = 0.0;
    double sd   = 0.0; // population (divide-by-n)
};

/// Mean and population sd of non-missing values at `rows`.
ColumnStats compute_column_stats(std::span<const double> values, std::span<const std::size_t> rows);
/// (x - mean) / sd, or 0 when sd == 0. MISSING stays MISSING.
inline double standardize_value(double x, const ColumnStats& s)
{
    if (is_missing(x)) {
        return x;
    }
    return s.sd > 0.0 ? (x - s.mean) / s.sd : 0.0;
}

struct StandardizedPanel {
    PanelTable panel;
    std::vector<std::string> columns;
    std::vector<ColumnStats> stats;
};

/// Standardizes `columns` (all non-flag columns when empty) with statistics
/// from rows whose period lies in `train_range`.
StandardizedPanel standardize_features(const PanelTable& panel, const PeriodRange& train_range,
                                       std::span<const std::string> columns = {});

/// Rows whose period lies in `range`, in row order.
std::vector<std::size_t> rows_in_range(const PanelTable& panel, const PeriodRange& range);

/// CSV: region, period, target, non-flag columns alphabetically, then flag columns alphabetically.
std::string export_panel_csv(const PanelTable& panel);

} // namespace fdf

#endif // FDF_PANEL_HPP
