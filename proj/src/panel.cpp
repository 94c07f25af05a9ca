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
#include "panel.hpp"

#include "error.hpp"

#include <algorithm>
#include <map>

namespace fdf
{

TransformKind parse_transform_kind(std::string_view name)
{
    if (name == "identity") return TransformKind::Identity;
    if (name == "log1p") return TransformKind::Log1p;
    if (name == "per_region_zscore") return TransformKind::PerRegionZscore;
    if (name == "pct_change") return TransformKind::PctChange;
    if (name == "alert_labels") return TransformKind::AlertLabels;
    fail(ErrorCode::InvalidArgument, "unknown target transform '" + std::string(name) + "'");
}

std::string_view transform_kind_name(TransformKind kind)
{
    switch (kind) {
    case TransformKind::Identity: return "identity";
    case TransformKind::Log1p: return "log1p";
    case TransformKind::PerRegionZscore: return "per_region_zscore";
    case TransformKind::PctChange: return "pct_change";
    case TransformKind::AlertLabels: return "alert_labels";
    }
    return "identity";
}

PanelTable::PanelTable(std::vector<RegionId> regions, PeriodRange periods, int horizon)
    : regions_(std::move(regions))
    , periods_(periods)
    , horizon_(horizon)
    , target_(regions_.size() * periods_.size(), kMissing)
{
    if (regions_.empty()) {
        fail(ErrorCode::EmptyRegistry, "panel needs at least one region");
    }
    if (horizon < 1) {
        fail(ErrorCode::InvalidArgument, "forecast horizon must be >= 1");
    }
}

std::optional<std::size_t> PanelTable::find_column(const std::string& name) const
{
    auto it = index_.find(name);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::size_t PanelTable::column_index(const std::string& name) const
{
    auto c = find_column(name);
    if (!c) {
        fail(ErrorCode::InvalidArgument, "panel has no column '" + name + "'");
    }
    return *c;
}

std::size_t PanelTable::add_column(const std::string& name, ColumnMeta meta, std::vector<double> values)
{
    if (name == "target" || name == "region" || name == "period" || index_.contains(name)) {
        fail(ErrorCode::ColumnCollision, "column '" + name + "' already exists");
    }
    if (values.size() != rows()) {
        fail(ErrorCode::LengthMismatch, "column '" + name + "' has " + std::to_string(values.size()) +
                                            " values for " + std::to_string(rows()) + " rows");
    }
    index_.emplace(name, names_.size());
    names_.push_back(name);
    meta_.push_back(std::move(meta));
    columns_.push_back(std::move(values));
    return names_.size() - 1;
}

std::vector<std::size_t> PanelTable::predictor_columns() const
{
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < meta_.size(); ++c) {
        if (meta_[c].is_predictor()) {
            out.push_back(c);
        }
    }
    return out;
}

FeatureTable parse_feature_table(const CsvTable& table, const RegionRegistry& registry, std::string source)
{
    if (table.header.size() < 2 || table.header[0] != "period" || table.header[1] != "region") {
        fail(ErrorCode::MalformedRow, table.source + ": header must start with 'period,region'");
    }
    FeatureTable out;
    out.source = std::move(source);
    out.names.assign(table.header.begin() + 2, table.header.end());
    std::map<std::pair<std::size_t, long>, std::size_t> seen;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        std::string where = table.source + " line " + std::to_string(table.line_numbers[r]);
        FeatureTable::Row fr;
        try {
            fr.period = parse_period(row[0]);
        }
        catch (const Error& e) {
            fail(ErrorCode::MalformedRow, where + ": " + e.what());
        }
        auto region = registry.find(row[1]);
        if (!region) {
            fail(ErrorCode::UnknownRegion, where + ": unknown region '" + row[1] + "'");
        }
        if (!seen.emplace(std::make_pair(*region, fr.period.ordinal()), r).second) {
            fail(ErrorCode::MalformedRow, where + ": duplicate (region, period) key");
        }
        fr.region = row[1];
        for (std::size_t c = 2; c < row.size(); ++c) {
            if (row[c].empty()) {
                fr.values.push_back(kMissing);
                continue;
            }
            auto v = try_parse_double(row[c]);
            if (!v) {
                fail(ErrorCode::MalformedRow, where + ": '" + row[c] + "' in column " + table.header[c] +
                                                  " is not a number");
            }
            fr.values.push_back(*v);
        }
        out.rows.push_back(std::move(fr));
    }
    return out;
}

FeatureTable load_feature_table(const std::filesystem::path& path, const RegionRegistry& registry)
{
    return parse_feature_table(read_csv(path), registry, path.stem().string());
}

FeatureTable event_feature_table(std::span<const EventBucket> buckets, const RegionRegistry& registry,
                                 const PeriodRange& range)
{
    FeatureTable out;
    out.source = "events";
    out.names  = {"incidents", "fatalities"};
    for (std::size_t r = 0; r < registry.size(); ++r) {
        for (std::size_t k = 0; k < range.size(); ++k) {
            const auto& b = buckets[r * range.size() + k];
            out.rows.push_back({registry.name(r), range.at(k),
                                {static_cast<double>(b.incidents), static_cast<double>(b.fatalities)}});
        }
    }
    return out;
}

PanelTable assemble_panel(std::span<const FlowMatrix> matrices, std::span<const FeatureTable> features,
                          const RegionRegistry& registry, const ForecastTask& task, const AssembleOptions& options)
{
    if (registry.empty()) {
        fail(ErrorCode::EmptyRegistry, "registry has no regions");
    }
    if (matrices.empty()) {
        fail(ErrorCode::EmptyPeriodRange, "no flow matrices to assemble");
    }
    PeriodRange range(matrices.front().period(), matrices.back().period());
    if (range.size() != matrices.size()) {
        fail(ErrorCode::InvalidArgument, "flow matrices must cover contiguous months");
    }
    for (std::size_t k = 0; k < matrices.size(); ++k) {
        if (matrices[k].period() != range.at(k) || matrices[k].dimension() != registry.size()) {
            fail(ErrorCode::InvalidArgument, "flow matrix " + std::to_string(k) +
                                                 " does not match the registry or the monthly calendar");
        }
    }

    PanelTable panel(registry.regions(), range, task.horizon);
    const std::size_t n_periods = range.size();
    std::size_t partner         = 0;
    if (task.target == FlowAggregate::Pairwise) {
        partner = registry.index_of(task.partner);
    }

    panel.target_missing_proportion.resize(registry.size());
    for (std::size_t r = 0; r < registry.size(); ++r) {
        std::vector<std::optional<double>> series(n_periods);
        for (std::size_t k = 0; k < n_periods; ++k) {
            Count c = aggregate(matrices[k], task.target, r, partner);
            if (c) {
                series[k] = static_cast<double>(*c);
            }
        }
        MaskedSeries masked = apply_missingness(series, options.zero_as_missing);
        panel.target_missing_proportion[r] = masked.missing_proportion;
        for (std::size_t k = 0; k < n_periods; ++k) {
            panel.target()[panel.row(r, k)] = masked.values[k] ? *masked.values[k] : kMissing;
        }
    }

    for (const auto& table : features) {
        std::vector<std::vector<double>> values(table.names.size(), std::vector<double>(panel.rows(), kMissing));
        for (const auto& fr : table.rows) {
            if (!range.contains(fr.period)) {
                continue;
            }
            std::size_t row = panel.row(registry.index_of(fr.region), static_cast<std::size_t>(range.offset(fr.period)));
            for (std::size_t c = 0; c < table.names.size() && c < fr.values.size(); ++c) {
                values[c][row] = fr.values[c];
            }
        }
        for (std::size_t c = 0; c < table.names.size(); ++c) {
            panel.add_column(table.names[c], ColumnMeta{table.source, 0, "", false}, std::move(values[c]));
        }
    }

    const ColumnMeta calendar{"calendar", 0, "", false};
    for (std::size_t r = 0; r < registry.size(); ++r) {
        std::vector<double> v(panel.rows(), 0.0);
        for (std::size_t k = 0; k < n_periods; ++k) {
            v[panel.row(r, k)] = 1.0;
        }
        panel.add_column("region_" + registry.name(r), calendar, std::move(v));
    }
    for (int m = 1; m <= 12; ++m) {
        std::vector<double> v(panel.rows(), 0.0);
        for (std::size_t row = 0; row < panel.rows(); ++row) {
            v[row] = panel.period_of(row).month == m ? 1.0 : 0.0;
        }
        panel.add_column("month_" + std::to_string(m), calendar, std::move(v));
    }
    std::vector<double> since(panel.rows());
    for (std::size_t row = 0; row < panel.rows(); ++row) {
        since[row] = static_cast<double>(panel.period_of(row) - options.epoch);
    }
    panel.add_column("months_since_epoch", calendar, std::move(since));
    return panel;
}

namespace
{

/// Value of `source` for the same region, `back` periods before the row, or MISSING.
std::vector<double> shifted(const PanelTable& panel, std::span<const double> source, long back)
{
    std::vector<double> out(panel.rows(), kMissing);
    const long n = static_cast<long>(panel.period_count());
    for (std::size_t r = 0; r < panel.region_count(); ++r) {
        for (long k = 0; k < n; ++k) {
            long from = k - back;
            if (from >= 0 && from < n) {
                out[panel.row(r, static_cast<std::size_t>(k))] =
                    source[panel.row(r, static_cast<std::size_t>(from))];
            }
        }
    }
    return out;
}

void check_lags(std::span<const int> lags, const ForecastTask& task, const PanelTable& panel)
{
    if (task.horizon != panel.horizon()) {
        fail(ErrorCode::InvalidArgument, "task horizon does not match the panel horizon");
    }
    for (int k : lags) {
        if (k < 1) {
            fail(ErrorCode::InvalidArgument, "lags must be >= 1");
        }
    }
}

} // namespace

PanelTable add_target_lags(const PanelTable& panel, std::span<const int> lags, const ForecastTask& task)
{
    check_lags(lags, task, panel);
    PanelTable out = panel;
    for (int k : lags) {
        out.add_column("target_lag_" + std::to_string(k), ColumnMeta{"target", k, "", false},
                       shifted(panel, panel.target(), task.horizon + k - 1));
    }
    return out;
}

PanelTable add_feature_lags(const PanelTable& panel, std::span<const std::string> columns, std::span<const int> lags,
                            const ForecastTask& task)
{
    check_lags(lags, task, panel);
    PanelTable out = panel;
    for (const auto& name : columns) {
        std::size_t c = panel.column_index(name);
        for (int k : lags) {
            ColumnMeta meta = panel.meta(c);
            meta.lag        = k;
            meta.is_missing_flag = false;
            out.add_column(name + "_lag_" + std::to_string(k), meta,
                           shifted(panel, panel.column(c), task.horizon + k - 1));
        }
    }
    return out;
}

PanelTable add_neighbor_features(const PanelTable& panel, const RegionRegistry& registry,
                                 std::span<const std::string> columns, NeighborMode mode)
{
    if (registry.regions() != panel.regions()) {
        fail(ErrorCode::InvalidArgument, "registry does not match the panel regions");
    }
    if (mode == NeighborMode::Adjacent && !registry.has_adjacency()) {
        fail(ErrorCode::MissingAdjacency, "neighbor mode 'adjacent' needs adjacency data");
    }
    const std::size_t n_regions = panel.region_count();
    const std::size_t n_periods = panel.period_count();
    auto linked = [&](std::size_t r, std::size_t other) {
        return r != other && (mode == NeighborMode::All || registry.adjacent(r, other));
    };

    PanelTable out = panel;
    for (const auto& name : columns) {
        std::size_t c = panel.column_index(name);
        auto src      = panel.column(c);
        for (std::size_t other = 0; other < n_regions; ++other) {
            bool used = false;
            std::vector<double> v(panel.rows(), kMissing);
            for (std::size_t r = 0; r < n_regions; ++r) {
                if (!linked(r, other)) {
                    continue;
                }
                used = true;
                for (std::size_t k = 0; k < n_periods; ++k) {
                    v[panel.row(r, k)] = src[panel.row(other, k)];
                }
            }
            if (!used) {
                continue;
            }
            ColumnMeta meta      = panel.meta(c);
            meta.origin_region   = registry.name(other);
            meta.is_missing_flag = false;
            out.add_column(name + "_from_" + registry.name(other), meta, std::move(v));
        }
    }
    return out;
}

PanelTable add_missingness_flags(const PanelTable& panel, std::span<const std::string> columns)
{
    PanelTable out = panel;
    for (const auto& name : columns) {
        std::size_t c = panel.column_index(name);
        auto src      = panel.column(c);
        std::vector<double> flags(panel.rows());
        for (std::size_t row = 0; row < panel.rows(); ++row) {
            flags[row] = is_missing(src[row]) ? 1.0 : 0.0;
        }
        ColumnMeta meta      = panel.meta(c);
        meta.is_missing_flag = true;
        out.add_column(name + "_missing", meta, std::move(flags));
    }
    return out;
}

PanelTable impute_forward_fill(const PanelTable& panel, std::span<const std::string> columns)
{
    PanelTable out = panel;
    for (const auto& name : columns) {
        auto col = out.column(out.column_index(name));
        for (std::size_t r = 0; r < out.region_count(); ++r) {
            double last = kMissing;
            for (std::size_t k = 0; k < out.period_count(); ++k) {
                double& cell = col[out.row(r, k)];
                if (is_missing(cell)) {
                    cell = is_missing(last) ? 0.0 : last;
                }
                else {
                    last = cell;
                }
            }
        }
    }
    return out;
}

std::vector<std::size_t> rows_in_range(const PanelTable& panel, const PeriodRange& range)
{
    std::vector<std::size_t> out;
    for (std::size_t row = 0; row < panel.rows(); ++row) {
        if (range.contains(panel.period_of(row))) {
            out.push_back(row);
        }
    }
    return out;
}

namespace
{

double previous_target(const PanelTable& panel, std::size_t row)
{
    std::size_t k = panel.period_offset_of(row);
    return k == 0 ? kMissing : panel.target()[row - 1];
}

} // namespace

TransformedPanel transform_target(const PanelTable& panel, const TargetTransform& transform,
                                  const PeriodRange& train_range)
{
    TransformedPanel out{panel, {}};
    out.state.transform    = transform;
    out.state.period_count = panel.period_count();
    auto target            = out.panel.target();
    const auto raw         = panel.target();

    switch (transform.kind) {
    case TransformKind::Identity:
        break;
    case TransformKind::Log1p:
        for (double& y : target) {
            if (!is_missing(y)) {
                y = y > -1.0 ? std::log1p(y) : kMissing;
            }
        }
        break;
    case TransformKind::PerRegionZscore: {
        auto train = rows_in_range(panel, train_range);
        out.state.region_mean.assign(panel.region_count(), 0.0);
        out.state.region_sd.assign(panel.region_count(), 1.0);
        std::vector<std::vector<std::size_t>> by_region(panel.region_count());
        for (std::size_t row : train) {
            by_region[panel.region_of(row)].push_back(row);
        }
        for (std::size_t r = 0; r < panel.region_count(); ++r) {
            ColumnStats s = compute_column_stats(raw, by_region[r]);
            out.state.region_mean[r] = s.mean;
            out.state.region_sd[r]   = s.sd > 0.0 ? s.sd : 1.0;
        }
        for (std::size_t row = 0; row < panel.rows(); ++row) {
            std::size_t r = panel.region_of(row);
            if (!is_missing(target[row])) {
                target[row] = (raw[row] - out.state.region_mean[r]) / out.state.region_sd[r];
            }
        }
        break;
    }
    case TransformKind::PctChange:
        out.state.base.assign(panel.rows(), kMissing);
        for (std::size_t row = 0; row < panel.rows(); ++row) {
            double prev         = previous_target(panel, row);
            out.state.base[row] = prev;
            target[row] = (is_missing(prev) || prev == 0.0 || is_missing(raw[row])) ? kMissing
                                                                                    : (raw[row] - prev) / prev;
        }
        break;
    case TransformKind::AlertLabels: {
        if (!(transform.threshold > 0.0)) {
            fail(ErrorCode::InvalidArgument, "alert threshold must be > 0");
        }
        auto labels = derive_alert_labels(panel, transform.threshold);
        for (std::size_t row = 0; row < panel.rows(); ++row) {
            target[row] = labels[row] ? static_cast<double>(static_cast<int>(*labels[row])) : kMissing;
        }
        break;
    }
    }
    return out;
}

std::vector<double> inverse_transform(std::span<const double> predictions, std::span<const std::size_t> rows,
                                      const TransformState& state)
{
    if (predictions.size() != rows.size()) {
        fail(ErrorCode::LengthMismatch, "inverse_transform: predictions and rows differ in length");
    }
    std::vector<double> out(predictions.begin(), predictions.end());
    switch (state.transform.kind) {
    case TransformKind::Identity:
        break;
    case TransformKind::Log1p:
        for (double& v : out) {
            v = std::expm1(v);
        }
        break;
    case TransformKind::PerRegionZscore:
        for (std::size_t i = 0; i < out.size(); ++i) {
            std::size_t r = rows[i] / state.period_count;
            out[i]        = out[i] * state.region_sd.at(r) + state.region_mean.at(r);
        }
        break;
    case TransformKind::PctChange:
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = state.base.at(rows[i]) * (1.0 + out[i]);
        }
        break;
    case TransformKind::AlertLabels:
        fail(ErrorCode::NonInvertibleTransform, "alert labels cannot be mapped back to counts");
    }
    return out;
}

std::string_view alert_label_name(AlertLabel label)
{
    switch (label) {
    case AlertLabel::LargeDecrease: return "LargeDecrease";
    case AlertLabel::LittleChange: return "LittleChange";
    case AlertLabel::LargeIncrease: return "LargeIncrease";
    }
    return "LittleChange";
}

std::optional<AlertLabel> classify_change(double previous, double current, double threshold)
{
    if (is_missing(previous) || is_missing(current) || previous == 0.0) {
        return std::nullopt;
    }
    double pct = (current - previous) / previous;
    if (pct > threshold) {
        return AlertLabel::LargeIncrease;
    }
    if (pct < -threshold) {
        return AlertLabel::LargeDecrease;
    }
    return AlertLabel::LittleChange;
}

std::vector<std::optional<AlertLabel>> derive_alert_labels(const PanelTable& panel, double threshold)
{
    if (!(threshold > 0.0)) {
        fail(ErrorCode::InvalidArgument, "alert threshold must be > 0");
    }
    std::vector<std::optional<AlertLabel>> out(panel.rows());
    for (std::size_t row = 0; row < panel.rows(); ++row) {
        out[row] = classify_change(previous_target(panel, row), panel.target()[row], threshold);
    }
    return out;
}

ColumnStats compute_column_stats(std::span<const double> values, std::span<const std::size_t> rows)
{
    double sum    = 0.0;
    std::size_t n = 0;
    for (std::size_t row : rows) {
        if (!is_missing(values[row])) {
            sum += values[row];
            ++n;
        }
    }
    ColumnStats s;
    if (n == 0) {
        return s;
    }
    s.mean    = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t row : rows) {
        if (!is_missing(values[row])) {
            double d = values[row] - s.mean;
            ss += d * d;
        }
    }
    s.sd = std::sqrt(ss / static_cast<double>(n));
    return s;
}

StandardizedPanel standardize_features(const PanelTable& panel, const PeriodRange& train_range,
                                       std::span<const std::string> columns)
{
    auto train = rows_in_range(panel, train_range);
    if (train.empty()) {
        fail(ErrorCode::InvalidArgument, "standardization needs a non-empty training range inside the panel");
    }
    StandardizedPanel out{panel, {}, {}};
    if (columns.empty()) {
        for (std::size_t c = 0; c < panel.column_count(); ++c) {
            if (!panel.meta(c).is_missing_flag) {
                out.columns.push_back(panel.column_name(c));
            }
        }
    }
    else {
        out.columns.assign(columns.begin(), columns.end());
    }
    for (const auto& name : out.columns) {
        std::size_t c = panel.column_index(name);
        ColumnStats s = compute_column_stats(panel.column(c), train);
        for (double& v : out.panel.column(c)) {
            v = standardize_value(v, s);
        }
        out.stats.push_back(s);
    }
    return out;
}

std::string export_panel_csv(const PanelTable& panel)
{
    std::vector<std::size_t> values, flags;
    for (std::size_t c = 0; c < panel.column_count(); ++c) {
        (panel.meta(c).is_missing_flag ? flags : values).push_back(c);
    }
    auto by_name = [&](std::size_t a, std::size_t b) { return panel.column_name(a) < panel.column_name(b); };
    std::sort(values.begin(), values.end(), by_name);
    std::sort(flags.begin(), flags.end(), by_name);
    values.insert(values.end(), flags.begin(), flags.end());

    std::string out = "region,period,target";
    for (std::size_t c : values) {
        out += ',' + csv_escape(panel.column_name(c));
    }
    out += '\n';
    for (std::size_t row = 0; row < panel.rows(); ++row) {
        out += csv_escape(panel.regions()[panel.region_of(row)]);
        out += ',' + panel.period_of(row).to_string();
        out += ',' + format_double(panel.target()[row]);
        for (std::size_t c : values) {
            out += ',' + format_double(panel.column(c)[row]);
        }
        out += '\n';
    }
    return out;
}

} // namespace fdf
