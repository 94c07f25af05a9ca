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
#include "flow_data.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>

namespace fdf
{

RegionRegistry::RegionRegistry(std::vector<RegionId> regions)
    : regions_(std::move(regions))
{
    for (std::size_t i = 0; i < regions_.size(); ++i) {
        if (regions_[i].empty()) {
            fail(ErrorCode::InvalidArgument, "empty region id at position " + std::to_string(i));
        }
        if (!index_.emplace(regions_[i], i).second) {
            fail(ErrorCode::InvalidArgument, "duplicate region id '" + regions_[i] + "'");
        }
    }
}

std::optional<std::size_t> RegionRegistry::find(const RegionId& id) const
{
    auto it = index_.find(id);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::size_t RegionRegistry::index_of(const RegionId& id) const
{
    auto idx = find(id);
    if (!idx) {
        fail(ErrorCode::UnknownRegion, "unknown region '" + id + "'");
    }
    return *idx;
}

void RegionRegistry::add_adjacency(const RegionId& a, const RegionId& b)
{
    std::size_t i = index_of(a);
    std::size_t j = index_of(b);
    if (i == j) {
        return;
    }
    adjacency_.emplace(std::min(i, j), std::max(i, j));
}

bool RegionRegistry::adjacent(std::size_t i, std::size_t j) const
{
    return adjacency_.contains({std::min(i, j), std::max(i, j)});
}

std::vector<std::size_t> RegionRegistry::neighbors(std::size_t i) const
{
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < regions_.size(); ++j) {
        if (j != i && adjacent(i, j)) {
            out.push_back(j);
        }
    }
    return out;
}

void RegionRegistry::set_distance(const RegionId& origin, const RegionId& destination, double km)
{
    if (!(km >= 0.0) || !std::isfinite(km)) {
        fail(ErrorCode::InvalidArgument, "distance " + origin + "->" + destination + " must be finite and >= 0");
    }
    distances_[{index_of(origin), index_of(destination)}] = km;
}

std::optional<double> RegionRegistry::distance(std::size_t origin, std::size_t destination) const
{
    auto it = distances_.find({origin, destination});
    if (it == distances_.end()) {
        return std::nullopt;
    }
    return it->second;
}

namespace
{

std::string row_context(const CsvTable& table, std::size_t r)
{
    return table.source + " row " + std::to_string(r + 1) + " (line " + std::to_string(table.line_numbers[r]) + ")";
}

} // namespace

RegionRegistry load_registry(const std::filesystem::path& regions,
                             const std::optional<std::filesystem::path>& adjacency,
                             const std::optional<std::filesystem::path>& distances)
{
    CsvTable rt = read_csv(regions);
    require_header(rt, {"region"});
    std::vector<RegionId> ids;
    for (std::size_t r = 0; r < rt.rows.size(); ++r) {
        if (rt.rows[r][0].empty()) {
            fail(ErrorCode::MalformedRow, row_context(rt, r) + ": empty region id");
        }
        ids.push_back(rt.rows[r][0]);
    }
    RegionRegistry registry(std::move(ids));

    if (adjacency) {
        CsvTable at = read_csv(*adjacency);
        require_header(at, {"region_a", "region_b"});
        for (std::size_t r = 0; r < at.rows.size(); ++r) {
            if (!registry.find(at.rows[r][0]) || !registry.find(at.rows[r][1])) {
                fail(ErrorCode::UnknownRegion, row_context(at, r) + ": unknown region");
            }
            registry.add_adjacency(at.rows[r][0], at.rows[r][1]);
        }
    }
    if (distances) {
        CsvTable dt = read_csv(*distances);
        require_header(dt, {"origin", "destination", "km"});
        for (std::size_t r = 0; r < dt.rows.size(); ++r) {
            const auto& row = dt.rows[r];
            if (!registry.find(row[0]) || !registry.find(row[1])) {
                fail(ErrorCode::UnknownRegion, row_context(dt, r) + ": unknown region");
            }
            auto km = try_parse_double(row[2]);
            if (!km || *km < 0.0) {
                fail(ErrorCode::MalformedRow, row_context(dt, r) + ": km must be a non-negative number");
            }
            registry.set_distance(row[0], row[1], *km);
        }
    }
    return registry;
}

std::vector<FlowRecord> parse_flows(const CsvTable& table, const RegionRegistry& registry)
{
    require_header(table, {"period", "origin", "destination", "count"});
    std::vector<FlowRecord> out;
    out.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        FlowRecord rec;
        try {
            rec.period = parse_period(row[0]);
        }
        catch (const Error& e) {
            fail(ErrorCode::MalformedRow, row_context(table, r) + ": " + e.what());
        }
        if (!registry.find(row[1])) {
            fail(ErrorCode::UnknownRegion, row_context(table, r) + ": unknown origin '" + row[1] + "'");
        }
        if (!registry.find(row[2])) {
            fail(ErrorCode::UnknownRegion, row_context(table, r) + ": unknown destination '" + row[2] + "'");
        }
        auto count = try_parse_int(row[3]);
        if (!count) {
            fail(ErrorCode::MalformedRow, row_context(table, r) + ": count '" + row[3] + "' is not an integer");
        }
        if (*count < 0) {
            fail(ErrorCode::NegativeCount, row_context(table, r) + ": negative count " + row[3]);
        }
        rec.origin      = row[1];
        rec.destination = row[2];
        rec.count       = *count;
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<FlowRecord> ingest_flows(const std::filesystem::path& path, const RegionRegistry& registry)
{
    return parse_flows(read_csv(path), registry);
}

const Count& FlowMatrix::at(std::size_t i, std::size_t j) const
{
    if (i >= n_ || j >= n_) {
        fail(ErrorCode::IndexOutOfRange, "flow matrix index (" + std::to_string(i) + ", " + std::to_string(j) +
                                             ") out of range for dimension " + std::to_string(n_));
    }
    return cells_[i * n_ + j];
}

void FlowMatrix::set(std::size_t i, std::size_t j, Count value)
{
    (void)at(i, j);
    if (value && *value < 0) {
        fail(ErrorCode::NegativeCount, "flow matrix entries must be >= 0");
    }
    cells_[i * n_ + j] = value;
}

void FlowMatrix::add(std::size_t i, std::size_t j, std::int64_t value)
{
    (void)at(i, j);
    auto& cell = cells_[i * n_ + j];
    if (cell) {
        *cell += value;
    }
}

std::vector<FlowMatrix> build_flow_matrices(std::span<const FlowRecord> records, const RegionRegistry& registry,
                                            const PeriodRange& range)
{
    if (range.last < range.first) {
        fail(ErrorCode::EmptyPeriodRange, "empty period range");
    }
    std::vector<FlowMatrix> out;
    out.reserve(range.size());
    for (Period p : range.periods()) {
        out.emplace_back(p, registry.size());
    }
    for (const auto& rec : records) {
        if (!range.contains(rec.period)) {
            continue;
        }
        auto& m = out[static_cast<std::size_t>(range.offset(rec.period))];
        m.add(registry.index_of(rec.origin), registry.index_of(rec.destination), rec.count);
    }
    return out;
}

Count internal_displacement(const FlowMatrix& m, std::size_t i)
{
    return m.at(i, i);
}

Count total_outflow(const FlowMatrix& m, std::size_t i)
{
    std::int64_t sum = 0;
    for (std::size_t j = 0; j < m.dimension(); ++j) {
        if (j == i) {
            continue;
        }
        const Count& c = m.at(i, j);
        if (!c) {
            return std::nullopt;
        }
        sum += *c;
    }
    return sum;
}

Count total_inflow(const FlowMatrix& m, std::size_t i)
{
    std::int64_t sum = 0;
    for (std::size_t j = 0; j < m.dimension(); ++j) {
        if (j == i) {
            continue;
        }
        const Count& c = m.at(j, i);
        if (!c) {
            return std::nullopt;
        }
        sum += *c;
    }
    return sum;
}

Count pairwise_flow(const FlowMatrix& m, std::size_t i, std::size_t j)
{
    return m.at(i, j);
}

Count arrivals(const FlowMatrix& m, std::size_t i)
{
    Count in   = total_inflow(m, i);
    Count self = internal_displacement(m, i);
    if (!in || !self) {
        return std::nullopt;
    }
    return *in + *self;
}

FlowAggregate parse_flow_aggregate(std::string_view name)
{
    if (name == "arrivals") return FlowAggregate::Arrivals;
    if (name == "inflow") return FlowAggregate::Inflow;
    if (name == "outflow") return FlowAggregate::Outflow;
    if (name == "internal") return FlowAggregate::Internal;
    if (name == "pairwise") return FlowAggregate::Pairwise;
    fail(ErrorCode::InvalidArgument, "unknown target aggregation '" + std::string(name) + "'");
}

std::string_view flow_aggregate_name(FlowAggregate kind)
{
    switch (kind) {
    case FlowAggregate::Arrivals: return "arrivals";
    case FlowAggregate::Inflow: return "inflow";
    case FlowAggregate::Outflow: return "outflow";
    case FlowAggregate::Internal: return "internal";
    case FlowAggregate::Pairwise: return "pairwise";
    }
    return "arrivals";
}

Count aggregate(const FlowMatrix& m, FlowAggregate kind, std::size_t i, std::size_t partner)
{
    switch (kind) {
    case FlowAggregate::Arrivals: return arrivals(m, i);
    case FlowAggregate::Inflow: return total_inflow(m, i);
    case FlowAggregate::Outflow: return total_outflow(m, i);
    case FlowAggregate::Internal: return internal_displacement(m, i);
    case FlowAggregate::Pairwise: return pairwise_flow(m, i, partner);
    }
    return std::nullopt;
}

FlowProportions flow_proportions(std::span<const FlowMatrix> matrices, std::size_t i)
{
    std::int64_t in = 0, self = 0, out = 0;
    for (const auto& m : matrices) {
        Count a = total_inflow(m, i);
        Count b = internal_displacement(m, i);
        Count c = total_outflow(m, i);
        if (!a || !b || !c) {
            continue;
        }
        in += *a;
        self += *b;
        out += *c;
    }
    std::int64_t total = in + self + out;
    if (total == 0) {
        fail(ErrorCode::NoFlows, "no recorded flows involve region index " + std::to_string(i));
    }
    double denom = static_cast<double>(total);
    FlowProportions p;
    p.inflow   = static_cast<double>(in) / denom;
    p.internal = static_cast<double>(self) / denom;
    p.outflow  = static_cast<double>(out) / denom;
    return p;
}

MaskedSeries apply_missingness(std::span<const std::optional<double>> series, bool zero_as_missing)
{
    MaskedSeries out;
    out.values.assign(series.begin(), series.end());
    std::size_t missing = 0;
    for (auto& v : out.values) {
        if (zero_as_missing && v && *v == 0.0) {
            v.reset();
        }
        if (!v) {
            ++missing;
        }
    }
    out.missing_proportion =
        series.empty() ? 0.0 : static_cast<double>(missing) / static_cast<double>(series.size());
    return out;
}

std::vector<EventRecord> parse_events(const CsvTable& table, const RegionRegistry& registry)
{
    require_header(table, {"date", "region", "kind", "fatalities"});
    std::vector<EventRecord> out;
    out.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        EventRecord ev;
        try {
            ev.date = parse_date(row[0]);
        }
        catch (const Error& e) {
            fail(ErrorCode::UnparseableDate, row_context(table, r) + ": " + e.what());
        }
        if (!registry.find(row[1])) {
            fail(ErrorCode::UnknownRegion, row_context(table, r) + ": unknown region '" + row[1] + "'");
        }
        auto fat = row[3].empty() ? std::optional<std::int64_t>(0) : try_parse_int(row[3]);
        if (!fat) {
            fail(ErrorCode::MalformedRow, row_context(table, r) + ": fatalities '" + row[3] + "' is not an integer");
        }
        if (*fat < 0) {
            fail(ErrorCode::NegativeCount, row_context(table, r) + ": negative fatalities " + row[3]);
        }
        ev.region     = row[1];
        ev.kind       = row[2];
        ev.fatalities = *fat;
        out.push_back(std::move(ev));
    }
    return out;
}

std::vector<EventRecord> ingest_events(const std::filesystem::path& path, const RegionRegistry& registry)
{
    return parse_events(read_csv(path), registry);
}

std::vector<EventBucket> aggregate_events(std::span<const EventRecord> events, const RegionRegistry& registry,
                                          const PeriodRange& range)
{
    std::vector<EventBucket> out(registry.size() * range.size());
    for (const auto& ev : events) {
        std::size_t region = registry.index_of(ev.region);
        Period p           = ev.date.period();
        if (!range.contains(p)) {
            continue;
        }
        auto& bucket = out[region * range.size() + static_cast<std::size_t>(range.offset(p))];
        bucket.incidents += 1;
        bucket.fatalities += ev.fatalities;
    }
    return out;
}

} // namespace fdf
