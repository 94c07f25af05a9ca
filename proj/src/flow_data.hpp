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
#ifndef FDF_FLOW_DATA_HPP
#define FDF_FLOW_DATA_HPP

#include "csv.hpp"
#include "period.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fdf
{

/// Region name token; compared by exact byte equality.
using RegionId = std::string;

/// Person count or MISSING.
using Count = std::optional<std::int64_t>;

/// Ordered region list plus adjacency and (possibly asymmetric) distances.
class RegionRegistry
{
public:
    RegionRegistry() = default;
    explicit RegionRegistry(std::vector<RegionId> regions);

    std::size_t size() const
    {
        return regions_.size();
    }
    bool empty() const
    {
        return regions_.empty();
    }
    const std::vector<RegionId>& regions() const
    {
        return regions_;
    }
    const RegionId& name(std::size_t i) const
    {
        return regions_.at(i);
    }

    std::optional<std::size_t> find(const RegionId& id) const;
    /// Throws UnknownRegion.
    std::size_t index_of(const RegionId& id) const;

    void add_adjacency(const RegionId& a, const RegionId& b);
    bool has_adjacency() const
    {
        return !adjacency_.empty();
    }
    bool adjacent(std::size_t i, std::size_t j) const;
    /// Adjacent regions of i in registry order.
    std::vector<std::size_t> neighbors(std::size_t i) const;

    void set_distance(const RegionId& origin, const RegionId& destination, double km);
    std::optional<double> distance(std::size_t origin, std::size_t destination) const;
    std::size_t distance_count() const
    {
        return distances_.size();
    }

private:
    std::vector<RegionId> regions_;
    std::unordered_map<RegionId, std::size_t> index_;
    std::set<std::pair<std::size_t, std::size_t>> adjacency_; // stored with first < second
    std::map<std::pair<std::size_t, std::size_t>, double> distances_;
};

/// Loads `regions.csv` and, when given, `adjacency.csv` / `distances.csv`.
RegionRegistry load_registry(const std::filesystem::path& regions,
                             const std::optional<std::filesystem::path>& adjacency,
                             const std::optional<std::filesystem::path>& distances);

struct FlowRecord {
    Period period;
    RegionId origin;
    RegionId destination;
    std::int64_t count = 0;

    friend bool operator==(const FlowRecord&, const FlowRecord&) = default;
};

/// Rows of `period,origin,destination,count`. Duplicates are kept.
std::vector<FlowRecord> parse_flows(const CsvTable& table, const RegionRegistry& registry);
std::vector<FlowRecord> ingest_flows(const std::filesystem::path& path, const RegionRegistry& registry);

/// Square per-period matrix; cell (i, j) counts persons moving from region i
/// to region j, in registry order.
class FlowMatrix
{
public:
    FlowMatrix(Period period, std::size_t n)
        : period_(period)
        , n_(n)
        , cells_(n * n, std::int64_t{0})
    {
    }

    Period period() const
    {
        return period_;
    }
    std::size_t dimension() const
    {
        return n_;
    }
    const Count& at(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, Count value);
    void add(std::size_t i, std::size_t j, std::int64_t value);

private:
    Period period_;
    std::size_t n_;
    std::vector<Count> cells_;
};

/// One matrix per period in `range`; cells sum matching records, unmatched cells are 0.
std::vector<FlowMatrix> build_flow_matrices(std::span<const FlowRecord> records, const RegionRegistry& registry,
                                            const PeriodRange& range);

// Aggregations of a single matrix. Any MISSING summand makes the result MISSING.
Count internal_displacement(const FlowMatrix& m, std::size_t i);
Count total_outflow(const FlowMatrix& m, std::size_t i);
Count total_inflow(const FlowMatrix& m, std::size_t i);
Count pairwise_flow(const FlowMatrix& m, std::size_t i, std::size_t j);
/// Inflow from other regions plus internal displacement.
Count arrivals(const FlowMatrix& m, std::size_t i);

enum class FlowAggregate { Arrivals, Inflow, Outflow, Internal, Pairwise };

FlowAggregate parse_flow_aggregate(std::string_view name);
std::string_view flow_aggregate_name(FlowAggregate kind);
/// `partner` is only used for Pairwise (destination index).
Count aggregate(const FlowMatrix& m, FlowAggregate kind, std::size_t i, std::size_t partner = 0);

struct FlowProportions {
    double inflow   = 0.0;
    double internal = 0.0;
    double outflow  = 0.0;
};

/// Shares of inflow, internal displacement and outflow for region i over all
/// matrices. Periods where any of the three aggregates is MISSING are skipped.
/// Throws NoFlows when nothing is left.
FlowProportions flow_proportions(std::span<const FlowMatrix> matrices, std::size_t i);

struct MaskedSeries {
    std::vector<std::optional<double>> values;
    double missing_proportion = 0.0;
};

/// With `zero_as_missing`, every recorded 0 becomes MISSING.
MaskedSeries apply_missingness(std::span<const std::optional<double>> series, bool zero_as_missing);

struct EventRecord {
    Date date;
    RegionId region;
    std::string kind;
    std::int64_t fatalities = 0;
};

std::vector<EventRecord> parse_events(const CsvTable& table, const RegionRegistry& registry);
std::vector<EventRecord> ingest_events(const std::filesystem::path& path, const RegionRegistry& registry);

struct EventBucket {
    std::int64_t incidents  = 0;
    std::int64_t fatalities = 0;

    friend bool operator==(const EventBucket&, const EventBucket&) = default;
};

/// Row-major (region, period) buckets: index = region * range.size() + offset.
/// Events dated outside the range are ignored.
std::vector<EventBucket> aggregate_events(std::span<const EventRecord> events, const RegionRegistry& registry,
                                          const PeriodRange& range);

} // namespace fdf

#endif // FDF_FLOW_DATA_HPP
