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
#include "error.hpp"
#include "flow_data.hpp"
#include "oracles.hpp"
#include "rng.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace fdf;

namespace
{

RegionRegistry two_regions()
{
    return RegionRegistry({"r1", "r2"});
}

FlowMatrix example_matrix()
{
    FlowMatrix m(Period{2019, 3}, 2);
    m.set(0, 0, 5);
    m.set(0, 1, 3);
    m.set(1, 0, 2);
    m.set(1, 1, 7);
    return m;
}

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    }
    catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an fdf::Error");
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST_CASE("period arithmetic wraps across years")
{
    Period p{2019, 12};
    CHECK(p.next() == Period{2020, 1});
    CHECK(Period{2020, 1}.prev() == p);
    CHECK((Period{2011, 1} - Period{2010, 1}) == 12);
    CHECK(parse_period("2019-03") == Period{2019, 3});
    CHECK(Period{2019, 3}.to_string() == "2019-03");
    CHECK(code_of([] { parse_period("2019-13"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { parse_date("2019-02-30"); }) == ErrorCode::UnparseableDate);
    CHECK(parse_date("2020-02-29").day == 29);
    CHECK(code_of([] { PeriodRange(Period{2019, 5}, Period{2019, 4}); }) == ErrorCode::EmptyPeriodRange);
}

TEST_CASE("ingest_flows parses rows and rejects bad ones")
{
    auto reg = RegionRegistry({"Bay", "Banadir"});
    auto ok  = parse_flows(parse_csv("period,origin,destination,count\n2019-03,Bay,Banadir,120\n", "f.csv"), reg);
    REQUIRE(ok.size() == 1);
    CHECK(ok[0] == FlowRecord{Period{2019, 3}, "Bay", "Banadir", 120});

    CHECK(code_of([&] {
              parse_flows(parse_csv("period,origin,destination,count\n2019-03,Bay,Banadir,-5\n", "f.csv"), reg);
          }) == ErrorCode::NegativeCount);
    CHECK(code_of([&] {
              parse_flows(parse_csv("period,origin,destination,count\n2019-03,Bay,Mars,5\n", "f.csv"), reg);
          }) == ErrorCode::UnknownRegion);
    CHECK(code_of([&] {
              parse_flows(parse_csv("period,origin,destination,count\n2019-03,Bay,Banadir,x\n", "f.csv"), reg);
          }) == ErrorCode::MalformedRow);
    CHECK(code_of([&] { parse_flows(parse_csv("period,from,to,count\n", "f.csv"), reg); }) ==
          ErrorCode::MalformedRow);

    try {
        parse_flows(parse_csv("period,origin,destination,count\n2019-03,Bay,Bay,1\n2019-03,Bay,Banadir,-5\n",
                              "flows.csv"),
                    reg);
    }
    catch (const Error& e) {
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
}

TEST_CASE("duplicate flow rows are summed")
{
    auto reg  = RegionRegistry({"Bay"});
    auto recs = parse_flows(
        parse_csv("period,origin,destination,count\n2019-03,Bay,Bay,10\n2019-03,Bay,Bay,7\n", "f.csv"), reg);
    CHECK(recs.size() == 2);
    auto m = build_flow_matrices(recs, reg, PeriodRange(Period{2019, 3}, Period{2019, 3}));
    CHECK(*m[0].at(0, 0) == 17);
}

TEST_CASE("build_flow_matrices sums per cell; empty periods are all zero")
{
    auto reg = two_regions();
    std::vector<FlowRecord> recs{{Period{2019, 1}, "r1", "r2", 3}, {Period{2019, 1}, "r1", "r2", 4}};
    auto ms = build_flow_matrices(recs, reg, PeriodRange(Period{2019, 1}, Period{2019, 2}));
    REQUIRE(ms.size() == 2);
    CHECK(*ms[0].at(0, 0) == 0);
    CHECK(*ms[0].at(0, 1) == 7);
    CHECK(*ms[0].at(1, 0) == 0);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK(*ms[1].at(i, j) == 0);
        }
    }
}

TEST_CASE("build_flow_matrices matches a brute-force loop and is order invariant")
{
    Rng rng(11);
    RegionRegistry reg({"a", "b", "c", "d"});
    PeriodRange range(Period{2020, 1}, Period{2020, 4});
    std::vector<FlowRecord> recs;
    std::int64_t total = 0;
    for (int k = 0; k < 300; ++k) {
        FlowRecord r{range.at(rng.below(4)), reg.name(rng.below(4)), reg.name(rng.below(4)),
                     static_cast<std::int64_t>(rng.below(1000))};
        total += r.count;
        recs.push_back(r);
    }
    auto ms = build_flow_matrices(recs, reg, range);
    std::int64_t matrix_total = 0;
    for (std::size_t t = 0; t < range.size(); ++t) {
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                std::int64_t expect = 0;
                for (const auto& r : recs) {
                    if (r.period == range.at(t) && r.origin == reg.name(i) && r.destination == reg.name(j)) {
                        expect += r.count;
                    }
                }
                CHECK(*ms[t].at(i, j) == expect);
                matrix_total += *ms[t].at(i, j);
            }
        }
    }
    CHECK(matrix_total == total);

    auto shuffled = recs;
    std::reverse(shuffled.begin(), shuffled.end());
    std::rotate(shuffled.begin(), shuffled.begin() + 37, shuffled.end());
    auto ms2 = build_flow_matrices(shuffled, reg, range);
    for (std::size_t t = 0; t < range.size(); ++t) {
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                CHECK(ms2[t].at(i, j) == ms[t].at(i, j));
            }
        }
    }
}

TEST_CASE("aggregates on the reference matrix")
{
    auto m = example_matrix();
    CHECK(*internal_displacement(m, 0) == 5);
    CHECK(*total_outflow(m, 0) == 3);
    CHECK(*total_inflow(m, 0) == 2);
    CHECK(*pairwise_flow(m, 0, 1) == 3);
    CHECK(*total_inflow(m, 1) == 3);
    CHECK(*total_outflow(m, 1) == 2);
    CHECK(*arrivals(m, 0) == 7);
    CHECK(*arrivals(m, 1) == 10);
    CHECK(code_of([&] { internal_displacement(m, 2); }) == ErrorCode::IndexOutOfRange);
    CHECK(code_of([&] { pairwise_flow(m, 0, 5); }) == ErrorCode::IndexOutOfRange);

    FlowMatrix zero(Period{2019, 1}, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(*arrivals(zero, i) == 0);
    }
}

TEST_CASE("a missing summand makes the aggregate missing")
{
    auto m = example_matrix();
    m.set(1, 0, std::nullopt);
    CHECK_FALSE(total_inflow(m, 0).has_value());
    CHECK_FALSE(arrivals(m, 0).has_value());
    CHECK(total_outflow(m, 0).has_value());
    CHECK_FALSE(total_outflow(m, 1).has_value());
    CHECK(*internal_displacement(m, 0) == 5);
}

TEST_CASE("aggregates agree with brute-force loops on random 5-region matrices")
{
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 5;
        FlowMatrix m(Period{2020, 1}, n);
        oracle::Matrix a(n, std::vector<oracle::Cell>(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (rng.uniform() < 0.05) {
                    m.set(i, j, std::nullopt);
                }
                else {
                    auto v = static_cast<std::int64_t>(rng.below(10001));
                    m.set(i, j, v);
                    a[i][j] = v;
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            auto ref = oracle::brute_aggregates(a, i);
            CHECK(internal_displacement(m, i) == ref.internal);
            CHECK(total_outflow(m, i) == ref.outflow);
            CHECK(total_inflow(m, i) == ref.inflow);
            CHECK(arrivals(m, i) == ref.arrivals);
            for (std::size_t j = 0; j < n; ++j) {
                CHECK(pairwise_flow(m, i, j) == a[i][j]);
            }
        }
    }
}

TEST_CASE("flow_proportions")
{
    std::vector<FlowMatrix> one{example_matrix()};
    auto p = flow_proportions(one, 0);
    CHECK(p.inflow == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(p.internal == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.outflow == doctest::Approx(0.3).epsilon(1e-15));

    FlowMatrix dest_only(Period{2019, 1}, 2);
    dest_only.set(0, 1, 9);
    std::vector<FlowMatrix> d{dest_only};
    auto q = flow_proportions(d, 1);
    CHECK(q.inflow == 1.0);
    CHECK(q.internal == 0.0);
    CHECK(q.outflow == 0.0);

    std::vector<FlowMatrix> z{FlowMatrix(Period{2019, 1}, 2)};
    CHECK(code_of([&] { flow_proportions(z, 0); }) == ErrorCode::NoFlows);

    Rng rng(3);
    std::vector<FlowMatrix> many;
    for (int t = 0; t < 6; ++t) {
        FlowMatrix m(Period{2019, 1} + t, 4);
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                m.set(i, j, static_cast<std::int64_t>(rng.below(500)));
            }
        }
        many.push_back(m);
    }
    for (std::size_t i = 0; i < 4; ++i) {
        double in = 0, internal = 0, out = 0;
        for (const auto& m : many) {
            auto ref = oracle::brute_aggregates(
                [&] {
                    oracle::Matrix a(4, std::vector<oracle::Cell>(4));
                    for (std::size_t r = 0; r < 4; ++r) {
                        for (std::size_t c = 0; c < 4; ++c) {
                            a[r][c] = m.at(r, c);
                        }
                    }
                    return a;
                }(),
                i);
            in += static_cast<double>(*ref.inflow);
            internal += static_cast<double>(*ref.internal);
            out += static_cast<double>(*ref.outflow);
        }
        double total = in + internal + out;
        auto got     = flow_proportions(many, i);
        CHECK(got.inflow == doctest::Approx(in / total).epsilon(1e-14));
        CHECK(got.internal == doctest::Approx(internal / total).epsilon(1e-14));
        CHECK(got.outflow == doctest::Approx(out / total).epsilon(1e-14));
        CHECK(std::fabs(got.inflow + got.internal + got.outflow - 1.0) <= 1e-12);
    }
}

TEST_CASE("apply_missingness")
{
    std::vector<std::optional<double>> s{0.0, 100.0, 0.0, 50.0};
    auto m = apply_missingness(s, true);
    CHECK_FALSE(m.values[0].has_value());
    CHECK(*m.values[1] == 100.0);
    CHECK_FALSE(m.values[2].has_value());
    CHECK(*m.values[3] == 50.0);
    CHECK(m.missing_proportion == 0.5);

    std::vector<std::optional<double>> t{0.0, 100.0};
    auto u = apply_missingness(t, false);
    CHECK(u.values == t);
    CHECK(u.missing_proportion == 0.0);
}

TEST_CASE("events bucket by calendar month")
{
    auto reg    = two_regions();
    auto events = parse_events(
        parse_csv("date,region,kind,fatalities\n2019-03-02,r1,battle,2\n2019-03-20,r1,riot,3\n2019-05-01,r2,riot,\n",
                  "e.csv"),
        reg);
    PeriodRange range(Period{2019, 3}, Period{2019, 5});
    auto b = aggregate_events(events, reg, range);
    CHECK(b[0] == EventBucket{2, 5});
    CHECK(b[1] == EventBucket{0, 0});
    CHECK(b[3 + 2] == EventBucket{1, 0});
    CHECK(code_of([&] {
              parse_events(parse_csv("date,region,kind,fatalities\n2019-02-30,r1,battle,2\n", "e.csv"), reg);
          }) == ErrorCode::UnparseableDate);
    CHECK(code_of([&] {
              parse_events(parse_csv("date,region,kind,fatalities\n2019-02-03,r9,battle,2\n", "e.csv"), reg);
          }) == ErrorCode::UnknownRegion);

    auto none = aggregate_events({}, reg, range);
    CHECK(std::all_of(none.begin(), none.end(), [](const EventBucket& e) { return e == EventBucket{}; }));

    Rng rng(9);
    std::vector<EventRecord> random;
    for (int k = 0; k < 200; ++k) {
        random.push_back({Date{2019, 3 + static_cast<int>(rng.below(3)), 1 + static_cast<int>(rng.below(28))},
                          reg.name(rng.below(2)), "x", static_cast<std::int64_t>(rng.below(5))});
    }
    auto rb = aggregate_events(random, reg, range);
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t k = 0; k < 3; ++k) {
            EventBucket expect;
            for (const auto& e : random) {
                if (e.region == reg.name(r) && e.date.period() == range.at(k)) {
                    expect.incidents += 1;
                    expect.fatalities += e.fatalities;
                }
            }
            CHECK(rb[r * 3 + k] == expect);
        }
    }
}

TEST_CASE("registry loading")
{
    testing::TempDir dir;
    testing::write_text(dir / "regions.csv", "region\nr1\nr2\nr3\n");
    testing::write_text(dir / "adjacency.csv", "region_a,region_b\nr1,r2\n");
    testing::write_text(dir / "distances.csv", "origin,destination,km\nr1,r2,10.5\nr2,r1,12\n");
    auto reg = load_registry(dir / "regions.csv", dir / "adjacency.csv", dir / "distances.csv");
    CHECK(reg.size() == 3);
    CHECK(reg.adjacent(0, 1));
    CHECK(reg.adjacent(1, 0));
    CHECK_FALSE(reg.adjacent(0, 2));
    CHECK(reg.distance(0, 1) == 10.5);
    CHECK(reg.distance(1, 0) == 12.0);

    testing::write_text(dir / "dup.csv", "region\nr1\nr1\n");
    CHECK_THROWS_AS(load_registry(dir / "dup.csv", std::nullopt, std::nullopt), Error);
    testing::write_text(dir / "badadj.csv", "region_a,region_b\nr1,r9\n");
    CHECK(code_of([&] { load_registry(dir / "regions.csv", dir / "badadj.csv", std::nullopt); }) ==
          ErrorCode::UnknownRegion);
}
