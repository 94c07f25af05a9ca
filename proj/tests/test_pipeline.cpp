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
#include "config.hpp"
#include "csv.hpp"
#include "digest.hpp"
#include "error.hpp"
#include "pipeline.hpp"
#include "render.hpp"
#include "support.hpp"
#include "synth.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>

using namespace fdf;
using nlohmann::json;

namespace
{

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

SynthOptions small(Scenario s = Scenario::Seasonal)
{
    SynthOptions o;
    o.scenario  = s;
    o.seed      = 7;
    o.n_regions = 4;
    o.n_periods = 48;
    return o;
}

json base_config()
{
    return json::parse(R"({
      "schema_version": 1,
      "paths": {"flows": "flows.csv", "regions": "regions.csv"},
      "models": {"benchmarks": [{"kind": "lag", "n": 1}]}
    })");
}

ErrorCode config_error(const json& j)
{
    return code_of([&] { parse_config(j.dump(), "/tmp"); });
}

double pearson(const std::vector<double>& a, const std::vector<double>& b)
{
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(a.size());
    mb /= static_cast<double>(b.size());
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

} // namespace

TEST_CASE("config defaults and path resolution")
{
    auto cfg = parse_config(base_config().dump(), "/data/run");
    CHECK(cfg.paths.flows == std::filesystem::path("/data/run/flows.csv"));
    CHECK(cfg.models.seed == 42);
    CHECK(cfg.task.horizons == std::vector<int>{1});
    CHECK(cfg.evaluation.metric.kind == MetricKind::RMSE);
    CHECK(cfg.panel.zero_as_missing);
    REQUIRE(cfg.models.entries.size() == 1);
    CHECK(cfg.models.entries[0].id == "lag_1");
}

TEST_CASE("config validation")
{
    auto j        = base_config();
    j["bogus"]    = 1;
    CHECK(config_error(j) == ErrorCode::InvalidConfig);

    j = base_config();
    j["task"] = {{"horizons", {1, 3}}, {"transform", "pct_change"}};
    CHECK(config_error(j) == ErrorCode::InvalidConfig);

    j = base_config();
    j["task"] = {{"horizons", {0}}};
    CHECK(config_error(j) == ErrorCode::InvalidConfig);

    j = base_config();
    j["panel"] = {{"neighbor_mode", "adjacent"}};
    CHECK(config_error(j) == ErrorCode::InvalidConfig);

    j = base_config();
    j["models"] = json::object();
    CHECK(config_error(j) == ErrorCode::InvalidConfig);

    j = base_config();
    j["evaluation"] = {{"metric", "r2"}};
    CHECK(config_error(j) == ErrorCode::InvalidConfig);

    j = base_config();
    j["schema_version"] = 99;
    CHECK(config_error(j) == ErrorCode::InvalidConfig);

    CHECK(code_of([] { parse_config("{not json", "/tmp"); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("synthetic data is deterministic per seed")
{
    auto a = generate_synthetic(small());
    auto b = generate_synthetic(small());
    REQUIRE(a.files.size() == b.files.size());
    for (std::size_t i = 0; i < a.files.size(); ++i) {
        CHECK(a.files[i] == b.files[i]);
    }
    auto o = small();
    o.seed = 8;
    CHECK(generate_synthetic(o).files != a.files);
    CHECK(a.ground_truth["regions"].size() == 4);
    CHECK(a.ground_truth.contains("conflict"));

    auto bad      = small();
    bad.n_regions = 1;
    CHECK(code_of([&] { generate_synthetic(bad); }) == ErrorCode::InvalidArgument);
    bad           = small();
    bad.n_periods = 23;
    CHECK(code_of([&] { generate_synthetic(bad); }) == ErrorCode::InvalidArgument);
    CHECK(parse_scenario("bursty") == Scenario::Bursty);
    CHECK_THROWS_AS(parse_scenario("chaotic"), Error);
}

TEST_CASE("feature-driven scenario ties arrivals to lagged incidents")
{
    testing::TempDir dir;
    SynthOptions o;
    o.scenario = Scenario::FeatureDriven;
    o.seed     = 3;
    write_synthetic(o, dir.path());
    auto cfg    = load_config(dir / "config.json");
    auto inputs = load_inputs(cfg);
    auto panel  = build_panel(inputs, cfg, 1);
    auto c      = panel.column_index("incidents_lag_1");
    std::vector<double> x, y;
    for (std::size_t r = 0; r < panel.rows(); ++r) {
        if (!is_missing(panel.target()[r]) && panel.meta(c).lag == 1 && panel.period_offset_of(r) > 0) {
            x.push_back(panel.column(c)[r]);
            y.push_back(panel.target()[r]);
        }
    }
    CHECK(pearson(x, y) > 0.5);
}

TEST_CASE("panel construction from synthetic inputs")
{
    testing::TempDir dir;
    write_synthetic(small(), dir.path());
    auto cfg    = load_config(dir / "config.json");
    auto inputs = load_inputs(cfg);
    CHECK(inputs.periods.size() == 48);
    auto panel = build_panel(inputs, cfg, 3);
    CHECK(panel.rows() == 4 * 48);
    CHECK(panel.horizon() == 3);
    auto cols = model_columns(panel);
    for (const auto& c : cols) {
        CHECK(panel.meta(panel.column_index(c)).is_predictor());
    }
    CHECK(std::find(cols.begin(), cols.end(), "price_index") == cols.end());
    CHECK(std::find(cols.begin(), cols.end(), "target_lag_12") != cols.end());
    CHECK(std::find(cols.begin(), cols.end(), "target_lag_1_from_R02") != cols.end());
    CHECK(std::find(cols.begin(), cols.end(), "price_index_lag_1_missing") != cols.end());
    for (const auto& c : cols) {
        for (double v : panel.column(panel.column_index(c))) {
            CHECK_FALSE(is_missing(v));
        }
    }
    CHECK(resolve_train_end(cfg, inputs.periods) == Period{2013, 3});
    cfg.evaluation.train_end.reset();
    CHECK(resolve_train_end(cfg, inputs.periods) == inputs.periods.last - 9);
}

TEST_CASE("ingest writes deterministic artifacts")
{
    testing::TempDir dir;
    write_synthetic(small(), dir.path());
    auto cfg = load_config(dir / "config.json");
    RunOptions o1{dir / "a", 1}, o2{dir / "b", 1};
    run_ingest(cfg, o1);
    run_ingest(cfg, o2);
    for (const char* f : {"panel_h1.csv", "panel_h3.csv", "alerts.csv", "flow_proportions.csv"}) {
        CHECK(sha256_file(dir / "a" / f) == sha256_file(dir / "b" / f));
    }
    auto csv = read_csv(dir / "a" / "panel_h1.csv");
    CHECK(csv.rows.size() == 4 * 48);
    auto props = read_csv(dir / "a" / "flow_proportions.csv");
    for (const auto& row : props.rows) {
        if (row[1].empty()) {
            continue;
        }
        double s = *try_parse_double(row[1]) + *try_parse_double(row[2]) + *try_parse_double(row[3]);
        CHECK(std::fabs(s - 1.0) <= 1e-12);
    }
    auto manifest = json::parse(read_file(dir / "a" / "manifest.json"));
    CHECK(manifest["format"] == "fdf-manifest");
    CHECK(manifest["command"] == "ingest");
    CHECK(manifest["config_sha256"] == sha256_hex(cfg.source_text));
    CHECK(manifest["inputs"].size() >= 4);

    testing::write_text(dir / "flows.csv", read_file(dir / "flows.csv") + "2011-01,R01,R02,-4\n");
    auto bad = load_config(dir / "config.json");
    CHECK(code_of([&] { run_ingest(bad, o1); }) == ErrorCode::NegativeCount);
}

TEST_CASE("evaluate produces a models x partitions x horizons report independent of thread count")
{
    testing::TempDir dir;
    write_synthetic(small(), dir.path());
    auto cfg = load_config(dir / "config.json");
    run_evaluate(cfg, RunOptions{dir / "t1", 1});
    run_evaluate(cfg, RunOptions{dir / "t4", 4});
    CHECK(read_file(dir / "t1" / "report.json") == read_file(dir / "t4" / "report.json"));
    CHECK(read_file(dir / "t1" / "report.csv") == read_file(dir / "t4" / "report.csv"));

    auto rep = ScoreReport::from_json(json::parse(read_file(dir / "t1" / "report.json")));
    REQUIRE(rep.horizons.size() == 2);
    CHECK(rep.horizons[0].horizon == 1);
    CHECK(rep.horizons[1].horizon == 3);
    const auto& m1 = rep.horizons[0].models;
    const auto& m3 = rep.horizons[1].models;
    CHECK(std::find(m1.begin(), m1.end(), "lag_1") != m1.end());
    CHECK(std::find(m3.begin(), m3.end(), "lag_1") == m3.end());
    CHECK(m1.size() == m3.size() + 1);
    for (const auto& h : rep.horizons) {
        CHECK(h.train.size() == h.models.size());
        CHECK(h.test.size() == h.models.size());
        for (const auto& row : h.ranks) {
            CHECK(row.size() == h.models.size());
        }
    }
    auto manifest = json::parse(read_file(dir / "t1" / "manifest.json"));
    bool warned   = false;
    for (const auto& w : manifest["warnings"]) {
        warned |= w.get<std::string>().find("lag_1") != std::string::npos;
    }
    CHECK(warned);
    CHECK(std::filesystem::exists(dir / "t1" / "models" / "h1" / "ridge.json"));
    CHECK(std::filesystem::exists(dir / "t1" / "cv.json"));

    auto table = render_table(rep);
    auto first = table.substr(0, table.find('\n'));
    CHECK(first.find("h=1 train") != std::string::npos);
    CHECK(first.find("h=3 test") != std::string::npos);
    auto lag1 = table.find("1-month lag");
    REQUIRE(lag1 != std::string::npos);
    auto line = table.substr(lag1, table.find('\n', lag1) - lag1);
    CHECK(std::count(line.begin(), line.end(), '-') == 3); // "1-month" plus two empty cells

    auto svgs = render_svgs(rep);
    CHECK(svgs.size() == 4 + 1);
    CHECK(render_svgs(rep) == svgs);
    for (const auto& [name, text] : svgs) {
        CHECK(text.rfind("<svg", 0) == 0);
    }
}

TEST_CASE("alert-label targets cannot be scored")
{
    testing::TempDir dir;
    write_synthetic(small(), dir.path());
    auto j                  = json::parse(read_file(dir / "config.json"));
    j["task"]["transform"]  = "alert_labels";
    testing::write_text(dir / "alerts.json", j.dump());
    auto cfg = load_config(dir / "alerts.json");
    CHECK(code_of([&] { run_evaluate(cfg, RunOptions{dir / "o", 1}); }) == ErrorCode::NonInvertibleTransform);
    CHECK_NOTHROW(run_ingest(cfg, RunOptions{dir / "i", 1}));
}
