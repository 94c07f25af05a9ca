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
#include "error.hpp"

#include <algorithm>
#include <set>

namespace fdf
{

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view cv_kind_name(CvKind kind)
{
    return kind == CvKind::Expanding ? "expanding" : "sliding";
}

namespace
{

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed)
{
    if (!obj.is_object()) {
        fail(ErrorCode::InvalidConfig, where + " must be a JSON object");
    }
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
        if (!ok.count(key)) {
            fail(ErrorCode::InvalidConfig, where + ": unknown key '" + key + "'");
        }
    }
}

fs::path resolve(const fs::path& base, const json& v)
{
    fs::path p = v.get<std::string>();
    return p.is_absolute() ? p : base / p;
}

std::optional<fs::path> optional_path(const fs::path& base, const json& obj, const char* key)
{
    if (!obj.contains(key) || obj.at(key).is_null()) {
        return std::nullopt;
    }
    return resolve(base, obj.at(key));
}

std::vector<int> positive_list(const json& v, const std::string& what)
{
    auto out = v.get<std::vector<int>>();
    for (int x : out) {
        if (x < 1) {
            fail(ErrorCode::InvalidConfig, what + " entries must be >= 1");
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

constexpr const char* kGridFamilies[] = {"ridge", "lasso", "tree", "forest", "gbm"};

} // namespace

PipelineConfig parse_config(const std::string& text, const fs::path& base_dir)
{
    PipelineConfig cfg;
    cfg.base_dir    = base_dir;
    cfg.source_text = text;
    try {
        json j = json::parse(text);
        check_keys(j, "config", {"schema_version", "output_dir", "paths", "task", "panel", "models", "evaluation"});
        cfg.schema_version = j.at("schema_version").get<int>();
        if (cfg.schema_version != kConfigSchemaVersion) {
            fail(ErrorCode::InvalidConfig, "unsupported schema_version " + std::to_string(cfg.schema_version));
        }
        cfg.output_dir = resolve(base_dir, j.value("output_dir", json("out")));

        const json& paths = j.at("paths");
        check_keys(paths, "paths", {"flows", "regions", "adjacency", "distances", "events", "features"});
        cfg.paths.flows     = resolve(base_dir, paths.at("flows"));
        cfg.paths.regions   = resolve(base_dir, paths.at("regions"));
        cfg.paths.adjacency = optional_path(base_dir, paths, "adjacency");
        cfg.paths.distances = optional_path(base_dir, paths, "distances");
        cfg.paths.events    = optional_path(base_dir, paths, "events");
        if (paths.contains("features")) {
            for (const auto& f : paths.at("features")) {
                cfg.paths.features.push_back(resolve(base_dir, f));
            }
        }

        if (j.contains("task")) {
            const json& t = j.at("task");
            check_keys(t, "task", {"target", "partner", "horizons", "transform", "alert_threshold"});
            if (t.contains("target")) {
                cfg.task.target = parse_flow_aggregate(t.at("target").get<std::string>());
            }
            if (t.contains("partner") && !t.at("partner").is_null()) {
                cfg.task.partner = t.at("partner").get<std::string>();
            }
            if (cfg.task.target == FlowAggregate::Pairwise && cfg.task.partner.empty()) {
                fail(ErrorCode::InvalidConfig, "pairwise targets need task.partner");
            }
            if (t.contains("horizons")) {
                cfg.task.horizons = positive_list(t.at("horizons"), "task.horizons");
            }
            if (cfg.task.horizons.empty()) {
                fail(ErrorCode::InvalidConfig, "task.horizons must not be empty");
            }
            if (t.contains("transform")) {
                cfg.task.transform.kind = parse_transform_kind(t.at("transform").get<std::string>());
            }
            cfg.task.transform.threshold = t.value("alert_threshold", 0.30);
            if (!(cfg.task.transform.threshold > 0.0)) {
                fail(ErrorCode::InvalidConfig, "task.alert_threshold must be > 0");
            }
            if (cfg.task.transform.kind == TransformKind::PctChange &&
                std::any_of(cfg.task.horizons.begin(), cfg.task.horizons.end(), [](int h) { return h != 1; })) {
                fail(ErrorCode::InvalidConfig, "pct_change targets are only supported at horizon 1");
            }
        }

        if (j.contains("panel")) {
            const json& p = j.at("panel");
            check_keys(p, "panel",
                       {"zero_as_missing", "target_lags", "feature_lags", "neighbor_mode", "neighbor_columns",
                        "missingness_flags", "impute", "epoch", "first_period", "last_period"});
            cfg.panel.zero_as_missing = p.value("zero_as_missing", true);
            if (p.contains("target_lags")) {
                cfg.panel.target_lags = positive_list(p.at("target_lags"), "panel.target_lags");
            }
            if (p.contains("feature_lags")) {
                cfg.panel.feature_lags = positive_list(p.at("feature_lags"), "panel.feature_lags");
            }
            std::string mode = p.value("neighbor_mode", std::string("none"));
            if (mode == "adjacent") {
                cfg.panel.neighbor_mode = NeighborMode::Adjacent;
            }
            else if (mode == "all") {
                cfg.panel.neighbor_mode = NeighborMode::All;
            }
            else if (mode != "none") {
                fail(ErrorCode::InvalidConfig, "panel.neighbor_mode must be none, adjacent or all");
            }
            if (p.contains("neighbor_columns")) {
                cfg.panel.neighbor_columns = p.at("neighbor_columns").get<std::vector<std::string>>();
            }
            cfg.panel.missingness_flags = p.value("missingness_flags", true);
            cfg.panel.impute            = p.value("impute", true);
            if (p.contains("epoch")) {
                cfg.panel.epoch = parse_period(p.at("epoch").get<std::string>());
            }
            if (p.contains("first_period") != p.contains("last_period")) {
                fail(ErrorCode::InvalidConfig, "panel.first_period and panel.last_period go together");
            }
            if (p.contains("first_period")) {
                cfg.panel.periods = PeriodRange(parse_period(p.at("first_period").get<std::string>()),
                                                parse_period(p.at("last_period").get<std::string>()));
            }
        }
        if (cfg.panel.neighbor_mode == NeighborMode::Adjacent && !cfg.paths.adjacency) {
            fail(ErrorCode::InvalidConfig, "neighbor_mode adjacent needs paths.adjacency");
        }

        const json& m = j.at("models");
        check_keys(m, "models", {"seed", "benchmarks", "grids"});
        cfg.models.seed = m.value("seed", std::uint64_t{42});
        std::set<std::string> ids;
        if (m.contains("benchmarks")) {
            for (json b : m.at("benchmarks")) {
                b["family"]   = "benchmark";
                ModelSpec s   = spec_from_json(b);
                std::string id = std::get<BenchmarkSpec>(s).id();
                if (!ids.insert(id).second) {
                    fail(ErrorCode::InvalidConfig, "duplicate benchmark " + id);
                }
                cfg.models.entries.push_back({id, {s}});
            }
        }
        if (m.contains("grids")) {
            const json& grids = m.at("grids");
            check_keys(grids, "models.grids", {"ridge", "lasso", "tree", "forest", "gbm"});
            for (const char* family : kGridFamilies) {
                if (!grids.contains(family)) {
                    continue;
                }
                ModelEntry e{family, {}};
                for (json s : grids.at(family)) {
                    s["family"] = family;
                    e.grid.push_back(spec_from_json(s));
                }
                if (e.grid.empty()) {
                    fail(ErrorCode::InvalidConfig, std::string("models.grids.") + family + " is empty");
                }
                cfg.models.entries.push_back(std::move(e));
            }
        }
        if (cfg.models.entries.empty()) {
            fail(ErrorCode::InvalidConfig, "models: nothing to evaluate");
        }

        if (j.contains("evaluation")) {
            const json& e = j.at("evaluation");
            check_keys(e, "evaluation",
                       {"cv", "k", "min_train", "train_len", "metric", "lambda_over", "train_end",
                        "forward_selection"});
            std::string cv = e.value("cv", std::string("expanding"));
            if (cv == "expanding") {
                cfg.evaluation.cv = CvKind::Expanding;
            }
            else if (cv == "sliding") {
                cfg.evaluation.cv = CvKind::Sliding;
            }
            else {
                fail(ErrorCode::InvalidConfig, "evaluation.cv must be expanding or sliding");
            }
            cfg.evaluation.k         = e.value("k", 5);
            cfg.evaluation.min_train = e.value("min_train", 24);
            cfg.evaluation.train_len = e.value("train_len", cfg.evaluation.min_train);
            if (cfg.evaluation.k < 1 || cfg.evaluation.min_train < 1 || cfg.evaluation.train_len < 1) {
                fail(ErrorCode::InvalidConfig, "evaluation.k, min_train and train_len must be >= 1");
            }
            cfg.evaluation.metric =
                parse_metric(e.value("metric", std::string("rmse")), e.value("lambda_over", 1.0));
            if (e.contains("train_end") && !e.at("train_end").is_null()) {
                cfg.evaluation.train_end = parse_period(e.at("train_end").get<std::string>());
            }
            cfg.evaluation.forward_selection = e.value("forward_selection", std::size_t{0});
        }
    }
    catch (const json::exception& e) {
        fail(ErrorCode::InvalidConfig, std::string("config: ") + e.what());
    }
    catch (const Error& e) {
        if (e.code() != ErrorCode::InvalidConfig) {
            fail(ErrorCode::InvalidConfig, std::string("config: ") + e.what());
        }
        throw;
    }
    return cfg;
}

PipelineConfig load_config(const fs::path& path)
{
    std::string text = read_file(path);
    fs::path base    = path.parent_path();
    return parse_config(text, base.empty() ? fs::path(".") : base);
}

} // namespace fdf
