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
#include "scoring.hpp"

#include "csv.hpp"
#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fdf
{

using nlohmann::json;

std::vector<std::size_t> common_support(std::span<const ModelPredictions> predictions,
                                        std::span<const double> actuals, std::span<const std::size_t> candidates)
{
    for (const auto& p : predictions) {
        if (p.values.size() != actuals.size()) {
            fail(ErrorCode::LengthMismatch, "model '" + p.model + "' has " + std::to_string(p.values.size()) +
                                                " predictions for " + std::to_string(actuals.size()) + " observations");
        }
    }
    std::vector<std::size_t> pool;
    if (candidates.empty()) {
        pool.resize(actuals.size());
        std::iota(pool.begin(), pool.end(), 0);
    }
    else {
        pool.assign(candidates.begin(), candidates.end());
        std::sort(pool.begin(), pool.end());
        pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    }
    std::vector<std::size_t> out;
    for (std::size_t i : pool) {
        if (i >= actuals.size() || std::isnan(actuals[i])) {
            continue;
        }
        bool all = std::all_of(predictions.begin(), predictions.end(),
                               [&](const ModelPredictions& p) { return !std::isnan(p.values[i]); });
        if (all) {
            out.push_back(i);
        }
    }
    if (out.empty()) {
        fail(ErrorCode::NoCommonSupport, "no observation has an actual value and a prediction from every model");
    }
    return out;
}

ScoreTable score_models(std::span<const ModelPredictions> predictions, std::span<const double> actuals,
                        std::span<const std::size_t> region_of, std::span<const std::string> region_names,
                        const Metric& metric, std::span<const std::size_t> candidates)
{
    if (region_of.size() != actuals.size()) {
        fail(ErrorCode::LengthMismatch, "score_models: region labels and actuals differ in length");
    }
    std::vector<std::size_t> support = common_support(predictions, actuals, candidates);
    ScoreTable table;
    if (metric.kind == MetricKind::MAPE) {
        std::size_t before = support.size();
        std::erase_if(support, [&](std::size_t i) { return actuals[i] == 0.0; });
        table.excluded_zero_actuals = before - support.size();
        if (support.empty()) {
            fail(ErrorCode::NoCommonSupport, "every supported observation has a zero actual (MAPE)");
        }
    }
    table.support = support.size();

    auto score_on = [&](const ModelPredictions& p, const std::vector<std::size_t>& idx) {
        std::vector<double> pred, act;
        pred.reserve(idx.size());
        act.reserve(idx.size());
        for (std::size_t i : idx) {
            pred.push_back(p.values[i]);
            act.push_back(actuals[i]);
        }
        return evaluate_metric(pred, act, metric);
    };

    std::vector<std::vector<std::size_t>> per_region(region_names.size());
    for (std::size_t i : support) {
        if (region_of[i] >= region_names.size()) {
            fail(ErrorCode::IndexOutOfRange, "score_models: region label out of range");
        }
        per_region[region_of[i]].push_back(i);
    }
    std::vector<std::size_t> present;
    for (std::size_t r = 0; r < region_names.size(); ++r) {
        if (!per_region[r].empty()) {
            present.push_back(r);
            table.regions.push_back(region_names[r]);
            table.region_support.push_back(per_region[r].size());
        }
    }
    for (const auto& p : predictions) {
        table.models.push_back(p.model);
        table.overall.push_back(score_on(p, support));
        std::vector<double> row;
        for (std::size_t r : present) {
            row.push_back(score_on(p, per_region[r]));
        }
        table.by_region.push_back(std::move(row));
    }
    return table;
}

std::vector<double> average_ranks(std::span<const double> scores)
{
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    std::vector<double> ranks(scores.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) {
            ++j;
        }
        double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = avg;
        }
        i = j + 1;
    }
    return ranks;
}

void rank_by_region(HorizonScores& scores)
{
    scores.ranks.assign(scores.regions.size(), {});
    for (std::size_t r = 0; r < scores.regions.size(); ++r) {
        std::vector<double> column;
        for (const auto& model_row : scores.region_scores) {
            column.push_back(model_row.at(r));
        }
        scores.ranks[r] = average_ranks(column);
    }
}

const ReportModel* ScoreReport::find_model(const std::string& id) const
{
    for (const auto& m : models) {
        if (m.id == id) {
            return &m;
        }
    }
    return nullptr;
}

namespace
{

json number_or_null(double v)
{
    return std::isnan(v) ? json(nullptr) : json(v);
}

json series_json(const std::vector<double>& v)
{
    json out = json::array();
    for (double x : v) {
        out.push_back(number_or_null(x));
    }
    return out;
}

std::vector<double> series_from(const json& j)
{
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& x : j) {
        out.push_back(x.is_null() ? std::nan("") : x.get<double>());
    }
    return out;
}

json range_json(const PeriodRange& r)
{
    return json{{"first", r.first.to_string()}, {"last", r.last.to_string()}};
}

PeriodRange range_from(const json& j)
{
    return PeriodRange(parse_period(j.at("first").get<std::string>()), parse_period(j.at("last").get<std::string>()));
}

} // namespace

json ScoreReport::to_json() const
{
    json models_json = json::array();
    for (const auto& m : models) {
        models_json.push_back(json{{"id", m.id}, {"label", m.label}, {"family", m.family}});
    }
    json horizons_json = json::array();
    for (const auto& h : horizons) {
        json model_rows = json::array();
        for (std::size_t i = 0; i < h.models.size(); ++i) {
            model_rows.push_back(json{{"id", h.models[i]},
                                      {"spec", h.selected_specs[i]},
                                      {"train", {{"score", number_or_null(h.train[i].value)},
                                                 {"support_n", h.train[i].support}}},
                                      {"test", {{"score", number_or_null(h.test[i].value)},
                                                {"support_n", h.test[i].support}}},
                                      {"region_scores", series_json(h.region_scores[i])},
                                      {"predictions", series_json(h.predictions[i])}});
        }
        json ranks = json::array();
        for (const auto& r : h.ranks) {
            ranks.push_back(r);
        }
        horizons_json.push_back(json{{"horizon", h.horizon},
                                     {"models", model_rows},
                                     {"regions", h.regions},
                                     {"region_support", h.region_support},
                                     {"ranks", ranks},
                                     {"actual", series_json(h.actual)},
                                     {"cv", h.cv}});
    }
    return json{{"format", "fdf-report"},
                {"schema_version", schema_version},
                {"toolkit_version", toolkit_version},
                {"metric", {{"kind", metric.name()}, {"lambda_over", metric.lambda_over}}},
                {"seed", seed},
                {"periods", range_json(periods)},
                {"train", range_json(train)},
                {"test", range_json(test)},
                {"regions", regions},
                {"models", models_json},
                {"horizons", horizons_json}};
}

ScoreReport ScoreReport::from_json(const json& j)
{
    try {
        if (j.at("format").get<std::string>() != "fdf-report") {
            fail(ErrorCode::MalformedReport, "not an fdf report document");
        }
        ScoreReport r;
        r.schema_version = j.at("schema_version").get<int>();
        if (r.schema_version != kReportSchemaVersion) {
            fail(ErrorCode::MalformedReport, "unsupported report schema version " + std::to_string(r.schema_version));
        }
        r.toolkit_version = j.at("toolkit_version").get<std::string>();
        r.metric          = parse_metric(j.at("metric").at("kind").get<std::string>(),
                                         j.at("metric").at("lambda_over").get<double>());
        r.seed            = j.at("seed").get<std::uint64_t>();
        r.periods         = range_from(j.at("periods"));
        r.train           = range_from(j.at("train"));
        r.test            = range_from(j.at("test"));
        r.regions         = j.at("regions").get<std::vector<std::string>>();
        for (const auto& m : j.at("models")) {
            r.models.push_back({m.at("id").get<std::string>(), m.at("label").get<std::string>(),
                                m.at("family").get<std::string>()});
        }
        const std::size_t rows = r.regions.size() * r.periods.size();
        for (const auto& hj : j.at("horizons")) {
            HorizonScores h;
            h.horizon        = hj.at("horizon").get<int>();
            h.regions        = hj.at("regions").get<std::vector<std::string>>();
            h.region_support = hj.at("region_support").get<std::vector<std::size_t>>();
            h.actual         = series_from(hj.at("actual"));
            h.cv             = hj.at("cv");
            for (const auto& row : hj.at("ranks")) {
                h.ranks.push_back(row.get<std::vector<double>>());
            }
            for (const auto& mj : hj.at("models")) {
                h.models.push_back(mj.at("id").get<std::string>());
                if (!r.find_model(h.models.back())) {
                    fail(ErrorCode::MalformedReport, "horizon references unknown model '" + h.models.back() + "'");
                }
                h.selected_specs.push_back(mj.at("spec"));
                const auto& tr = mj.at("train");
                const auto& te = mj.at("test");
                h.train.push_back({tr.at("score").is_null() ? std::nan("") : tr.at("score").get<double>(),
                                   tr.at("support_n").get<std::size_t>()});
                h.test.push_back({te.at("score").is_null() ? std::nan("") : te.at("score").get<double>(),
                                  te.at("support_n").get<std::size_t>()});
                h.region_scores.push_back(series_from(mj.at("region_scores")));
                h.predictions.push_back(series_from(mj.at("predictions")));
                if (h.region_scores.back().size() != h.regions.size() || h.predictions.back().size() != rows) {
                    fail(ErrorCode::MalformedReport, "model '" + h.models.back() + "' has inconsistent array sizes");
                }
            }
            if (h.actual.size() != rows || h.ranks.size() != h.regions.size() ||
                h.region_support.size() != h.regions.size()) {
                fail(ErrorCode::MalformedReport, "horizon " + std::to_string(h.horizon) + " has inconsistent sizes");
            }
            for (const auto& rank_row : h.ranks) {
                if (rank_row.size() != h.models.size()) {
                    fail(ErrorCode::MalformedReport, "rank rows must cover every model");
                }
            }
            r.horizons.push_back(std::move(h));
        }
        return r;
    }
    catch (const json::exception& e) {
        fail(ErrorCode::MalformedReport, std::string("report: ") + e.what());
    }
    catch (const Error& e) {
        if (e.code() != ErrorCode::MalformedReport) {
            fail(ErrorCode::MalformedReport, std::string("report: ") + e.what());
        }
        throw;
    }
}

std::string ScoreReport::to_csv() const
{
    std::string out = "model,horizon,region,metric,partition,score,support_n,rank\n";
    const std::string metric_name = metric.name();
    for (const auto& h : horizons) {
        std::string hz = std::to_string(h.horizon);
        for (std::size_t i = 0; i < h.models.size(); ++i) {
            const std::string model = csv_escape(h.models[i]);
            out += model + ',' + hz + ",ALL," + metric_name + ",train," + format_double(h.train[i].value) + ',' +
                   std::to_string(h.train[i].support) + ",\n";
            out += model + ',' + hz + ",ALL," + metric_name + ",test," + format_double(h.test[i].value) + ',' +
                   std::to_string(h.test[i].support) + ",\n";
            for (std::size_t r = 0; r < h.regions.size(); ++r) {
                out += model + ',' + hz + ',' + csv_escape(h.regions[r]) + ',' + metric_name + ",test," +
                       format_double(h.region_scores[i][r]) + ',' + std::to_string(h.region_support[r]) + ',' +
                       format_double(h.ranks[r][i]) + '\n';
            }
        }
    }
    return out;
}

} // namespace fdf
