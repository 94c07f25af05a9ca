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
#include "selection.hpp"

#include "error.hpp"
#include "rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

namespace fdf
{

using nlohmann::json;

unsigned default_thread_count()
{
    if (const char* env = std::getenv("FDF_THREADS")) {
        if (auto v = try_parse_int(env); v && *v > 0) {
            return static_cast<unsigned>(*v);
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& task)
{
    if (threads == 0) {
        threads = default_thread_count();
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            task(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first;
    std::mutex guard;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) {
                return;
            }
            try {
                task(i);
            }
            catch (...) {
                std::lock_guard lock(guard);
                if (!first) {
                    first = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) {
        t.join();
    }
    if (first) {
        std::rethrow_exception(first);
    }
}

std::vector<double> benchmark_predictions(const PanelTable& panel, const BenchmarkSpec& spec, int horizon,
                                          std::span<const std::size_t> rows)
{
    if (spec.kind == BenchmarkKind::Lag && spec.n < horizon) {
        fail(ErrorCode::LagShorterThanHorizon, "a " + std::to_string(spec.n) + "-month lag cannot forecast " +
                                                   std::to_string(horizon) + " months ahead");
    }
    const auto target = panel.target();
    std::vector<double> out(rows.size(), kMissing);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::size_t row = rows[i];
        long issuance   = static_cast<long>(panel.period_offset_of(row)) - horizon;
        if (issuance < 0) {
            continue;
        }
        std::size_t start = panel.row(panel.region_of(row), 0);
        auto history      = target.subspan(start, static_cast<std::size_t>(issuance) + 1);
        if (auto v = predict_benchmark(history, spec, horizon)) {
            out[i] = *v;
        }
    }
    return out;
}

std::vector<std::size_t> scorable_rows(const PanelTable& panel, const PeriodRange& range)
{
    std::vector<std::size_t> out;
    for (std::size_t row : rows_in_range(panel, range)) {
        if (!is_missing(panel.target()[row])) {
            out.push_back(row);
        }
    }
    return out;
}

namespace
{

void require_panel_family(const ModelSpec& spec)
{
    if (std::holds_alternative<LogisticSpec>(spec) || std::holds_alternative<GravitySpec>(spec)) {
        fail(ErrorCode::InvalidArgument, family_name(spec) + " models are not panel regressors");
    }
}

std::vector<std::size_t> resolve_columns(const PanelTable& panel, std::span<const std::string> names)
{
    std::vector<std::size_t> out;
    out.reserve(names.size());
    for (const auto& n : names) {
        out.push_back(panel.column_index(n));
    }
    return out;
}

json series_or_null(const std::vector<double>& v)
{
    json out = json::array();
    for (double x : v) {
        out.push_back(std::isnan(x) ? json(nullptr) : json(x));
    }
    return out;
}

std::vector<double> series_from(const json& j)
{
    std::vector<double> out;
    for (const auto& x : j) {
        out.push_back(x.is_null() ? kMissing : x.get<double>());
    }
    return out;
}

std::uint64_t derived_seed(std::uint64_t seed, std::size_t fold, std::size_t index)
{
    return Rng(seed, fold + 1).substream(index).next();
}

} // namespace

PanelModel fit_panel_model(const PanelTable& panel, const ModelSpec& spec, std::span<const std::string> columns,
                           const PeriodRange& train, const TargetTransform& transform, std::uint64_t seed,
                           std::vector<std::string>* warnings)
{
    PanelModel model;
    model.spec    = spec;
    model.horizon = panel.horizon();
    model.columns.assign(columns.begin(), columns.end());
    if (const auto* b = std::get_if<BenchmarkSpec>(&spec)) {
        if (b->kind == BenchmarkKind::Lag && b->n < panel.horizon()) {
            fail(ErrorCode::LagShorterThanHorizon, "a " + std::to_string(b->n) + "-month lag cannot forecast " +
                                                       std::to_string(panel.horizon()) + " months ahead");
        }
        model.columns.clear();
        model.transform.transform    = TargetTransform{};
        model.transform.period_count = panel.period_count();
        return model;
    }
    require_panel_family(spec);

    TransformedPanel tp   = transform_target(panel, transform, train);
    model.transform       = tp.state;
    const auto target     = tp.panel.target();
    const auto column_ids = resolve_columns(panel, columns);

    std::vector<std::size_t> fit_rows;
    for (std::size_t row : rows_in_range(panel, train)) {
        if (is_missing(target[row])) {
            continue;
        }
        bool complete = std::none_of(column_ids.begin(), column_ids.end(),
                                     [&](std::size_t c) { return is_missing(panel.column(c)[row]); });
        if (complete) {
            fit_rows.push_back(row);
        }
    }
    if (fit_rows.empty()) {
        fail(ErrorCode::InsufficientRows, "no complete training rows in " + train.first.to_string() + ".." +
                                              train.last.to_string());
    }

    for (std::size_t c : column_ids) {
        model.stats.push_back(compute_column_stats(panel.column(c), fit_rows));
    }
    Eigen::MatrixXd X(static_cast<Eigen::Index>(fit_rows.size()), static_cast<Eigen::Index>(column_ids.size()));
    Eigen::VectorXd y(static_cast<Eigen::Index>(fit_rows.size()));
    for (std::size_t i = 0; i < fit_rows.size(); ++i) {
        for (std::size_t j = 0; j < column_ids.size(); ++j) {
            X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                standardize_value(panel.column(column_ids[j])[fit_rows[i]], model.stats[j]);
        }
        y(static_cast<Eigen::Index>(i)) = target[fit_rows[i]];
    }
    model.fitted = Estimator{spec, seed}.fit(X, y, warnings);
    return model;
}

std::vector<double> PanelModel::predict(const PanelTable& panel, std::span<const std::size_t> rows) const
{
    if (!fitted) {
        const auto* b = std::get_if<BenchmarkSpec>(&spec);
        if (!b) {
            fail(ErrorCode::InvalidArgument, "model has not been fitted");
        }
        return benchmark_predictions(panel, *b, horizon, rows);
    }
    const auto column_ids = resolve_columns(panel, columns);
    std::vector<std::size_t> complete_rows;
    std::vector<std::size_t> positions;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        bool complete = std::none_of(column_ids.begin(), column_ids.end(),
                                     [&](std::size_t c) { return is_missing(panel.column(c)[rows[i]]); });
        if (complete) {
            complete_rows.push_back(rows[i]);
            positions.push_back(i);
        }
    }
    std::vector<double> out(rows.size(), kMissing);
    if (complete_rows.empty()) {
        return out;
    }
    Eigen::MatrixXd X(static_cast<Eigen::Index>(complete_rows.size()), static_cast<Eigen::Index>(column_ids.size()));
    for (std::size_t i = 0; i < complete_rows.size(); ++i) {
        for (std::size_t j = 0; j < column_ids.size(); ++j) {
            X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                standardize_value(panel.column(column_ids[j])[complete_rows[i]], stats[j]);
        }
    }
    Eigen::VectorXd raw = fitted->predict(X);
    std::vector<double> transformed(raw.data(), raw.data() + raw.size());
    std::vector<double> back = inverse_transform(transformed, complete_rows, transform);
    for (std::size_t i = 0; i < positions.size(); ++i) {
        out[positions[i]] = back[i];
    }
    return out;
}

json PanelModel::to_json() const
{
    json stats_json = json::array();
    for (const auto& s : stats) {
        stats_json.push_back(json{{"mean", s.mean}, {"sd", s.sd}});
    }
    json tr{{"kind", std::string(transform_kind_name(transform.transform.kind))},
            {"threshold", transform.transform.threshold},
            {"period_count", transform.period_count},
            {"region_mean", transform.region_mean},
            {"region_sd", transform.region_sd},
            {"base", series_or_null(transform.base)}};
    return json{{"format", "fdf-panel-model"},
                {"version", kModelFormatVersion},
                {"spec", spec_to_json(spec)},
                {"horizon", horizon},
                {"columns", columns},
                {"stats", stats_json},
                {"transform", tr},
                {"model", fitted ? fitted->to_json() : json(nullptr)}};
}

PanelModel PanelModel::from_json(const json& j)
{
    try {
        if (j.at("format").get<std::string>() != "fdf-panel-model" ||
            j.at("version").get<int>() != kModelFormatVersion) {
            fail(ErrorCode::MalformedModel, "not a supported panel model document");
        }
        PanelModel m;
        m.spec    = spec_from_json(j.at("spec"));
        m.horizon = j.at("horizon").get<int>();
        m.columns = j.at("columns").get<std::vector<std::string>>();
        for (const auto& s : j.at("stats")) {
            m.stats.push_back({s.at("mean").get<double>(), s.at("sd").get<double>()});
        }
        const auto& tr                 = j.at("transform");
        m.transform.transform.kind      = parse_transform_kind(tr.at("kind").get<std::string>());
        m.transform.transform.threshold = tr.at("threshold").get<double>();
        m.transform.period_count        = tr.at("period_count").get<std::size_t>();
        m.transform.region_mean         = tr.at("region_mean").get<std::vector<double>>();
        m.transform.region_sd           = tr.at("region_sd").get<std::vector<double>>();
        m.transform.base                = series_from(tr.at("base"));
        if (!j.at("model").is_null()) {
            m.fitted = FittedModel::from_json(j.at("model"));
        }
        if (m.stats.size() != m.columns.size()) {
            fail(ErrorCode::MalformedModel, "column statistics do not match the column list");
        }
        return m;
    }
    catch (const json::exception& e) {
        fail(ErrorCode::MalformedModel, std::string("panel model: ") + e.what());
    }
    catch (const Error& e) {
        if (e.code() != ErrorCode::MalformedModel) {
            fail(ErrorCode::MalformedModel, std::string("panel model: ") + e.what());
        }
        throw;
    }
}

json CvResult::to_json() const
{
    json specs = json::array();
    for (const auto& e : entries) {
        json row{{"spec", spec_to_json(e.spec)}, {"failed", e.failed}};
        if (e.failed) {
            row["failure"] = e.failure;
        }
        else {
            row["fold_scores"]  = e.fold_scores;
            row["mean_score"]   = e.mean_score;
            row["mean_nonzero"] = e.mean_nonzero;
        }
        specs.push_back(std::move(row));
    }
    return json{{"selected", spec_to_json(entries.at(best).spec)}, {"candidates", specs}};
}

namespace
{

struct FoldFit {
    std::vector<double> predictions;
    std::size_t nonzero = 0;
    bool failed         = false;
    std::string failure;
};

std::vector<std::size_t> region_labels(const PanelTable& panel)
{
    std::vector<std::size_t> out(panel.rows());
    for (std::size_t row = 0; row < panel.rows(); ++row) {
        out[row] = panel.region_of(row);
    }
    return out;
}

/// Scores `preds` (each aligned with `rows`) on their common support.
std::vector<double> score_on_rows(const PanelTable& panel, std::span<const std::size_t> rows,
                                  const std::vector<const std::vector<double>*>& preds, const Metric& metric)
{
    std::vector<double> actuals;
    for (std::size_t row : rows) {
        actuals.push_back(panel.target()[row]);
    }
    std::vector<ModelPredictions> mp;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        mp.push_back({std::to_string(i), *preds[i]});
    }
    std::vector<std::size_t> labels(rows.size(), 0);
    const std::string all = "ALL";
    return score_models(mp, actuals, labels, std::span<const std::string>(&all, 1), metric).overall;
}

} // namespace

CvResult cross_validate(std::span<const ModelSpec> grid, const PanelTable& panel, const SplitPlan& plan,
                        std::span<const std::string> columns, const CvOptions& options)
{
    if (grid.empty()) {
        fail(ErrorCode::InvalidArgument, "cross_validate: empty grid");
    }
    validate_plan(plan);
    const std::size_t G = grid.size();
    const std::size_t F = plan.folds.size();
    std::vector<std::vector<std::size_t>> val_rows(F);
    for (std::size_t f = 0; f < F; ++f) {
        val_rows[f] = scorable_rows(panel, plan.folds[f].validation);
    }

    std::vector<FoldFit> fits(F * G);
    parallel_for(F * G, options.threads, [&](std::size_t task) {
        std::size_t f = task / G;
        std::size_t g = task % G;
        FoldFit& out  = fits[task];
        try {
            PanelModel m = fit_panel_model(panel, grid[g], columns, plan.folds[f].train, options.transform,
                                           derived_seed(options.seed, f, g));
            out.predictions = m.predict(panel, val_rows[f]);
            out.nonzero     = m.fitted ? m.fitted->nonzero_parameters() : 0;
        }
        catch (const Error& e) {
            out.failed  = true;
            out.failure = e.what();
        }
    });

    CvResult result;
    std::vector<std::size_t> survivors;
    for (std::size_t g = 0; g < G; ++g) {
        CvEntry e;
        e.spec = grid[g];
        e.key  = spec_key(grid[g]);
        for (std::size_t f = 0; f < F; ++f) {
            if (fits[f * G + g].failed) {
                e.failed  = true;
                e.failure = fits[f * G + g].failure;
                break;
            }
        }
        if (!e.failed) {
            survivors.push_back(g);
        }
        result.entries.push_back(std::move(e));
    }
    if (survivors.empty()) {
        fail(ErrorCode::AllSpecsFailed, "every specification failed; first error: " + result.entries[0].failure);
    }

    for (std::size_t f = 0; f < F; ++f) {
        if (val_rows[f].empty()) {
            fail(ErrorCode::NoCommonSupport, "validation block " + plan.folds[f].validation.first.to_string() +
                                                 ".." + plan.folds[f].validation.last.to_string() +
                                                 " has no observed targets");
        }
        std::vector<const std::vector<double>*> preds;
        for (std::size_t g : survivors) {
            preds.push_back(&fits[f * G + g].predictions);
        }
        auto scores = score_on_rows(panel, val_rows[f], preds, options.metric);
        for (std::size_t i = 0; i < survivors.size(); ++i) {
            auto& e = result.entries[survivors[i]];
            e.fold_scores.push_back(scores[i]);
            e.mean_nonzero += static_cast<double>(fits[f * G + survivors[i]].nonzero) / static_cast<double>(F);
        }
    }
    for (std::size_t g : survivors) {
        auto& e      = result.entries[g];
        e.mean_score = std::accumulate(e.fold_scores.begin(), e.fold_scores.end(), 0.0) /
                       static_cast<double>(e.fold_scores.size());
    }
    result.best = *std::min_element(survivors.begin(), survivors.end(), [&](std::size_t a, std::size_t b) {
        const auto& ea = result.entries[a];
        const auto& eb = result.entries[b];
        if (ea.mean_score != eb.mean_score) {
            return ea.mean_score < eb.mean_score;
        }
        if (ea.mean_nonzero != eb.mean_nonzero) {
            return ea.mean_nonzero < eb.mean_nonzero;
        }
        return ea.key < eb.key;
    });
    return result;
}

std::vector<std::string> forward_select(std::span<const std::string> candidates, const ModelSpec& spec,
                                        const PanelTable& panel, const SplitPlan& plan, std::size_t max_features,
                                        const CvOptions& options)
{
    validate_plan(plan);
    std::vector<std::string> pool(candidates.begin(), candidates.end());
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    const std::size_t F = plan.folds.size();
    std::vector<std::vector<std::size_t>> val_rows(F);
    for (std::size_t f = 0; f < F; ++f) {
        val_rows[f] = scorable_rows(panel, plan.folds[f].validation);
    }

    auto mean_score = [&](const std::vector<std::string>& cols) {
        double total = 0.0;
        for (std::size_t f = 0; f < F; ++f) {
            PanelModel m = fit_panel_model(panel, spec, cols, plan.folds[f].train, options.transform,
                                           derived_seed(options.seed, f, 0));
            auto preds   = m.predict(panel, val_rows[f]);
            total += score_on_rows(panel, val_rows[f], {&preds}, options.metric)[0];
        }
        return total / static_cast<double>(F);
    };

    std::vector<std::string> selected;
    double current = std::numeric_limits<double>::infinity();
    while (selected.size() < max_features && !pool.empty()) {
        std::vector<double> scores(pool.size(), std::numeric_limits<double>::infinity());
        parallel_for(pool.size(), options.threads, [&](std::size_t i) {
            auto cols = selected;
            cols.push_back(pool[i]);
            try {
                scores[i] = mean_score(cols);
            }
            catch (const Error&) {
                // An unusable column simply never wins.
            }
        });
        std::size_t best = 0;
        for (std::size_t i = 1; i < pool.size(); ++i) {
            if (scores[i] < scores[best]) {
                best = i;
            }
        }
        if (!(scores[best] < current)) {
            break;
        }
        current = scores[best];
        selected.push_back(pool[best]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return selected;
}

HoldoutResult holdout_evaluate(const PanelTable& panel, Period train_end, std::span<const HoldoutCandidate> candidates,
                               const CvOptions& options, std::vector<std::string>* warnings)
{
    const PeriodRange& all = panel.periods();
    if (train_end < all.first) {
        fail(ErrorCode::InvalidArgument, "train_end " + train_end.to_string() + " precedes the panel");
    }
    if (train_end >= all.last) {
        fail(ErrorCode::EmptyTestPartition, "train_end " + train_end.to_string() + " leaves no test periods");
    }
    const PeriodRange train(all.first, train_end);
    const PeriodRange test(train_end.next(), all.last);
    const int h = panel.horizon();

    auto train_rows = scorable_rows(panel, train);
    auto test_rows  = scorable_rows(panel, test);
    if (test_rows.empty()) {
        fail(ErrorCode::EmptyTestPartition, "no observed targets after " + train_end.to_string());
    }
    if (train_rows.empty()) {
        fail(ErrorCode::NoCommonSupport, "no observed targets up to " + train_end.to_string());
    }

    std::vector<const HoldoutCandidate*> kept;
    for (const auto& c : candidates) {
        if (const auto* b = std::get_if<BenchmarkSpec>(&c.spec); b && b->kind == BenchmarkKind::Lag && b->n < h) {
            if (warnings) {
                warnings->push_back(c.id + " omitted at horizon " + std::to_string(h) + " (lag shorter than horizon)");
            }
            continue;
        }
        kept.push_back(&c);
    }
    if (kept.empty()) {
        fail(ErrorCode::AllSpecsFailed, "no model is feasible at horizon " + std::to_string(h));
    }

    HoldoutResult result;
    result.models.resize(kept.size());
    std::vector<ModelPredictions> preds(kept.size());
    std::vector<std::size_t> every_row(panel.rows());
    std::iota(every_row.begin(), every_row.end(), 0);
    std::vector<std::vector<std::string>> fit_warnings(kept.size());
    parallel_for(kept.size(), options.threads, [&](std::size_t i) {
        result.models[i] = fit_panel_model(panel, kept[i]->spec, kept[i]->columns, train, options.transform,
                                           options.seed, &fit_warnings[i]);
        preds[i]         = {kept[i]->id, result.models[i].predict(panel, every_row)};
    });
    if (warnings) {
        for (std::size_t i = 0; i < kept.size(); ++i) {
            for (const auto& w : fit_warnings[i]) {
                warnings->push_back(kept[i]->id + " (h=" + std::to_string(h) + "): " + w);
            }
        }
    }

    const auto labels = region_labels(panel);
    const auto& names = panel.regions();
    ScoreTable train_table = score_models(preds, panel.target(), labels, names, options.metric, train_rows);
    ScoreTable test_table  = score_models(preds, panel.target(), labels, names, options.metric, test_rows);
    if (warnings && options.metric.kind == MetricKind::MAPE) {
        std::size_t excluded = train_table.excluded_zero_actuals + test_table.excluded_zero_actuals;
        if (excluded > 0) {
            warnings->push_back("MAPE excluded " + std::to_string(excluded) + " zero-actual rows at horizon " +
                                std::to_string(h));
        }
    }

    HorizonScores& s = result.scores;
    s.horizon        = h;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        s.models.push_back(kept[i]->id);
        s.selected_specs.push_back(spec_to_json(kept[i]->spec));
        s.train.push_back({train_table.overall[i], train_table.support});
        s.test.push_back({test_table.overall[i], test_table.support});
        s.predictions.push_back(std::move(preds[i].values));
    }
    s.regions        = test_table.regions;
    s.region_support = test_table.region_support;
    s.region_scores  = test_table.by_region;
    rank_by_region(s);
    s.actual.assign(panel.target().begin(), panel.target().end());
    return result;
}

} // namespace fdf
