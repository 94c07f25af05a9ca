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
#include "pipeline.hpp"

#include "csv.hpp"
#include "digest.hpp"
#include "error.hpp"

#include <algorithm>
#include <chrono>
#include <map>

namespace fdf
{

using nlohmann::json;
namespace fs = std::filesystem;

LoadedInputs load_inputs(const PipelineConfig& config)
{
    LoadedInputs in;
    in.registry = load_registry(config.paths.regions, config.paths.adjacency, config.paths.distances);
    in.files.push_back(config.paths.regions);
    if (config.paths.adjacency) {
        in.files.push_back(*config.paths.adjacency);
    }
    if (config.paths.distances) {
        in.files.push_back(*config.paths.distances);
    }
    auto records = ingest_flows(config.paths.flows, in.registry);
    in.files.push_back(config.paths.flows);
    if (config.panel.periods) {
        in.periods = *config.panel.periods;
        std::size_t outside =
            std::count_if(records.begin(), records.end(), [&](const FlowRecord& r) { return !in.periods.contains(r.period); });
        if (outside > 0) {
            in.warnings.push_back("flows: " + std::to_string(outside) + " records outside the configured periods ignored");
        }
    }
    else {
        if (records.empty()) {
            fail(ErrorCode::InvalidArgument, config.paths.flows.string() + " has no flow records");
        }
        auto [lo, hi] = std::minmax_element(records.begin(), records.end(),
                                            [](const FlowRecord& a, const FlowRecord& b) { return a.period < b.period; });
        in.periods    = PeriodRange(lo->period, hi->period);
    }
    in.matrices = build_flow_matrices(records, in.registry, in.periods);
    if (config.paths.events) {
        auto events = ingest_events(*config.paths.events, in.registry);
        in.files.push_back(*config.paths.events);
        auto buckets = aggregate_events(events, in.registry, in.periods);
        in.features.push_back(event_feature_table(buckets, in.registry, in.periods));
    }
    for (const auto& f : config.paths.features) {
        in.features.push_back(load_feature_table(f, in.registry));
        in.files.push_back(f);
    }
    return in;
}

PanelTable build_panel(const LoadedInputs& inputs, const PipelineConfig& config, int horizon)
{
    ForecastTask task;
    task.horizon   = horizon;
    task.target    = config.task.target;
    task.partner   = config.task.partner;
    task.transform = config.task.transform;
    AssembleOptions opts{config.panel.zero_as_missing, config.panel.epoch};
    PanelTable panel = assemble_panel(inputs.matrices, inputs.features, inputs.registry, task, opts);

    std::vector<std::string> feature_names;
    for (std::size_t c = 0; c < panel.column_count(); ++c) {
        if (panel.meta(c).source != "calendar") {
            feature_names.push_back(panel.column_name(c));
        }
    }
    panel = add_target_lags(panel, config.panel.target_lags, task);
    if (!feature_names.empty() && !config.panel.feature_lags.empty()) {
        panel = add_feature_lags(panel, feature_names, config.panel.feature_lags, task);
    }
    if (config.panel.neighbor_mode) {
        std::vector<std::string> sources;
        for (const auto& base : config.panel.neighbor_columns) {
            const auto& lags = base == "target" ? config.panel.target_lags : config.panel.feature_lags;
            for (int k : lags) {
                std::string name = base == "target" ? "target_lag_" + std::to_string(k)
                                                    : base + "_lag_" + std::to_string(k);
                if (!panel.find_column(name)) {
                    fail(ErrorCode::InvalidConfig, "panel.neighbor_columns: no column '" + name + "'");
                }
                sources.push_back(name);
            }
        }
        panel = add_neighbor_features(panel, inputs.registry, sources, *config.panel.neighbor_mode);
    }
    std::vector<std::string> lagged;
    for (std::size_t c = 0; c < panel.column_count(); ++c) {
        const auto& m = panel.meta(c);
        if (m.source != "calendar" && m.lag >= 1 && !m.is_missing_flag) {
            lagged.push_back(panel.column_name(c));
        }
    }
    if (config.panel.missingness_flags) {
        panel = add_missingness_flags(panel, lagged);
    }
    if (config.panel.impute) {
        panel = impute_forward_fill(panel, lagged);
    }
    return panel;
}

std::vector<std::string> model_columns(const PanelTable& panel)
{
    std::vector<std::string> out;
    for (std::size_t c : panel.predictor_columns()) {
        out.push_back(panel.column_name(c));
    }
    return out;
}

Period resolve_train_end(const PipelineConfig& config, const PeriodRange& periods)
{
    if (config.evaluation.train_end) {
        return *config.evaluation.train_end;
    }
    long held = std::max<long>(1, static_cast<long>(periods.size()) / 5);
    return periods.last - held;
}

SplitPlan make_plan(const PipelineConfig& config, const PeriodRange& train_periods)
{
    const auto& e = config.evaluation;
    return e.cv == CvKind::Expanding ? expanding_splits(train_periods, e.k, e.min_train)
                                     : sliding_splits(train_periods, e.k, e.train_len);
}

std::string report_model_label(const std::string& id, const ModelSpec& spec)
{
    if (const auto* b = std::get_if<BenchmarkSpec>(&spec)) {
        return b->label();
    }
    static const std::map<std::string, std::string> labels{{"ridge", "Ridge Regression"},
                                                           {"lasso", "Lasso Regression"},
                                                           {"tree", "Decision Tree"},
                                                           {"forest", "Random Forest"},
                                                           {"gbm", "Gradient Boosting"}};
    auto it = labels.find(family_name(spec));
    return it == labels.end() ? id : it->second;
}

namespace
{

/// Split-gain importances for tree-based models, keyed by column name.
json importance_json(const PanelModel& m)
{
    if (!m.fitted) {
        return nullptr;
    }
    const std::size_t p = m.columns.size();
    std::vector<double> total(p, 0.0);
    auto add = [&](const TreeModel& t, double w) {
        auto imp = t.importances(p);
        for (std::size_t j = 0; j < p; ++j) {
            total[j] += w * imp[j];
        }
    };
    const auto& state = m.fitted->state();
    if (const auto* t = std::get_if<TreeModel>(&state)) {
        add(*t, 1.0);
    }
    else if (const auto* f = std::get_if<ForestModel>(&state)) {
        for (const auto& t : f->trees) {
            add(t, 1.0 / static_cast<double>(f->trees.size()));
        }
    }
    else if (const auto* g = std::get_if<GbmModel>(&state)) {
        for (const auto& t : g->trees) {
            add(t, 1.0);
        }
    }
    else {
        return nullptr;
    }
    json out = json::object();
    for (std::size_t j = 0; j < p; ++j) {
        if (total[j] > 0.0) {
            out[m.columns[j]] = total[j];
        }
    }
    return out;
}

class Stopwatch
{
public:
    void mark(const std::string& what)
    {
        auto now = std::chrono::steady_clock::now();
        timings_[what] =
            std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
    }
    json to_json() const
    {
        return timings_;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
    json timings_                               = json::object();
};

fs::path out_dir_for(const PipelineConfig& config, const RunOptions& options)
{
    return options.out_dir.empty() ? config.output_dir : options.out_dir;
}

std::string display_path(const fs::path& p, const fs::path& base)
{
    fs::path rel = p.lexically_normal().lexically_relative(base.lexically_normal());
    return (rel.empty() || rel.native().starts_with("..") ? p.lexically_normal() : rel).generic_string();
}

void write_output(RunResult& result, const fs::path& path, std::string_view content)
{
    write_file(path, content);
    result.outputs.push_back(path);
}

void write_manifest(RunResult& result, const PipelineConfig& config, const LoadedInputs& inputs,
                    const fs::path& out_dir, const std::string& command, const Stopwatch& clock)
{
    json inputs_json = json::array();
    for (const auto& f : inputs.files) {
        inputs_json.push_back(json{{"path", display_path(f, config.base_dir)}, {"sha256", sha256_file(f)}});
    }
    json outputs_json = json::array();
    for (const auto& f : result.outputs) {
        outputs_json.push_back(json{{"path", display_path(f, out_dir)}, {"sha256", sha256_file(f)}});
    }
    json manifest{{"format", "fdf-manifest"},
                  {"command", command},
                  {"toolkit_version", FDF_VERSION_STRING},
                  {"config_sha256", sha256_hex(config.source_text)},
                  {"seed", config.models.seed},
                  {"inputs", inputs_json},
                  {"outputs", outputs_json},
                  {"timings_ms", clock.to_json()},
                  {"warnings", result.warnings}};
    write_output(result, out_dir / "manifest.json", manifest.dump(2) + "\n");
}

std::string alerts_csv(const PanelTable& panel, double threshold)
{
    auto labels       = derive_alert_labels(panel, threshold);
    std::string out   = "region,period,target,pct_change,label\n";
    const auto target = panel.target();
    for (std::size_t row = 0; row < panel.rows(); ++row) {
        double pct = kMissing;
        if (panel.period_offset_of(row) > 0) {
            double prev = target[row - 1];
            if (!is_missing(prev) && prev != 0.0 && !is_missing(target[row])) {
                pct = (target[row] - prev) / prev;
            }
        }
        out += csv_escape(panel.regions()[panel.region_of(row)]) + ',' + panel.period_of(row).to_string() + ',' +
               format_double(target[row]) + ',' + format_double(pct) + ',' +
               (labels[row] ? std::string(alert_label_name(*labels[row])) : std::string()) + '\n';
    }
    return out;
}

std::string proportions_csv(const LoadedInputs& inputs, const PanelTable& panel)
{
    std::string out = "region,inflow,internal,outflow,target_missing_proportion\n";
    for (std::size_t r = 0; r < inputs.registry.size(); ++r) {
        out += csv_escape(inputs.registry.name(r));
        try {
            FlowProportions p = flow_proportions(inputs.matrices, r);
            out += ',' + format_double(p.inflow) + ',' + format_double(p.internal) + ',' + format_double(p.outflow);
        }
        catch (const Error& e) {
            if (e.code() != ErrorCode::NoFlows) {
                throw;
            }
            out += ",,,";
        }
        out += ',' + format_double(panel.target_missing_proportion.at(r)) + '\n';
    }
    return out;
}

} // namespace

RunResult run_ingest(const PipelineConfig& config, const RunOptions& options)
{
    Stopwatch clock;
    RunResult result;
    const fs::path out = out_dir_for(config, options);
    LoadedInputs inputs = load_inputs(config);
    result.warnings     = inputs.warnings;
    clock.mark("load");
    const PanelTable* first = nullptr;
    std::vector<PanelTable> panels;
    for (int h : config.task.horizons) {
        panels.push_back(build_panel(inputs, config, h));
    }
    first = &panels.front();
    for (std::size_t i = 0; i < panels.size(); ++i) {
        write_output(result, out / ("panel_h" + std::to_string(config.task.horizons[i]) + ".csv"),
                     export_panel_csv(panels[i]));
    }
    write_output(result, out / "alerts.csv", alerts_csv(*first, config.task.transform.threshold));
    write_output(result, out / "flow_proportions.csv", proportions_csv(inputs, *first));
    clock.mark("panel");
    write_manifest(result, config, inputs, out, "ingest", clock);
    return result;
}

ScoreReport build_report(const PipelineConfig& config, const LoadedInputs& inputs, unsigned threads,
                         std::vector<std::vector<PanelModel>>* models, std::vector<std::string>* warnings)
{
    if (config.task.transform.kind == TransformKind::AlertLabels) {
        fail(ErrorCode::NonInvertibleTransform,
             "alert_labels targets cannot be scored as counts; use the alerts.csv written by ingest");
    }
    const Period train_end = resolve_train_end(config, inputs.periods);
    if (!inputs.periods.contains(train_end)) {
        fail(ErrorCode::InvalidConfig, "evaluation.train_end " + train_end.to_string() + " is outside the data");
    }
    const PeriodRange train_periods(inputs.periods.first, train_end);

    CvOptions cv_opts;
    cv_opts.metric    = config.evaluation.metric;
    cv_opts.transform = config.task.transform;
    cv_opts.seed      = config.models.seed;
    cv_opts.threads   = threads;

    ScoreReport report;
    report.schema_version  = kReportSchemaVersion;
    report.toolkit_version = FDF_VERSION_STRING;
    report.metric          = config.evaluation.metric;
    report.seed            = config.models.seed;
    report.periods         = inputs.periods;
    report.train           = train_periods;
    if (train_end >= inputs.periods.last) {
        fail(ErrorCode::EmptyTestPartition, "train_end " + train_end.to_string() + " leaves no test periods");
    }
    report.test    = PeriodRange(train_end.next(), inputs.periods.last);
    report.regions = inputs.registry.regions();
    for (const auto& e : config.models.entries) {
        report.models.push_back({e.id, report_model_label(e.id, e.grid.front()), family_name(e.grid.front())});
    }

    std::unique_ptr<SplitPlan> plan;
    bool needs_plan = std::any_of(config.models.entries.begin(), config.models.entries.end(), [&](const ModelEntry& e) {
        return e.grid.size() > 1 || (!is_benchmark(e.grid.front()) && config.evaluation.forward_selection > 0);
    });
    if (needs_plan) {
        plan = std::make_unique<SplitPlan>(make_plan(config, train_periods));
    }

    for (int h : config.task.horizons) {
        PanelTable panel  = build_panel(inputs, config, h);
        auto columns      = model_columns(panel);
        json cv           = json::object();
        std::vector<HoldoutCandidate> candidates;
        for (const auto& e : config.models.entries) {
            HoldoutCandidate c{e.id, e.grid.front(), {}};
            if (!is_benchmark(c.spec)) {
                c.columns = columns;
                if (e.grid.size() > 1) {
                    CvResult r = cross_validate(e.grid, panel, *plan, columns, cv_opts);
                    c.spec     = r.best_spec();
                    cv[e.id]   = r.to_json();
                }
                if (config.evaluation.forward_selection > 0) {
                    c.columns = forward_select(columns, c.spec, panel, *plan, config.evaluation.forward_selection,
                                               cv_opts);
                    cv[e.id]["selected_columns"] = c.columns;
                    if (c.columns.empty()) {
                        c.columns = columns;
                    }
                }
            }
            candidates.push_back(std::move(c));
        }
        HoldoutResult hr = holdout_evaluate(panel, train_end, candidates, cv_opts, warnings);
        for (std::size_t i = 0; i < hr.models.size(); ++i) {
            json imp = importance_json(hr.models[i]);
            if (!imp.is_null()) {
                cv[hr.scores.models[i]]["importances"] = imp;
            }
        }
        hr.scores.cv = std::move(cv);
        report.horizons.push_back(std::move(hr.scores));
        if (models) {
            models->push_back(std::move(hr.models));
        }
    }
    return report;
}

namespace
{

RunResult run_models(const PipelineConfig& config, const RunOptions& options, bool with_report)
{
    Stopwatch clock;
    RunResult result;
    const fs::path out  = out_dir_for(config, options);
    LoadedInputs inputs = load_inputs(config);
    result.warnings     = inputs.warnings;
    clock.mark("load");
    std::vector<std::vector<PanelModel>> models;
    ScoreReport report = build_report(config, inputs, options.threads, &models, &result.warnings);
    clock.mark("fit");

    json cv = json::object();
    for (std::size_t hi = 0; hi < report.horizons.size(); ++hi) {
        const auto& hs = report.horizons[hi];
        cv["h" + std::to_string(hs.horizon)] = hs.cv;
        for (std::size_t i = 0; i < hs.models.size(); ++i) {
            write_output(result, out / "models" / ("h" + std::to_string(hs.horizon)) / (hs.models[i] + ".json"),
                         models[hi][i].to_json().dump() + "\n");
        }
    }
    write_output(result, out / "cv.json", cv.dump(2) + "\n");
    if (with_report) {
        write_output(result, out / "report.json", report.to_json().dump(2) + "\n");
        write_output(result, out / "report.csv", report.to_csv());
    }
    clock.mark("write");
    write_manifest(result, config, inputs, out, with_report ? "evaluate" : "train", clock);
    return result;
}

} // namespace

RunResult run_train(const PipelineConfig& config, const RunOptions& options)
{
    return run_models(config, options, false);
}

RunResult run_evaluate(const PipelineConfig& config, const RunOptions& options)
{
    return run_models(config, options, true);
}

} // namespace fdf
