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
#include "synth.hpp"

#include "csv.hpp"
#include "error.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace fdf
{

using nlohmann::json;

Scenario parse_scenario(std::string_view name)
{
    if (name == "seasonal") {
        return Scenario::Seasonal;
    }
    if (name == "feature_driven") {
        return Scenario::FeatureDriven;
    }
    if (name == "bursty") {
        return Scenario::Bursty;
    }
    fail(ErrorCode::InvalidArgument, "unknown scenario '" + std::string(name) + "'");
}

std::string_view scenario_name(Scenario s)
{
    switch (s) {
    case Scenario::Seasonal:
        return "seasonal";
    case Scenario::FeatureDriven:
        return "feature_driven";
    case Scenario::Bursty:
        return "bursty";
    }
    return "seasonal";
}

namespace
{

// Stream ids for independent draws.
enum Stream : std::uint64_t { kParams = 1, kTarget, kEvents, kPrices, kSpikes };

std::string region_name(int i)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "R%02d", i + 1);
    return buf;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b)
{
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

json default_config(const SynthOptions& o)
{
    const Period last      = o.start + (o.n_periods - 1);
    const Period train_end = last - std::max(1, std::min(24, o.n_periods / 5));
    const int held         = static_cast<int>(train_end - o.start + 1);
    const int min_train    = std::max(12, held / 2);
    const int k            = std::max(1, std::min(5, held - min_train));
    json benchmarks        = json::array({json{{"kind", "lag"}, {"n", 1}}, json{{"kind", "lag"}, {"n", 12}},
                                          json{{"kind", "expanding_mean"}}, json{{"kind", "ewm"}, {"n", 8}},
                                          json{{"kind", "ewm"}, {"n", 23}}, json{{"kind", "rolling_mean"}, {"n", 12}}});
    json grids{{"ridge", json::array({json{{"lambda", 0.1}}, json{{"lambda", 1.0}}, json{{"lambda", 10.0}},
                                      json{{"lambda", 100.0}}})},
               {"lasso", json::array({json{{"lambda", 1.0}}, json{{"lambda", 10.0}}})},
               {"forest", json::array({json{{"n_trees", 30}, {"m_features", 0}, {"bootstrap", true},
                                            {"max_depth", 8}, {"min_samples_leaf", 5}}})},
               {"gbm", json::array({json{{"n_rounds", 60}, {"learning_rate", 0.1}, {"max_depth", 3},
                                         {"min_samples_leaf", 5}}})}};
    return json{{"schema_version", 1},
                {"output_dir", "out"},
                {"paths", {{"flows", "flows.csv"},
                           {"regions", "regions.csv"},
                           {"adjacency", "adjacency.csv"},
                           {"distances", "distances.csv"},
                           {"events", "events.csv"},
                           {"features", json::array({"prices.csv"})}}},
                {"task", {{"target", "arrivals"}, {"horizons", json::array({1, 3})}, {"transform", "identity"},
                          {"alert_threshold", 0.3}}},
                {"panel", {{"zero_as_missing", true},
                           {"target_lags", json::array({1, 2, 3, 6, 12})},
                           {"feature_lags", json::array({1, 2})},
                           {"neighbor_mode", "adjacent"},
                           {"neighbor_columns", json::array({"target"})},
                           {"missingness_flags", true},
                           {"impute", true},
                           {"epoch", o.start.to_string()}}},
                {"models", {{"seed", 42}, {"benchmarks", benchmarks}, {"grids", grids}}},
                {"evaluation", {{"cv", "expanding"},
                                {"k", k},
                                {"min_train", min_train},
                                {"metric", "rmse"},
                                {"train_end", train_end.to_string()}}}};
}

} // namespace

SynthDataset generate_synthetic(const SynthOptions& o)
{
    if (o.n_regions < 2 || o.n_periods < 24) {
        fail(ErrorCode::InvalidArgument, "synth needs at least 2 regions and 24 periods");
    }
    if (!(o.noise_scale >= 0.0) || !std::isfinite(o.noise_scale)) {
        fail(ErrorCode::InvalidArgument, "noise scale must be finite and >= 0");
    }
    const int R = o.n_regions;
    const int T = o.n_periods;
    const Rng root(o.seed);

    // Region layout: points on a circle, ring adjacency.
    std::vector<std::string> names;
    std::string regions_csv = "region\n";
    for (int i = 0; i < R; ++i) {
        names.push_back(region_name(i));
        regions_csv += names.back() + '\n';
    }
    std::string adjacency_csv = "region_a,region_b\n";
    for (int i = 0; i < R; ++i) {
        int j = (i + 1) % R;
        if (R == 2 && i == 1) {
            break;
        }
        adjacency_csv += names[i] + ',' + names[j] + '\n';
    }
    std::string distances_csv = "origin,destination,km\n";
    const double radius       = 400.0;
    std::vector<std::vector<double>> km(R, std::vector<double>(R, 0.0));
    for (int i = 0; i < R; ++i) {
        for (int j = 0; j < R; ++j) {
            if (i == j) {
                continue;
            }
            double ai = 2 * std::numbers::pi * i / R, aj = 2 * std::numbers::pi * j / R;
            std::string text = format_sig(radius * std::hypot(std::cos(ai) - std::cos(aj), std::sin(ai) - std::sin(aj)), 6);
            km[i][j]         = std::stod(text); // same value the loader will read
            distances_csv += names[i] + ',' + names[j] + ',' + text + '\n';
        }
    }

    // Conflict intensity: log-AR(1) per region drives event counts.
    std::vector<std::vector<std::int64_t>> incidents(R, std::vector<std::int64_t>(T));
    const double phi = 0.7, innovation = 0.5, mu = std::log(8.0);
    std::string events_csv = "date,region,kind,fatalities\n";
    static const char* kinds[] = {"battle", "explosion", "riot", "violence_against_civilians"};
    for (int i = 0; i < R; ++i) {
        Rng rng = root.substream(kEvents).substream(static_cast<std::uint64_t>(i));
        double z = 0.0;
        for (int t = 0; t < T; ++t) {
            z = phi * z + innovation * rng.normal();
            std::int64_t count = rng.poisson(std::exp(mu + z));
            incidents[i][t]    = count;
            Period p           = o.start + t;
            for (std::int64_t e = 0; e < count; ++e) {
                char date[16];
                std::snprintf(date, sizeof date, "%04d-%02d-%02d", p.year, p.month, 1 + static_cast<int>(rng.below(28)));
                events_csv += std::string(date) + ',' + names[i] + ',' + kinds[rng.below(4)] + ',' +
                              std::to_string(rng.poisson(1.0)) + '\n';
            }
        }
    }

    // Price index: random walk with 5% blank cells.
    std::string prices_csv = "period,region,price_index\n";
    {
        std::vector<double> level(R, 100.0);
        std::vector<Rng> rngs;
        for (int i = 0; i < R; ++i) {
            rngs.push_back(root.substream(kPrices).substream(static_cast<std::uint64_t>(i)));
        }
        for (int t = 0; t < T; ++t) {
            for (int i = 0; i < R; ++i) {
                level[i] *= std::exp(0.02 * rngs[i].normal());
                bool blank = rngs[i].uniform() < 0.05;
                prices_csv += (o.start + t).to_string() + ',' + names[i] + ',' +
                              (blank ? std::string() : format_sig(level[i], 6)) + '\n';
            }
        }
    }

    // Arrivals per region and period.
    json truth{{"scenario", std::string(scenario_name(o.scenario))},
               {"seed", o.seed},
               {"n_regions", R},
               {"n_periods", T},
               {"start", o.start.to_string()},
               {"noise_scale", o.noise_scale},
               {"conflict", {{"log_mean", mu}, {"ar_coefficient", phi}, {"innovation_sd", innovation}}},
               {"flow_split", "internal = ceil(arrivals / 2); the rest comes from all other regions with weight (1 + origin incidents) / km^2"}};
    json regions_truth = json::array();
    std::vector<std::vector<std::int64_t>> arrivals(R, std::vector<std::int64_t>(T));
    std::vector<double> lagged_incidents, targets;
    for (int i = 0; i < R; ++i) {
        Rng params = root.substream(kParams).substream(static_cast<std::uint64_t>(i));
        Rng noise  = root.substream(kTarget).substream(static_cast<std::uint64_t>(i));
        json rt{{"region", names[i]}};
        switch (o.scenario) {
        case Scenario::Seasonal: {
            double base  = 200.0 + 1800.0 * params.uniform();
            double amp   = 0.4 + 0.4 * params.uniform();
            double phase = 12.0 * params.uniform();
            double sd    = 0.05 * base * o.noise_scale;
            rt.update(json{{"base", base}, {"amplitude", amp}, {"phase_months", phase}, {"noise_sd", sd}});
            for (int t = 0; t < T; ++t) {
                double month = static_cast<double>((o.start + t).month);
                double mean  = base * (1.0 + amp * std::sin(2 * std::numbers::pi * (month + phase) / 12.0));
                arrivals[i][t] = std::max<std::int64_t>(1, std::llround(mean + sd * noise.normal()));
            }
            break;
        }
        case Scenario::FeatureDriven: {
            double intercept = 50.0 + 100.0 * params.uniform();
            double slope     = 15.0;
            double sd        = 20.0 * o.noise_scale;
            rt.update(json{{"intercept", intercept}, {"incidents_lag1_coefficient", slope}, {"noise_sd", sd}});
            for (int t = 0; t < T; ++t) {
                double prev    = t == 0 ? std::exp(mu) : static_cast<double>(incidents[i][t - 1]);
                double value   = intercept + slope * prev + sd * noise.normal();
                arrivals[i][t] = std::max<std::int64_t>(1, std::llround(value));
                if (t > 0) {
                    lagged_incidents.push_back(prev);
                    targets.push_back(static_cast<double>(arrivals[i][t]));
                }
            }
            break;
        }
        case Scenario::Bursty: {
            double base       = 100.0 + 400.0 * params.uniform();
            double spike_prob = 0.03;
            Rng spikes        = root.substream(kSpikes).substream(static_cast<std::uint64_t>(i));
            rt.update(json{{"poisson_mean", base}, {"spike_probability", spike_prob}, {"spike_multiplier", {5, 10}}});
            json spike_periods = json::array();
            for (int t = 0; t < T; ++t) {
                std::int64_t v = noise.poisson(base);
                if (spikes.uniform() < spike_prob) {
                    double mult = 5.0 + 5.0 * spikes.uniform();
                    v           = std::llround(static_cast<double>(v) * mult);
                    spike_periods.push_back((o.start + t).to_string());
                }
                arrivals[i][t] = std::max<std::int64_t>(1, v);
            }
            rt["spikes"] = spike_periods;
            break;
        }
        }
        regions_truth.push_back(std::move(rt));
    }
    truth["regions"] = regions_truth;
    if (o.scenario == Scenario::FeatureDriven) {
        truth["pearson_r_incidents_lag1_vs_arrivals"] = pearson(lagged_incidents, targets);
    }

    // Split each region's arrivals into internal displacement and inflows
    // from every other region, weighted by (1 + origin incidents) / km^2 and
    // apportioned by largest remainder (ties to the lower index).
    std::string flows_csv = "period,origin,destination,count\n";
    for (int t = 0; t < T; ++t) {
        const std::string p = (o.start + t).to_string();
        for (int i = 0; i < R; ++i) {
            std::int64_t total    = arrivals[i][t];
            std::int64_t internal = (total + 1) / 2;
            std::int64_t rest     = total - internal;
            flows_csv += p + ',' + names[i] + ',' + names[i] + ',' + std::to_string(internal) + '\n';

            std::vector<double> w(R, 0.0);
            double wsum = 0.0;
            for (int j = 0; j < R; ++j) {
                if (j != i) {
                    w[j] = (1.0 + static_cast<double>(incidents[j][t])) / (km[i][j] * km[i][j]);
                    wsum += w[j];
                }
            }
            std::vector<std::int64_t> share(R, 0);
            std::vector<std::pair<double, int>> remainder;
            std::int64_t given = 0;
            for (int j = 0; j < R; ++j) {
                if (j == i) {
                    continue;
                }
                double exact = static_cast<double>(rest) * w[j] / wsum;
                share[j]     = static_cast<std::int64_t>(std::floor(exact));
                given += share[j];
                remainder.emplace_back(-(exact - static_cast<double>(share[j])), j);
            }
            std::sort(remainder.begin(), remainder.end());
            for (std::size_t k = 0; given < rest; ++k) {
                share[remainder[k].second] += 1;
                ++given;
            }
            for (int j = 0; j < R; ++j) {
                if (j != i && share[j] > 0) {
                    flows_csv += p + ',' + names[j] + ',' + names[i] + ',' + std::to_string(share[j]) + '\n';
                }
            }
        }
    }

    SynthDataset d;
    d.files = {{"regions.csv", regions_csv},     {"adjacency.csv", adjacency_csv}, {"distances.csv", distances_csv},
               {"flows.csv", flows_csv},         {"events.csv", events_csv},       {"prices.csv", prices_csv},
               {"ground_truth.json", truth.dump(2) + "\n"},
               {"config.json", default_config(o).dump(2) + "\n"}};
    d.ground_truth = std::move(truth);
    return d;
}

std::vector<std::filesystem::path> write_synthetic(const SynthOptions& options, const std::filesystem::path& dir)
{
    SynthDataset d = generate_synthetic(options);
    std::vector<std::filesystem::path> out;
    for (const auto& [name, content] : d.files) {
        write_file(dir / name, content);
        out.push_back(dir / name);
    }
    return out;
}

} // namespace fdf
