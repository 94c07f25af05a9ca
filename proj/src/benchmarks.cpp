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
#include "benchmarks.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>

namespace fdf
{

std::string BenchmarkSpec::id() const
{
    switch (kind) {
    case BenchmarkKind::Lag: return "lag_" + std::to_string(n);
    case BenchmarkKind::ExpandingMean: return "expanding_mean";
    case BenchmarkKind::Ewm: return "ewm_" + std::to_string(n);
    case BenchmarkKind::RollingMean: return "rolling_mean_" + std::to_string(n);
    }
    return "benchmark";
}

std::string BenchmarkSpec::label() const
{
    switch (kind) {
    case BenchmarkKind::Lag: return std::to_string(n) + "-month lag";
    case BenchmarkKind::ExpandingMean: return "Expand. Mean";
    case BenchmarkKind::Ewm: return "Exp. Wt. Mean (" + std::to_string(n) + ")";
    case BenchmarkKind::RollingMean: return "Hist. Mean (" + std::to_string(n) + ")";
    }
    return id();
}

BenchmarkKind parse_benchmark_kind(std::string_view name)
{
    if (name == "lag") return BenchmarkKind::Lag;
    if (name == "expanding_mean") return BenchmarkKind::ExpandingMean;
    if (name == "ewm") return BenchmarkKind::Ewm;
    if (name == "rolling_mean") return BenchmarkKind::RollingMean;
    fail(ErrorCode::InvalidArgument, "unknown benchmark kind '" + std::string(name) + "'");
}

std::string_view benchmark_kind_name(BenchmarkKind kind)
{
    switch (kind) {
    case BenchmarkKind::Lag: return "lag";
    case BenchmarkKind::ExpandingMean: return "expanding_mean";
    case BenchmarkKind::Ewm: return "ewm";
    case BenchmarkKind::RollingMean: return "rolling_mean";
    }
    return "lag";
}

std::optional<double> exponentially_weighted_mean(std::span<const double> history, double alpha)
{
    double num    = 0.0;
    double den    = 0.0;
    double weight = 1.0;
    for (std::size_t k = 0; k < history.size(); ++k) {
        double y = history[history.size() - 1 - k];
        if (!std::isnan(y)) {
            num += weight * y;
            den += weight;
        }
        weight *= 1.0 - alpha;
        if (weight == 0.0) {
            break;
        }
    }
    if (den == 0.0) {
        return std::nullopt;
    }
    return num / den;
}

std::optional<double> predict_benchmark(std::span<const double> history, const BenchmarkSpec& spec, int horizon)
{
    if (horizon < 1) {
        fail(ErrorCode::InvalidArgument, "horizon must be >= 1");
    }
    if (spec.kind != BenchmarkKind::ExpandingMean && spec.n < 1) {
        fail(ErrorCode::InvalidArgument, "benchmark window must be >= 1");
    }
    switch (spec.kind) {
    case BenchmarkKind::Lag: {
        if (spec.n < horizon) {
            fail(ErrorCode::LagShorterThanHorizon, "lag " + std::to_string(spec.n) +
                                                       " is shorter than horizon " + std::to_string(horizon));
        }
        // y(t - n) with t = s + h sits n - h places before the end.
        std::size_t back = static_cast<std::size_t>(spec.n - horizon);
        if (back >= history.size()) {
            return std::nullopt;
        }
        double y = history[history.size() - 1 - back];
        return std::isnan(y) ? std::nullopt : std::optional<double>(y);
    }
    case BenchmarkKind::ExpandingMean:
    case BenchmarkKind::RollingMean: {
        std::size_t window = history.size();
        if (spec.kind == BenchmarkKind::RollingMean) {
            window = std::min(window, static_cast<std::size_t>(spec.n));
        }
        double sum    = 0.0;
        std::size_t n = 0;
        for (std::size_t k = history.size() - window; k < history.size(); ++k) {
            if (!std::isnan(history[k])) {
                sum += history[k];
                ++n;
            }
        }
        if (n == 0) {
            return std::nullopt;
        }
        return sum / static_cast<double>(n);
    }
    case BenchmarkKind::Ewm:
        return exponentially_weighted_mean(history, ewm_alpha(spec.n));
    }
    return std::nullopt;
}

} // namespace fdf
