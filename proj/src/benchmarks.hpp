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
#ifndef FDF_BENCHMARKS_HPP
#define FDF_BENCHMARKS_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace fdf
{

enum class BenchmarkKind { Lag, ExpandingMean, Ewm, RollingMean };

/// Naive series forecaster. `n` is the lag, the EWM span, or the rolling
/// window; it is ignored by the expanding mean.
struct BenchmarkSpec {
    BenchmarkKind kind = BenchmarkKind::Lag;
    int n              = 1;

    /// Stable identifier, e.g. "lag_12", "ewm_8", "rolling_mean_12", "expanding_mean".
    std::string id() const;
    /// Human label, e.g. "12-month lag", "Exp. Wt. Mean (8)".
    std::string label() const;

    friend bool operator==(const BenchmarkSpec&, const BenchmarkSpec&) = default;
};

BenchmarkKind parse_benchmark_kind(std::string_view name);
std::string_view benchmark_kind_name(BenchmarkKind kind);

/// EWM smoothing factor for a span: 2 / (n + 1).
inline double ewm_alpha(int span)
{
    return 2.0 / (static_cast<double>(span) + 1.0);
}

/// Forecast for target period s + h from `history`, the region's masked
/// target series ending at the issuance period s (last element = s, NaN =
/// MISSING). Returns nullopt for NO_PREDICTION.
/// Throws LagShorterThanHorizon when kind == Lag and n < h.
std::optional<double> predict_benchmark(std::span<const double> history, const BenchmarkSpec& spec, int horizon);

/// Normalized exponentially weighted mean with explicit smoothing factor;
/// weights (1 - alpha)^k count k from the last element, gaps included.
std::optional<double> exponentially_weighted_mean(std::span<const double> history, double alpha);

} // namespace fdf

#endif // FDF_BENCHMARKS_HPP
