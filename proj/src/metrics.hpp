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
#ifndef FDF_METRICS_HPP
#define FDF_METRICS_HPP

#include <span>
#include <string>
#include <string_view>

namespace fdf
{

enum class MetricKind { MSE, RMSE, MAE, MAPE, AsymmetricSE };

struct Metric {
    MetricKind kind    = MetricKind::RMSE;
    double lambda_over = 1.0; // AsymmetricSE weight on over-predictions

    std::string name() const;
};

/// "mse" | "rmse" | "mae" | "mape" | "asymmetric_se".
Metric parse_metric(std::string_view name, double lambda_over = 1.0);

/// With e = pred - actual: MSE = mean(e^2), RMSE = sqrt(MSE), MAE = mean|e|,
/// MAPE = 100 * mean(|e| / actual), AsymmetricSE = mean(w e^2) with
/// w = lambda_over when e > 0, else 1.
/// Throws LengthMismatch, EmptyInput, ZeroActualInMAPE.
double evaluate_metric(std::span<const double> predictions, std::span<const double> actuals, const Metric& metric);

} // namespace fdf

#endif // FDF_METRICS_HPP
