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
#include "metrics.hpp"

#include "error.hpp"

#include <cmath>

namespace fdf
{

std::string Metric::name() const
{
    switch (kind) {
    case MetricKind::MSE: return "mse";
    case MetricKind::RMSE: return "rmse";
    case MetricKind::MAE: return "mae";
    case MetricKind::MAPE: return "mape";
    case MetricKind::AsymmetricSE: return "asymmetric_se";
    }
    return "rmse";
}

Metric parse_metric(std::string_view name, double lambda_over)
{
    Metric m;
    m.lambda_over = lambda_over;
    if (name == "mse") m.kind = MetricKind::MSE;
    else if (name == "rmse") m.kind = MetricKind::RMSE;
    else if (name == "mae") m.kind = MetricKind::MAE;
    else if (name == "mape") m.kind = MetricKind::MAPE;
    else if (name == "asymmetric_se") m.kind = MetricKind::AsymmetricSE;
    else fail(ErrorCode::InvalidArgument, "unknown metric '" + std::string(name) + "'");
    if (!(lambda_over > 0.0) || !std::isfinite(lambda_over)) {
        fail(ErrorCode::InvalidArgument, "lambda_over must be finite and > 0");
    }
    return m;
}

double evaluate_metric(std::span<const double> predictions, std::span<const double> actuals, const Metric& metric)
{
    if (predictions.size() != actuals.size()) {
        fail(ErrorCode::LengthMismatch, "metric: " + std::to_string(predictions.size()) + " predictions vs " +
                                            std::to_string(actuals.size()) + " actuals");
    }
    if (predictions.empty()) {
        fail(ErrorCode::EmptyInput, "metric: no observations");
    }
    if (metric.kind == MetricKind::AsymmetricSE && (!(metric.lambda_over > 0.0) || !std::isfinite(metric.lambda_over))) {
        fail(ErrorCode::InvalidArgument, "lambda_over must be finite and > 0");
    }
    const double n = static_cast<double>(predictions.size());
    double sum     = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        double e = predictions[i] - actuals[i];
        switch (metric.kind) {
        case MetricKind::MSE:
        case MetricKind::RMSE:
            sum += e * e;
            break;
        case MetricKind::MAE:
            sum += std::abs(e);
            break;
        case MetricKind::MAPE:
            if (actuals[i] == 0.0) {
                fail(ErrorCode::ZeroActualInMAPE, "MAPE is undefined for a zero actual (observation " +
                                                      std::to_string(i) + ")");
            }
            sum += std::abs(e) / std::abs(actuals[i]);
            break;
        case MetricKind::AsymmetricSE:
            sum += (e > 0.0 ? metric.lambda_over : 1.0) * e * e;
            break;
        }
    }
    double mean = sum / n;
    switch (metric.kind) {
    case MetricKind::RMSE: return std::sqrt(mean);
    case MetricKind::MAPE: return mean * 100.0;
    default: return mean;
    }
}

} // namespace fdf
