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
#ifndef FDF_GRAVITY_HPP
#define FDF_GRAVITY_HPP

#include <cstddef>
#include <span>

namespace fdf
{

/// a_ij = e^alpha * X_i^beta1 * X_j^beta2 / d_ij^beta3, fitted in log form:
/// log a_ij = alpha + beta1 log X_i + beta2 log X_j - beta3 log d_ij.
struct GravityModel {
    double alpha = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double beta3 = 0.0;

    double predict(double origin_feature, double destination_feature, double distance) const;
};

struct GravityObservation {
    double flow                = 0.0;
    double origin_feature      = 0.0;
    double destination_feature = 0.0;
    double distance            = 0.0;
};

struct GravityFit {
    GravityModel model;
    std::size_t used_rows    = 0;
    std::size_t dropped_rows = 0; // rows with a non-positive flow, feature or distance
};

/// OLS on the log-transformed equation. Throws InsufficientRows below 4
/// usable rows and CollinearDesign when the log design is rank deficient.
GravityFit fit_gravity(std::span<const GravityObservation> observations);

} // namespace fdf

#endif // FDF_GRAVITY_HPP
