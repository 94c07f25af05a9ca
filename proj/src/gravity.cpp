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
#include "gravity.hpp"

#include "error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

namespace fdf
{

double GravityModel::predict(double origin_feature, double destination_feature, double distance) const
{
    return std::exp(alpha + beta1 * std::log(origin_feature) + beta2 * std::log(destination_feature) -
                    beta3 * std::log(distance));
}

GravityFit fit_gravity(std::span<const GravityObservation> observations)
{
    std::vector<const GravityObservation*> usable;
    for (const auto& o : observations) {
        bool positive = o.flow > 0.0 && o.origin_feature > 0.0 && o.destination_feature > 0.0 && o.distance > 0.0;
        bool finite   = std::isfinite(o.flow) && std::isfinite(o.origin_feature) &&
                      std::isfinite(o.destination_feature) && std::isfinite(o.distance);
        if (positive && finite) {
            usable.push_back(&o);
        }
    }
    GravityFit fit;
    fit.used_rows    = usable.size();
    fit.dropped_rows = observations.size() - usable.size();
    if (usable.size() < 4) {
        fail(ErrorCode::InsufficientRows, "gravity model needs at least 4 rows with positive values, got " +
                                              std::to_string(usable.size()));
    }

    const auto n = static_cast<Eigen::Index>(usable.size());
    Eigen::MatrixXd A(n, 4);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& o = *usable[static_cast<std::size_t>(i)];
        A(i, 0)       = 1.0;
        A(i, 1)       = std::log(o.origin_feature);
        A(i, 2)       = std::log(o.destination_feature);
        A(i, 3)       = -std::log(o.distance);
        b[i]          = std::log(o.flow);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < 4) {
        fail(ErrorCode::CollinearDesign, "gravity design is collinear (rank " + std::to_string(qr.rank()) + " < 4)");
    }
    Eigen::VectorXd theta = qr.solve(b);
    fit.model             = GravityModel{theta[0], theta[1], theta[2], theta[3]};
    return fit;
}

} // namespace fdf
