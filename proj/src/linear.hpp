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
#ifndef FDF_LINEAR_HPP
#define FDF_LINEAR_HPP

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <vector>

namespace fdf
{

enum class Penalty { None, Ridge, Lasso };

std::string_view penalty_name(Penalty penalty);

/// y ~ intercept + X * coefficients. The intercept is never penalized.
struct LinearModel {
    double intercept = 0.0;
    Eigen::VectorXd coefficients;
    Penalty penalty = Penalty::None;
    double lambda   = 0.0;
    int iterations  = 0; // coordinate-descent sweeps (lasso only)

    double predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const
    {
        return intercept + x.dot(coefficients);
    }
    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const
    {
        return (X * coefficients).array() + intercept;
    }
};

/// Minimizes ||y - b0 - X b||^2 + lambda ||b||^2 on centered data via a
/// symmetric solve of the regularized normal equations. With lambda == 0 the
/// fit is ordinary least squares (pivoted QR) and a rank-deficient design
/// throws SingularSystem.
LinearModel fit_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda);

struct LassoOptions {
    double tol   = 1e-8;
    int max_iter = 10000;
};

/// Soft-threshold operator sign(z) * max(|z| - gamma, 0).
inline double soft_threshold(double z, double gamma)
{
    if (z > gamma) {
        return z - gamma;
    }
    if (z < -gamma) {
        return z + gamma;
    }
    return 0.0;
}

/// Minimizes (1/(2n)) ||y - b0 - X b||^2 + lambda ||b||_1 by cyclic coordinate
/// descent. Stops when the largest coefficient change in a sweep drops below
/// tol; throws NotConverged after max_iter sweeps. Columns that do not look
/// standardized add a note to `warnings` when it is non-null.
LinearModel fit_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
                      const LassoOptions& options = {}, std::vector<std::string>* warnings = nullptr);

/// (1/(2n)) RSS + lambda * ||b||_1 at the given model.
double lasso_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const LinearModel& model, double lambda);

} // namespace fdf

#endif // FDF_LINEAR_HPP
