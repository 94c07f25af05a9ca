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
#ifndef FDF_LOGISTIC_HPP
#define FDF_LOGISTIC_HPP

#include <Eigen/Dense>

namespace fdf
{

/// log(p / (1 - p)) = alpha + x . beta
struct LogisticModel {
    double alpha = 0.0;
    Eigen::VectorXd beta;
    double lambda2 = 0.0;
    int iterations = 0;

    double linear_predictor(const Eigen::Ref<const Eigen::RowVectorXd>& x) const
    {
        return alpha + x.dot(beta);
    }
    double predict_proba(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
};

/// 1 / (1 + e^-z), evaluated without overflow for large |z|.
double sigmoid(double z);

struct LogisticOptions {
    double gradient_tol   = 1e-8;
    int max_iter          = 500;
    double separable_norm = 1e6;
};

/// Penalized log-likelihood sum_i [y_i z_i - log(1 + e^z_i)] - (lambda2 / 2) ||beta||^2.
double logistic_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double alpha,
                          const Eigen::VectorXd& beta, double lambda2);

/// Gradient of logistic_objective, packed as (d/d alpha, d/d beta...).
Eigen::VectorXd logistic_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double alpha,
                                  const Eigen::VectorXd& beta, double lambda2);

/// Damped Newton ascent on logistic_objective until the gradient infinity
/// norm is below gradient_tol. Throws Separable when the parameter norm passes
/// separable_norm (unbounded likelihood) and NotConverged when max_iter runs out.
LogisticModel fit_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda2,
                           const LogisticOptions& options = {});

} // namespace fdf

#endif // FDF_LOGISTIC_HPP
