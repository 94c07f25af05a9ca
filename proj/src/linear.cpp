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
#include "linear.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>

namespace fdf
{

std::string_view penalty_name(Penalty penalty)
{
    switch (penalty) {
    case Penalty::None: return "none";
    case Penalty::Ridge: return "ridge";
    case Penalty::Lasso: return "lasso";
    }
    return "none";
}

namespace
{

void check_shapes(const Eigen::MatrixXd& X, const Eigen::VectorXd& y)
{
    if (X.rows() != y.size()) {
        fail(ErrorCode::LengthMismatch, "design has " + std::to_string(X.rows()) + " rows but target has " +
                                            std::to_string(y.size()));
    }
    if (X.rows() < 1) {
        fail(ErrorCode::EmptyInput, "cannot fit a linear model on zero rows");
    }
    if (!X.allFinite() || !y.allFinite()) {
        fail(ErrorCode::InvalidArgument, "linear model inputs must be finite (impute MISSING first)");
    }
}

} // namespace

LinearModel fit_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda)
{
    check_shapes(X, y);
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        fail(ErrorCode::InvalidArgument, "ridge lambda must be finite and >= 0");
    }
    const Eigen::Index p = X.cols();
    Eigen::RowVectorXd x_mean = X.colwise().mean();
    double y_mean             = y.mean();

    LinearModel model;
    model.penalty = lambda > 0.0 ? Penalty::Ridge : Penalty::None;
    model.lambda  = lambda;
    model.coefficients = Eigen::VectorXd::Zero(p);
    if (p > 0) {
        Eigen::MatrixXd Xc = X.rowwise() - x_mean;
        Eigen::VectorXd yc = y.array() - y_mean;
        if (lambda == 0.0) {
            Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xc);
            if (qr.rank() < p) {
                fail(ErrorCode::SingularSystem, "design is rank deficient (rank " + std::to_string(qr.rank()) +
                                                    " < " + std::to_string(p) + ") and lambda = 0");
            }
            model.coefficients = qr.solve(yc);
        }
        else {
            Eigen::MatrixXd gram = Xc.transpose() * Xc;
            gram.diagonal().array() += lambda;
            Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
            if (ldlt.info() != Eigen::Success) {
                fail(ErrorCode::SingularSystem, "regularized normal equations could not be factorized");
            }
            model.coefficients = ldlt.solve(Xc.transpose() * yc);
        }
    }
    model.intercept = y_mean - x_mean.dot(model.coefficients);
    return model;
}

LinearModel fit_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda, const LassoOptions& options,
                      std::vector<std::string>* warnings)
{
    check_shapes(X, y);
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        fail(ErrorCode::InvalidArgument, "lasso lambda must be finite and >= 0");
    }
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    const double inv_n   = 1.0 / static_cast<double>(n);

    Eigen::RowVectorXd x_mean = X.colwise().mean();
    double y_mean             = y.mean();
    Eigen::MatrixXd Xc        = X.rowwise() - x_mean;
    Eigen::VectorXd residual  = y.array() - y_mean;
    Eigen::VectorXd scale     = Xc.colwise().squaredNorm().transpose() * inv_n;

    if (warnings) {
        for (Eigen::Index j = 0; j < p; ++j) {
            if (scale[j] > 0.0 && (std::abs(scale[j] - 1.0) > 1e-6 || std::abs(x_mean[j]) > 1e-6)) {
                warnings->push_back("lasso: column " + std::to_string(j) + " is not standardized");
                break;
            }
        }
    }

    LinearModel model;
    model.penalty      = Penalty::Lasso;
    model.lambda       = lambda;
    model.coefficients = Eigen::VectorXd::Zero(p);
    auto& beta         = model.coefficients;

    double delta = 0.0;
    int sweep    = 0;
    while (p > 0) {
        if (sweep >= options.max_iter) {
            fail(ErrorCode::NotConverged, "lasso did not converge after " + std::to_string(sweep) +
                                              " sweeps (last max change " + std::to_string(delta) + ")");
        }
        ++sweep;
        delta = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (scale[j] == 0.0) {
                continue;
            }
            double old = beta[j];
            double rho = Xc.col(j).dot(residual) * inv_n + scale[j] * old;
            double now = soft_threshold(rho, lambda) / scale[j];
            if (now != old) {
                residual.noalias() -= (now - old) * Xc.col(j);
                beta[j] = now;
                delta   = std::max(delta, std::abs(now - old));
            }
        }
        if (delta < options.tol) {
            break;
        }
    }
    model.iterations = sweep;
    model.intercept  = y_mean - x_mean.dot(beta);
    return model;
}

double lasso_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const LinearModel& model, double lambda)
{
    Eigen::VectorXd r = y - model.predict(X);
    return 0.5 * r.squaredNorm() / static_cast<double>(X.rows()) + lambda * model.coefficients.lpNorm<1>();
}

} // namespace fdf
