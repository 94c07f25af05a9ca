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
#include "logistic.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fdf
{

double sigmoid(double z)
{
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    double e = std::exp(z);
    return e / (1.0 + e);
}

double LogisticModel::predict_proba(const Eigen::Ref<const Eigen::RowVectorXd>& x) const
{
    return sigmoid(linear_predictor(x));
}

namespace
{

// log(1 + e^z) without overflow.
double softplus(double z)
{
    return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

} // namespace

double logistic_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double alpha,
                          const Eigen::VectorXd& beta, double lambda2)
{
    Eigen::VectorXd z = (X * beta).array() + alpha;
    double ll         = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        ll += y[i] * z[i] - softplus(z[i]);
    }
    return ll - 0.5 * lambda2 * beta.squaredNorm();
}

Eigen::VectorXd logistic_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double alpha,
                                  const Eigen::VectorXd& beta, double lambda2)
{
    Eigen::VectorXd z = (X * beta).array() + alpha;
    Eigen::VectorXd r(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        r[i] = y[i] - sigmoid(z[i]);
    }
    Eigen::VectorXd g(beta.size() + 1);
    g[0]                  = r.sum();
    g.tail(beta.size()) = X.transpose() * r - lambda2 * beta;
    return g;
}

namespace
{

bool separates(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const LogisticModel& m)
{
    Eigen::VectorXd z = (X * m.beta).array() + m.alpha;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        if (y[i] == 1.0 ? !(z[i] > 0.0) : !(z[i] < 0.0)) {
            return false;
        }
    }
    return true;
}

} // namespace

LogisticModel fit_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda2,
                           const LogisticOptions& options)
{
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    if (y.size() != n) {
        fail(ErrorCode::LengthMismatch, "logistic: X and y differ in length");
    }
    if (n < 1) {
        fail(ErrorCode::EmptyInput, "logistic: no rows");
    }
    if (!(lambda2 >= 0.0) || !X.allFinite()) {
        fail(ErrorCode::InvalidArgument, "logistic: lambda2 must be >= 0 and X finite");
    }
    Eigen::Index positives = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (y[i] != 0.0 && y[i] != 1.0) {
            fail(ErrorCode::InvalidArgument, "logistic: labels must be 0 or 1");
        }
        positives += y[i] == 1.0 ? 1 : 0;
    }
    if (positives == 0 || positives == n) {
        fail(ErrorCode::Separable, "logistic: only one class present, the intercept is unbounded");
    }

    Eigen::MatrixXd Z(n, p + 1);
    Z.col(0).setOnes();
    Z.rightCols(p) = X;

    LogisticModel model;
    model.lambda2 = lambda2;
    double ybar   = static_cast<double>(positives) / static_cast<double>(n);
    model.alpha   = std::log(ybar / (1.0 - ybar));
    model.beta    = Eigen::VectorXd::Zero(p);

    double objective = logistic_objective(X, y, model.alpha, model.beta, lambda2);
    for (int iter = 0; iter <= options.max_iter; ++iter) {
        Eigen::VectorXd g = logistic_gradient(X, y, model.alpha, model.beta, lambda2);
        model.iterations  = iter;
        // An iterate that puts every row strictly on its own side certifies
        // complete separation: scaling it up raises the likelihood forever.
        if (lambda2 == 0.0 && separates(X, y, model)) {
            fail(ErrorCode::Separable, "logistic: the classes are completely separated; the likelihood is unbounded");
        }
        if (g.lpNorm<Eigen::Infinity>() < options.gradient_tol) {
            return model;
        }
        if (iter == options.max_iter) {
            break;
        }

        Eigen::VectorXd w(n);
        Eigen::VectorXd zeta = Z.rightCols(p) * model.beta;
        for (Eigen::Index i = 0; i < n; ++i) {
            double pr = sigmoid(model.alpha + zeta[i]);
            w[i]      = pr * (1.0 - pr);
        }
        Eigen::MatrixXd H = Z.transpose() * w.asDiagonal() * Z;
        H.diagonal().tail(p).array() += lambda2;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
        Eigen::VectorXd step;
        if (ldlt.info() == Eigen::Success) {
            step = ldlt.solve(g);
        }
        if (step.size() != g.size() || !step.allFinite() || step.dot(g) <= 0.0) {
            step = g; // plain ascent when the Hessian is numerically singular
        }

        double t         = 1.0;
        double slope     = step.dot(g);
        bool accepted    = false;
        double next_obj  = objective;
        double next_a    = model.alpha;
        Eigen::VectorXd next_b;
        for (int ls = 0; ls < 60; ++ls) {
            next_a   = model.alpha + t * step[0];
            next_b   = model.beta + t * step.tail(p);
            next_obj = logistic_objective(X, y, next_a, next_b, lambda2);
            // Slack at rounding level so steps near the optimum are not
            // rejected for noise in the last digits of the objective.
            if (next_obj >= objective + 1e-4 * t * slope - 1e-13 * std::max(1.0, std::fabs(objective))) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            fail(ErrorCode::NotConverged, "logistic: line search failed at iteration " + std::to_string(iter) +
                                              " (gradient norm " + std::to_string(g.lpNorm<Eigen::Infinity>()) +
                                              ")");
        }
        model.alpha = next_a;
        model.beta  = next_b;
        objective   = next_obj;

        double norm = std::sqrt(model.alpha * model.alpha + model.beta.squaredNorm());
        if (norm > options.separable_norm) {
            fail(ErrorCode::Separable, "logistic: coefficient norm exceeded " +
                                           std::to_string(options.separable_norm) +
                                           "; the likelihood is unbounded (separable data)");
        }
    }
    fail(ErrorCode::NotConverged, "logistic: no convergence after " + std::to_string(options.max_iter) +
                                      " iterations");
}

} // namespace fdf
