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
#ifndef FDF_MODEL_HPP
#define FDF_MODEL_HPP

#include "benchmarks.hpp"
#include "gravity.hpp"
#include "linear.hpp"
#include "logistic.hpp"
#include "tree.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace fdf
{

struct RidgeSpec {
    double lambda = 1.0;
    friend bool operator==(const RidgeSpec&, const RidgeSpec&) = default;
};
struct LassoSpec {
    double lambda = 1.0;
    LassoOptions options;
    friend bool operator==(const LassoSpec& a, const LassoSpec& b)
    {
        return a.lambda == b.lambda && a.options.tol == b.options.tol && a.options.max_iter == b.options.max_iter;
    }
};
struct LogisticSpec {
    double lambda2 = 0.0;
    friend bool operator==(const LogisticSpec&, const LogisticSpec&) = default;
};
struct GravitySpec {
    friend bool operator==(const GravitySpec&, const GravitySpec&) = default;
};
struct TreeSpec {
    TreeParams params;
};
struct ForestSpec {
    ForestParams params;
};
struct GbmSpec {
    GbmParams params;
};

/// Parameters of one model family.
using ModelSpec =
    std::variant<BenchmarkSpec, RidgeSpec, LassoSpec, LogisticSpec, GravitySpec, TreeSpec, ForestSpec, GbmSpec>;

std::string family_name(const ModelSpec& spec);
bool is_benchmark(const ModelSpec& spec);
nlohmann::json spec_to_json(const ModelSpec& spec);
/// {"family": ..., ...params}; throws InvalidConfig on unknown families or bad values.
ModelSpec spec_from_json(const nlohmann::json& j);
/// Canonical JSON text; used as the final, lexicographic tie-break.
std::string spec_key(const ModelSpec& spec);
/// Short display name, e.g. "ridge(lambda=10)" or "12-month lag".
std::string spec_label(const ModelSpec& spec);

using ModelState = std::variant<LinearModel, LogisticModel, GravityModel, TreeModel, ForestModel, GbmModel>;

/// Immutable result of Estimator::fit. predict() takes the same column layout
/// as the training design: for gravity models [origin feature, destination
/// feature, distance]; logistic models return probabilities.
class FittedModel
{
public:
    FittedModel(ModelSpec spec, std::uint64_t seed, ModelState state, std::size_t n_features);

    const ModelSpec& spec() const
    {
        return spec_;
    }
    std::uint64_t seed() const
    {
        return seed_;
    }
    const ModelState& state() const
    {
        return state_;
    }
    std::size_t feature_count() const
    {
        return n_features_;
    }

    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const;
    /// Nonzero coefficients for linear-type models, split nodes for trees.
    std::size_t nonzero_parameters() const;

    /// Versioned document: {"format","version","family","spec","seed","n_features","state"}.
    nlohmann::json to_json() const;
    static FittedModel from_json(const nlohmann::json& j);

private:
    ModelSpec spec_;
    std::uint64_t seed_;
    ModelState state_;
    std::size_t n_features_;
};

/// Deterministic given (X, y, spec, seed).
struct Estimator {
    ModelSpec spec;
    std::uint64_t seed = 42;

    /// Throws InvalidArgument for benchmark specs (they forecast from series, not designs).
    FittedModel fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                    std::vector<std::string>* warnings = nullptr) const;
};

inline constexpr int kModelFormatVersion = 1;

} // namespace fdf

#endif // FDF_MODEL_HPP
