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
#include "model.hpp"

#include "csv.hpp"
#include "error.hpp"


namespace fdf
{

using nlohmann::json;

namespace
{

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json tree_params_json(const TreeParams& p)
{
    return json{{"max_depth", p.max_depth}, {"min_samples_leaf", p.min_samples_leaf}};
}

TreeParams tree_params_from(const json& j, TreeParams defaults)
{
    defaults.max_depth        = j.value("max_depth", defaults.max_depth);
    defaults.min_samples_leaf = j.value("min_samples_leaf", defaults.min_samples_leaf);
    if (defaults.max_depth < 0 || defaults.min_samples_leaf < 1) {
        fail(ErrorCode::InvalidConfig, "tree parameters need max_depth >= 0 and min_samples_leaf >= 1");
    }
    return defaults;
}

json tree_to_json(const TreeModel& t)
{
    json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array(),
         value = json::array(), gain = json::array(), samples = json::array();
    for (const auto& n : t.nodes) {
        feature.push_back(n.feature);
        threshold.push_back(n.threshold);
        left.push_back(n.left);
        right.push_back(n.right);
        value.push_back(n.value);
        gain.push_back(n.gain);
        samples.push_back(n.samples);
    }
    return json{{"feature", feature}, {"threshold", threshold}, {"left", left},      {"right", right},
                {"value", value},     {"gain", gain},           {"samples", samples}};
}

TreeModel tree_from_json(const json& j)
{
    TreeModel t;
    const auto& feature = j.at("feature");
    std::size_t n       = feature.size();
    for (const char* key : {"threshold", "left", "right", "value", "gain", "samples"}) {
        if (j.at(key).size() != n) {
            fail(ErrorCode::MalformedModel, std::string("tree arrays differ in length at '") + key + "'");
        }
    }
    t.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& node     = t.nodes[i];
        node.feature   = feature[i].get<int>();
        node.threshold = j["threshold"][i].get<double>();
        node.left      = j["left"][i].get<int>();
        node.right     = j["right"][i].get<int>();
        node.value     = j["value"][i].get<double>();
        node.gain      = j["gain"][i].get<double>();
        node.samples   = j["samples"][i].get<std::int64_t>();
        if (node.feature >= 0 && (node.left <= static_cast<int>(i) || node.right <= static_cast<int>(i) ||
                                  node.left >= static_cast<int>(n) || node.right >= static_cast<int>(n))) {
            fail(ErrorCode::MalformedModel, "tree node " + std::to_string(i) + " has invalid children");
        }
    }
    if (n == 0) {
        fail(ErrorCode::MalformedModel, "tree has no nodes");
    }
    return t;
}

json vector_json(const Eigen::VectorXd& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v[i]);
    }
    return out;
}

Eigen::VectorXd vector_from(const json& j)
{
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

LinearModel read_linear(const json& s, std::size_t n_features)
{
    LinearModel m;
    m.intercept       = s.at("intercept").get<double>();
    m.coefficients    = vector_from(s.at("coefficients"));
    std::string penalty = s.at("penalty").get<std::string>();
    m.penalty = penalty == "lasso" ? Penalty::Lasso : (penalty == "ridge" ? Penalty::Ridge : Penalty::None);
    m.lambda     = s.at("lambda").get<double>();
    m.iterations = s.value("iterations", 0);
    if (static_cast<std::size_t>(m.coefficients.size()) != n_features) {
        fail(ErrorCode::MalformedModel, "coefficient count does not match n_features");
    }
    return m;
}

} // namespace

std::string family_name(const ModelSpec& spec)
{
    return std::visit(overloaded{[](const BenchmarkSpec&) { return std::string("benchmark"); },
                                 [](const RidgeSpec&) { return std::string("ridge"); },
                                 [](const LassoSpec&) { return std::string("lasso"); },
                                 [](const LogisticSpec&) { return std::string("logistic"); },
                                 [](const GravitySpec&) { return std::string("gravity"); },
                                 [](const TreeSpec&) { return std::string("tree"); },
                                 [](const ForestSpec&) { return std::string("forest"); },
                                 [](const GbmSpec&) { return std::string("gbm"); }},
                      spec);
}

bool is_benchmark(const ModelSpec& spec)
{
    return std::holds_alternative<BenchmarkSpec>(spec);
}

json spec_to_json(const ModelSpec& spec)
{
    json j = std::visit(
        overloaded{
            [](const BenchmarkSpec& s) {
                json b{{"kind", std::string(benchmark_kind_name(s.kind))}};
                if (s.kind != BenchmarkKind::ExpandingMean) {
                    b["n"] = s.n;
                }
                return b;
            },
            [](const RidgeSpec& s) { return json{{"lambda", s.lambda}}; },
            [](const LassoSpec& s) {
                return json{{"lambda", s.lambda}, {"tol", s.options.tol}, {"max_iter", s.options.max_iter}};
            },
            [](const LogisticSpec& s) { return json{{"lambda2", s.lambda2}}; },
            [](const GravitySpec&) { return json::object(); },
            [](const TreeSpec& s) { return tree_params_json(s.params); },
            [](const ForestSpec& s) {
                json f          = tree_params_json(s.params.tree);
                f["n_trees"]    = s.params.n_trees;
                f["m_features"] = s.params.m_features;
                f["bootstrap"]  = s.params.bootstrap;
                return f;
            },
            [](const GbmSpec& s) {
                json g             = tree_params_json(s.params.tree);
                g["n_rounds"]      = s.params.n_rounds;
                g["learning_rate"] = s.params.learning_rate;
                return g;
            }},
        spec);
    j["family"] = family_name(spec);
    return j;
}

ModelSpec spec_from_json(const json& j)
{
    try {
        if (!j.is_object()) {
            fail(ErrorCode::InvalidConfig, "model spec must be a JSON object");
        }
        std::string family = j.at("family").get<std::string>();
        if (family == "benchmark") {
            BenchmarkSpec s;
            s.kind = parse_benchmark_kind(j.at("kind").get<std::string>());
            s.n    = j.value("n", 1);
            if (s.n < 1) {
                fail(ErrorCode::InvalidConfig, "benchmark n must be >= 1");
            }
            return s;
        }
        if (family == "ridge" || family == "lasso") {
            double lambda = j.value("lambda", 1.0);
            if (!(lambda >= 0.0)) {
                fail(ErrorCode::InvalidConfig, family + " lambda must be >= 0");
            }
            if (family == "ridge") {
                return RidgeSpec{lambda};
            }
            LassoSpec s;
            s.lambda           = lambda;
            s.options.tol      = j.value("tol", s.options.tol);
            s.options.max_iter = j.value("max_iter", s.options.max_iter);
            if (!(s.options.tol > 0.0) || s.options.max_iter < 1) {
                fail(ErrorCode::InvalidConfig, "lasso tol must be > 0 and max_iter >= 1");
            }
            return s;
        }
        if (family == "logistic") {
            double l2 = j.value("lambda2", 0.0);
            if (!(l2 >= 0.0)) {
                fail(ErrorCode::InvalidConfig, "logistic lambda2 must be >= 0");
            }
            return LogisticSpec{l2};
        }
        if (family == "gravity") {
            return GravitySpec{};
        }
        if (family == "tree") {
            return TreeSpec{tree_params_from(j, TreeParams{})};
        }
        if (family == "forest") {
            ForestSpec s;
            s.params.tree       = tree_params_from(j, s.params.tree);
            s.params.n_trees    = j.value("n_trees", s.params.n_trees);
            s.params.m_features = j.value("m_features", s.params.m_features);
            s.params.bootstrap  = j.value("bootstrap", s.params.bootstrap);
            if (s.params.n_trees < 1 || s.params.m_features < 0) {
                fail(ErrorCode::InvalidConfig, "forest needs n_trees >= 1 and m_features >= 0");
            }
            return s;
        }
        if (family == "gbm") {
            GbmSpec s;
            s.params.tree          = tree_params_from(j, s.params.tree);
            s.params.n_rounds      = j.value("n_rounds", s.params.n_rounds);
            s.params.learning_rate = j.value("learning_rate", s.params.learning_rate);
            if (s.params.n_rounds < 0 || !(s.params.learning_rate > 0.0) || s.params.learning_rate > 1.0) {
                fail(ErrorCode::InvalidConfig, "gbm needs n_rounds >= 0 and learning_rate in (0, 1]");
            }
            return s;
        }
        fail(ErrorCode::InvalidConfig, "unknown model family '" + family + "'");
    }
    catch (const json::exception& e) {
        fail(ErrorCode::InvalidConfig, std::string("model spec: ") + e.what());
    }
    catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidArgument) {
            fail(ErrorCode::InvalidConfig, e.what());
        }
        throw;
    }
}

std::string spec_key(const ModelSpec& spec)
{
    return spec_to_json(spec).dump();
}

std::string spec_label(const ModelSpec& spec)
{
    return std::visit(
        overloaded{[](const BenchmarkSpec& s) { return s.label(); },
                   [](const RidgeSpec& s) { return "ridge(lambda=" + format_sig(s.lambda, 6) + ")"; },
                   [](const LassoSpec& s) { return "lasso(lambda=" + format_sig(s.lambda, 6) + ")"; },
                   [](const LogisticSpec& s) { return "logistic(lambda2=" + format_sig(s.lambda2, 6) + ")"; },
                   [](const GravitySpec&) { return std::string("gravity"); },
                   [](const TreeSpec& s) {
                       return "tree(depth=" + std::to_string(s.params.max_depth) +
                              ",leaf=" + std::to_string(s.params.min_samples_leaf) + ")";
                   },
                   [](const ForestSpec& s) {
                       return "forest(trees=" + std::to_string(s.params.n_trees) +
                              ",m=" + std::to_string(s.params.m_features) +
                              ",depth=" + std::to_string(s.params.tree.max_depth) + ")";
                   },
                   [](const GbmSpec& s) {
                       return "gbm(rounds=" + std::to_string(s.params.n_rounds) +
                              ",rate=" + format_sig(s.params.learning_rate, 6) +
                              ",depth=" + std::to_string(s.params.tree.max_depth) + ")";
                   }},
        spec);
}

FittedModel::FittedModel(ModelSpec spec, std::uint64_t seed, ModelState state, std::size_t n_features)
    : spec_(std::move(spec))
    , seed_(seed)
    , state_(std::move(state))
    , n_features_(n_features)
{
}

Eigen::VectorXd FittedModel::predict(const Eigen::MatrixXd& X) const
{
    if (static_cast<std::size_t>(X.cols()) != n_features_) {
        fail(ErrorCode::LengthMismatch, "model expects " + std::to_string(n_features_) + " columns, got " +
                                            std::to_string(X.cols()));
    }
    return std::visit(overloaded{[&](const LinearModel& m) -> Eigen::VectorXd { return m.predict(X); },
                                 [&](const LogisticModel& m) -> Eigen::VectorXd {
                                     Eigen::VectorXd out(X.rows());
                                     for (Eigen::Index i = 0; i < X.rows(); ++i) {
                                         out[i] = m.predict_proba(X.row(i));
                                     }
                                     return out;
                                 },
                                 [&](const GravityModel& m) -> Eigen::VectorXd {
                                     Eigen::VectorXd out(X.rows());
                                     for (Eigen::Index i = 0; i < X.rows(); ++i) {
                                         out[i] = m.predict(X(i, 0), X(i, 1), X(i, 2));
                                     }
                                     return out;
                                 },
                                 [&](const auto& m) -> Eigen::VectorXd { return m.predict(X); }},
                      state_);
}

std::size_t FittedModel::nonzero_parameters() const
{
    auto splits = [](const TreeModel& t) {
        return static_cast<std::size_t>(t.nodes.size() - static_cast<std::size_t>(t.leaf_count()));
    };
    return std::visit(overloaded{[](const LinearModel& m) {
                                     return static_cast<std::size_t>((m.coefficients.array() != 0.0).count());
                                 },
                                 [](const LogisticModel& m) {
                                     return static_cast<std::size_t>((m.beta.array() != 0.0).count());
                                 },
                                 [](const GravityModel&) { return std::size_t{3}; },
                                 [&](const TreeModel& m) { return splits(m); },
                                 [&](const ForestModel& m) {
                                     std::size_t n = 0;
                                     for (const auto& t : m.trees) {
                                         n += splits(t);
                                     }
                                     return n;
                                 },
                                 [&](const GbmModel& m) {
                                     std::size_t n = 0;
                                     for (const auto& t : m.trees) {
                                         n += splits(t);
                                     }
                                     return n;
                                 }},
                      state_);
}

json FittedModel::to_json() const
{
    json state = std::visit(
        overloaded{[](const LinearModel& m) {
                       return json{{"intercept", m.intercept},
                                   {"coefficients", vector_json(m.coefficients)},
                                   {"penalty", std::string(penalty_name(m.penalty))},
                                   {"lambda", m.lambda},
                                   {"iterations", m.iterations}};
                   },
                   [](const LogisticModel& m) {
                       return json{{"alpha", m.alpha},
                                   {"beta", vector_json(m.beta)},
                                   {"lambda2", m.lambda2},
                                   {"iterations", m.iterations}};
                   },
                   [](const GravityModel& m) {
                       return json{{"alpha", m.alpha}, {"beta1", m.beta1}, {"beta2", m.beta2}, {"beta3", m.beta3}};
                   },
                   [](const TreeModel& m) { return tree_to_json(m); },
                   [](const ForestModel& m) {
                       json trees = json::array();
                       for (const auto& t : m.trees) {
                           trees.push_back(tree_to_json(t));
                       }
                       return json{{"trees", trees}};
                   },
                   [](const GbmModel& m) {
                       json trees = json::array();
                       for (const auto& t : m.trees) {
                           trees.push_back(tree_to_json(t));
                       }
                       return json{{"initial", m.initial}, {"trees", trees}};
                   }},
        state_);
    return json{{"format", "fdf-model"},    {"version", kModelFormatVersion}, {"family", family_name(spec_)},
                {"spec", spec_to_json(spec_)}, {"seed", seed_},                  {"n_features", n_features_},
                {"state", state}};
}

FittedModel FittedModel::from_json(const json& j)
{
    try {
        if (j.at("format").get<std::string>() != "fdf-model") {
            fail(ErrorCode::MalformedModel, "not an fdf model document");
        }
        int version = j.at("version").get<int>();
        if (version != kModelFormatVersion) {
            fail(ErrorCode::MalformedModel, "unsupported model format version " + std::to_string(version));
        }
        ModelSpec spec     = spec_from_json(j.at("spec"));
        auto seed          = j.at("seed").get<std::uint64_t>();
        auto n_features    = j.at("n_features").get<std::size_t>();
        const json& s      = j.at("state");
        std::string family = j.at("family").get<std::string>();
        if (family != family_name(spec)) {
            fail(ErrorCode::MalformedModel, "family tag does not match the spec");
        }
        ModelState state = std::visit(
            overloaded{
                [&](const BenchmarkSpec&) -> ModelState {
                    fail(ErrorCode::MalformedModel, "benchmarks have no fitted state");
                },
                [&](const RidgeSpec&) -> ModelState { return read_linear(s, n_features); },
                [&](const LassoSpec&) -> ModelState { return read_linear(s, n_features); },
                [&](const LogisticSpec&) -> ModelState {
                    LogisticModel m;
                    m.alpha      = s.at("alpha").get<double>();
                    m.beta       = vector_from(s.at("beta"));
                    m.lambda2    = s.at("lambda2").get<double>();
                    m.iterations = s.value("iterations", 0);
                    if (static_cast<std::size_t>(m.beta.size()) != n_features) {
                        fail(ErrorCode::MalformedModel, "coefficient count does not match n_features");
                    }
                    return m;
                },
                [&](const GravitySpec&) -> ModelState {
                    return GravityModel{s.at("alpha").get<double>(), s.at("beta1").get<double>(),
                                        s.at("beta2").get<double>(), s.at("beta3").get<double>()};
                },
                [&](const TreeSpec&) -> ModelState { return tree_from_json(s); },
                [&](const ForestSpec& fs) -> ModelState {
                    ForestModel m;
                    m.params = fs.params;
                    m.seed   = seed;
                    for (const auto& t : s.at("trees")) {
                        m.trees.push_back(tree_from_json(t));
                    }
                    if (m.trees.empty()) {
                        fail(ErrorCode::MalformedModel, "forest has no trees");
                    }
                    return m;
                },
                [&](const GbmSpec& gs) -> ModelState {
                    GbmModel m;
                    m.params  = gs.params;
                    m.seed    = seed;
                    m.initial = s.at("initial").get<double>();
                    for (const auto& t : s.at("trees")) {
                        m.trees.push_back(tree_from_json(t));
                    }
                    return m;
                }},
            spec);
        return FittedModel(std::move(spec), seed, std::move(state), n_features);
    }
    catch (const json::exception& e) {
        fail(ErrorCode::MalformedModel, std::string("model document: ") + e.what());
    }
    catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidConfig) {
            fail(ErrorCode::MalformedModel, e.what());
        }
        throw;
    }
}

FittedModel Estimator::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                           std::vector<std::string>* warnings) const
{
    const auto p = static_cast<std::size_t>(X.cols());
    ModelState state = std::visit(
        overloaded{[&](const BenchmarkSpec& s) -> ModelState {
                       fail(ErrorCode::InvalidArgument,
                            "benchmark '" + s.id() + "' predicts from the target series, not a design matrix");
                   },
                   [&](const RidgeSpec& s) -> ModelState { return fit_ridge(X, y, s.lambda); },
                   [&](const LassoSpec& s) -> ModelState { return fit_lasso(X, y, s.lambda, s.options, warnings); },
                   [&](const LogisticSpec& s) -> ModelState { return fit_logistic(X, y, s.lambda2); },
                   [&](const GravitySpec&) -> ModelState {
                       if (X.cols() != 3 || X.rows() != y.size()) {
                           fail(ErrorCode::InvalidArgument,
                                "gravity design needs columns [origin feature, destination feature, distance]");
                       }
                       std::vector<GravityObservation> obs(static_cast<std::size_t>(X.rows()));
                       for (Eigen::Index i = 0; i < X.rows(); ++i) {
                           obs[static_cast<std::size_t>(i)] = {y[i], X(i, 0), X(i, 1), X(i, 2)};
                       }
                       GravityFit fit = fit_gravity(obs);
                       if (warnings && fit.dropped_rows > 0) {
                           warnings->push_back("gravity: dropped " + std::to_string(fit.dropped_rows) +
                                               " non-positive rows");
                       }
                       return fit.model;
                   },
                   [&](const TreeSpec& s) -> ModelState { return fit_tree(X, y, s.params); },
                   [&](const ForestSpec& s) -> ModelState { return fit_forest(X, y, s.params, seed); },
                   [&](const GbmSpec& s) -> ModelState { return fit_gbm(X, y, s.params, seed); }},
        spec);
    return FittedModel(spec, seed, std::move(state), p);
}

} // namespace fdf
