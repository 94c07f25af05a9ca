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
#include "tree.hpp"

#include "error.hpp"
#include "rng.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace fdf
{

namespace
{

void check_inputs(const Eigen::MatrixXd& X, const Eigen::VectorXd& y)
{
    if (X.rows() != y.size()) {
        fail(ErrorCode::LengthMismatch, "tree: X and y differ in length");
    }
    if (X.rows() < 1) {
        fail(ErrorCode::EmptyInput, "tree: no rows");
    }
    if (!X.allFinite() || !y.allFinite()) {
        fail(ErrorCode::InvalidArgument, "tree: inputs must be finite (impute MISSING first)");
    }
}

void check_params(const TreeParams& params)
{
    if (params.max_depth < 0 || params.min_samples_leaf < 1) {
        fail(ErrorCode::InvalidArgument, "tree: max_depth must be >= 0 and min_samples_leaf >= 1");
    }
}

/// Presorted CART builder. Every node owns the same [begin, end) segment in
/// each per-feature ordering; a split stably partitions all of them.
class TreeBuilder
{
public:
    TreeBuilder(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::vector<int> samples,
                const TreeParams& params, int m_features, Rng* rng)
        : X_(X)
        , y_(y)
        , samples_(std::move(samples))
        , params_(params)
        , m_features_(m_features)
        , rng_(rng)
    {
        const auto p = static_cast<std::size_t>(X.cols());
        const auto n = samples_.size();
        order_.resize(p);
        for (std::size_t f = 0; f < p; ++f) {
            auto& ord = order_[f];
            ord.resize(n);
            std::iota(ord.begin(), ord.end(), 0);
            std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) {
                return X_(samples_[static_cast<std::size_t>(a)], static_cast<Eigen::Index>(f)) <
                       X_(samples_[static_cast<std::size_t>(b)], static_cast<Eigen::Index>(f));
            });
        }
        goes_left_.resize(n);
        scratch_.resize(n);
        all_features_.resize(p);
        std::iota(all_features_.begin(), all_features_.end(), 0);
    }

    TreeModel build()
    {
        TreeModel model;
        nodes_ = &model.nodes;
        grow(0, samples_.size(), 0);
        return model;
    }

private:
    double target(int entry) const
    {
        return y_[samples_[static_cast<std::size_t>(entry)]];
    }
    double feature_value(int entry, int f) const
    {
        return X_(samples_[static_cast<std::size_t>(entry)], f);
    }

    std::vector<int> candidate_features()
    {
        const int p = static_cast<int>(all_features_.size());
        if (m_features_ <= 0 || m_features_ >= p || rng_ == nullptr) {
            return all_features_;
        }
        std::vector<int> pool = all_features_;
        for (int i = 0; i < m_features_; ++i) {
            auto j = static_cast<int>(static_cast<std::uint64_t>(i) +
                                      rng_->below(static_cast<std::uint64_t>(p - i)));
            std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
        }
        pool.resize(static_cast<std::size_t>(m_features_));
        std::sort(pool.begin(), pool.end());
        return pool;
    }

    int grow(std::size_t begin, std::size_t end, int depth)
    {
        const auto& base = order_.empty() ? identity_segment(begin, end) : order_[0];
        const std::size_t n = end - begin;

        double sum = 0.0;
        for (std::size_t k = begin; k < end; ++k) {
            sum += target(base[k]);
        }
        double mean = sum / static_cast<double>(n);
        double sq = 0.0, s = 0.0;
        for (std::size_t k = begin; k < end; ++k) {
            double c = target(base[k]) - mean;
            s += c;
            sq += c * c;
        }

        int id = static_cast<int>(nodes_->size());
        TreeNode leaf;
        leaf.value   = mean;
        leaf.samples = static_cast<std::int64_t>(n);
        nodes_->push_back(leaf);

        const std::size_t min_leaf = static_cast<std::size_t>(params_.min_samples_leaf);
        if (depth >= params_.max_depth || n < 2 * min_leaf || sq <= 0.0) {
            return id;
        }

        // Maximize sum_child (child sum)^2 / child n over centered targets,
        // which minimizes the children's total SSE.
        const double parent_score = s * s / static_cast<double>(n);
        double best_score         = parent_score;
        int best_feature          = -1;
        double best_threshold     = 0.0;
        for (int f : candidate_features()) {
            const auto& ord = order_[static_cast<std::size_t>(f)];
            double left_sum = 0.0;
            for (std::size_t k = begin; k + 1 < end; ++k) {
                left_sum += target(ord[k]) - mean;
                std::size_t n_left = k + 1 - begin;
                double lo          = feature_value(ord[k], f);
                double hi          = feature_value(ord[k + 1], f);
                if (!(lo < hi) || n_left < min_leaf || n - n_left < min_leaf) {
                    continue;
                }
                double right_sum = s - left_sum;
                double score     = left_sum * left_sum / static_cast<double>(n_left) +
                               right_sum * right_sum / static_cast<double>(n - n_left);
                if (score > best_score) {
                    best_score     = score;
                    best_feature   = f;
                    double mid     = lo + (hi - lo) / 2.0;
                    best_threshold = mid < hi ? mid : lo;
                }
            }
        }
        if (best_feature < 0 || best_score - parent_score <= 1e-13 * sq) {
            return id;
        }

        const auto& chosen = order_[static_cast<std::size_t>(best_feature)];
        std::size_t n_left = 0;
        for (std::size_t k = begin; k < end; ++k) {
            bool left = feature_value(chosen[k], best_feature) <= best_threshold;
            goes_left_[static_cast<std::size_t>(chosen[k])] = left;
            n_left += left ? 1 : 0;
        }
        for (auto& ord : order_) {
            std::size_t l = begin, r = 0;
            for (std::size_t k = begin; k < end; ++k) {
                if (goes_left_[static_cast<std::size_t>(ord[k])]) {
                    ord[l++] = ord[k];
                }
                else {
                    scratch_[r++] = ord[k];
                }
            }
            std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(r),
                      ord.begin() + static_cast<std::ptrdiff_t>(l));
        }

        int left_id  = grow(begin, begin + n_left, depth + 1);
        int right_id = grow(begin + n_left, end, depth + 1);
        TreeNode& node = (*nodes_)[static_cast<std::size_t>(id)];
        node.feature   = best_feature;
        node.threshold = best_threshold;
        node.left      = left_id;
        node.right     = right_id;
        node.gain      = best_score - parent_score;
        return id;
    }

    // Only used when the design has no columns: a single leaf over all entries.
    const std::vector<int>& identity_segment(std::size_t, std::size_t)
    {
        if (identity_.size() != samples_.size()) {
            identity_.resize(samples_.size());
            std::iota(identity_.begin(), identity_.end(), 0);
        }
        return identity_;
    }

    const Eigen::MatrixXd& X_;
    const Eigen::VectorXd& y_;
    std::vector<int> samples_;
    TreeParams params_;
    int m_features_;
    Rng* rng_;
    std::vector<std::vector<int>> order_;
    std::vector<char> goes_left_;
    std::vector<int> scratch_;
    std::vector<int> all_features_;
    std::vector<int> identity_;
    std::vector<TreeNode>* nodes_ = nullptr;
};

std::vector<int> all_rows(Eigen::Index n)
{
    std::vector<int> rows(static_cast<std::size_t>(n));
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
}

} // namespace

double TreeModel::predict_row(RowRef x) const
{
    int id = 0;
    while (nodes[static_cast<std::size_t>(id)].feature >= 0) {
        const auto& node = nodes[static_cast<std::size_t>(id)];
        id               = x[node.feature] <= node.threshold ? node.left : node.right;
    }
    return nodes[static_cast<std::size_t>(id)].value;
}

Eigen::VectorXd TreeModel::predict(const Eigen::MatrixXd& X) const
{
    Eigen::VectorXd out(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        out[i] = predict_row(X.row(i));
    }
    return out;
}

int TreeModel::depth() const
{
    std::vector<int> d(nodes.size(), 0);
    int deepest = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].feature >= 0) {
            d[static_cast<std::size_t>(nodes[i].left)]  = d[i] + 1;
            d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
        }
        deepest = std::max(deepest, d[i]);
    }
    return deepest;
}

int TreeModel::leaf_count() const
{
    return static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.feature < 0; }));
}

std::vector<double> TreeModel::importances(std::size_t n_features) const
{
    std::vector<double> out(n_features, 0.0);
    for (const auto& n : nodes) {
        if (n.feature >= 0 && static_cast<std::size_t>(n.feature) < n_features) {
            out[static_cast<std::size_t>(n.feature)] += n.gain;
        }
    }
    return out;
}

TreeModel fit_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const TreeParams& params)
{
    check_inputs(X, y);
    check_params(params);
    TreeBuilder builder(X, y, all_rows(X.rows()), params, 0, nullptr);
    return builder.build();
}

double ForestModel::predict_row(RowRef x) const
{
    double sum = 0.0;
    for (const auto& t : trees) {
        sum += t.predict_row(x);
    }
    return sum / static_cast<double>(trees.size());
}

Eigen::VectorXd ForestModel::predict(const Eigen::MatrixXd& X) const
{
    Eigen::VectorXd out(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        out[i] = predict_row(X.row(i));
    }
    return out;
}

ForestModel fit_forest(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const ForestParams& params,
                       std::uint64_t seed)
{
    check_inputs(X, y);
    check_params(params.tree);
    const int p = static_cast<int>(X.cols());
    if (params.n_trees < 1) {
        fail(ErrorCode::InvalidArgument, "forest: n_trees must be >= 1");
    }
    if (params.m_features < 0 || params.m_features > std::max(p, 1)) {
        fail(ErrorCode::InvalidArgument, "forest: m_features must lie in [1, p] (0 = p / 3)");
    }
    ForestModel model;
    model.params = params;
    model.seed   = seed;
    int m        = params.m_features > 0 ? params.m_features : std::max(1, p / 3);

    const Rng root(seed);
    for (int t = 0; t < params.n_trees; ++t) {
        Rng rng = root.substream(static_cast<std::uint64_t>(t));
        std::vector<int> rows;
        if (params.bootstrap) {
            rows.resize(static_cast<std::size_t>(X.rows()));
            for (auto& r : rows) {
                r = static_cast<int>(rng.below(static_cast<std::uint64_t>(X.rows())));
            }
        }
        else {
            rows = all_rows(X.rows());
        }
        TreeBuilder builder(X, y, std::move(rows), params.tree, m, &rng);
        model.trees.push_back(builder.build());
    }
    return model;
}

double GbmModel::predict_row(RowRef x) const
{
    double sum = 0.0;
    for (const auto& t : trees) {
        sum += t.predict_row(x);
    }
    return initial + params.learning_rate * sum;
}

Eigen::VectorXd GbmModel::predict(const Eigen::MatrixXd& X) const
{
    Eigen::VectorXd out(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        out[i] = predict_row(X.row(i));
    }
    return out;
}

GbmModel fit_gbm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const GbmParams& params, std::uint64_t seed,
                 std::vector<double>* training_sse)
{
    check_inputs(X, y);
    check_params(params.tree);
    if (params.n_rounds < 0 || !(params.learning_rate > 0.0) || params.learning_rate > 1.0) {
        fail(ErrorCode::InvalidArgument, "gbm: n_rounds must be >= 0 and learning rate in (0, 1]");
    }
    GbmModel model;
    model.params  = params;
    model.seed    = seed;
    model.initial = y.mean();

    // Sum of tree outputs so far; F = initial + rate * sum, matching predict().
    Eigen::VectorXd tree_sum = Eigen::VectorXd::Zero(y.size());
    auto current_sse = [&]() {
        Eigen::VectorXd f = (params.learning_rate * tree_sum).array() + model.initial;
        return (y - f).squaredNorm();
    };
    if (training_sse) {
        training_sse->clear();
        training_sse->push_back(current_sse());
    }
    for (int m = 0; m < params.n_rounds; ++m) {
        Eigen::VectorXd fitted   = (params.learning_rate * tree_sum).array() + model.initial;
        Eigen::VectorXd residual = y - fitted;
        TreeModel tree           = fit_tree(X, residual, params.tree);
        tree_sum += tree.predict(X);
        model.trees.push_back(std::move(tree));
        if (training_sse) {
            training_sse->push_back(current_sse());
        }
    }
    return model;
}

} // namespace fdf
