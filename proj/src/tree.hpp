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
#ifndef FDF_TREE_HPP
#define FDF_TREE_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace fdf
{

/// A row of a (column-major) design matrix, strided or not.
using RowRef = Eigen::Ref<const Eigen::RowVectorXd, 0, Eigen::InnerStride<>>;

struct TreeNode {
    int feature      = -1; // -1 marks a leaf
    double threshold = 0.0;
    int left         = -1;
    int right        = -1;
    double value     = 0.0; // training mean of the node
    double gain      = 0.0; // SSE reduction of the split
    std::int64_t samples = 0;
};

struct TreeParams {
    int max_depth        = 8;
    int min_samples_leaf = 1;
};

/// CART regression tree; x[feature] <= threshold goes left.
struct TreeModel {
    std::vector<TreeNode> nodes;

    double predict_row(RowRef x) const;
    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const;
    int depth() const;
    int leaf_count() const;
    /// Summed split gain per feature.
    std::vector<double> importances(std::size_t n_features) const;
};

/// Greedy CART: each split minimizes the children's summed squared error;
/// thresholds are midpoints between consecutive distinct values; ties go to the
/// lowest feature index, then the lowest threshold.
TreeModel fit_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const TreeParams& params);

struct ForestParams {
    int n_trees    = 100;
    int m_features = 0; // features tried per split; 0 = max(1, p / 3)
    bool bootstrap = true;
    TreeParams tree{16, 1};
};

struct ForestModel {
    std::vector<TreeModel> trees;
    ForestParams params;
    std::uint64_t seed = 0;

    double predict_row(RowRef x) const;
    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const;
};

/// Tree t draws from substream t of `seed`, so trees are independent of fit order.
ForestModel fit_forest(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const ForestParams& params,
                       std::uint64_t seed);

struct GbmParams {
    int n_rounds         = 100;
    double learning_rate = 0.1;
    TreeParams tree{3, 1};
};

/// F(x) = F0 + learning_rate * sum_m tree_m(x), squared loss.
struct GbmModel {
    double initial = 0.0;
    std::vector<TreeModel> trees;
    GbmParams params;
    std::uint64_t seed = 0;

    double predict_row(RowRef x) const;
    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const;
};

/// When `training_sse` is non-null it receives the training SSE after F0 and
/// after every round (n_rounds + 1 values).
GbmModel fit_gbm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const GbmParams& params, std::uint64_t seed,
                 std::vector<double>* training_sse = nullptr);

} // namespace fdf

#endif // FDF_TREE_HPP
