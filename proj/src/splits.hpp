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
#ifndef FDF_SPLITS_HPP
#define FDF_SPLITS_HPP

#include "period.hpp"

#include <vector>

namespace fdf
{

struct Fold {
    PeriodRange train;
    PeriodRange validation;

    friend bool operator==(const Fold&, const Fold&) = default;
};

/// Rolling-origin folds: training always ends before validation starts.
struct SplitPlan {
    std::vector<Fold> folds;
};

/// The last |periods| - min_train periods form k contiguous validation blocks,
/// as equal as possible with earlier blocks taking the remainder; each fold
/// trains on everything before its block. Throws TooFewPeriods.
SplitPlan expanding_splits(const PeriodRange& periods, int k, int min_train);

/// Same validation blocks with min_train = train_len; each fold trains on the
/// train_len periods right before its block.
SplitPlan sliding_splits(const PeriodRange& periods, int k, int train_len);

/// Checks ordering, disjointness and non-emptiness (InvalidArgument otherwise).
void validate_plan(const SplitPlan& plan);

} // namespace fdf

#endif // FDF_SPLITS_HPP
