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
#include "splits.hpp"

#include "error.hpp"

#include <string>

namespace fdf
{

namespace
{

std::vector<PeriodRange> validation_blocks(const PeriodRange& periods, int k, int min_train)
{
    if (k < 1 || min_train < 1) {
        fail(ErrorCode::InvalidArgument, "splits need k >= 1 and a training length >= 1");
    }
    const long total = static_cast<long>(periods.size());
    if (total < static_cast<long>(min_train) + k) {
        fail(ErrorCode::TooFewPeriods, std::to_string(total) + " periods cannot hold " + std::to_string(min_train) +
                                           " training periods and " + std::to_string(k) + " validation blocks");
    }
    const long remaining = total - min_train;
    const long base      = remaining / k;
    const long extra     = remaining % k;
    std::vector<PeriodRange> blocks;
    long start = min_train;
    for (long i = 0; i < k; ++i) {
        long len = base + (i < extra ? 1 : 0);
        blocks.emplace_back(periods.at(static_cast<std::size_t>(start)),
                            periods.at(static_cast<std::size_t>(start + len - 1)));
        start += len;
    }
    return blocks;
}

} // namespace

SplitPlan expanding_splits(const PeriodRange& periods, int k, int min_train)
{
    SplitPlan plan;
    for (const auto& block : validation_blocks(periods, k, min_train)) {
        plan.folds.push_back({PeriodRange(periods.first, block.first.prev()), block});
    }
    return plan;
}

SplitPlan sliding_splits(const PeriodRange& periods, int k, int train_len)
{
    SplitPlan plan;
    for (const auto& block : validation_blocks(periods, k, train_len)) {
        plan.folds.push_back({PeriodRange(block.first - train_len, block.first.prev()), block});
    }
    return plan;
}

void validate_plan(const SplitPlan& plan)
{
    if (plan.folds.empty()) {
        fail(ErrorCode::InvalidArgument, "split plan has no folds");
    }
    for (std::size_t i = 0; i < plan.folds.size(); ++i) {
        const auto& f = plan.folds[i];
        if (!(f.train.last < f.validation.first)) {
            fail(ErrorCode::InvalidArgument, "fold " + std::to_string(i) + " trains on or after its validation block");
        }
        if (i > 0 && !(plan.folds[i - 1].validation.last < f.validation.first)) {
            fail(ErrorCode::InvalidArgument, "validation blocks must be disjoint and ascending");
        }
    }
}

} // namespace fdf
