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
#ifndef FDF_RENDER_HPP
#define FDF_RENDER_HPP

#include "scoring.hpp"

#include <string>
#include <utility>
#include <vector>

namespace fdf
{

/// Aligned text table: model, then train/test scores per horizon, ordered by
/// the first horizon's test score. Infeasible cells print "-".
std::string render_table(const ScoreReport& report);

/// One forecast chart per region (first horizon) and one rank heatmap, as
/// (file name, SVG text) pairs.
std::vector<std::pair<std::string, std::string>> render_svgs(const ScoreReport& report);

} // namespace fdf

#endif // FDF_RENDER_HPP
