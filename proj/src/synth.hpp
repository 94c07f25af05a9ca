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
#ifndef FDF_SYNTH_HPP
#define FDF_SYNTH_HPP

#include "period.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fdf
{

enum class Scenario { Seasonal, FeatureDriven, Bursty };

Scenario parse_scenario(std::string_view name);
std::string_view scenario_name(Scenario s);

struct SynthOptions {
    Scenario scenario = Scenario::Seasonal;
    std::uint64_t seed = 42;
    int n_regions      = 18;
    int n_periods      = 120;
    Period start{2010, 1};
    double noise_scale = 1.0; // multiplies the scenario's default noise
};

struct SynthDataset {
    /// (file name, content) in write order.
    std::vector<std::pair<std::string, std::string>> files;
    nlohmann::json ground_truth;
};

/// Deterministic given the options. Throws InvalidArgument unless
/// n_regions >= 2 and n_periods >= 24.
SynthDataset generate_synthetic(const SynthOptions& options);

/// Writes every CSV, ground_truth.json and a ready-to-run config.json.
std::vector<std::filesystem::path> write_synthetic(const SynthOptions& options, const std::filesystem::path& dir);

} // namespace fdf

#endif // FDF_SYNTH_HPP
