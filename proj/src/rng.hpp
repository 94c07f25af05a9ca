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
#ifndef FDF_RNG_HPP
#define FDF_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace fdf
{

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Counter-based generator: output k is a bijective mix of (key, k). A stream
/// is identified by (seed, stream id), so any fold, tree or region can get an
/// independent substream without sharing state, and the draws it sees do not
/// depend on scheduling order.
class Rng
{
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(splitmix64(splitmix64(seed) ^ splitmix64(stream ^ 0xD1B54A32D192ED03ULL)))
    {
    }

    Rng substream(std::uint64_t id) const
    {
        Rng child(key_, id);
        return child;
    }

    std::uint64_t next()
    {
        return splitmix64(key_ + 0x9E3779B97F4A7C15ULL * (++counter_));
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform()
    {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Unbiased integer in [0, n).
    std::uint64_t below(std::uint64_t n)
    {
        if (n <= 1) {
            return 0;
        }
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) {
                return r % n;
            }
        }
    }

    double normal()
    {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0) {
            u1 = 0x1.0p-53;
        }
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Knuth's product method below 30, rounded normal approximation above.
    std::int64_t poisson(double mean)
    {
        if (mean <= 0.0) {
            return 0;
        }
        if (mean < 30.0) {
            double limit = std::exp(-mean);
            double prod  = uniform();
            std::int64_t k = 0;
            while (prod > limit) {
                prod *= uniform();
                ++k;
            }
            return k;
        }
        double draw = std::round(mean + std::sqrt(mean) * normal());
        return draw < 0.0 ? 0 : static_cast<std::int64_t>(draw);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace fdf

#endif // FDF_RNG_HPP
