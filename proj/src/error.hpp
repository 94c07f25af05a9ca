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
#ifndef FDF_ERROR_HPP
#define FDF_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace fdf
{

enum class ErrorCode {
    InvalidArgument,
    Io,
    MalformedRow,
    UnknownRegion,
    NegativeCount,
    UnparseableDate,
    EmptyPeriodRange,
    IndexOutOfRange,
    NoFlows,
    ColumnCollision,
    EmptyRegistry,
    MissingAdjacency,
    NonInvertibleTransform,
    LagShorterThanHorizon,
    SingularSystem,
    NotConverged,
    Separable,
    InsufficientRows,
    CollinearDesign,
    TooFewPeriods,
    LengthMismatch,
    EmptyInput,
    ZeroActualInMAPE,
    NoCommonSupport,
    AllSpecsFailed,
    EmptyTestPartition,
    InvalidConfig,
    MalformedReport,
    MalformedModel,
};

/// Coarse grouping used for CLI exit codes and C status codes.
enum class ErrorCategory {
    Input,      // bad files, schemas, parameters
    Evaluation, // model fitting / scoring failures
    Report,     // malformed persisted artifacts
};

std::string_view error_code_name(ErrorCode code);
ErrorCategory error_category(ErrorCode code);

class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message)
        , code_(code)
    {
    }

    ErrorCode code() const noexcept
    {
        return code_;
    }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

} // namespace fdf

#endif // FDF_ERROR_HPP
