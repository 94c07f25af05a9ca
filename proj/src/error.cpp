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
#include "error.hpp"

namespace fdf
{

std::string_view error_code_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::UnknownRegion: return "UnknownRegion";
    case ErrorCode::NegativeCount: return "NegativeCount";
    case ErrorCode::UnparseableDate: return "UnparseableDate";
    case ErrorCode::EmptyPeriodRange: return "EmptyPeriodRange";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NoFlows: return "NoFlows";
    case ErrorCode::ColumnCollision: return "ColumnCollision";
    case ErrorCode::EmptyRegistry: return "EmptyRegistry";
    case ErrorCode::MissingAdjacency: return "MissingAdjacency";
    case ErrorCode::NonInvertibleTransform: return "NonInvertibleTransform";
    case ErrorCode::LagShorterThanHorizon: return "LagShorterThanHorizon";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::Separable: return "Separable";
    case ErrorCode::InsufficientRows: return "InsufficientRows";
    case ErrorCode::CollinearDesign: return "CollinearDesign";
    case ErrorCode::TooFewPeriods: return "TooFewPeriods";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ZeroActualInMAPE: return "ZeroActualInMAPE";
    case ErrorCode::NoCommonSupport: return "NoCommonSupport";
    case ErrorCode::AllSpecsFailed: return "AllSpecsFailed";
    case ErrorCode::EmptyTestPartition: return "EmptyTestPartition";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::MalformedReport: return "MalformedReport";
    case ErrorCode::MalformedModel: return "MalformedModel";
    }
    return "Unknown";
}

ErrorCategory error_category(ErrorCode code)
{
    switch (code) {
    case ErrorCode::SingularSystem:
    case ErrorCode::NotConverged:
    case ErrorCode::Separable:
    case ErrorCode::InsufficientRows:
    case ErrorCode::CollinearDesign:
    case ErrorCode::LengthMismatch:
    case ErrorCode::EmptyInput:
    case ErrorCode::ZeroActualInMAPE:
    case ErrorCode::NoCommonSupport:
    case ErrorCode::AllSpecsFailed:
    case ErrorCode::EmptyTestPartition:
    case ErrorCode::NoFlows:
    case ErrorCode::NonInvertibleTransform:
    case ErrorCode::LagShorterThanHorizon:
        return ErrorCategory::Evaluation;
    case ErrorCode::MalformedReport:
    case ErrorCode::MalformedModel:
        return ErrorCategory::Report;
    default:
        return ErrorCategory::Input;
    }
}

void fail(ErrorCode code, const std::string& message)
{
    throw Error(code, message);
}

} // namespace fdf
