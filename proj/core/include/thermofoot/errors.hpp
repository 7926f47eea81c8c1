// Copyright 2026 The thermofoot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace thermo {

/// Base class of all thermofoot errors. Each concrete type corresponds to a
/// named failure mode of one pipeline operation.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ingest
struct MissingFile : Error { using Error::Error; };
struct DuplicateId : Error { using Error::Error; };
struct SchemaMismatch : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct NonFiniteTemperature : Error { using Error::Error; };
struct DegenerateWindow : Error { using Error::Error; };

// segmentation / representation
struct NonBinaryInput : Error { using Error::Error; };
struct EmptyDataset : Error { using Error::Error; };
struct EmptyRegion : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };

// clustering
struct TooFewPoints : Error { using Error::Error; };
struct NonFiniteFeature : Error { using Error::Error; };
struct InvalidK : Error { using Error::Error; };
struct CurveTooShort : Error { using Error::Error; };
struct SingleCluster : Error { using Error::Error; };
struct PerplexityTooLarge : Error { using Error::Error; };
struct InvalidM : Error { using Error::Error; };

// clinical / association
struct MissingField : Error { using Error::Error; };
struct MissingCoefficients : Error { using Error::Error; };
struct GroupTooSmall : Error { using Error::Error; };
struct AllMissing : Error { using Error::Error; };
struct UnknownField : Error { using Error::Error; };

// prediction
struct ClassAbsentInSplit : Error { using Error::Error; };
struct CohortTooSmall : Error { using Error::Error; };
struct EmptyTestSet : Error { using Error::Error; };
struct SingleClassTestSet : Error { using Error::Error; };

// pipeline
struct ConfigError : Error { using Error::Error; };
struct MissingPrerequisite : Error { using Error::Error; };

}  // namespace thermo
