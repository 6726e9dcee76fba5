/* Copyright 2026 The Framesel Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef FRAMESEL_ERRORS_HPP
#define FRAMESEL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace framesel {

/// Root of the library error hierarchy.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad inputs, bad configuration, malformed files. CLI exit code 2.
struct ValidationError : Error {
  using Error::Error;
};

/// Failures of the underlying filesystem (open/write/rename/fsync). CLI exit
/// code 1.
struct IoFailure : Error {
  using Error::Error;
};

// ---- pool state -----------------------------------------------------------
struct SelectionNotInPool : ValidationError { using ValidationError::ValidationError; };
struct DuplicateSelection : ValidationError { using ValidationError::ValidationError; };
struct EmptyInput : ValidationError { using ValidationError::ValidationError; };

// ---- tensors and metrics --------------------------------------------------
struct ShapeMismatch : ValidationError { using ValidationError::ValidationError; };
struct DimensionMismatch : ValidationError { using ValidationError::ValidationError; };
struct LengthMismatch : ValidationError { using ValidationError::ValidationError; };
struct NotNormalized : ValidationError { using ValidationError::ValidationError; };
struct ZeroVector : ValidationError { using ValidationError::ValidationError; };
struct TooSmall : ValidationError { using ValidationError::ValidationError; };

// ---- acquisition ----------------------------------------------------------
struct EmptyReferenceSet : ValidationError { using ValidationError::ValidationError; };
struct QueryNotInCandidates : ValidationError { using ValidationError::ValidationError; };
struct BudgetExceedsPool : ValidationError { using ValidationError::ValidationError; };
struct TooManyBatches : ValidationError { using ValidationError::ValidationError; };
struct MissingFeature : ValidationError { using ValidationError::ValidationError; };
struct MissingProbMap : ValidationError { using ValidationError::ValidationError; };
struct MissingPixels : ValidationError { using ValidationError::ValidationError; };
struct UnknownVideo : ValidationError { using ValidationError::ValidationError; };

// ---- simulator ------------------------------------------------------------
struct InvalidConfig : ValidationError { using ValidationError::ValidationError; };
struct NoLabeledData : ValidationError { using ValidationError::ValidationError; };
struct NoPresentClasses : ValidationError { using ValidationError::ValidationError; };
struct InsufficientVideos : ValidationError { using ValidationError::ValidationError; };

// ---- file formats ---------------------------------------------------------
struct BadMagic : ValidationError { using ValidationError::ValidationError; };
struct VersionUnsupported : ValidationError { using ValidationError::ValidationError; };
struct UnsupportedDtype : ValidationError { using ValidationError::ValidationError; };
struct InvalidRank : ValidationError { using ValidationError::ValidationError; };
struct DuplicateFrameId : ValidationError { using ValidationError::ValidationError; };
struct MissingColumn : ValidationError { using ValidationError::ValidationError; };
struct BadSplitTag : ValidationError { using ValidationError::ValidationError; };
struct UnresolvedPath : ValidationError { using ValidationError::ValidationError; };
struct InconsistentDims : ValidationError { using ValidationError::ValidationError; };
struct ParseError : ValidationError { using ValidationError::ValidationError; };

}  // namespace framesel

#endif  // FRAMESEL_ERRORS_HPP
