// Copyright 2026 The qutomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>

namespace qutomo {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
struct InvalidArgument : Error {
    using Error::Error;
};

/// An iterative numerical routine failed to converge, or an internal
/// numerical consistency check tripped (e.g. a trace that must be real
/// came out with a large imaginary part).
struct NumericalFailure : Error {
    using Error::Error;
};

/// The density matrix is too close to singular to factor; the caller must
/// regularize (pure states go through the epsilon mixing first).
struct SingularState : Error {
    using Error::Error;
};

/// tau-dagger-tau has vanishing trace, so no density matrix can be formed.
struct DegenerateTau : Error {
    using Error::Error;
};

/// Network parameters or activations do not match the declared layout.
struct ShapeMismatch : Error {
    using Error::Error;
};

/// Projector keep-count outside [1, 36].
struct BadCount : Error {
    using Error::Error;
};

/// Training was requested on a dataset with no training samples.
struct EmptyDataset : Error {
    using Error::Error;
};

/// Filesystem read/write failure (missing file, short write, bad size).
struct IoError : Error {
    using Error::Error;
};

/// A serialized artifact was produced by an incompatible format version.
struct FormatVersionMismatch : Error {
    using Error::Error;
};

/// Payload bytes do not match the checksum recorded in the manifest.
struct ChecksumMismatch : Error {
    using Error::Error;
};

}  // namespace qutomo
