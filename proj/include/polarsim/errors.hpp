// Copyright 2026 The polarsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace polarsim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A creation operator would push a mode past the photon cap.
struct CapacityError : Error {
    using Error::Error;
};

/// Mode index out of range, mismatched mode counts, malformed permutation.
struct DimensionError : Error {
    using Error::Error;
};

/// A click pattern reached a feed-forward stage that has no rule for it.
struct UnmatchedPatternError : Error {
    using Error::Error;
};

/// A measurement produced a pattern the site cannot physically produce.
struct ConsistencyError : Error {
    using Error::Error;
};

/// Invalid experiment configuration (unknown name, missing seed, bad input).
struct ConfigError : Error {
    using Error::Error;
};

/// Reading or writing a file failed.
struct IoError : Error {
    using Error::Error;
};

}  // namespace polarsim
