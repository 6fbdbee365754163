// SPDX-License-Identifier: Apache-2.0
//
// rislocate: RIS-aided mmWave localization simulator and sparse recovery toolkit
// Copyright (C) 2026 The rislocate authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace rislocate {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Precondition violations on shapes, counts and physical parameters.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class InvalidPathError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class InvalidDelayError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class InvalidRisConfigError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class ShapeError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

// |sin(phi_br) - sin(theta_rm)| > 1, so no real difference angle exists.
class SpatialFrequencyOverflowError : public Error {
public:
    using Error::Error;
};

// Grid index maps outside the visible region (arcsin argument beyond [-1, 1]).
class GridAngleError : public Error {
public:
    using Error::Error;
};

// Greedy pursuit ran out of signal before selecting the requested atoms.
class ResidualCollapseError : public Error {
public:
    using Error::Error;
};

// Covariance too badly conditioned to invert reliably.
class IllPosedError : public Error {
public:
    using Error::Error;
};

// The reflection angle cannot be recovered from the estimated spatial frequency.
class AmbiguityError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ConfigFileError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class ConfigSyntaxError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class ConfigKeyError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class ConfigTypeError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class ConfigValueError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

} // namespace rislocate
