/******************************************************************************
 * Copyright 2026 The Platoon Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#pragma once

#include <stdexcept>
#include <string>

namespace platoon {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input (bad kind label, N = 0, dt <= 0, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The communication graph violates a structural requirement, e.g. the leader
/// cannot reach every follower.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A stability theorem was requested for a graph family it does not cover.
class NotApplicable : public Error {
 public:
  using Error::Error;
};

/// Non-finite values, blow-up during integration, or an unstable loop where a
/// stable one was required.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace platoon
