// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The grassmod Authors
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

namespace grassmod {

/// Input outside an operation's mathematical domain (non-finite entries,
/// violated preconditions, empty inputs).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Matrix too close to rank deficient for the requested operation.
class DegenerateInputError : public DomainError {
public:
    using DomainError::DomainError;
};

/// The log map is undefined: at least one principal angle equals pi/2.
class CutLocusError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Sorted distances to the reference point are too close to recover the
/// bit order.
class TieError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Constellation size is not a power of two.
class SizeError : public DomainError {
public:
    using DomainError::DomainError;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace grassmod
