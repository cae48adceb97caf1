// SPDX-License-Identifier: Apache-2.0
//
// beamsec: attack injection and detection for beamformed massive-MIMO links
// Copyright (C) 2026 The beamsec authors
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

#ifndef BEAMSEC_ERRORS_HPP
#define BEAMSEC_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace beamsec
{

// Precondition violations on operation arguments (sizes, ranges, non-finite input).
class invalid_argument : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Configuration document rejected; `field()` holds the JSON path of the offending entry.
class config_error : public std::runtime_error
{
public:
    config_error(std::string field, const std::string &what)
        : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)), reason_(what) {}
    const std::string &field() const noexcept { return field_; }
    const std::string &reason() const noexcept { return reason_; }

private:
    std::string field_;
    std::string reason_;
};

// Malformed binary input; `offset()` is the byte position where parsing stopped.
class format_error : public std::runtime_error
{
public:
    format_error(std::uint64_t offset, const std::string &what)
        : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

class calibration_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class not_achievable : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace beamsec

#endif
