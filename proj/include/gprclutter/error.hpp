// SPDX-License-Identifier: Apache-2.0
//
// gprclutter: medium-induced clutter covariance modelling for FDA-MIMO GPR
// Copyright (C) 2026 The gprclutter Authors
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

#ifndef GPRCLUTTER_ERROR_HPP
#define GPRCLUTTER_ERROR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gprc
{
    // Error categories. The numeric values double as CLI exit codes.
    enum class ErrorKind : int
    {
        config = 1,    // invalid configuration, parameters or arguments
        numerical = 2, // domain violation, non-finite values, broken invariants
        io = 3         // file access and binary format errors
    };

    class Error : public std::runtime_error
    {
    public:
        Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
        ErrorKind kind() const noexcept { return kind_; }

    private:
        ErrorKind kind_;
    };

    struct ConfigError : Error
    {
        explicit ConfigError(const std::string &what) : Error(ErrorKind::config, what) {}
    };

    struct NumericalError : Error
    {
        explicit NumericalError(const std::string &what) : Error(ErrorKind::numerical, what) {}
    };

    struct IoError : Error
    {
        explicit IoError(const std::string &what) : Error(ErrorKind::io, what) {}
    };

    // Malformed binary payload; carries the byte offset where decoding failed.
    class FormatError : public IoError
    {
    public:
        FormatError(const std::string &what, std::uint64_t offset)
            : IoError(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}
        std::uint64_t offset() const noexcept { return offset_; }

    private:
        std::uint64_t offset_;
    };
}

#endif
