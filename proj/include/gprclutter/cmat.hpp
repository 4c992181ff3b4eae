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

#ifndef GPRCLUTTER_CMAT_HPP
#define GPRCLUTTER_CMAT_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>

namespace gprc
{
    // CMAT binary matrix layout, little-endian:
    //   "CMAT" | version u16 | kind u8 (0 real64, 1 complex128 re/im interleaved) | rows u64 | cols u64 | row-major payload
    inline constexpr std::uint16_t kCmatVersion = 1;
    inline constexpr std::size_t kCmatHeaderSize = 4 + 2 + 1 + 8 + 8;

    enum class CmatKind : std::uint8_t
    {
        real64 = 0,
        complex128 = 1
    };

    struct CmatHeader
    {
        std::uint16_t version = kCmatVersion;
        CmatKind kind = CmatKind::real64;
        std::uint64_t rows = 0;
        std::uint64_t cols = 0;
    };

    using AnyMatrix = std::variant<Eigen::MatrixXd, Eigen::MatrixXcd>;

    std::string encode_cmat(const Eigen::MatrixXd &m);
    std::string encode_cmat(const Eigen::MatrixXcd &m);

    // Throws FormatError (with byte offset) on bad magic, version, kind, dims or truncation.
    CmatHeader decode_cmat_header(const std::string &bytes);
    AnyMatrix decode_cmat(const std::string &bytes);

    // Atomic write: the payload goes to a temporary sibling which is then renamed.
    void save_matrix(const std::filesystem::path &path, const Eigen::MatrixXd &m);
    void save_matrix(const std::filesystem::path &path, const Eigen::MatrixXcd &m);
    AnyMatrix load_matrix(const std::filesystem::path &path);
    Eigen::MatrixXcd load_complex_matrix(const std::filesystem::path &path);
    CmatHeader read_cmat_header(const std::filesystem::path &path);

    // Writes text atomically (temporary file + rename). Throws IoError.
    void write_file_atomic(const std::filesystem::path &path, const std::string &contents);
    std::string read_file(const std::filesystem::path &path);
}

#endif
