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

#include "gprclutter/cmat.hpp"
#include "gprclutter/error.hpp"

#include <algorithm>
#include <bit>
#include <complex>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace gprc
{
    namespace
    {
        static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

        template <typename T>
        void put(std::string &out, T v)
        {
            unsigned char bytes[sizeof(T)];
            std::memcpy(bytes, &v, sizeof(T));
            if constexpr (std::endian::native == std::endian::big)
                std::reverse(bytes, bytes + sizeof(T));
            out.append(reinterpret_cast<const char *>(bytes), sizeof(T));
        }

        template <typename T>
        T get(const std::string &in, std::size_t offset)
        {
            unsigned char bytes[sizeof(T)];
            std::memcpy(bytes, in.data() + offset, sizeof(T));
            if constexpr (std::endian::native == std::endian::big)
                std::reverse(bytes, bytes + sizeof(T));
            T v;
            std::memcpy(&v, bytes, sizeof(T));
            return v;
        }

        std::string header(CmatKind kind, std::uint64_t rows, std::uint64_t cols)
        {
            std::string out = "CMAT";
            put<std::uint16_t>(out, kCmatVersion);
            put<std::uint8_t>(out, static_cast<std::uint8_t>(kind));
            put<std::uint64_t>(out, rows);
            put<std::uint64_t>(out, cols);
            return out;
        }
    }

    std::string encode_cmat(const Eigen::MatrixXd &m)
    {
        std::string out = header(CmatKind::real64, static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols()));
        out.reserve(kCmatHeaderSize + static_cast<std::size_t>(m.size()) * 8);
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                put<double>(out, m(i, j));
        return out;
    }

    std::string encode_cmat(const Eigen::MatrixXcd &m)
    {
        std::string out = header(CmatKind::complex128, static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols()));
        out.reserve(kCmatHeaderSize + static_cast<std::size_t>(m.size()) * 16);
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j)
            {
                put<double>(out, m(i, j).real());
                put<double>(out, m(i, j).imag());
            }
        return out;
    }

    CmatHeader decode_cmat_header(const std::string &bytes)
    {
        if (bytes.size() < 4)
            throw FormatError("truncated CMAT magic", bytes.size());
        if (bytes.compare(0, 4, "CMAT") != 0)
            throw FormatError("bad CMAT magic", 0);
        if (bytes.size() < kCmatHeaderSize)
            throw FormatError("truncated CMAT header", bytes.size());

        CmatHeader h;
        h.version = get<std::uint16_t>(bytes, 4);
        if (h.version != kCmatVersion)
            throw FormatError("unsupported CMAT version " + std::to_string(h.version), 4);
        const auto kind = get<std::uint8_t>(bytes, 6);
        if (kind > 1)
            throw FormatError("unknown CMAT element kind " + std::to_string(kind), 6);
        h.kind = static_cast<CmatKind>(kind);
        h.rows = get<std::uint64_t>(bytes, 7);
        h.cols = get<std::uint64_t>(bytes, 15);

        const std::uint64_t elem = h.kind == CmatKind::real64 ? 8 : 16;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / elem;
        if (h.cols != 0 && h.rows > limit / h.cols)
            throw FormatError("CMAT dimensions overflow", 7);
        const std::uint64_t expected = kCmatHeaderSize + h.rows * h.cols * elem;
        if (bytes.size() < expected)
            throw FormatError("truncated CMAT payload: expected " + std::to_string(expected) + " bytes, found " +
                                  std::to_string(bytes.size()),
                              bytes.size());
        if (bytes.size() > expected)
            throw FormatError("trailing bytes after CMAT payload", expected);
        return h;
    }

    AnyMatrix decode_cmat(const std::string &bytes)
    {
        const CmatHeader h = decode_cmat_header(bytes);
        const auto rows = static_cast<Eigen::Index>(h.rows), cols = static_cast<Eigen::Index>(h.cols);
        std::size_t off = kCmatHeaderSize;
        if (h.kind == CmatKind::real64)
        {
            Eigen::MatrixXd m(rows, cols);
            for (Eigen::Index i = 0; i < rows; ++i)
                for (Eigen::Index j = 0; j < cols; ++j, off += 8)
                    m(i, j) = get<double>(bytes, off);
            return m;
        }
        Eigen::MatrixXcd m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j, off += 16)
                m(i, j) = {get<double>(bytes, off), get<double>(bytes, off + 8)};
        return m;
    }

    void write_file_atomic(const std::filesystem::path &path, const std::string &contents)
    {
        std::error_code ec;
        if (path.has_parent_path())
        {
            std::filesystem::create_directories(path.parent_path(), ec);
            if (ec)
                throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
        }
        auto tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw IoError("cannot open " + tmp.string() + " for writing");
            out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
            if (!out)
                throw IoError("write failed for " + tmp.string());
        }
        std::filesystem::rename(tmp, path, ec);
        if (ec)
            throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }

    std::string read_file(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw IoError("cannot open " + path.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        if (in.bad())
            throw IoError("read failed for " + path.string());
        return ss.str();
    }

    void save_matrix(const std::filesystem::path &path, const Eigen::MatrixXd &m)
    {
        write_file_atomic(path, encode_cmat(m));
    }

    void save_matrix(const std::filesystem::path &path, const Eigen::MatrixXcd &m)
    {
        write_file_atomic(path, encode_cmat(m));
    }

    AnyMatrix load_matrix(const std::filesystem::path &path) { return decode_cmat(read_file(path)); }

    Eigen::MatrixXcd load_complex_matrix(const std::filesystem::path &path)
    {
        auto any = load_matrix(path);
        if (auto *c = std::get_if<Eigen::MatrixXcd>(&any))
            return std::move(*c);
        return std::get<Eigen::MatrixXd>(any).cast<std::complex<double>>();
    }

    CmatHeader read_cmat_header(const std::filesystem::path &path) { return decode_cmat_header(read_file(path)); }
}
