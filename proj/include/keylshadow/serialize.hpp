// Copyright 2026 The keylshadow Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * JSON I/O. Shadow files use a versioned schema with a fixed field order
 * {version, d, k, c, basis, b, rho_rough, e_hats}; complex matrices are
 * row-major arrays of [re, im] pairs and doubles are written with 17
 * significant digits, so identical shadows serialize to identical bytes.
 * Matrix files carry {"d", "hermitian", "entries"} and are validated on load.
 */

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "keylshadow/errors.hpp"
#include "keylshadow/linalg.hpp"
#include "keylshadow/splitting.hpp"

namespace keylshadow {

namespace detail {

inline void append_double(std::string &out, double v) {
    if (v == 0.0)
        v = 0.0; // canonical zero: "-0" would not survive a parse round-trip
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

inline void append_complex_matrix(std::string &out, const Mat &m) {
    out += '[';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (i != 0 || j != 0)
                out += ',';
            out += '[';
            append_double(out, m(i, j).real());
            out += ',';
            append_double(out, m(i, j).imag());
            out += ']';
        }
    }
    out += ']';
}

inline Mat parse_complex_matrix(const nlohmann::json &entries, Eigen::Index rows,
                                Eigen::Index cols, const std::string &what) {
    if (!entries.is_array() || entries.size() != static_cast<std::size_t>(rows * cols))
        throw ValidationError(what + ": expected " + std::to_string(rows * cols) +
                              " complex entries");
    Mat m(rows, cols);
    std::size_t idx = 0;
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j, ++idx) {
            const auto &e = entries[idx];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw ValidationError(what + ": entry " + std::to_string(idx) +
                                      " is not a [re, im] pair");
            m(i, j) = Cplx(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

} // namespace detail

inline constexpr int kShadowSchemaVersion = 1;

/// Serialize a shadow to its canonical JSON byte string.
inline std::string shadow_to_json(const ClassicalShadow &shadow) {
    const int d = shadow.d(), k = shadow.k(), c = shadow.c();
    std::string out = "{\"version\":" + std::to_string(kShadowSchemaVersion);
    out += ",\"d\":" + std::to_string(d);
    out += ",\"k\":" + std::to_string(k);
    out += ",\"c\":" + std::to_string(c);
    out += ",\"basis\":";
    detail::append_complex_matrix(out, shadow.basis);
    out += ",\"b\":[";
    for (int j = 0; j < d; ++j) {
        if (j)
            out += ',';
        out += std::to_string(shadow.sig.b[static_cast<std::size_t>(j)]);
    }
    out += "],\"rho_rough\":";
    detail::append_complex_matrix(out, shadow.rho_rough.matrix());
    out += ",\"e_hats\":[";
    for (int i = 0; i < c; ++i) {
        if (i)
            out += ',';
        detail::append_complex_matrix(out, shadow.e_hats[static_cast<std::size_t>(i)]);
    }
    out += "]}";
    return out;
}

inline ClassicalShadow shadow_from_json(const std::string &text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("shadow_from_json: parse failure: ") + e.what());
    }
    if (!doc.contains("version") || doc["version"].get<int>() != kShadowSchemaVersion)
        throw ValidationError("shadow_from_json: missing or unsupported schema version");
    const int d = doc.at("d").get<int>();
    const int k = doc.at("k").get<int>();
    const int c = doc.at("c").get<int>();
    if (d < 1 || k < 1 || c < 1)
        throw ValidationError("shadow_from_json: invalid dimensions");
    Mat basis = detail::parse_complex_matrix(doc.at("basis"), d, d, "basis");
    std::vector<int> b = doc.at("b").get<std::vector<int>>();
    if (static_cast<int>(b.size()) != d)
        throw ValidationError("shadow_from_json: b must have d entries");
    SplitSignature sig(std::move(b));
    if (sig.k() != k)
        throw ValidationError("shadow_from_json: k does not match signature");
    Mat rough = detail::parse_complex_matrix(doc.at("rho_rough"), d, d, "rho_rough");
    const auto &hats = doc.at("e_hats");
    if (!hats.is_array() || static_cast<int>(hats.size()) != c)
        throw ValidationError("shadow_from_json: e_hats must have c entries");
    std::vector<Mat> e_hats;
    e_hats.reserve(static_cast<std::size_t>(c));
    for (int i = 0; i < c; ++i)
        e_hats.push_back(detail::parse_complex_matrix(hats[static_cast<std::size_t>(i)], k, k,
                                                      "e_hats[" + std::to_string(i) + "]"));
    return ClassicalShadow{DensityMatrix(rough), std::move(basis), std::move(sig),
                           std::move(e_hats)};
}

/// Serialize a Hermitian matrix to the CLI matrix-file format.
inline std::string matrix_to_json(const Mat &m) {
    std::string out = "{\"d\":" + std::to_string(m.rows());
    out += ",\"hermitian\":true,\"entries\":";
    detail::append_complex_matrix(out, m);
    out += "}";
    return out;
}

/// Parse and validate a matrix file; throws ValidationError on malformed
/// input or a non-Hermitian matrix.
inline Mat matrix_from_json(const std::string &text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("matrix_from_json: parse failure: ") + e.what());
    }
    if (!doc.contains("d") || !doc.contains("entries"))
        throw ValidationError("matrix_from_json: missing 'd' or 'entries'");
    const int d = doc.at("d").get<int>();
    if (d < 1)
        throw ValidationError("matrix_from_json: d must be >= 1");
    Mat m = detail::parse_complex_matrix(doc.at("entries"), d, d, "entries");
    if (doc.value("hermitian", true) && !is_hermitian(m, 1e-10))
        throw ValidationError("matrix_from_json: matrix is not Hermitian within 1e-10");
    return m;
}

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ValidationError("cannot write file: " + path);
    out << content;
}

} // namespace keylshadow
