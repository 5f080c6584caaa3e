#pragma once

// Debug dumps of arc-space states.
//
// CSV:    header "u,v,re,im", one row per arc in arc-index order.
// Binary: magic "SGST", uint64 n, then per arc in arc-index order
//         int32 u, int32 v, float64 re, float64 im. All little-endian.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "signsearch/graph.hpp"
#include "signsearch/walk.hpp"

namespace signsearch {

namespace detail {

template <typename T>
void write_le(std::ostream& out, T value) {
    std::array<unsigned char, sizeof(T)> bytes{};
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
    std::array<unsigned char, sizeof(T)> bytes{};
    if (!in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T))) {
        throw Error(ErrorCode::Io, "truncated binary state");
    }
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

inline constexpr char kStateMagic[4] = {'S', 'G', 'S', 'T'};

}  // namespace detail

inline void write_state_csv(std::ostream& out, const SignedCompleteGraph& g, const ArcState& psi) {
    if (static_cast<std::size_t>(psi.size()) != g.arc_count()) {
        throw Error(ErrorCode::InvalidArgument, "state length does not match graph");
    }
    out << "u,v,re,im\n";
    out << std::setprecision(17);
    for (ArcId a = 0; a < g.arc_count(); ++a) {
        const Arc arc = g.arc(a);
        const Complex z = psi[static_cast<Eigen::Index>(a)];
        out << arc.origin << ',' << arc.terminus << ',' << z.real() << ',' << z.imag() << '\n';
    }
}

inline ArcState read_state_csv(std::istream& in, const SignedCompleteGraph& g) {
    ArcState psi = ArcState::Zero(static_cast<Eigen::Index>(g.arc_count()));
    std::string line;
    bool header = false;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != "u,v,re,im") throw Error(ErrorCode::Io, "unexpected state header: " + line);
            header = true;
            continue;
        }
        std::istringstream row(line);
        int u = 0, v = 0;
        double re = 0.0, im = 0.0;
        char c1 = 0, c2 = 0, c3 = 0;
        if (!(row >> u >> c1 >> v >> c2 >> re >> c3 >> im) || c1 != ',' || c2 != ',' || c3 != ',') {
            throw Error(ErrorCode::Io, "malformed state row: " + line);
        }
        psi[static_cast<Eigen::Index>(g.arc_index(u, v))] = Complex(re, im);
        ++rows;
    }
    if (rows != g.arc_count()) {
        throw Error(ErrorCode::Io, "state has " + std::to_string(rows) + " rows, expected " +
                                       std::to_string(g.arc_count()));
    }
    return psi;
}

inline void write_state_binary(std::ostream& out, const SignedCompleteGraph& g, const ArcState& psi) {
    if (static_cast<std::size_t>(psi.size()) != g.arc_count()) {
        throw Error(ErrorCode::InvalidArgument, "state length does not match graph");
    }
    out.write(detail::kStateMagic, 4);
    detail::write_le<std::uint64_t>(out, static_cast<std::uint64_t>(g.n()));
    for (ArcId a = 0; a < g.arc_count(); ++a) {
        const Arc arc = g.arc(a);
        const Complex z = psi[static_cast<Eigen::Index>(a)];
        detail::write_le<std::int32_t>(out, arc.origin);
        detail::write_le<std::int32_t>(out, arc.terminus);
        detail::write_le<double>(out, z.real());
        detail::write_le<double>(out, z.imag());
    }
}

inline ArcState read_state_binary(std::istream& in, const SignedCompleteGraph& g) {
    char magic[4] = {};
    if (!in.read(magic, 4) || std::memcmp(magic, detail::kStateMagic, 4) != 0) {
        throw Error(ErrorCode::Io, "not a binary state dump");
    }
    const auto n = detail::read_le<std::uint64_t>(in);
    if (n != static_cast<std::uint64_t>(g.n())) {
        throw Error(ErrorCode::Io, "state was written for n=" + std::to_string(n));
    }
    ArcState psi(static_cast<Eigen::Index>(g.arc_count()));
    for (ArcId a = 0; a < g.arc_count(); ++a) {
        const auto u = detail::read_le<std::int32_t>(in);
        const auto v = detail::read_le<std::int32_t>(in);
        const double re = detail::read_le<double>(in);
        const double im = detail::read_le<double>(in);
        psi[static_cast<Eigen::Index>(g.arc_index(u, v))] = Complex(re, im);
    }
    return psi;
}

}  // namespace signsearch
