#include "rdlab/trajectory_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include "rdlab/errors.hpp"
#include "rdlab/numeric.hpp"

namespace rdlab {

void write_trajectory_csv(const Trajectory& tr, std::ostream& os,
                          const std::map<std::string, std::string>& meta) {
    for (const auto& [k, v] : meta) os << "# " << k << ": " << v << "\n";
    os << "t,x,u\n";
    os.precision(17);
    for (std::size_t j = 0; j < tr.times.size(); ++j)
        for (std::size_t i = 0; i < tr.x.size(); ++i)
            os << tr.times[j] << "," << tr.x[i] << "," << tr.frames[j][i] << "\n";
}

namespace {

template <class T>
void put_le(std::ostream& os, T v) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
    unsigned char b[sizeof(T)];
    if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw DomainError("truncated trajectory file");
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
}

}  // namespace

void write_trajectory_binary(const Trajectory& tr, std::ostream& os) {
    if (tr.x.size() < 2 || tr.times.empty()) throw DomainError("empty trajectory");
    const double X = tr.x.back();
    if (std::abs(tr.x.front() + X) > 1e-12 * std::max(1.0, X))
        throw DomainError("binary layout needs a symmetric domain [-X, X]");
    const std::size_t nt = tr.times.size();
    const double T = tr.times.back();
    for (std::size_t j = 0; j < nt; ++j) {
        double expect = nt > 1 ? T * static_cast<double>(j) / static_cast<double>(nt - 1) : T;
        if (std::abs(tr.times[j] - expect) > 1e-9 * std::max(1.0, T))
            throw DomainError("binary layout needs uniformly spaced frame times");
    }
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(tr.x.size()));
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(nt));
    put_le<double>(os, X);
    put_le<double>(os, T);
    for (const auto& row : tr.frames)
        for (double v : row) put_le<double>(os, v);
}

Trajectory read_trajectory_binary(std::istream& is) {
    Trajectory tr;
    const auto nx = get_le<std::uint32_t>(is);
    const auto nt = get_le<std::uint32_t>(is);
    const double X = get_le<double>(is);
    const double T = get_le<double>(is);
    if (nx < 2) throw DomainError("trajectory file with fewer than two nodes");
    tr.x = linspace(-X, X, nx);
    for (std::uint32_t j = 0; j < nt; ++j) {
        tr.times.push_back(nt > 1 ? T * j / static_cast<double>(nt - 1) : T);
        std::vector<double> row(nx);
        for (auto& v : row) v = get_le<double>(is);
        tr.frames.push_back(std::move(row));
    }
    return tr;
}

void write_residual_csv(const ResidualReport& rep, std::ostream& os) {
    if (rep.field.size() != rep.xs.size() * rep.ts.size())
        throw DomainError("residual report was built without keep_field");
    os << "x,t,residual\n";
    os.precision(17);
    for (std::size_t j = 0; j < rep.ts.size(); ++j)
        for (std::size_t i = 0; i < rep.xs.size(); ++i)
            os << rep.xs[i] << "," << rep.ts[j] << "," << rep.field[j * rep.xs.size() + i] << "\n";
}

}  // namespace rdlab
