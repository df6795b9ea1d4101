#include "qgrow/io.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qgrow/errors.hpp"

namespace qgrow {

namespace {

constexpr std::array<char, 8> kMagic = {'Q', 'H', 'D', 'S', 'A', 'M', 'P', '1'};

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ofstream out(path, mode);
    if (!out) throw io_error("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ifstream in(path, mode);
    if (!in) throw io_error("cannot open for reading: " + path.string());
    return in;
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_complex(Complex z) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

Complex parse_complex(const std::string& token) {
    // "re+imi" / "re-imi": the imaginary part starts at the last sign that is
    // not an exponent sign.
    std::size_t split = std::string::npos;
    for (std::size_t k = token.size(); k-- > 1;) {
        char c = token[k];
        if ((c == '+' || c == '-') && token[k - 1] != 'e' && token[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos || token.empty() || token.back() != 'i')
        throw io_error("bad complex literal: " + token);
    double re = std::stod(token.substr(0, split));
    double im = std::stod(token.substr(split, token.size() - split - 1));
    return {re, im};
}

}  // namespace

void write_sample_set(const SampleSet& set, const std::filesystem::path& path) {
    auto out = open_out(path, std::ios::binary);
    out.write(kMagic.data(), kMagic.size());
    std::uint64_t count = set.count();
    std::uint64_t seed = set.meta.seed;
    std::uint32_t generation = set.meta.generation;
    std::uint32_t reserved = 0;
    out.write(reinterpret_cast<const char*>(&count), 8);
    out.write(reinterpret_cast<const char*>(&seed), 8);
    out.write(reinterpret_cast<const char*>(&generation), 4);
    out.write(reinterpret_cast<const char*>(&reserved), 4);
    static_assert(sizeof(QuadratureSample) == 16);
    out.write(reinterpret_cast<const char*>(set.samples.data()), 16 * std::streamsize(count));
    if (!out) throw io_error("write failed: " + path.string());
}

SampleSet read_sample_set(const std::filesystem::path& path) {
    auto in = open_in(path, std::ios::binary);
    std::array<char, 8> magic{};
    in.read(magic.data(), 8);
    if (!in || magic != kMagic) throw io_error("not a QHDSAMP1 file: " + path.string());
    std::uint64_t count = 0, seed = 0;
    std::uint32_t generation = 0, reserved = 0;
    in.read(reinterpret_cast<char*>(&count), 8);
    in.read(reinterpret_cast<char*>(&seed), 8);
    in.read(reinterpret_cast<char*>(&generation), 4);
    in.read(reinterpret_cast<char*>(&reserved), 4);
    SampleSet set;
    set.meta.seed = seed;
    set.meta.generation = generation;
    set.meta.source = path.string();
    set.samples.resize(count);
    in.read(reinterpret_cast<char*>(set.samples.data()), 16 * std::streamsize(count));
    if (!in) throw io_error("truncated sample file: " + path.string());
    return set;
}

void write_sample_set_csv(const SampleSet& set, const std::filesystem::path& path) {
    auto out = open_out(path, std::ios::out);
    out << "x,y\n";
    for (const auto& s : set.samples) out << format_g17(s.x) << ',' << format_g17(s.y) << '\n';
    if (!out) throw io_error("write failed: " + path.string());
}

SampleSet read_sample_set_any(const std::filesystem::path& path) {
    {
        auto in = open_in(path, std::ios::binary);
        std::array<char, 8> head{};
        in.read(head.data(), 8);
        if (in && head == kMagic) return read_sample_set(path);
    }
    auto in = open_in(path, std::ios::in);
    std::string line;
    if (!std::getline(in, line) || (line != "x,y" && line != "x,y\r"))
        throw io_error("unrecognized sample file (neither QHDSAMP1 nor x,y CSV): " +
                       path.string());
    SampleSet set;
    set.meta.source = path.string();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t comma = line.find(',');
        if (comma == std::string::npos) throw io_error("bad CSV row: " + line);
        set.samples.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    }
    return set;
}

void write_density_matrix(const DensityMatrix& rho, const std::filesystem::path& path) {
    auto out = open_out(path, std::ios::out);
    int d = rho.dim();
    out << "DIM " << d << '\n';
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            if (j) out << ',';
            out << format_complex(rho.m(i, j));
        }
        out << '\n';
    }
    if (!out) throw io_error("write failed: " + path.string());
}

DensityMatrix read_density_matrix(const std::filesystem::path& path) {
    auto in = open_in(path, std::ios::in);
    std::string word;
    int d = 0;
    in >> word >> d;
    if (word != "DIM" || d < 1) throw io_error("bad density matrix header: " + path.string());
    DensityMatrix rho;
    rho.m.resize(d, d);
    std::string line;
    std::getline(in, line);  // rest of header line
    for (int i = 0; i < d; ++i) {
        if (!std::getline(in, line)) throw io_error("truncated density matrix: " + path.string());
        std::stringstream row(line);
        std::string token;
        for (int j = 0; j < d; ++j) {
            if (!std::getline(row, token, ','))
                throw io_error("short row in density matrix: " + path.string());
            rho.m(i, j) = parse_complex(token);
        }
    }
    return rho;
}

void write_grid(const PhaseSpaceGrid& grid, const std::filesystem::path& path,
                const std::string& source) {
    auto out = open_out(path, std::ios::out);
    out << "x,y,value\n";
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            out << format_g17(grid.x_of(i)) << ',' << format_g17(grid.y_of(j)) << ','
                << format_g17(grid.at(i, j)) << '\n';
    if (!out) throw io_error("write failed: " + path.string());

    nlohmann::json meta{{"x_min", grid.x_min}, {"x_max", grid.x_max},       {"y_min", grid.y_min},
                        {"y_max", grid.y_max}, {"nx", grid.nx},            {"ny", grid.ny},
                        {"cell_dx", grid.cell_dx}, {"cell_dy", grid.cell_dy},
                        {"cell_centered", grid.cell_centered},
                        {"overflow_fraction", grid.overflow_fraction},
                        {"source", source}};
    auto meta_out = open_out(path.string() + ".meta.json", std::ios::out);
    meta_out << meta.dump(2) << '\n';
}

PhaseSpaceGrid read_grid(const std::filesystem::path& path) {
    nlohmann::json meta;
    {
        auto meta_in = open_in(path.string() + ".meta.json", std::ios::in);
        meta_in >> meta;
    }
    PhaseSpaceGrid g;
    g.x_min = meta.at("x_min");
    g.x_max = meta.at("x_max");
    g.y_min = meta.at("y_min");
    g.y_max = meta.at("y_max");
    g.nx = meta.at("nx");
    g.ny = meta.at("ny");
    g.cell_dx = meta.at("cell_dx");
    g.cell_dy = meta.at("cell_dy");
    g.cell_centered = meta.at("cell_centered");
    g.overflow_fraction = meta.at("overflow_fraction");
    g.values.resize(std::size_t(g.nx) * g.ny);

    auto in = open_in(path, std::ios::in);
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,y,value", 0) != 0)
        throw io_error("bad grid header: " + path.string());
    for (std::size_t k = 0; k < g.values.size(); ++k) {
        if (!std::getline(in, line)) throw io_error("truncated grid: " + path.string());
        std::size_t c2 = line.rfind(',');
        if (c2 == std::string::npos) throw io_error("bad grid row: " + line);
        g.values[k] = std::stod(line.substr(c2 + 1));
    }
    return g;
}

void write_loglik_trace(const std::vector<double>& trace, const std::filesystem::path& path) {
    auto out = open_out(path, std::ios::out);
    out << "iteration,loglik\n";
    for (std::size_t i = 0; i < trace.size(); ++i) out << i << ',' << format_g17(trace[i]) << '\n';
    if (!out) throw io_error("write failed: " + path.string());
}

}  // namespace qgrow
