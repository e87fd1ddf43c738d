#include "roughheat/field_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace roughheat::io {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_csv(const grid::Field& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    for (int j2 = 0; j2 < f.grid.n2; ++j2) {
        for (int j1 = 0; j1 < f.grid.n1; ++j1) {
            if (j1) out << ',';
            out << format_double(f.at(j1, j2));
        }
        out << '\n';
    }
}

grid::Field read_csv(const std::string& path, const grid::GridSpec& g) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_csv: cannot open " + path);
    grid::Field f(g);
    std::string line;
    for (int j2 = 0; j2 < g.n2; ++j2) {
        if (!std::getline(in, line)) throw std::runtime_error("read_csv: short file " + path);
        std::stringstream ss(line);
        std::string cell;
        for (int j1 = 0; j1 < g.n1; ++j1) {
            if (!std::getline(ss, cell, ',')) throw std::runtime_error("read_csv: short row");
            f.at(j1, j2) = std::stod(cell);
        }
    }
    return f;
}

void write_binary(const grid::Field& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_binary: cannot open " + path);
    const std::int32_t hdr[2] = {static_cast<std::int32_t>(f.grid.n1),
                                 static_cast<std::int32_t>(f.grid.n2)};
    out.write(reinterpret_cast<const char*>(hdr), sizeof(hdr));
    // in-memory layout is already column-major over (x1, x2): x1 fastest
    out.write(reinterpret_cast<const char*>(f.v.data()),
              static_cast<std::streamsize>(f.v.size() * sizeof(double)));
}

grid::Field read_binary(const std::string& path, grid::GridSpec g) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_binary: cannot open " + path);
    std::int32_t hdr[2];
    in.read(reinterpret_cast<char*>(hdr), sizeof(hdr));
    if (!in || hdr[0] != g.n1 || hdr[1] != g.n2)
        throw std::runtime_error("read_binary: header mismatch in " + path);
    grid::Field f(g);
    in.read(reinterpret_cast<char*>(f.v.data()),
            static_cast<std::streamsize>(f.v.size() * sizeof(double)));
    if (!in) throw std::runtime_error("read_binary: short file " + path);
    return f;
}

}  // namespace roughheat::io
