#include "deadoil/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace deadoil {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_field_csv(const std::string& path, const ScalarField& f) {
    std::ofstream out(path);
    require(out.good(), "write_field_csv: cannot open " + path);
    out << "x,y,value\n";
    const Grid2D& g = f.grid;
    for (int jj = 0; jj < g.my(); ++jj)
        for (int ii = 0; ii < g.mx(); ++ii)
            out << format_double(g.x(ii)) << ',' << format_double(g.y(jj)) << ','
                << format_double(f.at(ii, jj)) << '\n';
    require(out.good(), "write_field_csv: write failed for " + path);
}

ScalarField read_field_csv(const std::string& path, const Grid2D& g) {
    std::ifstream in(path);
    require(in.good(), "read_field_csv: cannot open " + path);
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "read_field_csv: empty file " + path);
    require(line == "x,y,value", "read_field_csv: bad header in " + path);
    ScalarField f(g);
    for (int jj = 0; jj < g.my(); ++jj) {
        for (int ii = 0; ii < g.mx(); ++ii) {
            require(static_cast<bool>(std::getline(in, line)),
                    "read_field_csv: truncated file " + path);
            std::istringstream row(line);
            std::string sx, sy, sv;
            require(static_cast<bool>(std::getline(row, sx, ',')) &&
                        static_cast<bool>(std::getline(row, sy, ',')) &&
                        static_cast<bool>(std::getline(row, sv)),
                    "read_field_csv: malformed row in " + path);
            const double x = std::stod(sx), y = std::stod(sy);
            require(std::abs(x - g.x(ii)) <= 1e-12 * std::max(1.0, g.lx) &&
                        std::abs(y - g.y(jj)) <= 1e-12 * std::max(1.0, g.ly),
                    "read_field_csv: node coordinates do not match the grid in " + path);
            f.at(ii, jj) = std::stod(sv);
        }
    }
    require(!std::getline(in, line), "read_field_csv: trailing rows in " + path);
    return f;
}

uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "fnv1a64_file: cannot open " + path);
    uint64_t h = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(uint64_t x) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

}  // namespace deadoil
