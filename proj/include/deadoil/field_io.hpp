// CSV serialization for fields and small reports.
#pragma once

#include <cstdint>
#include <string>

#include "deadoil/grid.hpp"

namespace deadoil {

// Writes "x,y,value" rows, row-major over interior nodes, 17 significant
// digits so a read-back reproduces the doubles bitwise.
void write_field_csv(const std::string& path, const ScalarField& f);

// Reads a field written by write_field_csv. The grid must be supplied; node
// coordinates in the file are cross-checked against it.
ScalarField read_field_csv(const std::string& path, const Grid2D& g);

std::string format_double(double x);  // shortest-17 significant digit form

// FNV-1a 64-bit over a file's bytes, hex encoded. Used by run manifests.
uint64_t fnv1a64_file(const std::string& path);
std::string hex64(uint64_t x);

}  // namespace deadoil
