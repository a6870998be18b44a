#pragma once

#include <cstddef>
#include <vector>

namespace ncbesq {

// Interlacing half array; rows[k-1] is level k (k = 1..2N-1) with floor((k+1)/2) entries.
struct HalfArray {
    std::vector<std::vector<double>> rows;

    static HalfArray empty(std::size_t N);
    std::size_t N() const { return (rows.size() + 1) / 2; }
    std::size_t levels() const { return rows.size(); }
    std::size_t size() const;  // total number of coordinates
    const std::vector<double>& top() const { return rows.back(); }

    // Interlacing between consecutive levels and nonnegativity; strict requires
    // strict inequalities everywhere.
    bool valid(bool strict = false) const;
    std::vector<double> flatten() const;
    static HalfArray unflatten(std::size_t N, const std::vector<double>& v);
};

// Cell of coordinate i (0-based) on level k (1-based) given the level below.
// Missing barriers are returned as lo = 0, hi = +inf.
struct Cell {
    double lo, hi;
};
Cell level_cell(const HalfArray& a, std::size_t k, std::size_t i);

}  // namespace ncbesq
