#include "ncbesq/halfarray.hpp"

#include <limits>
#include <stdexcept>

namespace ncbesq {

HalfArray HalfArray::empty(std::size_t N) {
    if (N == 0) throw std::domain_error("HalfArray: N must be >= 1");
    HalfArray a;
    a.rows.resize(2 * N - 1);
    for (std::size_t k = 1; k <= 2 * N - 1; ++k) a.rows[k - 1].assign((k + 1) / 2, 0.0);
    return a;
}

std::size_t HalfArray::size() const {
    std::size_t s = 0;
    for (const auto& r : rows) s += r.size();
    return s;
}

Cell level_cell(const HalfArray& a, std::size_t k, std::size_t i) {
    const double inf = std::numeric_limits<double>::infinity();
    if (k <= 1) return {0.0, inf};
    const auto& below = a.rows[k - 2];
    if (k % 2 == 0) {
        // x^{(2n-1)}_i <= x^{(2n)}_i <= x^{(2n-1)}_{i+1}
        return {below[i], i + 1 < below.size() ? below[i + 1] : inf};
    }
    // x^{(2n-2)}_{i-1} <= x^{(2n-1)}_i <= x^{(2n-2)}_i
    return {i >= 1 ? below[i - 1] : 0.0, i < below.size() ? below[i] : inf};
}

bool HalfArray::valid(bool strict) const {
    if (rows.empty() || rows.size() % 2 == 0) return false;
    for (std::size_t k = 1; k <= rows.size(); ++k) {
        const auto& r = rows[k - 1];
        if (r.size() != (k + 1) / 2) return false;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (!(r[i] >= 0.0)) return false;
            const Cell c = level_cell(*this, k, i);
            if (strict ? !(r[i] > c.lo && r[i] < c.hi) : !(r[i] >= c.lo && r[i] <= c.hi)) return false;
        }
    }
    return true;
}

std::vector<double> HalfArray::flatten() const {
    std::vector<double> v;
    v.reserve(size());
    for (const auto& r : rows) v.insert(v.end(), r.begin(), r.end());
    return v;
}

HalfArray HalfArray::unflatten(std::size_t N, const std::vector<double>& v) {
    HalfArray a = empty(N);
    if (v.size() != a.size()) throw std::invalid_argument("HalfArray::unflatten: size mismatch");
    std::size_t p = 0;
    for (auto& r : a.rows)
        for (auto& x : r) x = v[p++];
    return a;
}

}  // namespace ncbesq
