#pragma once

#include <cfloat>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "nlrd/errors.hpp"

namespace nlrd {

// Tridiagonal system A x = rhs with diag of length n and sub/sup of length
// n-1 (empty for n = 1).
struct TridiagonalSystem {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> sup;
    std::vector<double> rhs;

    std::size_t size() const { return diag.size(); }
};

// min over rows of |diag_i| - |sub_{i-1}| - |sup_i|; positive iff strictly
// diagonally dominant.
inline double dominance_margin(const TridiagonalSystem& s) {
    const std::size_t n = s.size();
    double margin = DBL_MAX;
    for (std::size_t i = 0; i < n; ++i) {
        double row = std::abs(s.diag[i]);
        if (i > 0) row -= std::abs(s.sub[i - 1]);
        if (i + 1 < n) row -= std::abs(s.sup[i]);
        margin = std::min(margin, row);
    }
    return margin;
}

// Reusable scratch for the forward sweep; reuse across solves is not
// observable in results.
struct ThomasWorkspace {
    std::vector<double> c;  // modified superdiagonal
    std::vector<double> d;  // modified rhs

    void resize(std::size_t n) {
        c.resize(n);
        d.resize(n);
    }
};

// Thomas algorithm: forward elimination then back-substitution, O(n), no
// fill-in. Requires nonvanishing pivots (guaranteed for strictly diagonally
// dominant systems); a zero or subnormal pivot raises SingularSystemError
// with the offending row index.
inline void thomas_solve(const TridiagonalSystem& s, ThomasWorkspace& ws,
                         std::vector<double>& x) {
    const std::size_t n = s.size();
    if (n == 0) {
        x.clear();
        return;
    }
    ws.resize(n);
    double pivot = s.diag[0];
    if (std::abs(pivot) < DBL_MIN)
        throw SingularSystemError(0, "singular tridiagonal system: pivot 0 is " +
                                         std::to_string(pivot));
    ws.c[0] = (n > 1) ? s.sup[0] / pivot : 0.0;
    ws.d[0] = s.rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = s.diag[i] - s.sub[i - 1] * ws.c[i - 1];
        if (std::abs(pivot) < DBL_MIN)
            throw SingularSystemError(
                i, "singular tridiagonal system: pivot " + std::to_string(i) +
                       " is " + std::to_string(pivot));
        if (i + 1 < n) ws.c[i] = s.sup[i] / pivot;
        ws.d[i] = (s.rhs[i] - s.sub[i - 1] * ws.d[i - 1]) / pivot;
    }
    x.resize(n);
    x[n - 1] = ws.d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = ws.d[i] - ws.c[i] * x[i + 1];
}

inline std::vector<double> thomas_solve(const TridiagonalSystem& s) {
    ThomasWorkspace ws;
    std::vector<double> x;
    thomas_solve(s, ws, x);
    return x;
}

// max-norm residual ||A x - rhs||_inf.
inline double tridiag_residual(const TridiagonalSystem& s,
                               const std::vector<double>& x) {
    const std::size_t n = s.size();
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double ax = s.diag[i] * x[i];
        if (i > 0) ax += s.sub[i - 1] * x[i - 1];
        if (i + 1 < n) ax += s.sup[i] * x[i + 1];
        r = std::max(r, std::abs(ax - s.rhs[i]));
    }
    return r;
}

}  // namespace nlrd
