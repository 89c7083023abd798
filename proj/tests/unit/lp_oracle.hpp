#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "ransomgame/lp.hpp"

namespace ransomgame::testing {

// Brute-force LP optimum: every basic point formed by m tight rows,
// filtered for feasibility. Only for a handful of variables.
inline std::optional<double> vertex_enumeration(const lp::LinearProgram& p, double tol = 1e-9) {
    const size_t m = p.variables();
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (const auto& c : p.constraints) {
        a.push_back(c.coeffs);
        b.push_back(c.bound);
    }
    for (size_t j = 0; j < m; ++j) {
        std::vector<double> row(m, 0.0);
        row[j] = -1.0;
        a.push_back(row);
        b.push_back(0.0);
        row[j] = 1.0;
        a.push_back(row);
        b.push_back(p.upper_bound(j));
        if (p.chain && j > 0) {
            row.assign(m, 0.0);
            row[j] = 1.0;
            row[j - 1] = -1.0;
            a.push_back(row);
            b.push_back(0.0);
        }
    }
    const size_t rows = a.size();
    std::optional<double> best;
    std::vector<size_t> pick(m);
    for (size_t i = 0; i < m; ++i) pick[i] = i;
    if (rows < m) return best;
    for (;;) {
        // Solve the square system for this subset.
        std::vector<std::vector<double>> s(m, std::vector<double>(m + 1));
        for (size_t i = 0; i < m; ++i) {
            for (size_t j = 0; j < m; ++j) s[i][j] = a[pick[i]][j];
            s[i][m] = b[pick[i]];
        }
        bool singular = false;
        for (size_t col = 0; col < m && !singular; ++col) {
            size_t piv = col;
            for (size_t r = col + 1; r < m; ++r)
                if (std::abs(s[r][col]) > std::abs(s[piv][col])) piv = r;
            if (std::abs(s[piv][col]) < 1e-12) {
                singular = true;
                break;
            }
            std::swap(s[piv], s[col]);
            for (size_t r = 0; r < m; ++r) {
                if (r == col) continue;
                const double f = s[r][col] / s[col][col];
                for (size_t c = col; c <= m; ++c) s[r][c] -= f * s[col][c];
            }
        }
        if (!singular) {
            std::vector<double> x(m);
            for (size_t i = 0; i < m; ++i) x[i] = s[i][m] / s[i][i];
            bool feasible = true;
            for (size_t r = 0; r < rows && feasible; ++r) {
                double lhs = 0.0;
                for (size_t j = 0; j < m; ++j) lhs += a[r][j] * x[j];
                if (lhs > b[r] + tol) feasible = false;
            }
            if (feasible) {
                double v = 0.0;
                for (size_t j = 0; j < m; ++j) v += p.objective[j] * x[j];
                if (!best || v > *best) best = v;
            }
        }
        // Next m-subset in lexicographic order.
        size_t i = m;
        while (i > 0 && pick[i - 1] == rows - m + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (size_t k = i; k < m; ++k) pick[k] = pick[k - 1] + 1;
    }
    return best;
}

}  // namespace ransomgame::testing
