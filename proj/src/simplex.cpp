#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ransomgame/lp.hpp"

namespace ransomgame::lp {

std::string_view to_string(Status status) {
    switch (status) {
        case Status::kOptimal: return "OPTIMAL";
        case Status::kInfeasible: return "INFEASIBLE";
        case Status::kUnbounded: return "UNBOUNDED";
    }
    return "UNKNOWN";
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr int kIterationLimit = 100000;

struct Row {
    std::vector<double> coeffs;
    double rhs;
};

// All inequalities of the program, bounds and chain links included.
std::vector<Row> expand_rows(const LinearProgram& p) {
    const size_t m = p.variables();
    std::vector<Row> rows;
    for (const auto& c : p.constraints) rows.push_back({c.coeffs, c.bound});
    for (size_t j = 0; j < m; ++j) {
        // With a chain only x_1 needs an explicit upper bound.
        if (p.chain && j > 0 && p.upper_bound(j) >= p.upper_bound(0)) continue;
        if (!std::isfinite(p.upper_bound(j))) continue;
        std::vector<double> a(m, 0.0);
        a[j] = 1.0;
        rows.push_back({std::move(a), p.upper_bound(j)});
    }
    if (p.chain) {
        for (size_t j = 0; j + 1 < m; ++j) {
            std::vector<double> a(m, 0.0);
            a[j + 1] = 1.0;
            a[j] = -1.0;
            rows.push_back({std::move(a), 0.0});
        }
    }
    return rows;
}

class Tableau {
  public:
    Tableau(const std::vector<Row>& rows, size_t vars) : vars_(vars), rows_(rows.size()) {
        size_t artificials = 0;
        for (const auto& r : rows)
            if (r.rhs < 0.0) ++artificials;
        first_artificial_ = vars_ + rows_;
        cols_ = first_artificial_ + artificials;
        t_.assign(rows_, std::vector<double>(cols_ + 1, 0.0));
        basis_.assign(rows_, 0);
        size_t next_art = first_artificial_;
        for (size_t i = 0; i < rows_; ++i) {
            const double sign = rows[i].rhs < 0.0 ? -1.0 : 1.0;
            for (size_t j = 0; j < vars_; ++j) t_[i][j] = sign * rows[i].coeffs[j];
            t_[i][vars_ + i] = sign;
            t_[i][cols_] = sign * rows[i].rhs;
            if (sign < 0.0) {
                t_[i][next_art] = 1.0;
                basis_[i] = next_art++;
            } else {
                basis_[i] = vars_ + i;
            }
        }
    }

    bool has_artificials() const { return cols_ > first_artificial_; }

    // Returns false if the phase-1 optimum leaves artificial mass.
    bool phase_one(int& iterations) {
        z_.assign(cols_ + 1, 0.0);
        for (size_t j = first_artificial_; j < cols_; ++j) z_[j] = 1.0;
        for (size_t i = 0; i < rows_; ++i) {
            if (basis_[i] >= first_artificial_) {
                for (size_t j = 0; j <= cols_; ++j) z_[j] -= t_[i][j];
            }
        }
        run(cols_, iterations);
        double scale = 1.0;
        for (size_t i = 0; i < rows_; ++i) scale = std::max(scale, std::abs(t_[i][cols_]));
        if (z_[cols_] < -kPivotTol * scale) return false;
        // Pivot zero-level artificials out where possible; rows where that
        // fails are redundant.
        for (size_t i = 0; i < rows_; ++i) {
            if (basis_[i] < first_artificial_) continue;
            for (size_t j = 0; j < first_artificial_; ++j) {
                if (std::abs(t_[i][j]) > kPivotTol) {
                    pivot(i, j);
                    break;
                }
            }
        }
        return true;
    }

    // Returns false if unbounded.
    bool phase_two(const std::vector<double>& objective, int& iterations) {
        z_.assign(cols_ + 1, 0.0);
        for (size_t j = 0; j < vars_; ++j) z_[j] = -objective[j];
        for (size_t i = 0; i < rows_; ++i) {
            const size_t b = basis_[i];
            const double cb = b < vars_ ? objective[b] : 0.0;
            if (cb == 0.0) continue;
            for (size_t j = 0; j <= cols_; ++j) z_[j] += cb * t_[i][j];
        }
        return run(first_artificial_, iterations);
    }

    std::vector<double> primal() const {
        std::vector<double> x(vars_, 0.0);
        for (size_t i = 0; i < rows_; ++i)
            if (basis_[i] < vars_) x[basis_[i]] = t_[i][cols_];
        return x;
    }

  private:
    // Bland's rule over columns [0, allowed). Returns false if unbounded.
    bool run(size_t allowed, int& iterations) {
        for (;;) {
            if (++iterations > kIterationLimit)
                throw std::runtime_error("simplex iteration limit exceeded");
            size_t enter = allowed;
            for (size_t j = 0; j < allowed; ++j) {
                if (z_[j] < -kPivotTol) {
                    enter = j;
                    break;
                }
            }
            if (enter == allowed) return true;
            size_t leave = rows_;
            double best_ratio = 0.0;
            for (size_t i = 0; i < rows_; ++i) {
                const double a = t_[i][enter];
                if (a <= kPivotTol) continue;
                const double ratio = t_[i][cols_] / a;
                if (leave == rows_ || ratio < best_ratio - 1e-12 ||
                    (std::abs(ratio - best_ratio) <= 1e-12 && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == rows_) return false;
            pivot(leave, enter);
        }
    }

    void pivot(size_t r, size_t c) {
        const double inv = 1.0 / t_[r][c];
        for (auto& v : t_[r]) v *= inv;
        t_[r][c] = 1.0;
        for (size_t i = 0; i < rows_; ++i) {
            if (i == r) continue;
            const double f = t_[i][c];
            if (f == 0.0) continue;
            for (size_t j = 0; j <= cols_; ++j) t_[i][j] -= f * t_[r][j];
            t_[i][c] = 0.0;
        }
        const double f = z_[c];
        if (f != 0.0) {
            for (size_t j = 0; j <= cols_; ++j) z_[j] -= f * t_[r][j];
            z_[c] = 0.0;
        }
        basis_[r] = c;
    }

    size_t vars_;
    size_t rows_;
    size_t first_artificial_ = 0;
    size_t cols_ = 0;
    std::vector<std::vector<double>> t_;
    std::vector<double> z_;
    std::vector<size_t> basis_;
};

void check_program(const LinearProgram& p) {
    const size_t m = p.variables();
    if (m == 0) throw std::invalid_argument("linear program has no variables");
    if (m > kMaxVariables)
        throw std::invalid_argument("linear program has " + std::to_string(m) +
                                    " variables; the solver supports at most " +
                                    std::to_string(kMaxVariables));
    if (!p.upper.empty() && p.upper.size() != m)
        throw std::invalid_argument("upper bound vector length does not match variable count");
    for (const auto& c : p.constraints) {
        if (c.coeffs.size() != m)
            throw std::invalid_argument("constraint '" + c.label +
                                        "' length does not match variable count");
        if (!std::isfinite(c.bound))
            throw std::invalid_argument("constraint '" + c.label + "' has a non-finite bound");
    }
}

}  // namespace

Solution solve(const LinearProgram& program) {
    check_program(program);
    const size_t m = program.variables();
    Tableau tableau(expand_rows(program), m);
    Solution out;
    if (tableau.has_artificials() && !tableau.phase_one(out.iterations)) {
        out.status = Status::kInfeasible;
        return out;
    }
    if (!tableau.phase_two(program.objective, out.iterations)) {
        out.status = Status::kUnbounded;
        return out;
    }
    out.status = Status::kOptimal;
    out.x = tableau.primal();
    // Remove pivoting noise so the bound and chain invariants hold exactly.
    for (size_t j = 0; j < m; ++j) {
        double& v = out.x[j];
        if (std::abs(v) < 1e-12) v = 0.0;
        v = std::clamp(v, 0.0, program.upper_bound(j));
        if (program.chain && j > 0 && v > out.x[j - 1] && v - out.x[j - 1] < 1e-12) v = out.x[j - 1];
    }
    for (size_t j = 0; j < m; ++j) out.value += program.objective[j] * out.x[j];
    return out;
}

double max_violation(const LinearProgram& program, const std::vector<double>& x) {
    if (x.size() != program.variables())
        throw std::invalid_argument("max_violation: point length does not match variable count");
    double worst = 0.0;
    for (const auto& c : program.constraints) {
        double lhs = 0.0;
        for (size_t j = 0; j < x.size(); ++j) lhs += c.coeffs[j] * x[j];
        worst = std::max(worst, lhs - c.bound);
    }
    for (size_t j = 0; j < x.size(); ++j) {
        worst = std::max(worst, -x[j]);
        worst = std::max(worst, x[j] - program.upper_bound(j));
        if (program.chain && j > 0) worst = std::max(worst, x[j] - x[j - 1]);
    }
    return worst;
}

}  // namespace ransomgame::lp
