#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace ransomgame::lp {

inline constexpr size_t kMaxVariables = 64;

// coeffs . x <= bound. A strict "< rhs" row is stored with
// bound = rhs - margin and the margin kept for diagnostics.
struct Constraint {
    std::vector<double> coeffs;
    double bound = 0.0;
    double margin = 0.0;
    std::string label;
};

// maximize objective . x subject to the constraints and
// 0 <= x_j <= upper[j]; with `chain`, also x_{j+1} <= x_j.
struct LinearProgram {
    std::vector<double> objective;
    std::vector<Constraint> constraints;
    std::vector<double> upper;  // empty means every bound is 1
    bool chain = false;

    size_t variables() const { return objective.size(); }
    double upper_bound(size_t j) const { return upper.empty() ? 1.0 : upper[j]; }
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

std::string_view to_string(Status status);

struct Solution {
    Status status = Status::kInfeasible;
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
};

// Dense two-phase simplex with Bland's rule. Deterministic for a given
// program. Throws std::invalid_argument for malformed programs or more than
// kMaxVariables variables.
Solution solve(const LinearProgram& program);

// Largest violation of any row, bound or chain link at x (0 if feasible).
double max_violation(const LinearProgram& program, const std::vector<double>& x);

}  // namespace ransomgame::lp
