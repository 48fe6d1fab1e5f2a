#pragma once

// Reference LP solvers for tests. Deliberately naive and unrelated to the
// production revised simplex: a full-tableau two-phase simplex with Bland's
// rule, and brute-force vertex enumeration.

#include <cstddef>
#include <vector>

namespace oracle {

// min cᵀx  s.t.  a_i·x (≤ | ≥ | =) b_i,  x ≥ 0
struct DenseLp {
    enum Sense : char { le = 'L', ge = 'G', eq = 'E' };

    std::vector<double> c;
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    std::vector<Sense> sense;

    std::size_t add_variable(double cost);
    void add_row(std::vector<double> coefficients, Sense s, double rhs);  // coefficients padded to width
    std::size_t width() const { return c.size(); }
};

struct DenseResult {
    enum Status { optimal, infeasible, unbounded } status = infeasible;
    double objective = 0.0;
    std::vector<double> x;
};

DenseResult tableau_simplex(const DenseLp& lp);

// Every basic solution of the system (x ≥ 0 included as inequalities). Returns
// false without solving when more than max_bases active sets would be tried.
bool vertex_enumeration(const DenseLp& lp, std::size_t max_bases, DenseResult& result);

}  // namespace oracle
