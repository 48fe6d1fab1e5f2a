#include "dense_lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oracle {

std::size_t DenseLp::add_variable(double cost) {
    c.push_back(cost);
    for (auto& row : a) row.push_back(0.0);
    return c.size() - 1;
}

void DenseLp::add_row(std::vector<double> coefficients, Sense s, double rhs) {
    coefficients.resize(c.size(), 0.0);
    a.push_back(std::move(coefficients));
    sense.push_back(s);
    b.push_back(rhs);
}

namespace {

constexpr double eps = 1e-10;

struct Tableau {
    std::size_t rows, cols;  // cols excludes the rhs column
    std::vector<std::vector<double>> t;
    std::vector<std::size_t> basis;

    void pivot(std::size_t r, std::size_t c) {
        double p = t[r][c];
        for (auto& v : t[r]) v /= p;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i == r || t[i][c] == 0.0) continue;
            double f = t[i][c];
            for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[r][j];
        }
        basis[r] = c;
    }

    // Objective row is t[rows]; reduced costs stored directly. Bland's rule.
    DenseResult::Status optimise(const std::vector<char>& allowed) {
        for (std::size_t guard = 0; guard < 100000; ++guard) {
            std::size_t enter = cols;
            for (std::size_t j = 0; j < cols; ++j) {
                if (allowed[j] && t[rows][j] < -eps) {
                    enter = j;
                    break;
                }
            }
            if (enter == cols) return DenseResult::optimal;
            std::size_t leave = rows;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < rows; ++i) {
                if (t[i][enter] > eps) {
                    double ratio = t[i][cols] / t[i][enter];
                    if (ratio < best - 1e-12 || (std::abs(ratio - best) <= 1e-12 && basis[i] < basis[leave])) {
                        best = ratio;
                        leave = i;
                    }
                }
            }
            if (leave == rows) return DenseResult::unbounded;
            pivot(leave, enter);
        }
        return DenseResult::unbounded;
    }
};

}  // namespace

DenseResult tableau_simplex(const DenseLp& lp) {
    const std::size_t n = lp.width();
    const std::size_t m = lp.a.size();
    // Columns: original n, one slack/surplus per inequality row, one artificial per row.
    std::size_t slack_count = 0;
    for (auto s : lp.sense) slack_count += s != DenseLp::eq;
    const std::size_t total = n + slack_count + m;
    Tableau tab{m, total, std::vector<std::vector<double>>(m + 1, std::vector<double>(total + 1, 0.0)),
                std::vector<std::size_t>(m, 0)};
    std::size_t next_slack = n;
    for (std::size_t i = 0; i < m; ++i) {
        double sign = lp.b[i] < 0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) tab.t[i][j] = sign * lp.a[i][j];
        if (lp.sense[i] != DenseLp::eq) {
            tab.t[i][next_slack++] = sign * (lp.sense[i] == DenseLp::le ? 1.0 : -1.0);
        }
        tab.t[i][n + slack_count + i] = 1.0;
        tab.t[i][total] = sign * lp.b[i];
        tab.basis[i] = n + slack_count + i;
    }
    // Phase 1 objective: Σ artificials, expressed in reduced form.
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j <= total; ++j) tab.t[m][j] -= tab.t[i][j];
    }
    for (std::size_t i = 0; i < m; ++i) tab.t[m][n + slack_count + i] = 0.0;
    std::vector<char> all(total, 1);
    tab.optimise(all);
    DenseResult result;
    double scale = 1.0;
    for (double v : lp.b) scale = std::max(scale, std::abs(v));
    if (-tab.t[m][total] > 1e-8 * scale) {
        result.status = DenseResult::infeasible;
        return result;
    }
    // Drive artificials out of the basis where possible.
    std::vector<char> allowed(total, 1);
    for (std::size_t j = n + slack_count; j < total; ++j) allowed[j] = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (tab.basis[i] < n + slack_count) continue;
        for (std::size_t j = 0; j < n + slack_count; ++j) {
            if (std::abs(tab.t[i][j]) > 1e-9) {
                tab.pivot(i, j);
                break;
            }
        }
    }
    // Phase 2 objective row.
    std::fill(tab.t[m].begin(), tab.t[m].end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) tab.t[m][j] = lp.c[j];
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t bj = tab.basis[i];
        double cb = bj < n ? lp.c[bj] : 0.0;
        if (cb == 0.0) continue;
        for (std::size_t j = 0; j <= total; ++j) tab.t[m][j] -= cb * tab.t[i][j];
    }
    if (tab.optimise(allowed) == DenseResult::unbounded) {
        result.status = DenseResult::unbounded;
        return result;
    }
    result.status = DenseResult::optimal;
    result.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (tab.basis[i] < n) result.x[tab.basis[i]] = tab.t[i][total];
    }
    result.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) result.objective += lp.c[j] * result.x[j];
    return result;
}

namespace {

// Solves the square system by Gaussian elimination with partial pivoting.
bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double>& x) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
        }
        if (std::abs(a[p][k]) < 1e-11) return false;
        std::swap(a[p], a[k]);
        std::swap(b[p], b[k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            double f = a[i][k] / a[k][k];
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
        x[k] = s / a[k][k];
    }
    return true;
}

double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

}  // namespace

bool vertex_enumeration(const DenseLp& lp, std::size_t max_bases, DenseResult& result) {
    const std::size_t n = lp.width();
    // Inequalities in the form g·x ≤ h, including -x ≤ 0.
    std::vector<std::vector<double>> g;
    std::vector<double> h;
    std::vector<std::vector<double>> eq;
    std::vector<double> eq_rhs;
    for (std::size_t i = 0; i < lp.a.size(); ++i) {
        if (lp.sense[i] == DenseLp::eq) {
            eq.push_back(lp.a[i]);
            eq_rhs.push_back(lp.b[i]);
        } else {
            double s = lp.sense[i] == DenseLp::le ? 1.0 : -1.0;
            std::vector<double> row(n);
            for (std::size_t j = 0; j < n; ++j) row[j] = s * lp.a[i][j];
            g.push_back(std::move(row));
            h.push_back(s * lp.b[i]);
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> row(n, 0.0);
        row[j] = -1.0;
        g.push_back(std::move(row));
        h.push_back(0.0);
    }
    if (eq.size() > n) return false;
    const std::size_t pick = n - eq.size();
    if (binomial(g.size(), pick) > static_cast<double>(max_bases)) return false;

    result = {};
    result.status = DenseResult::infeasible;
    std::vector<std::size_t> chosen(pick);
    for (std::size_t i = 0; i < pick; ++i) chosen[i] = i;
    std::vector<double> x;
    while (true) {
        auto a = eq;
        auto b = eq_rhs;
        for (auto i : chosen) {
            a.push_back(g[i]);
            b.push_back(h[i]);
        }
        if (solve_square(a, b, x)) {
            bool feasible = true;
            for (std::size_t i = 0; i < g.size() && feasible; ++i) {
                double lhs = 0.0;
                for (std::size_t j = 0; j < n; ++j) lhs += g[i][j] * x[j];
                feasible = lhs <= h[i] + 1e-7 * std::max(1.0, std::abs(h[i]));
            }
            for (std::size_t i = 0; i < eq.size() && feasible; ++i) {
                double lhs = 0.0;
                for (std::size_t j = 0; j < n; ++j) lhs += eq[i][j] * x[j];
                feasible = std::abs(lhs - eq_rhs[i]) <= 1e-7 * std::max(1.0, std::abs(eq_rhs[i]));
            }
            if (feasible) {
                double obj = 0.0;
                for (std::size_t j = 0; j < n; ++j) obj += lp.c[j] * x[j];
                if (result.status != DenseResult::optimal || obj < result.objective) {
                    result.status = DenseResult::optimal;
                    result.objective = obj;
                    result.x = x;
                }
            }
        }
        // next combination
        std::size_t k = pick;
        while (k > 0 && chosen[k - 1] == g.size() - pick + k - 1) --k;
        if (k == 0) break;
        ++chosen[k - 1];
        for (std::size_t i = k; i < pick; ++i) chosen[i] = chosen[i - 1] + 1;
        if (pick == 0) break;
    }
    return true;
}

}  // namespace oracle
