#include "lp_solver.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace synthgrid {

std::size_t LinearProgram::add_column(double c, double lo, double hi, std::string name) {
    cost.push_back(c);
    lower.push_back(lo);
    upper.push_back(hi);
    columns.emplace_back();
    column_names.push_back(std::move(name));
    return cost.size() - 1;
}

std::size_t LinearProgram::add_row(double b, std::string name, std::string row_class) {
    rhs.push_back(b);
    row_names.push_back(std::move(name));
    row_classes.push_back(std::move(row_class));
    return rhs.size() - 1;
}

void LinearProgram::add_coefficient(std::size_t row, std::size_t col, double value) {
    if (value == 0.0) return;
    auto& column = columns[col];
    for (auto& e : column) {
        if (e.row == row) {
            e.value += value;
            return;
        }
    }
    column.push_back({row, value});
}

const char* to_string(LpStatus status) {
    switch (status) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
        case LpStatus::iteration_limit: return "iteration_limit";
    }
    return "unknown";
}

namespace {

enum class VarState : unsigned char { basic, at_lower, at_upper, free_zero };

class RevisedSimplex {
public:
    RevisedSimplex(const LinearProgram& lp, const SimplexOptions& options)
        : lp_(lp), opt_(options), m_(lp.num_rows()), n_(lp.num_columns()), total_(n_ + m_) {
        max_iterations_ = opt_.max_iterations ? opt_.max_iterations : 50 * (m_ + n_) + 1000;
    }

    LpSolution run() {
        LpSolution sol;
        for (std::size_t j = 0; j < n_; ++j) {
            if (lp_.lower[j] > lp_.upper[j]) {
                sol.status = LpStatus::infeasible;
                sol.infeasible_row_classes.push_back("bounds");
                return sol;
            }
        }
        initialize();

        // Phase 1: minimise the sum of artificials.
        std::vector<double> phase1(total_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) phase1[n_ + i] = 1.0;
        auto status = iterate(phase1);
        sol.iterations = iterations_;
        if (status == LpStatus::iteration_limit) {
            sol.status = status;
            return sol;
        }
        refactor();
        double infeasibility = 0.0;
        double scale = 1.0;
        for (double b : lp_.rhs) scale = std::max(scale, std::abs(b));
        for (std::size_t i = 0; i < m_; ++i) infeasibility += x_[n_ + i];
        if (infeasibility > opt_.feasibility_tolerance * 100.0 * scale) {
            sol.status = LpStatus::infeasible;
            for (std::size_t i = 0; i < m_; ++i) {
                if (x_[n_ + i] > opt_.feasibility_tolerance * scale) {
                    const auto& cls = lp_.row_classes[i];
                    if (std::find(sol.infeasible_row_classes.begin(), sol.infeasible_row_classes.end(), cls) ==
                        sol.infeasible_row_classes.end()) {
                        sol.infeasible_row_classes.push_back(cls);
                    }
                }
            }
            return sol;
        }

        // Phase 2: artificials pinned at zero.
        for (std::size_t i = 0; i < m_; ++i) {
            upper_[n_ + i] = 0.0;
            if (state_[n_ + i] != VarState::basic) {
                state_[n_ + i] = VarState::at_lower;
                x_[n_ + i] = 0.0;
            }
        }
        std::vector<double> phase2(total_, 0.0);
        std::copy(lp_.cost.begin(), lp_.cost.end(), phase2.begin());
        status = iterate(phase2);
        sol.iterations = iterations_;
        if (status != LpStatus::optimal) {
            sol.status = status;
            return sol;
        }
        refactor();
        compute_duals(phase2);

        sol.status = LpStatus::optimal;
        sol.x.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
        sol.row_duals = y_;
        sol.reduced_costs.resize(n_);
        for (std::size_t j = 0; j < n_; ++j) sol.reduced_costs[j] = reduced_cost(phase2, j);
        sol.objective = lp_.objective_offset;
        for (std::size_t j = 0; j < n_; ++j) sol.objective += lp_.cost[j] * sol.x[j];
        return sol;
    }

private:
    // Column access over structural + artificial columns.
    template <typename F>
    void for_column(std::size_t j, F&& f) const {
        if (j < n_) {
            for (const auto& e : lp_.columns[j]) f(e.row, e.value);
        } else {
            f(j - n_, art_sign_[j - n_]);
        }
    }

    double& binv(std::size_t i, std::size_t j) { return binv_[i * m_ + j]; }

    void initialize() {
        lower_.assign(total_, 0.0);
        upper_.assign(total_, kInfinity);
        x_.assign(total_, 0.0);
        state_.assign(total_, VarState::at_lower);
        for (std::size_t j = 0; j < n_; ++j) {
            lower_[j] = lp_.lower[j];
            upper_[j] = lp_.upper[j];
            if (std::isfinite(lower_[j])) {
                x_[j] = lower_[j];
                state_[j] = VarState::at_lower;
            } else if (std::isfinite(upper_[j])) {
                x_[j] = upper_[j];
                state_[j] = VarState::at_upper;
            } else {
                x_[j] = 0.0;
                state_[j] = VarState::free_zero;
            }
        }
        std::vector<double> residual = lp_.rhs;
        for (std::size_t j = 0; j < n_; ++j) {
            if (x_[j] == 0.0) continue;
            for (const auto& e : lp_.columns[j]) residual[e.row] -= e.value * x_[j];
        }
        art_sign_.assign(m_, 1.0);
        basis_.resize(m_);
        binv_.assign(m_ * m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            art_sign_[i] = residual[i] >= 0.0 ? 1.0 : -1.0;
            x_[n_ + i] = std::abs(residual[i]);
            state_[n_ + i] = VarState::basic;
            basis_[i] = n_ + i;
            binv(i, i) = art_sign_[i];
        }
        cost_scale_ = 1.0;
        for (double c : lp_.cost) cost_scale_ = std::max(cost_scale_, std::abs(c));
    }

    // Rebuilds the basis inverse by Gauss-Jordan elimination and recomputes x_B.
    void refactor() {
        std::vector<double> b(m_ * m_, 0.0);
        for (std::size_t k = 0; k < m_; ++k) {
            for_column(basis_[k], [&](std::size_t row, double v) { b[row * m_ + k] = v; });
        }
        binv_.assign(m_ * m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) binv(i, i) = 1.0;
        std::vector<std::size_t> perm(m_);
        for (std::size_t col = 0; col < m_; ++col) {
            std::size_t pivot = col;
            double best = 0.0;
            for (std::size_t r = col; r < m_; ++r) {
                double v = std::abs(b[r * m_ + col]);
                if (v > best) {
                    best = v;
                    pivot = r;
                }
            }
            if (best < 1e-14) fail(ErrorKind::numerical_failure, "singular basis during refactorization");
            if (pivot != col) {
                for (std::size_t k = 0; k < m_; ++k) {
                    std::swap(b[pivot * m_ + k], b[col * m_ + k]);
                    std::swap(binv_[pivot * m_ + k], binv_[col * m_ + k]);
                }
            }
            double inv = 1.0 / b[col * m_ + col];
            for (std::size_t k = 0; k < m_; ++k) {
                b[col * m_ + k] *= inv;
                binv_[col * m_ + k] *= inv;
            }
            for (std::size_t r = 0; r < m_; ++r) {
                if (r == col) continue;
                double f = b[r * m_ + col];
                if (f == 0.0) continue;
                for (std::size_t k = 0; k < m_; ++k) {
                    b[r * m_ + k] -= f * b[col * m_ + k];
                    binv_[r * m_ + k] -= f * binv_[col * m_ + k];
                }
            }
        }
        // After elimination B⁻¹ rows are indexed by basis position (columns of B).
        std::vector<double> residual = lp_.rhs;
        for (std::size_t j = 0; j < total_; ++j) {
            if (state_[j] == VarState::basic || x_[j] == 0.0) continue;
            for_column(j, [&](std::size_t row, double v) { residual[row] -= v * x_[j]; });
        }
        for (std::size_t k = 0; k < m_; ++k) {
            double value = 0.0;
            const double* row = &binv_[k * m_];
            for (std::size_t i = 0; i < m_; ++i) value += row[i] * residual[i];
            x_[basis_[k]] = value;
        }
        since_refactor_ = 0;
    }

    void compute_duals(const std::vector<double>& cost) {
        y_.assign(m_, 0.0);
        for (std::size_t k = 0; k < m_; ++k) {
            double cb = cost[basis_[k]];
            if (cb == 0.0) continue;
            const double* row = &binv_[k * m_];
            for (std::size_t i = 0; i < m_; ++i) y_[i] += cb * row[i];
        }
    }

    double reduced_cost(const std::vector<double>& cost, std::size_t j) const {
        double d = cost[j];
        for_column(j, [&](std::size_t row, double v) { d -= y_[row] * v; });
        return d;
    }

    LpStatus iterate(const std::vector<double>& cost) {
        const double opt_tol = opt_.optimality_tolerance * cost_scale_;
        const double piv_tol = opt_.pivot_tolerance;
        const std::size_t refactor_every = std::max(opt_.refactor_interval, m_);
        std::size_t degenerate_run = 0;
        bool bland = false;
        std::vector<double> w(m_);

        while (true) {
            if (iterations_ >= max_iterations_) return LpStatus::iteration_limit;
            if (since_refactor_ >= refactor_every) refactor();
            compute_duals(cost);

            // Pricing.
            std::size_t entering = total_;
            double best = 0.0;
            double entering_d = 0.0;
            for (std::size_t j = 0; j < total_; ++j) {
                auto s = state_[j];
                if (s == VarState::basic) continue;
                if (lower_[j] == upper_[j]) continue;
                double d = reduced_cost(cost, j);
                bool eligible = (s == VarState::at_lower && d < -opt_tol) ||
                                (s == VarState::at_upper && d > opt_tol) ||
                                (s == VarState::free_zero && std::abs(d) > opt_tol);
                if (!eligible) continue;
                if (bland) {
                    entering = j;
                    entering_d = d;
                    break;
                }
                if (std::abs(d) > best) {
                    best = std::abs(d);
                    entering = j;
                    entering_d = d;
                }
            }
            if (entering == total_) return LpStatus::optimal;

            // w = B⁻¹ a_q
            std::fill(w.begin(), w.end(), 0.0);
            for_column(entering, [&](std::size_t row, double v) {
                for (std::size_t k = 0; k < m_; ++k) w[k] += binv_[k * m_ + row] * v;
            });
            const double dir = entering_d < 0.0 ? 1.0 : -1.0;

            // Ratio test; leaving == m_ means the entering variable flips bounds.
            double step = upper_[entering] - lower_[entering];
            if (!std::isfinite(step)) step = kInfinity;
            std::size_t leaving = m_;
            double leaving_pivot = 0.0;
            for (std::size_t k = 0; k < m_; ++k) {
                double alpha = dir * w[k];
                if (std::abs(w[k]) < piv_tol) continue;
                std::size_t var = basis_[k];
                double ratio;
                if (alpha > 0.0) {
                    if (!std::isfinite(lower_[var])) continue;
                    ratio = (x_[var] - lower_[var]) / alpha;
                } else {
                    if (!std::isfinite(upper_[var])) continue;
                    ratio = (upper_[var] - x_[var]) / -alpha;
                }
                ratio = std::max(ratio, 0.0);
                bool take = ratio < step - 1e-12;
                if (!take && leaving != m_ && ratio <= step + 1e-12) {
                    take = bland ? var < basis_[leaving] : std::abs(w[k]) > std::abs(leaving_pivot);
                }
                if (take) {
                    step = std::min(step, ratio);
                    leaving = k;
                    leaving_pivot = w[k];
                }
            }
            if (!std::isfinite(step)) return LpStatus::unbounded;

            ++iterations_;
            ++since_refactor_;
            if (step <= 1e-12) {
                if (++degenerate_run > opt_.degenerate_steps_before_bland) bland = true;
            } else {
                degenerate_run = 0;
                bland = false;
            }

            x_[entering] += dir * step;
            if (step != 0.0) {
                for (std::size_t k = 0; k < m_; ++k) {
                    if (w[k] != 0.0) x_[basis_[k]] -= dir * step * w[k];
                }
            }

            if (leaving == m_) {
                if (dir > 0.0) {
                    x_[entering] = upper_[entering];
                    state_[entering] = VarState::at_upper;
                } else {
                    x_[entering] = lower_[entering];
                    state_[entering] = VarState::at_lower;
                }
                continue;
            }

            std::size_t out = basis_[leaving];
            double alpha = dir * w[leaving];
            if (alpha > 0.0) {
                x_[out] = lower_[out];
                state_[out] = VarState::at_lower;
            } else {
                x_[out] = upper_[out];
                state_[out] = VarState::at_upper;
            }
            basis_[leaving] = entering;
            state_[entering] = VarState::basic;

            // Pivot the explicit inverse on w[leaving].
            double* pivot_row = &binv_[leaving * m_];
            const double inv = 1.0 / w[leaving];
            for (std::size_t i = 0; i < m_; ++i) pivot_row[i] *= inv;
            for (std::size_t k = 0; k < m_; ++k) {
                if (k == leaving || w[k] == 0.0) continue;
                double f = w[k];
                double* row = &binv_[k * m_];
                for (std::size_t i = 0; i < m_; ++i) row[i] -= f * pivot_row[i];
            }
        }
    }

    const LinearProgram& lp_;
    SimplexOptions opt_;
    std::size_t m_, n_, total_;
    std::size_t max_iterations_ = 0;
    std::size_t iterations_ = 0;
    std::size_t since_refactor_ = 0;
    double cost_scale_ = 1.0;
    std::vector<double> lower_, upper_, x_, art_sign_, binv_, y_;
    std::vector<VarState> state_;
    std::vector<std::size_t> basis_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
    if (lp.lower.size() != lp.num_columns() || lp.upper.size() != lp.num_columns() ||
        lp.columns.size() != lp.num_columns()) {
        fail(ErrorKind::dimension_mismatch, "linear program column arrays disagree in size");
    }
    for (const auto& column : lp.columns) {
        for (const auto& e : column) {
            if (e.row >= lp.num_rows()) fail(ErrorKind::dimension_mismatch, "coefficient row out of range");
        }
    }
    RevisedSimplex simplex(lp, options);
    return simplex.run();
}

}  // namespace synthgrid
