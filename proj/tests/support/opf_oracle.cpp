#include "opf_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracle {

using namespace synthgrid;

Matrix ptdf(const Network& n) {
    const std::size_t nb = n.buses.size();
    std::size_t ref = 0;
    for (std::size_t b = 1; b < nb; ++b) {
        if (n.buses[b].id < n.buses[ref].id) ref = b;
    }
    auto index = [&](BusId id) {
        for (std::size_t b = 0; b < nb; ++b) {
            if (n.buses[b].id == id) return b;
        }
        throw std::logic_error("unknown bus");
    };
    // Susceptance matrix in MW/rad.
    Matrix B(nb, std::vector<double>(nb, 0.0));
    for (const auto& l : n.branches) {
        double y = n.base_mva / l.reactance;
        auto i = index(l.from_bus), j = index(l.to_bus);
        B[i][i] += y;
        B[j][j] += y;
        B[i][j] -= y;
        B[j][i] -= y;
    }
    // Invert the reduced matrix by Gauss-Jordan.
    std::vector<std::size_t> keep;
    for (std::size_t b = 0; b < nb; ++b) {
        if (b != ref) keep.push_back(b);
    }
    const std::size_t k = keep.size();
    Matrix aug(k, std::vector<double>(2 * k, 0.0));
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < k; ++c) aug[r][c] = B[keep[r]][keep[c]];
        aug[r][k + r] = 1.0;
    }
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < k; ++r) {
            if (std::abs(aug[r][c]) > std::abs(aug[p][c])) p = r;
        }
        if (std::abs(aug[p][c]) < 1e-12) throw std::logic_error("network is not connected");
        std::swap(aug[p], aug[c]);
        double d = aug[c][c];
        for (auto& v : aug[c]) v /= d;
        for (std::size_t r = 0; r < k; ++r) {
            if (r == c) continue;
            double f = aug[r][c];
            for (std::size_t j = 0; j < 2 * k; ++j) aug[r][j] -= f * aug[c][j];
        }
    }
    Matrix X(nb, std::vector<double>(nb, 0.0));  // θ = X · injection
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < k; ++c) X[keep[r]][keep[c]] = aug[r][k + c];
    }
    Matrix out(n.branches.size(), std::vector<double>(nb, 0.0));
    for (std::size_t l = 0; l < n.branches.size(); ++l) {
        const auto& br = n.branches[l];
        double y = n.base_mva / br.reactance;
        auto i = index(br.from_bus), j = index(br.to_bus);
        for (std::size_t b = 0; b < nb; ++b) out[l][b] = y * (X[i][b] - X[j][b]);
    }
    return out;
}

namespace {

struct Layout {
    DenseLp lp;
    std::vector<std::vector<std::size_t>> q;  // [gen][t], output above floor
    Matrix floor;
    double constant = 0.0;
};

// Cost as max of affine pieces over absolute output p: pieces (intercept, slope).
std::vector<std::pair<double, double>> pieces(const Generator& g) {
    std::vector<std::pair<double, double>> out;
    const auto& c = g.cost_curve;
    const bool must_run = is_must_run(g.fuel);
    if (c.breakpoints.size() == 1) {
        if (!must_run) out.push_back({0.0, c.marginal_costs[0]});
        return out;
    }
    double at = must_run ? g.no_load_cost : 0.0;  // cost at the segment's left end
    for (std::size_t k = 0; k + 1 < c.breakpoints.size(); ++k) {
        double left = (k == 0 && !must_run) ? 0.0 : c.breakpoints[k];
        out.push_back({at - c.marginal_costs[k] * left, c.marginal_costs[k]});
        at += c.marginal_costs[k] * (c.breakpoints[k + 1] - left);
    }
    return out;
}

Layout formulate(const OpfCase& c) {
    const Network& n = *c.network;
    const std::size_t T = c.demand.front().size();
    const std::size_t G = n.generators.size();
    const std::size_t NB = n.buses.size();
    Layout L;
    auto& lp = L.lp;
    L.q.assign(G, std::vector<std::size_t>(T));
    L.floor.assign(G, std::vector<double>(T, 0.0));
    const Matrix H = ptdf(n);
    std::vector<std::size_t> bus_of(G);
    for (std::size_t g = 0; g < G; ++g) {
        for (std::size_t b = 0; b < NB; ++b) {
            if (n.buses[b].id == n.generators[g].bus) bus_of[g] = b;
        }
    }

    // Variables: q (output above floor), z (cost epigraph, multi-piece only), s (shed).
    std::vector<std::vector<std::size_t>> z(G, std::vector<std::size_t>(T, SIZE_MAX));
    std::vector<std::vector<std::size_t>> s(NB, std::vector<std::size_t>(T, SIZE_MAX));
    for (std::size_t g = 0; g < G; ++g) {
        const auto& gen = n.generators[g];
        auto pc = pieces(gen);
        for (std::size_t t = 0; t < T; ++t) {
            const double floor = is_must_run(gen.fuel) ? std::min(gen.p_min, c.availability[g][t]) : 0.0;
            L.floor[g][t] = floor;
            if (pc.size() <= 1) {
                double slope = pc.empty() ? 0.0 : pc[0].second;
                L.q[g][t] = lp.add_variable(slope);
                L.constant += pc.empty() ? (is_must_run(gen.fuel) ? gen.no_load_cost : 0.0)
                                         : pc[0].first + slope * floor;
            } else {
                L.q[g][t] = lp.add_variable(0.0);
                z[g][t] = lp.add_variable(1.0);
            }
        }
    }
    for (std::size_t b = 0; b < NB; ++b) {
        for (std::size_t t = 0; t < T; ++t) {
            if (c.allow_shed && c.demand[b][t] > 0.0) s[b][t] = lp.add_variable(c.shed_cost);
        }
    }
    const std::size_t W = lp.width();
    auto row = [&] { return std::vector<double>(W, 0.0); };

    for (std::size_t g = 0; g < G; ++g) {
        const auto& gen = n.generators[g];
        auto pc = pieces(gen);
        for (std::size_t t = 0; t < T; ++t) {
            auto r = row();
            r[L.q[g][t]] = 1.0;
            lp.add_row(r, DenseLp::le, c.availability[g][t] - L.floor[g][t]);
            if (z[g][t] != SIZE_MAX) {
                // z ≥ a + m·(floor + q)  ⇔  m·q − z ≤ −a − m·floor
                for (auto [a, m] : pc) {
                    auto e = row();
                    e[L.q[g][t]] = m;
                    e[z[g][t]] = -1.0;
                    lp.add_row(e, DenseLp::le, -a - m * L.floor[g][t]);
                }
            }
            // ramps on absolute output
            const bool first = t == 0;
            if (first && !c.initial) continue;
            const double prev_floor = first ? 0.0 : L.floor[g][t - 1];
            const double prev_fixed = first ? (*c.initial)[g] : 0.0;
            auto e = row();
            e[L.q[g][t]] = 1.0;
            if (!first) e[L.q[g][t - 1]] = -1.0;
            // (floor_t + q_t) − (prev_floor + q_{t−1} or p0) within ±ramp
            const double shift = L.floor[g][t] - prev_floor - prev_fixed;
            lp.add_row(e, DenseLp::le, gen.ramp_limit - shift);
            lp.add_row(e, DenseLp::ge, -gen.ramp_limit - shift);
        }
    }
    for (std::size_t t = 0; t < T; ++t) {
        // System balance.
        auto bal = row();
        double rhs = 0.0;
        for (std::size_t b = 0; b < NB; ++b) {
            rhs += c.demand[b][t];
            if (s[b][t] != SIZE_MAX) bal[s[b][t]] = 1.0;
        }
        for (std::size_t g = 0; g < G; ++g) {
            bal[L.q[g][t]] = 1.0;
            rhs -= L.floor[g][t];
        }
        lp.add_row(bal, DenseLp::eq, rhs);
        for (std::size_t b = 0; b < NB; ++b) {
            if (s[b][t] == SIZE_MAX) continue;
            auto e = row();
            e[s[b][t]] = 1.0;
            lp.add_row(e, DenseLp::le, c.demand[b][t]);
        }
        // Branch limits on PTDF flows of net injections.
        for (std::size_t l = 0; l < n.branches.size(); ++l) {
            auto e = row();
            double fixed = 0.0;
            for (std::size_t g = 0; g < G; ++g) {
                e[L.q[g][t]] += H[l][bus_of[g]];
                fixed += H[l][bus_of[g]] * L.floor[g][t];
            }
            for (std::size_t b = 0; b < NB; ++b) {
                fixed -= H[l][b] * c.demand[b][t];
                if (s[b][t] != SIZE_MAX) e[s[b][t]] += H[l][b];
            }
            const double cap = n.branches[l].capacity;
            lp.add_row(e, DenseLp::le, cap - fixed);
            lp.add_row(e, DenseLp::ge, -cap - fixed);
        }
    }
    return L;
}

}  // namespace

OpfAnswer solve_opf(const OpfCase& c, bool ranges, std::size_t max_bases) {
    const std::size_t T = c.demand.front().size();
    const std::size_t G = c.network->generators.size();
    auto L = formulate(c);
    auto r = tableau_simplex(L.lp);
    OpfAnswer out;
    out.status = r.status;
    if (r.status != DenseResult::optimal) return out;
    out.objective = r.objective + L.constant;
    out.dispatch.assign(G, std::vector<double>(T));
    for (std::size_t g = 0; g < G; ++g) {
        for (std::size_t t = 0; t < T; ++t) out.dispatch[g][t] = L.floor[g][t] + r.x[L.q[g][t]];
    }
    DenseResult enumerated;
    if (vertex_enumeration(L.lp, max_bases, enumerated) && enumerated.status == DenseResult::optimal) {
        out.enumerated = true;
        out.enumeration_objective = enumerated.objective + L.constant;
    }
    if (ranges) {
        out.dispatch_min = out.dispatch_max = out.dispatch;
        DenseLp face = L.lp;
        face.add_row(face.c, DenseLp::le, r.objective + 1e-7 * std::max(1.0, std::abs(r.objective)));
        for (std::size_t g = 0; g < G; ++g) {
            for (std::size_t t = 0; t < T; ++t) {
                for (double dir : {1.0, -1.0}) {
                    DenseLp probe = face;
                    std::fill(probe.c.begin(), probe.c.end(), 0.0);
                    probe.c[L.q[g][t]] = dir;
                    auto pr = tableau_simplex(probe);
                    if (pr.status != DenseResult::optimal) continue;
                    double v = L.floor[g][t] + pr.x[L.q[g][t]];
                    if (dir > 0) {
                        out.dispatch_min[g][t] = std::min(out.dispatch_min[g][t], v);
                    } else {
                        out.dispatch_max[g][t] = std::max(out.dispatch_max[g][t], v);
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace oracle
