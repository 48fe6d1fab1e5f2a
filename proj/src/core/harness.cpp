#include "harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "csv.hpp"
#include "error.hpp"

namespace synthgrid {

namespace fs = std::filesystem;

std::size_t WindowPlan::covered_hours() const {
    return windows.empty() ? 0 : windows.back().begin + windows.back().hours;
}

WindowPlan plan_windows(std::size_t total_hours, std::size_t window_hours) {
    if (window_hours < 2) fail(ErrorKind::bad_window_length, "window length must be at least 2 hours");
    if (total_hours < window_hours) {
        fail(ErrorKind::bad_window_length, "window length " + std::to_string(window_hours) +
                                               " exceeds the horizon of " + std::to_string(total_hours) + " hours");
    }
    WindowPlan plan;
    plan.total_hours = total_hours;
    plan.window_hours = window_hours;
    for (std::size_t begin = 0; begin < total_hours; begin += window_hours) {
        plan.windows.push_back({begin, std::min(window_hours, total_hours - begin)});
    }
    return plan;
}

WindowPlan first_windows(const WindowPlan& plan, std::size_t count) {
    WindowPlan out = plan;
    if (count > 0 && count < out.windows.size()) out.windows.resize(count);
    return out;
}

namespace {

std::vector<double> slice(const HourlyProfile& p, UtcHour start, std::size_t hours, const std::string& what) {
    std::vector<double> out(hours);
    for (std::size_t h = 0; h < hours; ++h) {
        auto t = start + static_cast<std::int64_t>(h);
        auto i = t - p.start;
        if (i < 0 || i >= static_cast<std::int64_t>(p.size()) || p.is_missing(static_cast<std::size_t>(i))) {
            fail(ErrorKind::missing_profile, what + " has no value at " + format_utc_hour(t));
        }
        out[h] = p.values[static_cast<std::size_t>(i)];
    }
    return out;
}

Matrix columns(const Matrix& m, std::size_t begin, std::size_t hours, double scale = 1.0) {
    Matrix out(m.size());
    for (std::size_t r = 0; r < m.size(); ++r) {
        out[r].assign(m[r].begin() + static_cast<std::ptrdiff_t>(begin),
                      m[r].begin() + static_cast<std::ptrdiff_t>(begin + hours));
        if (scale != 1.0) {
            for (double& v : out[r]) v *= scale;
        }
    }
    return out;
}

void place(Matrix& dst, const Matrix& src, std::size_t begin) {
    for (std::size_t r = 0; r < src.size(); ++r) {
        std::copy(src[r].begin(), src[r].end(), dst[r].begin() + static_cast<std::ptrdiff_t>(begin));
    }
}

double clean(double v) { return std::abs(v) < 1e-9 ? 0.0 : v; }

}  // namespace

Scenario build_scenario(const Network& n, const std::map<EntityId, HourlyProfile>& demand,
                        const std::map<EntityId, HourlyProfile>& availability, UtcHour start, std::size_t hours) {
    if (hours == 0) fail(ErrorKind::invalid_argument, "scenario horizon must be at least one hour");
    Scenario s;
    s.start = start;
    s.hours = hours;
    for (const auto& b : n.buses) {
        auto it = demand.find(b.id);
        if (it == demand.end()) {
            if (b.demand_participation) {
                fail(ErrorKind::missing_profile, "bus " + std::to_string(b.id) + " has no demand profile");
            }
            s.demand.emplace_back(hours, 0.0);
            continue;
        }
        auto values = slice(it->second, start, hours, "demand profile of bus " + std::to_string(b.id));
        for (double v : values) {
            if (v < 0.0) fail(ErrorKind::invalid_argument, "negative demand at bus " + std::to_string(b.id));
        }
        s.demand.push_back(std::move(values));
    }
    for (const auto& g : n.generators) {
        if (!is_variable_renewable(g.fuel)) {
            s.availability.emplace_back(hours, g.p_max);
            continue;
        }
        auto it = availability.find(g.id);
        if (it == availability.end()) {
            fail(ErrorKind::missing_profile, "generator " + std::to_string(g.id) + " (" +
                                                 std::string(to_string(g.fuel)) + ") has no availability profile");
        }
        auto values = slice(it->second, start, hours, "availability profile of generator " + std::to_string(g.id));
        for (double& v : values) v = std::clamp(v, 0.0, g.p_max);
        s.availability.push_back(std::move(values));
    }
    return s;
}

std::size_t SimulationLog::total_retries() const {
    std::size_t r = 0;
    for (const auto& w : windows) r += w.retries;
    return r;
}

double SimulationLog::total_shed() const {
    double total = 0.0;
    for (const auto& row : shed) {
        for (double v : row) total += v;
    }
    return total;
}

SimulationLog run_rolling_horizon(const Network& n, const Scenario& scenario, const WindowPlan& plan,
                                  const HarnessOptions& options) {
    if (plan.covered_hours() > scenario.hours) {
        fail(ErrorKind::missing_profile, "window plan covers " + std::to_string(plan.covered_hours()) +
                                             " hours but profiles cover " + std::to_string(scenario.hours));
    }
    if (!(options.retry_factor > 0.0 && options.retry_factor < 1.0)) {
        fail(ErrorKind::invalid_argument, "retry factor must lie in (0, 1)");
    }
    const std::size_t H = plan.covered_hours();
    SimulationLog log;
    log.start = scenario.start;
    log.hours = H;
    for (const auto& b : n.buses) log.bus_ids.push_back(b.id);
    for (const auto& l : n.branches) log.branch_ids.push_back(l.id);
    for (const auto& g : n.generators) log.generator_ids.push_back(g.id);
    auto zeros = [&](std::size_t rows) { return Matrix(rows, std::vector<double>(H, 0.0)); };
    log.dispatch = zeros(n.generators.size());
    log.lmp = zeros(n.buses.size());
    log.mu = zeros(n.branches.size());
    log.flow = zeros(n.branches.size());
    log.violation = zeros(n.branches.size());
    log.shed = zeros(n.buses.size());
    log.served_demand = zeros(n.buses.size());

    std::optional<std::vector<double>> initial;
    for (std::size_t k = 0; k < plan.windows.size(); ++k) {
        const Window w = plan.windows[k];
        WindowRecord record;
        record.index = k;
        record.window = w;
        const Matrix availability = columns(scenario.availability, w.begin, w.hours);
        for (std::size_t r = 0;; ++r) {
            const double scale = std::pow(options.retry_factor, static_cast<double>(r));
            const Matrix demand = columns(scenario.demand, w.begin, w.hours, scale);
            auto problem = build_problem(n, demand, availability, options.mpdcopf, initial);
            auto solution = solve(problem, options.simplex);
            record.iterations += solution.iterations;
            if (solution.optimal()) {
                record.status = solution.status;
                record.retries = r;
                record.demand_scale = scale;
                record.objective = solution.objective;
                place(log.dispatch, solution.dispatch, w.begin);
                place(log.lmp, solution.lmp, w.begin);
                place(log.mu, solution.mu, w.begin);
                place(log.flow, solution.flows, w.begin);
                place(log.violation, solution.violations, w.begin);
                place(log.shed, solution.shed, w.begin);
                place(log.served_demand, demand, w.begin);
                initial.emplace();
                for (const auto& row : solution.dispatch) initial->push_back(row.back());
                break;
            }
            record.retry_causes.push_back(solution.infeasibility_hint);
            if (r >= options.retry_cap) {
                fail(ErrorKind::retry_cap_exceeded,
                     "window " + std::to_string(k) + " (" + format_utc_hour(scenario.start + static_cast<std::int64_t>(w.begin)) +
                         ") still infeasible after " + std::to_string(r) + " retries; failing constraints: " +
                         (solution.infeasibility_hint.empty() ? "unknown" : solution.infeasibility_hint));
            }
        }
        log.windows.push_back(std::move(record));
    }
    return log;
}

// ---- log files ----------------------------------------------------------------

namespace {

struct Quantity {
    const char* entity;
    const char* name;
    Matrix SimulationLog::*field;
};

constexpr Quantity kQuantities[] = {
    {"generator", "dispatch", &SimulationLog::dispatch},   {"bus", "demand", &SimulationLog::served_demand},
    {"bus", "shed", &SimulationLog::shed},                 {"bus", "lmp", &SimulationLog::lmp},
    {"branch", "flow", &SimulationLog::flow},              {"branch", "mu", &SimulationLog::mu},
    {"branch", "violation", &SimulationLog::violation},
};

const std::vector<EntityId>& ids_for(const SimulationLog& log, std::string_view entity) {
    if (entity == "generator") return log.generator_ids;
    if (entity == "bus") return log.bus_ids;
    return log.branch_ids;
}

std::vector<EntityId>& ids_for(SimulationLog& log, std::string_view entity) {
    return const_cast<std::vector<EntityId>&>(ids_for(static_cast<const SimulationLog&>(log), entity));
}

}  // namespace

void write_simulation_log(const SimulationLog& log, const Network& n, const fs::path& dir) {
    fs::create_directories(dir);
    {
        CsvWriter w(dir / "log_windows.csv", {"window", "begin_hour", "start_utc", "hours", "status", "retries",
                                              "demand_scale", "objective", "iterations", "retry_causes"});
        for (const auto& r : log.windows) {
            std::string causes;
            for (std::size_t i = 0; i < r.retry_causes.size(); ++i) causes += (i ? ";" : "") + r.retry_causes[i];
            w.row({std::to_string(r.index), std::to_string(r.window.begin),
                   format_utc_hour(log.start + static_cast<std::int64_t>(r.window.begin)), std::to_string(r.window.hours),
                   to_string(r.status), std::to_string(r.retries), format_number(r.demand_scale),
                   format_number(r.objective), std::to_string(r.iterations), causes});
        }
    }
    {
        CsvWriter w(dir / "log_hours.csv", {"hour", "timestamp_utc", "entity", "id", "quantity", "value"});
        for (std::size_t h = 0; h < log.hours; ++h) {
            const auto hour = std::to_string(h);
            const auto stamp = format_utc_hour(log.start + static_cast<std::int64_t>(h));
            for (const auto& q : kQuantities) {
                const auto& ids = ids_for(log, q.entity);
                const Matrix& m = log.*(q.field);
                for (std::size_t i = 0; i < ids.size(); ++i) {
                    w.row({hour, stamp, q.entity, std::to_string(ids[i]), q.name, format_number(clean(m[i][h]))});
                }
            }
        }
    }
    {
        std::map<std::pair<std::string, Fuel>, double> energy;
        for (std::size_t g = 0; g < n.generators.size(); ++g) {
            const auto& gen = n.generators[g];
            auto gi = std::find(log.generator_ids.begin(), log.generator_ids.end(), gen.id);
            if (gi == log.generator_ids.end()) continue;
            double& e = energy[{gen.state, gen.fuel}];
            for (double v : log.dispatch[static_cast<std::size_t>(gi - log.generator_ids.begin())]) e += v;
        }
        CsvWriter w(dir / "energy_by_state_fuel.csv", {"state", "fuel", "mwh"});
        for (const auto& [key, mwh] : energy) w.row({key.first, std::string(to_string(key.second)), format_number(clean(mwh))});
    }
}

SimulationLog read_simulation_log(const fs::path& dir) {
    SimulationLog log;
    const auto hours_path = dir / "log_hours.csv";
    const auto windows_path = dir / "log_windows.csv";
    for (const auto& p : {hours_path, windows_path}) {
        if (!fs::exists(p)) fail(ErrorKind::io, "missing simulation log " + p.string());
    }
    auto windows = CsvTable::read(windows_path, {"window", "begin_hour", "start_utc", "hours", "status", "retries",
                                                 "demand_scale", "objective", "iterations", "retry_causes"});
    for (const auto& row : windows) {
        WindowRecord r;
        r.index = static_cast<std::size_t>(row.integer("window"));
        r.window = {static_cast<std::size_t>(row.integer("begin_hour")), static_cast<std::size_t>(row.integer("hours"))};
        const auto& status = row.text("status");
        if (status == "optimal") {
            r.status = LpStatus::optimal;
        } else if (status == "infeasible") {
            r.status = LpStatus::infeasible;
        } else {
            row.reject("status", "unknown status '" + status + "'");
        }
        r.retries = static_cast<std::size_t>(row.integer("retries"));
        r.demand_scale = row.number("demand_scale");
        r.objective = row.number("objective");
        r.iterations = static_cast<std::size_t>(row.integer("iterations"));
        std::stringstream causes(row.text("retry_causes"));
        for (std::string c; std::getline(causes, c, ';');) r.retry_causes.push_back(c);
        if (log.windows.empty()) {
            log.start = parse_utc_hour(row.text("start_utc")) + -static_cast<std::int64_t>(r.window.begin);
        }
        log.windows.push_back(std::move(r));
    }

    auto table = CsvTable::read(hours_path, {"hour", "timestamp_utc", "entity", "id", "quantity", "value"});
    std::map<std::string, std::map<EntityId, std::size_t>> index;  // entity → id → row
    struct Cell {
        std::size_t quantity, row, hour;
        double value;
    };
    std::vector<Cell> cells;
    cells.reserve(table.size());
    std::size_t hours = 0;
    for (const auto& row : table) {
        const auto& entity = row.text("entity");
        const auto& quantity = row.text("quantity");
        std::size_t q = std::size(kQuantities);
        for (std::size_t i = 0; i < std::size(kQuantities); ++i) {
            if (entity == kQuantities[i].entity && quantity == kQuantities[i].name) q = i;
        }
        if (q == std::size(kQuantities)) row.reject("quantity", "unknown quantity '" + entity + "/" + quantity + "'");
        const auto id = row.integer("id");
        auto& ids = index[entity];
        auto [it, inserted] = ids.emplace(id, ids.size());
        if (inserted) ids_for(log, entity).push_back(id);
        const auto h = row.integer("hour");
        if (h < 0) row.reject("hour", "negative hour");
        hours = std::max(hours, static_cast<std::size_t>(h) + 1);
        cells.push_back({q, it->second, static_cast<std::size_t>(h), row.number("value")});
    }
    log.hours = hours;
    for (const auto& q : kQuantities) {
        log.*(q.field) = Matrix(ids_for(log, q.entity).size(), std::vector<double>(hours, 0.0));
    }
    for (const auto& c : cells) (log.*(kQuantities[c.quantity].field))[c.row][c.hour] = c.value;
    return log;
}

}  // namespace synthgrid
