#include "synthgrid/synthgrid.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "error.hpp"
#include "grid_model.hpp"
#include "harness.hpp"
#include "pipeline.hpp"
#include "run_config.hpp"

struct sg_network {
    synthgrid::Network network;
    std::vector<std::string> violations;
};

struct sg_config {
    synthgrid::Settings settings;
};

static_assert(static_cast<int>(synthgrid::ErrorKind::bad_cap) + 1 == SG_ERR_BAD_CAP,
              "sg_status must mirror ErrorKind");

namespace {

thread_local std::string last_error;

sg_status status_of(synthgrid::ErrorKind kind) { return static_cast<sg_status>(static_cast<int>(kind) + 1); }

template <class F>
sg_status guarded(F&& body) {
    try {
        body();
        last_error.clear();
        return SG_OK;
    } catch (const synthgrid::Error& e) {
        last_error = e.what();
        return status_of(e.kind());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return SG_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return SG_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown failure";
        return SG_ERR_INTERNAL;
    }
}

void require(bool ok, const char* what) {
    if (!ok) synthgrid::fail(synthgrid::ErrorKind::invalid_argument, what);
}

void copy_out(const std::string& text, char* buffer, std::size_t size) {
    require(buffer && size > 0, "output buffer is NULL or empty");
    require(text.size() < size, "output buffer too small");
    std::memcpy(buffer, text.c_str(), text.size() + 1);
}

}  // namespace

extern "C" {

const char* sg_status_name(sg_status status) {
    if (status == SG_OK) return "Ok";
    if (status == SG_ERR_INTERNAL) return "InternalError";
    if (status > SG_OK && status < SG_ERR_INTERNAL) {
        return synthgrid::error_kind_name(static_cast<synthgrid::ErrorKind>(static_cast<int>(status) - 1));
    }
    return "UnknownStatus";
}

const char* sg_last_error(void) { return last_error.c_str(); }

const char* sg_version(void) { return "0.1.0"; }

sg_status sg_network_load(const char* case_dir, sg_network** out) {
    return guarded([&] {
        require(case_dir && out, "case_dir and out must not be NULL");
        *out = nullptr;
        auto* handle = new sg_network{synthgrid::load_network(case_dir), {}};
        *out = handle;
    });
}

void sg_network_free(sg_network* network) { delete network; }

sg_status sg_network_write(const sg_network* network, const char* case_dir) {
    return guarded([&] {
        require(network && case_dir, "network and case_dir must not be NULL");
        synthgrid::write_network(network->network, case_dir);
    });
}

sg_status sg_network_counts(const sg_network* network, size_t* buses, size_t* branches, size_t* dc_lines,
                            size_t* generators) {
    return guarded([&] {
        require(network, "network must not be NULL");
        if (buses) *buses = network->network.buses.size();
        if (branches) *branches = network->network.branches.size();
        if (dc_lines) *dc_lines = network->network.dc_lines.size();
        if (generators) *generators = network->network.generators.size();
    });
}

sg_status sg_network_validate(const sg_network* network, size_t* violation_count) {
    return guarded([&] {
        require(network && violation_count, "network and violation_count must not be NULL");
        auto* self = const_cast<sg_network*>(network);
        self->violations.clear();
        for (const auto& v : synthgrid::validate_network(network->network)) {
            self->violations.push_back(v.entity + " " + v.id + ": " + v.rule + (v.detail.empty() ? "" : " (" + v.detail + ")"));
        }
        *violation_count = self->violations.size();
    });
}

sg_status sg_network_violation(const sg_network* network, size_t index, char* buffer, size_t buffer_size) {
    return guarded([&] {
        require(network, "network must not be NULL");
        require(index < network->violations.size(), "violation index out of range; call sg_network_validate first");
        copy_out(network->violations[index], buffer, buffer_size);
    });
}

sg_status sg_plan_windows(size_t total_hours, size_t window_hours, size_t* count, size_t* lengths, size_t capacity) {
    return guarded([&] {
        require(count, "count must not be NULL");
        auto plan = synthgrid::plan_windows(total_hours, window_hours);
        *count = plan.count();
        if (lengths) {
            for (std::size_t i = 0; i < plan.count() && i < capacity; ++i) lengths[i] = plan.windows[i].hours;
        }
    });
}

sg_status sg_config_new(sg_config** out) {
    return guarded([&] {
        require(out, "out must not be NULL");
        *out = new sg_config{};
    });
}

sg_status sg_config_load(const char* path, sg_config** out) {
    return guarded([&] {
        require(path && out, "path and out must not be NULL");
        *out = nullptr;
        *out = new sg_config{synthgrid::Settings::load(path)};
    });
}

void sg_config_free(sg_config* config) { delete config; }

sg_status sg_config_set(sg_config* config, const char* key, const char* value) {
    return guarded([&] {
        require(config && key && value, "config, key and value must not be NULL");
        config->settings.set(key, value);
    });
}

sg_status sg_config_get(const sg_config* config, const char* key, char* buffer, size_t buffer_size) {
    return guarded([&] {
        require(config && key, "config and key must not be NULL");
        auto v = config->settings.get(key);
        require(v.has_value(), "setting is not set");
        copy_out(*v, buffer, buffer_size);
    });
}

sg_status sg_config_apply_env(sg_config* config, const char* prefix, size_t* applied) {
    return guarded([&] {
        require(config, "config must not be NULL");
        auto n = config->settings.apply_env(prefix ? prefix : "SYNTHGRID_");
        if (applied) *applied = n;
    });
}

sg_status sg_config_validate(const sg_config* config, const char* stage) {
    return guarded([&] {
        require(config, "config must not be NULL");
        auto c = synthgrid::RunConfig::from_settings(config->settings);
        if (stage) c.validate_for(stage);
    });
}

size_t sg_config_key_count(void) { return synthgrid::known_setting_keys().size(); }

const char* sg_config_key(size_t index) {
    const auto& keys = synthgrid::known_setting_keys();
    return index < keys.size() ? keys[index].c_str() : nullptr;
}

sg_status sg_run_stage(const sg_config* config, const char* stage, sg_log_fn log, void* user) {
    return guarded([&] {
        require(config && stage, "config and stage must not be NULL");
        auto c = synthgrid::RunConfig::from_settings(config->settings);
        synthgrid::LogSink sink;
        if (log) {
            sink = [log, user](synthgrid::LogLevel level, const std::string& msg) {
                log(user, level == synthgrid::LogLevel::warning ? SG_LOG_WARNING : SG_LOG_INFO, msg.c_str());
            };
        }
        synthgrid::run_stage(stage, c, sink);
    });
}

}  // extern "C"
