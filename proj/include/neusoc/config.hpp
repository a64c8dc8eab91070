#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "neusoc/energy.hpp"
#include "neusoc/experiments.hpp"
#include "neusoc/memristor.hpp"
#include "neusoc/network.hpp"
#include "neusoc/synapse.hpp"

namespace neusoc {

struct SweepSettings {
    SweepAxis axis = SweepAxis::RLrs;
    SweepRange range{100e3, 10e6, 21, true};
};

struct DataSettings {
    std::string train_path = "data/optdigits/optdigits.tra";
    std::string test_path = "data/optdigits/optdigits.tes";
    /// Comma-separated digit subset; empty means all ten classes.
    std::string digits;
    int eval_workers = 0;
};

/// Every tunable of every experiment. The synapse section drives the
/// single-synapse experiments; the network carries its own synapse block.
/// Both synapse blocks share the memristor section as their conductance map.
struct RunConfig {
    MemristorParams memristor;
    HysteresisSettings hysteresis;
    SynapseParams synapse;
    StdpCurveSettings stdp_curve;
    PairingDecaySettings pairing_decay;
    BistabilitySettings bistability;
    EnergyParams energy;
    std::vector<TableColumn> energy_columns = default_table_columns();
    SweepSettings sweep;
    NetworkConfig network;
    DataSettings data;

    /// Copies the memristor section into both synapse blocks, then checks
    /// every invariant. Throws ConfigError.
    void finalize();
};

/// Parses `key = value` lines; `#` starts a comment. Keys not in the
/// registry are rejected with a ConfigError that names them.
void apply_config_text(RunConfig& cfg, std::string_view text, std::string_view origin = "<config>");
RunConfig load_config(const std::string& path);

/// NEUSOC_<KEY> with dots replaced by underscores, upper-cased, e.g.
/// NEUSOC_SYNAPSE_TAU_P. `getenv` is injectable for tests.
void apply_env_overrides(RunConfig& cfg, const std::function<const char*(const char*)>& getenv_fn);

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value);
std::string get_config_value(const RunConfig& cfg, std::string_view key);

/// All keys with their current values, one per line, with short comments.
std::string config_to_text(const RunConfig& cfg, bool with_comments = false);

std::vector<std::string> config_keys();
std::string env_name_for(std::string_view key);

}  // namespace neusoc
