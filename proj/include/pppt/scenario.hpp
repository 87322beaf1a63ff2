/*
 * Scenario files and named grid presets.
 *
 * A scenario is a JSON object with these keys (all optional except
 * `topology`):
 *
 *   scenario_id        string, label echoed into reports
 *   topology           {"generator":"linear","forwarders":1..,"sources":n}
 *                      | {"generator":"sample"}
 *                      | {"nodes":[{"id":n,"role":"root|forwarder|source"}...],
 *                         "links":[{"a":n,"b":m,"loss":p?}...],
 *                         "preferred_parents":{"child": parent, ...}}
 *   sources            [node ids]; default: every source-role node
 *   packet_interval_s  number > 0 (default 10)
 *   payload_bytes      integer >= 1 (default 200)
 *   sim_duration_s     number > 0 (default 600)
 *   scheme             "pppt" | "pid" | "bf" | "none" (default "pppt")
 *   duty_cycling       "on" | "off" (default "on")
 *   interval_I         integer >= 1, packets per source per interval (default 256)
 *   adversary          {malicious_node, malicious_drop_rate, natural_loss_rate,
 *                       strip_provenance, forge_provenance, rng_seed}
 *   cpu_ticks_forward, cpu_ticks_encode, idle_radio_fraction, bitrate_bps
 *
 * Parse errors raise std::invalid_argument whose message names the key.
 */
#ifndef PPPT_SCENARIO_HPP
#define PPPT_SCENARIO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "pppt/sim.hpp"

namespace pppt {

ScenarioConfig parse_scenario(const nlohmann::json& j);
ScenarioConfig load_scenario_file(const std::string& path);

/* Round-trips a config back to its JSON form (manifest echo). */
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

/* A named preset expands to the runs of one report figure. */
struct GridPreset {
    std::string name;
    std::string description;
    std::vector<ScenarioConfig> runs;
};

std::vector<std::string> preset_names();
GridPreset make_preset(const std::string& name, std::uint64_t base_seed = 42);

}  // namespace pppt

#endif
