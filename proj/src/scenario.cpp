/*
 * Scenario JSON parsing and the preset grids behind `ppptsim grid`.
 */
#include "pppt/scenario.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pppt {
namespace {

using nlohmann::json;

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
    throw std::invalid_argument("scenario key \"" + key + "\": " + why);
}

const json& require(const json& j, const std::string& key) {
    auto it = j.find(key);
    if (it == j.end()) bad_key(key, "missing required key");
    return *it;
}

double get_number(const json& j, const std::string& key, double fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number()) bad_key(key, "expected a number");
    return it->get<double>();
}

// Accepts signed encodings of non-negative values; in-memory JSON built from
// int literals stores them signed even when they are >= 0.
std::uint64_t uint_from(const json& v, const std::string& key) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    bad_key(key, "expected a non-negative integer");
}

std::uint64_t get_uint(const json& j, const std::string& key, std::uint64_t fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    return uint_from(*it, key);
}

bool get_bool(const json& j, const std::string& key, bool fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_boolean()) bad_key(key, "expected true or false");
    return it->get<bool>();
}

// Typos in optional keys would otherwise silently fall back to defaults.
void reject_unknown(const json& j, const std::string& scope,
                    std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) {
            if (it.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) bad_key(scope.empty() ? it.key() : scope + "." + it.key(), "unknown key");
    }
}

NodeId node_id_from(const json& v, const std::string& key) {
    if (!v.is_number_integer() && !v.is_number_unsigned())
        bad_key(key, "expected a node id in 1..255");
    auto raw = uint_from(v, key);
    if (raw < 1 || raw > 255) bad_key(key, "node id out of range 1..255");
    return NodeId{static_cast<std::uint8_t>(raw)};
}

NodeRole role_from(const std::string& s, const std::string& key) {
    if (s == "root") return NodeRole::Root;
    if (s == "forwarder") return NodeRole::Forwarder;
    if (s == "source") return NodeRole::Source;
    bad_key(key, "unknown role \"" + s + "\" (expected root, forwarder, or source)");
}

TopologyGraph parse_topology(const json& t) {
    if (!t.is_object()) bad_key("topology", "expected an object");
    reject_unknown(t, "topology",
                   {"generator", "forwarders", "sources", "nodes", "links", "preferred_parents"});

    if (auto gen = t.find("generator"); gen != t.end()) {
        if (!gen->is_string()) bad_key("topology.generator", "expected a string");
        const std::string name = gen->get<std::string>();
        if (name == "sample") return sample_topology();
        if (name == "linear") {
            auto fwd = get_uint(t, "forwarders", 1);
            auto src = get_uint(t, "sources", 1);
            if (fwd < 1) bad_key("topology.forwarders", "need at least one forwarder");
            if (src < 1) bad_key("topology.sources", "need at least one source");
            if (fwd + src + 1 > 255) bad_key("topology.forwarders", "node ids would exceed 255");
            return linear_topology(static_cast<int>(fwd), static_cast<int>(src));
        }
        bad_key("topology.generator", "unknown generator \"" + name + "\"");
    }

    TopologyGraph g;
    const json& nodes = require(t, "nodes");
    if (!nodes.is_array() || nodes.empty()) bad_key("topology.nodes", "expected a non-empty array");
    for (const auto& n : nodes) {
        if (!n.is_object()) bad_key("topology.nodes", "each node must be an object");
        reject_unknown(n, "topology.nodes", {"id", "role"});
        NodeId id = node_id_from(require(n, "id"), "topology.nodes.id");
        const json& role = require(n, "role");
        if (!role.is_string()) bad_key("topology.nodes.role", "expected a string");
        g.nodes.push_back({id, role_from(role.get<std::string>(), "topology.nodes.role")});
    }
    const json& links = require(t, "links");
    if (!links.is_array()) bad_key("topology.links", "expected an array");
    for (const auto& l : links) {
        if (!l.is_object()) bad_key("topology.links", "each link must be an object");
        reject_unknown(l, "topology.links", {"a", "b", "loss"});
        TopologyGraph::Link link;
        link.a = node_id_from(require(l, "a"), "topology.links.a");
        link.b = node_id_from(require(l, "b"), "topology.links.b");
        link.loss = get_number(l, "loss", -1.0);
        if (link.loss > 1.0 || (link.loss < 0.0 && link.loss != -1.0))
            bad_key("topology.links.loss", "loss probability must lie in [0,1]");
        g.links.push_back(link);
    }
    if (auto pp = t.find("preferred_parents"); pp != t.end()) {
        if (!pp->is_object()) bad_key("topology.preferred_parents", "expected an object");
        for (auto it = pp->begin(); it != pp->end(); ++it) {
            int child = 0;
            try {
                child = std::stoi(it.key());
            } catch (const std::exception&) {
                bad_key("topology.preferred_parents", "keys must be numeric node ids");
            }
            if (child < 1 || child > 255)
                bad_key("topology.preferred_parents", "node id out of range 1..255");
            g.preferred[NodeId{static_cast<std::uint8_t>(child)}] =
                node_id_from(it.value(), "topology.preferred_parents");
        }
    }
    return g;
}

AdversaryConfig parse_adversary(const json& a) {
    if (!a.is_object()) bad_key("adversary", "expected an object");
    reject_unknown(a, "adversary",
                   {"malicious_node", "malicious_drop_rate", "natural_loss_rate",
                    "strip_provenance", "forge_provenance", "rng_seed"});
    AdversaryConfig cfg;
    if (a.contains("malicious_node"))
        cfg.malicious_node = node_id_from(a.at("malicious_node"), "adversary.malicious_node");
    cfg.malicious_drop_rate = get_number(a, "malicious_drop_rate", 0.0);
    cfg.natural_loss_rate = get_number(a, "natural_loss_rate", 0.0);
    cfg.strip_provenance = get_bool(a, "strip_provenance", false);
    cfg.forge_provenance = get_bool(a, "forge_provenance", false);
    cfg.rng_seed = get_uint(a, "rng_seed", cfg.rng_seed);
    if (cfg.malicious_drop_rate < 0.0 || cfg.malicious_drop_rate > 1.0)
        bad_key("adversary.malicious_drop_rate", "expected a probability in [0,1]");
    if (cfg.natural_loss_rate < 0.0 || cfg.natural_loss_rate > 1.0)
        bad_key("adversary.natural_loss_rate", "expected a probability in [0,1]");
    return cfg;
}

}  // namespace

ScenarioConfig parse_scenario(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("scenario: top level must be a JSON object");
    reject_unknown(j, "",
                   {"scenario_id", "topology", "sources", "packet_interval_s", "payload_bytes",
                    "sim_duration_s", "scheme", "duty_cycling", "interval_I", "adversary",
                    "cpu_ticks_forward", "cpu_ticks_encode", "idle_radio_fraction", "bitrate_bps"});
    ScenarioConfig cfg;
    if (auto it = j.find("scenario_id"); it != j.end()) {
        if (!it->is_string()) bad_key("scenario_id", "expected a string");
        cfg.scenario_id = it->get<std::string>();
    }
    cfg.topology = parse_topology(require(j, "topology"));

    if (auto it = j.find("sources"); it != j.end()) {
        if (!it->is_array()) bad_key("sources", "expected an array of node ids");
        for (const auto& v : *it) cfg.sources.push_back(node_id_from(v, "sources"));
    }

    cfg.packet_interval_s = get_number(j, "packet_interval_s", cfg.packet_interval_s);
    if (cfg.packet_interval_s <= 0.0) bad_key("packet_interval_s", "must be positive");
    cfg.payload_bytes = static_cast<std::size_t>(get_uint(j, "payload_bytes", cfg.payload_bytes));
    if (cfg.payload_bytes < 1) bad_key("payload_bytes", "must be at least 1");
    cfg.sim_duration_s = get_number(j, "sim_duration_s", cfg.sim_duration_s);
    if (cfg.sim_duration_s <= 0.0) bad_key("sim_duration_s", "must be positive");

    if (auto it = j.find("scheme"); it != j.end()) {
        if (!it->is_string()) bad_key("scheme", "expected a string");
        try {
            cfg.scheme = scheme_from_string(it->get<std::string>());
        } catch (const std::exception& e) {
            bad_key("scheme", e.what());
        }
    }
    if (auto it = j.find("duty_cycling"); it != j.end()) {
        if (!it->is_string()) bad_key("duty_cycling", "expected \"on\" or \"off\"");
        const std::string v = it->get<std::string>();
        if (v == "on")
            cfg.duty_cycling = true;
        else if (v == "off")
            cfg.duty_cycling = false;
        else
            bad_key("duty_cycling", "expected \"on\" or \"off\"");
    }
    cfg.interval_I = static_cast<std::uint32_t>(get_uint(j, "interval_I", cfg.interval_I));
    if (cfg.interval_I < 1) bad_key("interval_I", "must be at least 1");

    if (auto it = j.find("adversary"); it != j.end()) cfg.adversary = parse_adversary(*it);

    cfg.cpu_ticks_forward = get_uint(j, "cpu_ticks_forward", cfg.cpu_ticks_forward);
    cfg.cpu_ticks_encode = get_uint(j, "cpu_ticks_encode", cfg.cpu_ticks_encode);
    cfg.idle_radio_fraction = get_number(j, "idle_radio_fraction", cfg.idle_radio_fraction);
    if (cfg.idle_radio_fraction < 0.0 || cfg.idle_radio_fraction > 1.0)
        bad_key("idle_radio_fraction", "expected a fraction in [0,1]");
    cfg.bitrate_bps = get_number(j, "bitrate_bps", cfg.bitrate_bps);
    if (cfg.bitrate_bps <= 0.0) bad_key("bitrate_bps", "must be positive");
    return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("scenario " + path + ": " + e.what());
    }
    return parse_scenario(j);
}

nlohmann::json scenario_to_json(const ScenarioConfig& cfg) {
    json t;
    {
        json nodes = json::array();
        for (const auto& n : cfg.topology.nodes) {
            const char* role = n.role == NodeRole::Root        ? "root"
                               : n.role == NodeRole::Forwarder ? "forwarder"
                                                               : "source";
            nodes.push_back({{"id", n.id.value}, {"role", role}});
        }
        json links = json::array();
        for (const auto& l : cfg.topology.links) {
            json link = {{"a", l.a.value}, {"b", l.b.value}};
            if (l.loss >= 0.0) link["loss"] = l.loss;
            links.push_back(link);
        }
        t = {{"nodes", nodes}, {"links", links}};
        if (!cfg.topology.preferred.empty()) {
            json pp = json::object();
            for (const auto& [child, parent] : cfg.topology.preferred)
                pp[std::to_string(child.value)] = parent.value;
            t["preferred_parents"] = pp;
        }
    }
    json sources = json::array();
    for (NodeId s : cfg.sources) sources.push_back(s.value);
    json adv = {{"malicious_drop_rate", cfg.adversary.malicious_drop_rate},
                {"natural_loss_rate", cfg.adversary.natural_loss_rate},
                {"strip_provenance", cfg.adversary.strip_provenance},
                {"forge_provenance", cfg.adversary.forge_provenance},
                {"rng_seed", cfg.adversary.rng_seed}};
    if (cfg.adversary.malicious_node) adv["malicious_node"] = cfg.adversary.malicious_node->value;
    return json{{"scenario_id", cfg.scenario_id},
                {"topology", t},
                {"sources", sources},
                {"packet_interval_s", cfg.packet_interval_s},
                {"payload_bytes", cfg.payload_bytes},
                {"sim_duration_s", cfg.sim_duration_s},
                {"scheme", to_string(cfg.scheme)},
                {"duty_cycling", cfg.duty_cycling ? "on" : "off"},
                {"interval_I", cfg.interval_I},
                {"adversary", adv},
                {"cpu_ticks_forward", cfg.cpu_ticks_forward},
                {"cpu_ticks_encode", cfg.cpu_ticks_encode},
                {"idle_radio_fraction", cfg.idle_radio_fraction},
                {"bitrate_bps", cfg.bitrate_bps}};
}

namespace {

ScenarioConfig chain_run(int forwarders, double interval_s, Scheme scheme, bool duty,
                         const std::string& id) {
    ScenarioConfig cfg;
    cfg.scenario_id = id;
    cfg.topology = linear_topology(forwarders, 1);
    cfg.packet_interval_s = interval_s;
    cfg.scheme = scheme;
    cfg.duty_cycling = duty;
    return cfg;
}

std::string hop_id(const std::string& fig, int hops, const std::string& suffix) {
    std::ostringstream os;
    os << fig << "_h" << hops;
    if (!suffix.empty()) os << "_" << suffix;
    return os.str();
}

GridPreset energy_grid(const std::string& name, bool duty, std::vector<double> intervals,
                       const std::string& description) {
    GridPreset p{name, description, {}};
    for (int hops = 1; hops <= 7; ++hops)
        for (double iv : intervals) {
            std::ostringstream suffix;
            suffix << "i" << iv;
            p.runs.push_back(chain_run(hops, iv, Scheme::Pppt, duty,
                                       hop_id(name, hops, intervals.size() > 1 ? suffix.str() : "")));
        }
    return p;
}

GridPreset psize_grid(std::uint64_t) {
    GridPreset p{"fig11", "provenance size vs path length for each scheme", {}};
    for (int hops = 1; hops <= 7; ++hops)
        for (Scheme s : {Scheme::Pppt, Scheme::Pid, Scheme::Bloom})
            p.runs.push_back(chain_run(hops, 10.0, s, true, hop_id("fig11", hops, to_string(s))));
    return p;
}

GridPreset psize_sources_grid(std::uint64_t) {
    GridPreset p{"fig12", "provenance size vs source count at three forwarders", {}};
    for (int sources : {1, 3, 5})
        for (Scheme s : {Scheme::Pppt, Scheme::Bloom}) {
            ScenarioConfig cfg;
            cfg.scenario_id = "fig12_s" + std::to_string(sources) + "_" + to_string(s);
            cfg.topology = linear_topology(3, sources);
            cfg.scheme = s;
            p.runs.push_back(cfg);
        }
    return p;
}

GridPreset detection_grid(std::uint64_t base_seed) {
    GridPreset p{"fig13", "loss and detection under a selective-dropping forwarder", {}};
    for (double rate : {0.0, 0.03, 0.06, 0.09})
        for (std::uint64_t seed = base_seed; seed < base_seed + 10; ++seed) {
            ScenarioConfig cfg;
            cfg.topology = linear_topology(7, 1);
            // Natural loss lives on the source uplink (8-9) only; other links are clean.
            for (auto& link : cfg.topology.links) {
                bool uplink = (link.a.value == 8 && link.b.value == 9) ||
                              (link.a.value == 9 && link.b.value == 8);
                link.loss = uplink ? 0.01 : 0.0;
            }
            cfg.packet_interval_s = 0.25;
            cfg.adversary.rng_seed = seed;
            if (rate > 0.0) {
                cfg.adversary.malicious_node = NodeId{3};
                cfg.adversary.malicious_drop_rate = rate;
            }
            std::ostringstream id;
            id << "fig13_m" << static_cast<int>(rate * 100) << "_s" << seed;
            cfg.scenario_id = id.str();
            p.runs.push_back(cfg);
        }
    return p;
}

GridPreset pgt_grid(std::uint64_t) {
    GridPreset p{"fig14", "generation-to-arrival latency with and without provenance", {}};
    for (int hops = 1; hops <= 7; ++hops)
        for (Scheme s : {Scheme::Pppt, Scheme::None})
            p.runs.push_back(chain_run(hops, 10.0, s, true, hop_id("fig14", hops, to_string(s))));
    return p;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"fig7", "fig8", "fig9", "fig11", "fig12", "fig13", "fig14"};
}

GridPreset make_preset(const std::string& name, std::uint64_t base_seed) {
    if (name == "fig7")
        return energy_grid("fig7", true, {10, 20, 30, 40},
                           "network energy vs path length and reporting interval");
    if (name == "fig8")
        return energy_grid("fig8", true, {10, 20, 30, 40},
                           "average per-node power vs path length and reporting interval");
    if (name == "fig9")
        return energy_grid("fig9", false, {10},
                           "average per-node power with radio duty-cycling disabled");
    if (name == "fig11") return psize_grid(base_seed);
    if (name == "fig12") return psize_sources_grid(base_seed);
    if (name == "fig13") return detection_grid(base_seed);
    if (name == "fig14") return pgt_grid(base_seed);
    std::ostringstream msg;
    msg << "unknown preset \"" << name << "\"; available presets:";
    for (const auto& n : preset_names()) msg << " " << n;
    throw std::invalid_argument(msg.str());
}

}  // namespace pppt
