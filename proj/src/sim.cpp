#include "pppt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "pppt/baseline_codec.hpp"
#include "pppt/digest.hpp"

namespace pppt {

const char* to_string(Scheme s) {
    switch (s) {
        case Scheme::Pppt: return "pppt";
        case Scheme::Pid: return "pid";
        case Scheme::Bloom: return "bf";
        case Scheme::None: return "none";
    }
    return "?";
}

Scheme scheme_from_string(const std::string& s) {
    if (s == "pppt") return Scheme::Pppt;
    if (s == "pid") return Scheme::Pid;
    if (s == "bf") return Scheme::Bloom;
    if (s == "none") return Scheme::None;
    throw std::invalid_argument("unknown scheme: " + s + " (expected pppt|pid|bf|none)");
}

double energy_mJ(const NodeEnergy& e) {
    // activity(mA) * ticks summed, at 3 V over the 32768 Hz timer, times 8.
    const double weighted = static_cast<double>(e.tx_ticks) * 19.5 +
                            static_cast<double>(e.rx_ticks) * 21.8 +
                            static_cast<double>(e.cpu_ticks) * 1.8 +
                            static_cast<double>(e.lpm_ticks) * 0.0545;
    return weighted * 3.0 / 32768.0 * 8.0;
}

double energy_mJ(const EnergyLedger& ledger, NodeId node) {
    auto it = ledger.nodes.find(node);
    if (it == ledger.nodes.end())
        throw std::invalid_argument("no energy record for node " + to_string(node));
    return energy_mJ(it->second);
}

double network_energy_mJ(const EnergyLedger& ledger) {
    double sum = 0.0;
    for (const auto& [n, e] : ledger.nodes) {
        (void)n;
        sum += energy_mJ(e);
    }
    return sum;
}

double avg_power_mW(double total_energy_mJ, double duration_s, std::size_t node_count) {
    if (duration_s <= 0.0) throw std::invalid_argument("duration must be positive");
    if (node_count == 0) throw std::invalid_argument("node count must be positive");
    return total_energy_mJ / duration_s / static_cast<double>(node_count);
}

std::size_t on_air_bytes(const ScenarioConfig& cfg, const DataPacket& pkt) {
    if (cfg.scheme == Scheme::None) return pkt.payload_len;
    return pkt.payload_len + provenance_wire_size(pkt.provenance) + pkt.digest.size();
}

unsigned RunResult::hops() const {
    if (config.sources.empty()) return 0;
    auto it = dodag.rank.find(config.sources.front());
    return it == dodag.rank.end() || it->second == 0 ? 0 : it->second - 1;
}

namespace {

struct Event {
    enum class Type { Gen, Send, Hop, Reset };

    std::uint64_t tick = 0;
    std::uint64_t order = 0;  // insertion counter; stabilizes equal ticks
    Type type = Type::Gen;
    NodeId node;              // Gen: source, Send: sender, Hop: receiver
    NodeId from;              // Hop: sender
    std::uint32_t boundary = 0;  // Reset: interval index
    DataPacket pkt;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.tick != b.tick) return a.tick > b.tick;
        return a.order > b.order;
    }
};

class Engine {
  public:
    explicit Engine(const ScenarioConfig& cfg) : cfg_(cfg), rng_(cfg.adversary.rng_seed) {
        validate();
        result_.config = cfg_;
        result_.dodag = build_dodag(cfg_.topology);
        resolve_sources();
        result_.config.sources = sources_;
        for (const auto& [n, r] : result_.dodag.rank) {
            (void)r;
            energy_[n] = NodeEnergy{};
            universe_.push_back(n);
        }
        duration_ticks_ = SimTime::from_seconds(cfg_.sim_duration_s).ticks;
        interval_ticks_ = SimTime::from_seconds(cfg_.packet_interval_s).ticks;
        if (interval_ticks_ == 0)
            throw std::invalid_argument("packet_interval_s too small for the tick clock");
    }

    RunResult run() {
        schedule_generation();
        schedule_resets();
        while (!queue_.empty()) {
            const Event ev = queue_.top();
            queue_.pop();
            now_ = ev.tick;
            dispatch(ev);
        }
        gap_scan(std::max(now_, duration_ticks_));
        finalize_energy();
        result_.final_tick = now_;
        result_.seen_at_root = seen_vectors();
        return std::move(result_);
    }

  private:
    void validate() const {
        const auto& a = cfg_.adversary;
        auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
        if (!in01(a.malicious_drop_rate))
            throw std::invalid_argument("malicious_drop_rate must be in [0,1]");
        if (!in01(a.natural_loss_rate))
            throw std::invalid_argument("natural_loss_rate must be in [0,1]");
        if (!in01(cfg_.idle_radio_fraction))
            throw std::invalid_argument("idle_radio_fraction must be in [0,1]");
        if (cfg_.packet_interval_s <= 0.0)
            throw std::invalid_argument("packet_interval_s must be positive");
        if (cfg_.sim_duration_s <= 0.0)
            throw std::invalid_argument("sim_duration_s must be positive");
        if (cfg_.payload_bytes == 0)
            throw std::invalid_argument("payload_bytes must be positive");
        if (cfg_.interval_I == 0)
            throw std::invalid_argument("interval_I must be positive");
        if (cfg_.bitrate_bps <= 0.0)
            throw std::invalid_argument("bitrate_bps must be positive");
    }

    void resolve_sources() {
        const Dodag& d = result_.dodag;
        if (cfg_.sources.empty()) {
            for (const auto& [n, role] : d.roles)
                if (role == NodeRole::Source) sources_.push_back(n);
        } else {
            sources_ = cfg_.sources;
            std::sort(sources_.begin(), sources_.end());
            for (NodeId s : sources_) {
                if (!d.roles.count(s) || d.role(s) != NodeRole::Source)
                    throw std::invalid_argument("source " + to_string(s) +
                                                " is not a Source-role node");
                if (!d.attached(s))
                    throw std::invalid_argument("source " + to_string(s) + " is detached");
            }
        }
        if (sources_.empty()) throw std::invalid_argument("no sources to generate traffic");
        if (auto m = cfg_.adversary.malicious_node) {
            if (!d.roles.count(*m) || d.role(*m) != NodeRole::Forwarder)
                throw std::invalid_argument("malicious_node " + to_string(*m) +
                                            " must be a forwarder (never the root)");
        }
    }

    void push(Event ev) {
        ev.order = next_order_++;
        queue_.push(std::move(ev));
    }

    void log(std::uint64_t tick, NodeId node, EventKind kind, NodeId origin,
             std::uint32_t seq, std::string detail = {}) {
        result_.log.push_back({tick, node, kind, origin, seq, std::move(detail)});
    }

    void schedule_generation() {
        std::uint32_t seq = 0;
        for (std::uint64_t t = 0; t < duration_ticks_; t += interval_ticks_) {
            ++seq;
            for (NodeId s : sources_) {
                Event ev;
                ev.tick = t;
                ev.type = Event::Type::Gen;
                ev.node = s;
                ev.pkt.seq = seq;
                push(std::move(ev));
            }
        }
        rounds_ = seq;
    }

    void schedule_resets() {
        for (std::uint64_t k = 1; (k * cfg_.interval_I) < rounds_; ++k) {
            Event ev;
            ev.tick = (k * cfg_.interval_I - 1) * interval_ticks_ +
                      std::max<std::uint64_t>(interval_ticks_ / 2, 1);
            ev.type = Event::Type::Reset;
            ev.boundary = static_cast<std::uint32_t>(k);
            push(std::move(ev));
        }
    }

    void dispatch(const Event& ev) {
        switch (ev.type) {
            case Event::Type::Gen: return on_generate(ev);
            case Event::Type::Send: return on_send(ev);
            case Event::Type::Hop: return on_hop(ev);
            case Event::Type::Reset: return on_reset(ev);
        }
    }

    std::uint64_t airtime_ticks(std::size_t bytes) const {
        return static_cast<std::uint64_t>(
            std::ceil(static_cast<double>(bytes) * 8.0 * SimTime::kTicksPerSecond /
                      cfg_.bitrate_bps));
    }

    void on_generate(const Event& ev) {
        const NodeId s = ev.node;
        ++result_.counters.generated;
        result_.generated_per_source[s] = ev.pkt.seq;
        log(now_, s, EventKind::Gen, s, ev.pkt.seq);

        DataPacket pkt;
        pkt.seq = ev.pkt.seq;
        pkt.origin = s;
        pkt.payload_len = cfg_.payload_bytes;
        switch (cfg_.scheme) {
            case Scheme::Pppt: encode_at_source(pkt, s, result_.dodag); break;
            case Scheme::Pid: pid_encode(pkt, s, result_.dodag); break;
            case Scheme::Bloom: bf_encode(pkt, s); break;
            case Scheme::None: break;
        }
        const std::uint64_t cpu =
            cfg_.cpu_ticks_forward + (cfg_.scheme != Scheme::None ? cfg_.cpu_ticks_encode : 0);
        energy_[s].cpu_ticks += cpu;
        send_later(s, pkt, now_ + cpu);
    }

    void send_later(NodeId from, DataPacket pkt, std::uint64_t departure) {
        Event ev;
        ev.tick = departure;
        ev.type = Event::Type::Send;
        ev.node = from;
        ev.pkt = std::move(pkt);
        push(std::move(ev));
    }

    void on_send(const Event& ev) {
        const NodeId from = ev.node;
        const NodeId to = result_.dodag.next_hop(from);
        const DataPacket& pkt = ev.pkt;
        if (cfg_.scheme == Scheme::Pppt && !pkt.provenance.absent() &&
            provenance_wire_size(pkt.provenance) != 2)
            throw std::logic_error("pair provenance must stay 2 bytes");

        const std::size_t bytes = on_air_bytes(cfg_, pkt);
        const std::uint64_t air = airtime_ticks(bytes);
        energy_[from].tx_ticks += air;
        log(now_, from, EventKind::Tx, pkt.origin, pkt.seq,
            "to=" + to_string(to) + ";len=" + std::to_string(bytes));

        const double loss =
            result_.dodag.link_loss(from, to, cfg_.adversary.natural_loss_rate);
        const std::uint64_t arrival = now_ + air;
        if (apply_link_loss(loss, rng_) == LinkOutcome::Lost) {
            // Stamped at transmission start so the log stays totally ordered.
            ++result_.counters.lost_natural;
            log(now_, to, EventKind::Lost, pkt.origin, pkt.seq, "from=" + to_string(from));
            return;
        }
        energy_[to].rx_ticks += air;

        Event hop;
        hop.tick = arrival;
        hop.type = Event::Type::Hop;
        hop.node = to;
        hop.from = from;
        hop.pkt = pkt;
        push(std::move(hop));
    }

    void record_at(NodeId node, NodeId from_child, const DataPacket& pkt) {
        if (cfg_.scheme != Scheme::Pppt) return;
        const std::uint32_t cap = (node == result_.dodag.root) ? 0 : cfg_.interval_I;
        result_.dodag.rt(node).record_seq(from_child, pkt.origin, pkt.seq, cap);
    }

    void on_hop(const Event& ev) {
        if (ev.node == result_.dodag.root) return root_process(ev);
        const NodeId node = ev.node;
        DataPacket pkt = ev.pkt;
        log(now_, node, EventKind::Rx, pkt.origin, pkt.seq, "from=" + to_string(ev.from));

        const auto& adv = cfg_.adversary;
        if (adv.malicious_node && *adv.malicious_node == node) {
            switch (apply_malicious(pkt, adv, universe_, rng_)) {
                case MaliciousAction::Drop:
                    // Swallowed on receipt: no routing record self-incriminates.
                    ++result_.counters.dropped_malicious;
                    log(now_, node, EventKind::MalDrop, pkt.origin, pkt.seq);
                    return;
                case MaliciousAction::Strip:
                    record_at(node, ev.from, pkt);  // keeps cover
                    ++result_.counters.stripped;
                    log(now_, node, EventKind::Strip, pkt.origin, pkt.seq);
                    energy_[node].cpu_ticks += cfg_.cpu_ticks_forward;
                    send_later(node, std::move(pkt), now_ + cfg_.cpu_ticks_forward);
                    return;
                case MaliciousAction::Forge: {
                    record_at(node, ev.from, pkt);
                    ++result_.counters.forged_injected;
                    const RInfoPair& p = pkt.provenance.pair();
                    log(now_, node, EventKind::Forge, pkt.origin, pkt.seq,
                        "pair=" + to_string(p.destination) + "-" + to_string(p.source));
                    energy_[node].cpu_ticks += cfg_.cpu_ticks_forward;
                    send_later(node, std::move(pkt), now_ + cfg_.cpu_ticks_forward);
                    return;
                }
                case MaliciousAction::Pass:
                    break;
            }
        }

        bool encoded = false;
        switch (cfg_.scheme) {
            case Scheme::Pppt:
                if (pkt.provenance.absent()) {
                    // Stripped upstream: the seq still travels in the packet
                    // header, so the node records it but cannot re-embed a
                    // field it never saw.
                    record_at(node, ev.from, pkt);
                } else {
                    encode_at_forwarder(pkt, node, ev.from, result_.dodag, cfg_.interval_I);
                    encoded = true;
                }
                break;
            case Scheme::Pid:
                if (!pkt.provenance.absent()) {
                    pid_encode(pkt, node, result_.dodag);
                    encoded = true;
                }
                break;
            case Scheme::Bloom:
                if (!pkt.provenance.absent()) {
                    bf_encode(pkt, node);
                    encoded = true;
                }
                break;
            case Scheme::None:
                break;
        }
        const std::uint64_t cpu =
            cfg_.cpu_ticks_forward + (encoded ? cfg_.cpu_ticks_encode : 0);
        energy_[node].cpu_ticks += cpu;
        send_later(node, std::move(pkt), now_ + cpu);
    }

    void root_process(const Event& ev) {
        const NodeId root = result_.dodag.root;
        const DataPacket& pkt = ev.pkt;
        energy_[root].cpu_ticks += cfg_.cpu_ticks_forward;
        record_at(root, ev.from, pkt);

        auto& seqs = seen_[pkt.origin];
        if (seqs.count(pkt.seq)) {
            ++result_.counters.duplicates;
            log(now_, root, EventKind::Dup, pkt.origin, pkt.seq,
                "from=" + to_string(ev.from));
            return;
        }
        seqs.insert(pkt.seq);
        ++result_.counters.arrived;

        std::string detail = "from=" + to_string(ev.from) +
                             ";flag=" + (pkt.eh_prov_flag ? "1" : "0") +
                             ";plen=" + std::to_string(provenance_wire_size(pkt.provenance));
        if (pkt.provenance.absent()) {
            detail += ";prov=-;digest=-";
        } else {
            detail += ";prov=" + hex(serialize_provenance(pkt.provenance));
            detail += std::string(";digest=") + (digest_ok(pkt) ? "ok" : "bad");
        }
        log(now_, root, EventKind::Arrive, pkt.origin, pkt.seq, detail);

        Delivery dv;
        dv.origin = pkt.origin;
        dv.seq = pkt.seq;
        dv.prov_len = provenance_wire_size(pkt.provenance);

        if (cfg_.scheme == Scheme::None) {
            ++result_.counters.accepted_plain;
            result_.deliveries.push_back(dv);
            return;
        }

        const FlagCheck fc = check_eh_flag(pkt);
        if (!fc.accept) {
            if (fc.reason == "provenance stripped")
                ++result_.counters.discarded_stripped;
            else
                ++result_.counters.discarded_unflagged;
            dv.policy_discarded = true;
            result_.deliveries.push_back(dv);
            log(now_, root, EventKind::Discard, pkt.origin, pkt.seq, "reason=" + fc.reason);
            return;
        }

        if (cfg_.scheme == Scheme::Bloom) {
            const std::set<NodeId> members = bf_decode(pkt, result_.dodag);
            ++result_.counters.bloom_decoded;
            std::string set;
            for (NodeId m : members) {
                if (!set.empty()) set += '-';
                set += to_string(m);
            }
            log(now_, root, EventKind::Decode, pkt.origin, pkt.seq,
                "result=members;set=" + (set.empty() ? "-" : set));
            result_.deliveries.push_back(dv);
            return;
        }

        const DecodeResult dr = (cfg_.scheme == Scheme::Pppt)
                                    ? decode(pkt, result_.dodag)
                                    : pid_decode(pkt, result_.dodag);
        dv.checked = true;
        dv.status = dr.status;
        switch (dr.status) {
            case DecodeStatus::Verified: ++result_.counters.verified; break;
            case DecodeStatus::Forged: ++result_.counters.forged_detected; break;
            case DecodeStatus::Broken: ++result_.counters.broken; break;
            case DecodeStatus::Ambiguous: ++result_.counters.ambiguous; break;
            case DecodeStatus::Mismatch: ++result_.counters.mismatch; break;
        }
        result_.deliveries.push_back(dv);
        std::string d = std::string("result=") + to_string(dr.status);
        d += ";fault=" + (dr.fault.assigned() ? to_string(dr.fault) : "-");
        d += ";trace=" + (dr.trace.empty() ? "-" : to_string(dr.trace));
        log(now_, root, EventKind::Decode, pkt.origin, pkt.seq, d);
    }

    RootSeen seen_vectors() const {
        RootSeen out;
        for (const auto& [origin, seqs] : seen_)
            out[origin] = std::vector<std::uint32_t>(seqs.begin(), seqs.end());
        return out;
    }

    void gap_scan(std::uint64_t tick) {
        const auto drops = detect_drops(result_.dodag, seen_vectors());
        for (const DropRecord& r : drops) {
            if (!reported_.insert({r.origin, r.seq}).second) continue;
            std::string loc;
            for (NodeId n : r.localized) {
                if (!loc.empty()) loc += '/';
                loc += to_string(n);
            }
            log(tick, result_.dodag.root, EventKind::Detect, r.origin, r.seq, "loc=" + loc);
            result_.detected_drops.push_back(r);
        }
    }

    void on_reset(const Event& ev) {
        // Scan first: the reset erases the evidence the scan depends on.
        gap_scan(now_);
        reset_interval(result_.dodag);
        log(now_, NodeId{}, EventKind::Reset, NodeId{}, 0,
            "boundary=" + std::to_string(ev.boundary));
    }

    void finalize_energy() {
        const std::uint64_t total = std::max(duration_ticks_, now_);
        result_.energy.duration_ticks = total;
        for (auto& [n, e] : energy_) {
            (void)n;
            const std::uint64_t busy = e.tx_ticks + e.rx_ticks + e.cpu_ticks;
            if (busy > total)
                throw std::logic_error("node busier than the run is long; "
                                       "traffic does not fit the duration");
            if (cfg_.duty_cycling) {
                const std::uint64_t idle = total - busy;
                const std::uint64_t listen = static_cast<std::uint64_t>(
                    std::llround(cfg_.idle_radio_fraction * static_cast<double>(idle)));
                e.rx_ticks += listen;
                e.lpm_ticks = idle - listen;
            } else {
                // Radio listens whenever not transmitting; no low-power state.
                e.rx_ticks = total - e.tx_ticks - e.cpu_ticks;
                e.lpm_ticks = 0;
            }
        }
        result_.energy.nodes = energy_;
    }

    ScenarioConfig cfg_;
    Rng rng_;
    RunResult result_;
    std::vector<NodeId> sources_;
    std::vector<NodeId> universe_;
    std::map<NodeId, NodeEnergy> energy_;
    std::map<NodeId, std::set<std::uint32_t>> seen_;
    std::set<std::pair<NodeId, std::uint32_t>> reported_;
    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
    std::uint64_t next_order_ = 0;
    std::uint64_t now_ = 0;
    std::uint64_t duration_ticks_ = 0;
    std::uint64_t interval_ticks_ = 0;
    std::uint32_t rounds_ = 0;
};

}  // namespace

RunResult run(const ScenarioConfig& cfg) { return Engine(cfg).run(); }

}  // namespace pppt
