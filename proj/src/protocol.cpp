#include "kcast/protocol.hpp"

#include <algorithm>
#include <set>

namespace kcast {

Payload node_emission(const ScheduleNode& node, const Payload& root_input,
                      const SlotReader& read) {
    if (!node.parent) {
        if (root_input.size() != node.payload_len)
            throw ValidationError("input has " + std::to_string(root_input.size()) +
                                  " bits, schedule expects " + std::to_string(node.payload_len));
        return root_input;
    }
    return serialize_report(report_of(*node.parent, node.ctx.sender, read));
}

Report report_of(const ScheduleNode& node, PartyId self, const SlotReader& read) {
    Report rep;
    rep.owner = self;
    for (std::size_t g : node.slots_containing(self)) {
        rep.sets.push_back(node.slots[g - node.slot_base]);
        rep.values.push_back(read(g));
    }
    return rep;
}

namespace {

// agreed report of recipient j at `node`, as evaluated by `self`
Report agreed_report(const ScheduleNode& node, PartyId j, const Payload& flat) {
    Report rep;
    rep.owner = j;
    auto positions = node.slots_containing(j);
    if (flat.size() != positions.size() * node.payload_len)
        throw ValidationError("agreed report for party " + std::to_string(j) +
                              " has wrong length");
    std::size_t off = 0;
    for (std::size_t g : positions) {
        rep.sets.push_back(node.slots[g - node.slot_base]);
        Payload v;
        v.bits.assign(flat.bits.begin() + off, flat.bits.begin() + off + node.payload_len);
        rep.values.push_back(std::move(v));
        off += node.payload_len;
    }
    return rep;
}

}  // namespace

Payload node_output(const ScheduleNode& node, PartyId self, const SlotReader& read,
                    EvalMemo& memo, EvalStats* stats) {
    auto key = std::make_pair(node.id, self);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    Payload result;
    if (node.base) {
        result = read(node.slot_base);
    } else {
        std::vector<Report> agreed;
        agreed.reserve(node.recipients.size());
        for (std::size_t idx = 0; idx < node.recipients.size(); ++idx) {
            PartyId j = node.recipients[idx];
            if (j == self) {
                agreed.push_back(report_of(node, self, read));
            } else {
                Payload flat = node_output(*node.children[idx], self, read, memo, stats);
                agreed.push_back(agreed_report(node, j, flat));
            }
        }
        TrustGraph pruned = TrustGraph::build(agreed, node.ctx.cfg).pruned();
        auto decision = pruned.decide(self, node.payload_len);
        if (stats) {
            if (decision.multi_reach) ++stats->multi_reach;
            if (!pruned.clusters_separated()) ++stats->cluster_path;
        }
        result = std::move(decision.value);
    }
    memo.emplace(key, result);
    return result;
}

ReceiptStore::ReceiptStore(const Schedule& schedule, int n)
    : schedule_(&schedule),
      slots_(std::size_t(n), std::vector<std::optional<Payload>>(schedule.total_slots())) {}

void ReceiptStore::record(PartyId recipient, std::size_t slot, const Payload& payload) {
    auto& cell = slots_[recipient][slot];
    if (!cell) cell = payload;  // first delivery wins
}

std::optional<Payload> ReceiptStore::raw(PartyId recipient, std::size_t slot) const {
    return slots_[recipient][slot];
}

SlotReader ReceiptStore::reader(PartyId recipient) const {
    return [this, recipient](std::size_t g) {
        const auto& cell = slots_[recipient][g];
        std::size_t want = schedule_->slot(g).node->payload_len;
        if (cell && cell->size() == want) return *cell;
        return Payload::zeros(want);
    };
}

std::optional<Payload> BroadcastOutcome::output_of(PartyId p) const {
    for (const auto& [party, value] : outputs)
        if (party == p) return value;
    return std::nullopt;
}

bool BroadcastOutcome::is_faulty(PartyId p) const {
    return std::find(corrupt.begin(), corrupt.end(), p) != corrupt.end();
}

BroadcastOutcome broadcast_P(const Config& cfg, PartyId sender, const Payload& input,
                             Strategy& strategy, Transcript* transcript) {
    Schedule schedule(cfg, sender, input.size());
    return broadcast_P_with(schedule, input, strategy, transcript);
}

BroadcastOutcome broadcast_P_with(const Schedule& schedule, const Payload& input,
                                  Strategy& strategy, Transcript* transcript) {
    const ScheduleNode& root = schedule.root();
    const Config& cfg = root.ctx.cfg;
    Engine engine(cfg, strategy);
    ReceiptStore receipts(schedule, cfg.n);

    for (int round = 0; round < schedule.total_rounds(); ++round) {
        const ScheduleNode* node = schedule.node_at_round(round);
        StepFn step = [&](PartyId p, int r) -> std::vector<Cast> {
            if (!node || node->ctx.sender != p) return {};
            Payload v = node_emission(*node, input, receipts.reader(p));
            std::vector<Cast> casts;
            casts.reserve(node->slots.size());
            for (const auto& slot_set : node->slots)
                casts.push_back(Cast{r, p, slot_set, v});
            return casts;
        };
        auto casts = engine.run_round(round, step);
        for (const Cast& c : casts) {
            if (!node || c.sender != node->ctx.sender) continue;
            if (auto slot = node->slot_of(c.recipients))
                for (PartyId r : c.recipients) receipts.record(r, *slot, c.payload);
        }
    }

    BroadcastOutcome out;
    out.sender_value = input;
    out.corrupt = engine.corrupt();
    out.rounds = schedule.total_rounds();

    EvalMemo memo;
    for (PartyId p : root.recipients)
        out.outputs.emplace_back(p, node_output(root, p, receipts.reader(p), memo, &out.stats));

    // Sub-agreement audit: every level whose charged faulty count (missing
    // parties count against a faulty sender) stays within f must have agreed,
    // compliant-uniformly, on its sender's value.
    if (2 * cfg.f < cfg.k * cfg.h) {
        for (const ScheduleNode* node : schedule.nodes()) {
            int faulty_in = 0;
            for (PartyId p : node->ctx.participants)
                if (engine.is_faulty(p)) ++faulty_in;
            bool sender_faulty = engine.is_faulty(node->ctx.sender);
            int charged = faulty_in + (sender_faulty ? node->ctx.cfg.d() : 0);
            if (charged > cfg.f) continue;
            std::optional<Payload> expected;
            if (!sender_faulty)
                expected = node_emission(*node, input, receipts.reader(node->ctx.sender));
            bool ok = true;
            for (PartyId p : node->recipients) {
                if (engine.is_faulty(p)) continue;
                Payload v = node_output(*node, p, receipts.reader(p), memo, nullptr);
                if (!expected) expected = v;
                else if (v != *expected) { ok = false; break; }
            }
            if (!ok) ++out.guarantee_violations;
        }
    }

    if (transcript) {
        Transcript& t = engine.transcript();
        if (!engine.is_faulty(root.ctx.sender))
            t.add(OutputEvent{root.ctx.sender, input});
        for (const auto& [p, v] : out.outputs)
            if (!engine.is_faulty(p)) t.add(OutputEvent{p, v});
        out.cast_events = t.cast_count();
        *transcript = std::move(t);
    } else {
        out.cast_events = engine.transcript().cast_count();
    }
    return out;
}

Payload majority_value(const std::vector<Payload>& values) {
    if (values.empty()) throw ValidationError("majority_value: no values");
    std::map<Payload, int> counts;
    for (const auto& v : values) ++counts[v];
    const Payload* best = nullptr;
    int best_count = -1;
    for (const auto& [v, c] : counts) {
        if (c >= best_count) {  // map order makes ties resolve to the greatest value
            best = &v;
            best_count = c;
        }
    }
    return *best;
}

namespace {

void require_compliant_majority(const Config& cfg) {
    if (cfg.h <= cfg.f)
        throw ValidationError("consensus reduction requires a compliant majority (h > f), got h=" +
                              std::to_string(cfg.h) + ", f=" + std::to_string(cfg.f));
}

std::vector<PartyId> compliant_parties(int n, const std::vector<PartyId>& corrupt) {
    std::vector<PartyId> out;
    for (PartyId p = 0; p < PartyId(n); ++p)
        if (std::find(corrupt.begin(), corrupt.end(), p) == corrupt.end()) out.push_back(p);
    return out;
}

}  // namespace

ReductionResult consensus_from_broadcast_ideal(const Config& cfg,
                                               const std::vector<Payload>& inputs,
                                               const std::vector<PartyId>& corrupt,
                                               const std::map<PartyId, Payload>& announced) {
    require_compliant_majority(cfg);
    if (int(inputs.size()) != cfg.n) throw ValidationError("need one input per party");
    if (int(corrupt.size()) > cfg.f) throw ValidationError("corruption budget exceeded");
    const std::size_t len = inputs.front().size();

    ReductionResult result;
    result.compliant = compliant_parties(cfg.n, corrupt);

    std::vector<Payload> broadcasts;
    for (PartyId p = 0; p < PartyId(cfg.n); ++p) {
        bool faulty = std::find(corrupt.begin(), corrupt.end(), p) != corrupt.end();
        if (!faulty) {
            broadcasts.push_back(inputs[p]);
        } else if (auto it = announced.find(p); it != announced.end()) {
            broadcasts.push_back(it->second);
        } else {
            broadcasts.push_back(Payload::zeros(len));
        }
    }
    Payload winner = majority_value(broadcasts);
    for (PartyId p : result.compliant) result.outputs.emplace_back(p, winner);
    return result;
}

ReductionResult consensus_from_broadcast_kcast(const Config& cfg,
                                               const std::vector<Payload>& inputs,
                                               const StrategyFactory& factory) {
    require_compliant_majority(cfg);
    if (int(inputs.size()) != cfg.n) throw ValidationError("need one input per party");

    // view[p][q] = p's agreed value for q's broadcast
    std::vector<std::vector<Payload>> view(std::size_t(cfg.n),
                                           std::vector<Payload>(std::size_t(cfg.n)));
    std::vector<PartyId> corrupt;
    for (PartyId q = 0; q < PartyId(cfg.n); ++q) {
        Schedule schedule(cfg, q, inputs[q].size());
        auto strategy = factory(q, schedule);
        auto outcome = broadcast_P_with(schedule, inputs[q], *strategy);
        corrupt = outcome.corrupt;  // factory contract: one corrupt set throughout
        for (PartyId p = 0; p < PartyId(cfg.n); ++p)
            view[p][q] = (p == q) ? inputs[q] : *outcome.output_of(p);
    }

    ReductionResult result;
    result.compliant = compliant_parties(cfg.n, corrupt);
    for (PartyId p : result.compliant) result.outputs.emplace_back(p, majority_value(view[p]));
    return result;
}

ReductionResult broadcast_from_consensus_ideal(const Config& cfg, const Payload& input,
                                               Strategy& strategy) {
    require_compliant_majority(cfg);
    Engine engine(cfg, strategy);

    std::vector<PartyId> recipients;
    for (PartyId p = 1; p < PartyId(cfg.n); ++p) recipients.push_back(p);
    const PartyId sender = 0;
    std::vector<std::vector<PartyId>> slots;
    if (int(recipients.size()) <= cfg.k) slots.push_back(recipients);
    else slots = ksubsets(recipients, cfg.k);

    StepFn step = [&](PartyId p, int) -> std::vector<Cast> {
        if (p != sender) return {};
        std::vector<Cast> casts;
        for (const auto& s : slots) casts.push_back(Cast{0, sender, s, input});
        return casts;
    };
    auto casts = engine.run_round(0, step);

    // each recipient's value: uniform report value, or zeros
    std::map<PartyId, std::map<std::vector<PartyId>, Payload>> received;
    for (const Cast& c : casts) {
        if (c.sender != sender) continue;
        if (!std::binary_search(slots.begin(), slots.end(), c.recipients)) continue;
        for (PartyId r : c.recipients) received[r].emplace(c.recipients, c.payload);
    }
    std::vector<Payload> values(std::size_t(cfg.n), Payload::zeros(input.size()));
    values[sender] = input;
    for (PartyId p : recipients) {
        Report rep;
        rep.owner = p;
        for (const auto& s : slots) {
            if (!std::binary_search(s.begin(), s.end(), p)) continue;
            rep.sets.push_back(s);
            auto it = received[p].find(s);
            rep.values.push_back(it != received[p].end() && it->second.size() == input.size()
                                     ? it->second
                                     : Payload::zeros(input.size()));
        }
        if (auto v = uniform_value(rep)) values[p] = *v;
    }

    // ideal consensus: the majority of compliant inputs, delivered to all
    ReductionResult result;
    result.compliant = compliant_parties(cfg.n, engine.corrupt());
    std::vector<Payload> compliant_values;
    for (PartyId p : result.compliant) compliant_values.push_back(values[p]);
    Payload agreed = majority_value(compliant_values);
    for (PartyId p : result.compliant)
        result.outputs.emplace_back(p, p == sender ? input : agreed);
    return result;
}

}  // namespace kcast
