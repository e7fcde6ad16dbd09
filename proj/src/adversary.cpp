#include "kcast/adversary.hpp"

#include <algorithm>
#include <array>
#include <random>

#include "kcast/protocol.hpp"

namespace kcast {

const std::vector<PartyId>& ChainPartition::chain_cluster(std::size_t i) const {
    if (i > ring.size()) throw ValidationError("chain position out of range");
    if (i == 0 || i == ring.size()) return ring[0];
    return ring[i];
}

void ChainPartition::validate() const {
    if (int(ring.size()) < k + 2)
        throw ValidationError("ring needs at least k+2=" + std::to_string(k + 2) +
                              " clusters, has " + std::to_string(ring.size()));
    std::vector<PartyId> all;
    for (const auto& cluster : ring) {
        if (cluster.empty()) throw ValidationError("ring cluster is empty");
        all.insert(all.end(), cluster.begin(), cluster.end());
    }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end())
        throw ValidationError("ring clusters are not disjoint");
    if (int(all.size()) != h + f)
        throw ValidationError("ring covers " + std::to_string(all.size()) + " parties, expected h+f=" +
                              std::to_string(h + f));
    if (std::find(ring[0].begin(), ring[0].end(), PartyId(0)) == ring[0].end())
        throw ValidationError("sender (party 0) must sit in cluster 0");
    for (std::size_t i = 0; i < ring.size(); ++i) {
        std::size_t next = (i + 1) % ring.size();
        if (int(ring[i].size() + ring[next].size()) < h)
            throw ValidationError("adjacent clusters " + std::to_string(i) + "," +
                                  std::to_string(next) + " total " +
                                  std::to_string(ring[i].size() + ring[next].size()) +
                                  " parties, need h=" + std::to_string(h));
    }
}

bool ring_feasible(int k, int h, int f) {
    if (k < 1 || h < 2 || f < 0) return false;
    return 2 * f >= k * h;
}

ChainPartition build_chain(int k, int h, int f) {
    if (k < 1) throw ValidationError("build_chain: k must be >= 1");
    if (h < 2) throw ValidationError("build_chain: h must be >= 2");
    if (f < 0) throw ValidationError("build_chain: f must be >= 0");
    if (2 * f < k * h)
        throw ValidationError("(k,h)-ring infeasible: h+f >= (k+2)h/2 requires 2f >= kh, got 2f=" +
                              std::to_string(2 * f) + " < kh=" + std::to_string(k * h));

    const int n = h + f;
    const int clusters = k + 2;
    std::vector<int> sizes(std::size_t(clusters));
    for (int i = 0; i < clusters; ++i) sizes[i] = (i % 2 == 0) ? (h + 1) / 2 : h / 2;
    int surplus = n;
    for (int s : sizes) surplus -= s;
    for (int i = 0; surplus > 0; ++i, --surplus) ++sizes[i % clusters];

    ChainPartition chain;
    chain.k = k;
    chain.h = h;
    chain.f = f;
    PartyId next = 0;
    for (int i = 0; i < clusters; ++i) {
        std::vector<PartyId> cluster;
        for (int j = 0; j < sizes[i]; ++j) cluster.push_back(next++);
        chain.ring.push_back(std::move(cluster));
    }
    chain.validate();
    return chain;
}

std::unique_ptr<Strategy> null_strategy() { return std::make_unique<NullStrategy>(); }

namespace {

class SilentStrategy : public Strategy {
public:
    explicit SilentStrategy(const Config& cfg) {
        for (int i = cfg.n - cfg.f; i < cfg.n; ++i) corrupt_.push_back(PartyId(i));
    }
    const std::vector<PartyId>& corrupt() const override { return corrupt_; }
    std::vector<Cast> rewrite(int, PartyId, const std::vector<Cast>&) override { return {}; }
    std::string describe() const override { return "{\"kind\":\"silent\"}"; }

private:
    std::vector<PartyId> corrupt_;
};

Payload payload_from_index(std::uint64_t index, std::size_t len) {
    Payload p = Payload::zeros(len);
    for (std::size_t j = 0; j < len; ++j)
        p.bits[j] = std::uint8_t((index >> (len - 1 - j)) & 1u);
    return p;
}

class RandomStrategy : public Strategy {
public:
    RandomStrategy(const Config& cfg, const Schedule& schedule, std::uint64_t seed)
        : schedule_(&schedule), seed_(seed) {
        std::mt19937_64 rng(seed);
        if (cfg.f > 0) {
            std::size_t size = std::size_t(rng() % std::uint64_t(cfg.f + 1));
            std::vector<PartyId> pool(std::size_t(cfg.n));
            for (int i = 0; i < cfg.n; ++i) pool[std::size_t(i)] = PartyId(i);
            for (std::size_t i = 0; i < size; ++i)
                std::swap(pool[i], pool[i + std::size_t(rng() % std::uint64_t(pool.size() - i))]);
            corrupt_.assign(pool.begin(), pool.begin() + long(size));
            std::sort(corrupt_.begin(), corrupt_.end());
        }
        // one uniform choice per scheduled cast of a corrupt party:
        // omit, or any payload value of the slot's length
        for (std::size_t g = 0; g < schedule.total_slots(); ++g) {
            auto ref = schedule.slot(g);
            if (!is_corrupt(ref.node->ctx.sender)) continue;
            std::size_t len = ref.node->payload_len;
            if (len > 48) throw ValidationError("random adversary: payload too wide");
            std::uint64_t options = (std::uint64_t(1) << len) + 1;
            std::uint64_t pick = rng() % options;
            if (pick == 0) choice_[g] = std::nullopt;
            else choice_[g] = payload_from_index(pick - 1, len);
        }
    }

    const std::vector<PartyId>& corrupt() const override { return corrupt_; }

    std::vector<Cast> rewrite(int round, PartyId party, const std::vector<Cast>&) override {
        const ScheduleNode* node = schedule_->node_at_round(round);
        if (!node || node->ctx.sender != party) return {};
        std::vector<Cast> out;
        for (std::size_t i = 0; i < node->slots.size(); ++i) {
            const auto& c = choice_.at(node->slot_base + i);
            if (c) out.push_back(Cast{round, party, node->slots[i], *c});
        }
        return out;
    }

    std::string describe() const override {
        return "{\"kind\":\"random\",\"seed\":" + std::to_string(seed_) + "}";
    }

private:
    bool is_corrupt(PartyId p) const {
        return std::binary_search(corrupt_.begin(), corrupt_.end(), p);
    }

    const Schedule* schedule_;
    std::uint64_t seed_;
    std::vector<PartyId> corrupt_;
    std::map<std::size_t, std::optional<Payload>> choice_;
};

}  // namespace

std::unique_ptr<Strategy> silent_strategy(const Config& cfg) {
    return std::make_unique<SilentStrategy>(cfg);
}

std::unique_ptr<Strategy> random_strategy(const Config& cfg, const Schedule& schedule,
                                          std::uint64_t seed) {
    return std::make_unique<RandomStrategy>(cfg, schedule, seed);
}

ScriptedStrategy::ScriptedStrategy(std::vector<PartyId> corrupt) : corrupt_(std::move(corrupt)) {
    std::sort(corrupt_.begin(), corrupt_.end());
}

void ScriptedStrategy::set_slot(int round, std::vector<PartyId> recipients,
                                std::optional<Payload> payload) {
    std::sort(recipients.begin(), recipients.end());
    overrides_[{round, std::move(recipients)}] = std::move(payload);
}

void ScriptedStrategy::add_extra(Cast cast) { extras_.push_back(std::move(cast)); }

std::vector<Cast> ScriptedStrategy::rewrite(int round, PartyId party,
                                            const std::vector<Cast>& prescribed) {
    std::vector<Cast> out;
    for (const Cast& c : prescribed) {
        auto it = overrides_.find({round, c.recipients});
        if (it == overrides_.end()) {
            out.push_back(c);
        } else if (it->second) {
            Cast replaced = c;
            replaced.payload = *it->second;
            out.push_back(std::move(replaced));
        }  // nullopt: omitted
    }
    for (const Cast& c : extras_)
        if (c.round == round && c.sender == party) out.push_back(c);
    return out;
}

std::string ScriptedStrategy::describe() const {
    return "{\"kind\":\"scripted\",\"overrides\":" + std::to_string(overrides_.size()) + "}";
}

// ---------------------------------------------------------------------------
// Chain adversary
// ---------------------------------------------------------------------------

namespace {

Payload flipped(const Payload& p) {
    Payload q = p;
    for (auto& b : q.bits) b ^= 1;
    return q;
}

// The virtual execution behind the chain adversary: middle parties run
// once, sender-cluster parties run twice (copy 0 with input0, copy 1 with
// input1). Messages from the sender cluster reach each side of the per-cast
// chain split only from its own copy.
class VirtualChainExec {
public:
    VirtualChainExec(const Schedule& schedule, const ChainPartition& chain, Payload input0,
                     Payload input1)
        : schedule_(&schedule), chain_(&chain), inputs_{std::move(input0), std::move(input1)} {
        const int n = chain.h + chain.f;
        ring_index_.assign(std::size_t(n), 0);
        for (std::size_t i = 0; i < chain.ring.size(); ++i)
            for (PartyId p : chain.ring[i]) ring_index_[p] = i;
        for (int side = 0; side < 2; ++side)
            receipts_[side].assign(std::size_t(n),
                                   std::vector<std::optional<Payload>>(schedule.total_slots()));
        emissions_.assign(schedule.nodes().size(), {});
        run();
    }

    bool in_sender_cluster(PartyId p) const { return ring_index_[p] == 0; }
    std::size_t ring_index(PartyId p) const { return ring_index_[p]; }

    /// Leftmost middle cluster with no recipients in the set.
    std::size_t split_index(const std::vector<PartyId>& recipients) const {
        for (std::size_t i = 1; i < chain_->ring.size(); ++i) {
            bool hit = false;
            for (PartyId p : chain_->ring[i])
                if (std::binary_search(recipients.begin(), recipients.end(), p)) {
                    hit = true;
                    break;
                }
            if (!hit) return i;
        }
        throw EngineError("chain split: every middle cluster holds a recipient");
    }

    const Payload& emission(std::size_t node_id, int side) const {
        return emissions_[node_id][side];
    }

    /// Final value of a party instance. Middle parties have one instance
    /// (side ignored); the root sender's value is its copy's input.
    Payload value(PartyId p, int side) const {
        int s = in_sender_cluster(p) ? side : 0;
        if (p == schedule_->root().ctx.sender) return inputs_[side];
        EvalMemo memo;
        return node_output(schedule_->root(), p, reader(p, s), memo, nullptr);
    }

private:
    SlotReader reader(PartyId p, int side) const {
        return [this, p, side](std::size_t g) {
            const auto& cell = receipts_[side][p][g];
            std::size_t want = schedule_->slot(g).node->payload_len;
            if (cell && cell->size() == want) return *cell;
            return Payload::zeros(want);
        };
    }

    void run() {
        for (int round = 0; round < schedule_->total_rounds(); ++round) {
            const ScheduleNode* node = schedule_->node_at_round(round);
            PartyId x = node->ctx.sender;
            if (in_sender_cluster(x)) {
                for (int side = 0; side < 2; ++side)
                    emissions_[node->id][side] =
                        node_emission(*node, inputs_[side], reader(x, side));
                for (std::size_t i = 0; i < node->slots.size(); ++i) {
                    const auto& set = node->slots[i];
                    std::size_t g = node->slot_base + i;
                    std::size_t j = split_index(set);
                    for (PartyId q : set) {
                        if (in_sender_cluster(q)) {
                            receipts_[0][q][g] = emissions_[node->id][0];
                            receipts_[1][q][g] = emissions_[node->id][1];
                        } else {
                            int side = ring_index_[q] < j ? 0 : 1;
                            receipts_[0][q][g] = emissions_[node->id][side];
                        }
                    }
                }
            } else {
                Payload v = node_emission(*node, inputs_[0], reader(x, 0));
                emissions_[node->id][0] = v;
                emissions_[node->id][1] = v;
                for (std::size_t i = 0; i < node->slots.size(); ++i) {
                    std::size_t g = node->slot_base + i;
                    for (PartyId q : node->slots[i]) {
                        receipts_[0][q][g] = v;
                        if (in_sender_cluster(q)) receipts_[1][q][g] = v;
                    }
                }
            }
        }
    }

    const Schedule* schedule_;
    const ChainPartition* chain_;
    Payload inputs_[2];
    std::vector<std::size_t> ring_index_;
    std::vector<std::vector<std::optional<Payload>>> receipts_[2];  // [side][party][slot]
    std::vector<std::array<Payload, 2>> emissions_;                 // [node][side]
};

}  // namespace

struct ChainAdversary::Impl {
    ChainPartition chain;
    std::size_t pair;
    const Schedule* schedule;
    std::vector<PartyId> corrupt;
    std::unique_ptr<VirtualChainExec> exec;
    Payload inputs[2];

    int side_of_slot(const std::vector<PartyId>& recipients) const {
        std::size_t j = exec->split_index(recipients);
        return pair + 1 <= j ? 0 : 1;
    }
};

ChainAdversary::ChainAdversary(const ChainPartition& chain, std::size_t pair, const Config& cfg,
                               const Schedule& schedule, const Payload& real_input)
    : impl_(std::make_unique<Impl>()) {
    chain.validate();
    if (chain.k != cfg.k || chain.h != cfg.h || chain.f != cfg.f)
        throw ValidationError("chain parameters do not match the run config");
    if (pair >= chain.adjacent_pairs())
        throw ValidationError("chain pair index " + std::to_string(pair) + " out of range (max " +
                              std::to_string(chain.adjacent_pairs() - 1) + ")");
    if (!chain.ring.empty() &&
        std::find(chain.ring[0].begin(), chain.ring[0].end(), schedule.root().ctx.sender) ==
            chain.ring[0].end())
        throw ValidationError("schedule sender must sit in the chain's cluster 0");

    impl_->chain = chain;
    impl_->pair = pair;
    impl_->schedule = &schedule;

    // the copy played by real parties gets the real input
    bool real_is_side1 = (pair + 1 == chain.ring.size());
    impl_->inputs[real_is_side1 ? 1 : 0] = real_input;
    impl_->inputs[real_is_side1 ? 0 : 1] = flipped(real_input);

    std::vector<std::uint8_t> kept(std::size_t(cfg.n), 0);
    for (PartyId p : chain.chain_cluster(pair)) kept[p] = 1;
    for (PartyId p : chain.chain_cluster(pair + 1)) kept[p] = 1;
    for (PartyId p = 0; p < PartyId(cfg.n); ++p)
        if (!kept[p]) impl_->corrupt.push_back(p);
    if (int(impl_->corrupt.size()) > cfg.f)
        throw ValidationError("compliant pair too small: corrupting " +
                              std::to_string(impl_->corrupt.size()) + " parties exceeds f=" +
                              std::to_string(cfg.f));

    impl_->exec = std::make_unique<VirtualChainExec>(schedule, impl_->chain, impl_->inputs[0],
                                                     impl_->inputs[1]);
}

ChainAdversary::~ChainAdversary() = default;

const std::vector<PartyId>& ChainAdversary::corrupt() const { return impl_->corrupt; }

std::vector<Cast> ChainAdversary::rewrite(int round, PartyId party,
                                          const std::vector<Cast>& prescribed) {
    (void)prescribed;  // replaced wholesale by the virtual execution
    const ScheduleNode* node = impl_->schedule->node_at_round(round);
    if (!node || node->ctx.sender != party) return {};
    std::vector<Cast> out;
    out.reserve(node->slots.size());
    for (std::size_t i = 0; i < node->slots.size(); ++i) {
        int side = impl_->exec->in_sender_cluster(party) ? impl_->side_of_slot(node->slots[i]) : 0;
        out.push_back(Cast{round, party, node->slots[i], impl_->exec->emission(node->id, side)});
    }
    return out;
}

std::string ChainAdversary::describe() const {
    return "{\"kind\":\"chain\",\"pair\":" + std::to_string(impl_->pair) + "}";
}

std::vector<Payload> ChainAdversary::predicted_pair_values() const {
    std::vector<Payload> values;
    for (std::size_t pos : {impl_->pair, impl_->pair + 1}) {
        int side = pos == 0 ? 0 : (pos == impl_->chain.ring.size() ? 1 : 0);
        for (PartyId p : impl_->chain.chain_cluster(pos)) values.push_back(impl_->exec->value(p, side));
    }
    return values;
}

std::unique_ptr<Strategy> chain_adversary(const ChainPartition& chain, std::size_t pair,
                                          const Config& cfg, const Schedule& schedule,
                                          const Payload& real_input) {
    return std::make_unique<ChainAdversary>(chain, pair, cfg, schedule, real_input);
}

// ---------------------------------------------------------------------------
// Bounded-exhaustive enumeration
// ---------------------------------------------------------------------------

AdversaryEnumeration::AdversaryEnumeration(const Config& cfg, const Schedule& schedule,
                                           int depth_bound, bool override_guard)
    : schedule_(&schedule), cfg_(cfg), depth_bound_(depth_bound) {
    if (!override_guard && (cfg.n > 4 || cfg.k > 2))
        throw ValidationError("exhaustive adversary space refused for n=" + std::to_string(cfg.n) +
                              ", k=" + std::to_string(cfg.k) +
                              " (guard: n <= 4 and k <= 2); pass the override to force");

    // corrupt sets of size <= f, ordered by size then lexicographically
    std::vector<PartyId> current;
    auto emit_sets = [&](auto&& self, int start, int remaining) -> void {
        if (remaining == 0) {
            corrupt_sets_.push_back(current);
            return;
        }
        for (int p = start; p < cfg_.n; ++p) {
            current.push_back(PartyId(p));
            self(self, p + 1, remaining - 1);
            current.pop_back();
        }
    };
    for (int size = 0; size <= cfg_.f; ++size) emit_sets(emit_sets, 0, size);

    for (const auto& set : corrupt_sets_) {
        unsigned long long combos = 1;
        for (std::size_t g = 0; g < schedule.total_slots(); ++g) {
            auto ref = schedule.slot(g);
            if (!std::binary_search(set.begin(), set.end(), ref.node->ctx.sender)) continue;
            if (depth_bound_ >= 0 && ref.node->ctx.depth > depth_bound_) continue;
            if (ref.node->payload_len > 48)
                throw ValidationError("exhaustive adversary: payload too wide");
            combos *= (unsigned long long)(1) << ref.node->payload_len;
        }
        total_ += combos;
    }
    load_set();
}

void AdversaryEnumeration::load_set() {
    slots_.clear();
    digits_.clear();
    if (set_index_ >= corrupt_sets_.size()) return;
    const auto& set = corrupt_sets_[set_index_];
    for (std::size_t g = 0; g < schedule_->total_slots(); ++g) {
        auto ref = schedule_->slot(g);
        if (!std::binary_search(set.begin(), set.end(), ref.node->ctx.sender)) continue;
        if (depth_bound_ >= 0 && ref.node->ctx.depth > depth_bound_) continue;
        slots_.push_back(g);
    }
    digits_.assign(slots_.size(), 0);
    fresh_set_ = true;
}

std::unique_ptr<Strategy> AdversaryEnumeration::next() {
    while (set_index_ < corrupt_sets_.size()) {
        if (!fresh_set_) {
            // odometer step over the payload assignment
            std::size_t i = 0;
            for (; i < slots_.size(); ++i) {
                std::size_t len = schedule_->slot(slots_[i]).node->payload_len;
                if (++digits_[i] < (std::uint64_t(1) << len)) break;
                digits_[i] = 0;
            }
            if (i == slots_.size()) {
                ++set_index_;
                load_set();
                continue;
            }
        }
        fresh_set_ = false;
        auto strategy = std::make_unique<ScriptedStrategy>(corrupt_sets_[set_index_]);
        for (std::size_t i = 0; i < slots_.size(); ++i) {
            auto ref = schedule_->slot(slots_[i]);
            strategy->set_slot(ref.node->round, ref.node->slots[ref.index],
                               payload_from_index(digits_[i], ref.node->payload_len));
        }
        ++emitted_;
        return strategy;
    }
    return nullptr;
}

}  // namespace kcast
