#pragma once

#include <memory>

#include "kcast/engine.hpp"
#include "kcast/schedule.hpp"

namespace kcast {

/// A (k,h)-ring over the h+f parties: k+2 or more disjoint clusters in a
/// cycle, any two adjacent clusters totaling at least h parties, with the
/// sender in cluster 0. The chain view opens the ring at the sender's
/// cluster, duplicating it into S0 (front) and S1 (back).
struct ChainPartition {
    int k = 0, h = 0, f = 0;
    std::vector<std::vector<PartyId>> ring;  // ring[0] holds the sender

    std::size_t chain_clusters() const { return ring.size() + 1; }
    /// Chain position i in [0, ring.size()]: 0 -> S0, last -> S1 (both
    /// ring[0]), middles -> ring[i].
    const std::vector<PartyId>& chain_cluster(std::size_t i) const;
    std::size_t adjacent_pairs() const { return ring.size(); }

    void validate() const;  // throws ValidationError naming the violated bound
};

/// True iff the parties suffice for a (k,h)-ring: 2f >= kh.
bool ring_feasible(int k, int h, int f);

/// Deterministic ring layout: cluster sizes alternate ceil(h/2)/floor(h/2),
/// surplus parties spread left to right. Throws when 2f < kh.
ChainPartition build_chain(int k, int h, int f);

std::unique_ptr<Strategy> null_strategy();

/// Corrupts the f highest party ids and omits all their casts.
std::unique_ptr<Strategy> silent_strategy(const Config& cfg);

/// Seeded uniform choice (omit, or any payload value) at every scheduled
/// cast of a random corrupt set of size <= f.
std::unique_ptr<Strategy> random_strategy(const Config& cfg, const Schedule& schedule,
                                          std::uint64_t seed);

/// Fixed corrupt set, per-slot payload overrides (nullopt = omit), plus
/// optional extra unscheduled casts. Used by tests and replayable configs.
class ScriptedStrategy : public Strategy {
public:
    ScriptedStrategy(std::vector<PartyId> corrupt);
    void set_slot(int round, std::vector<PartyId> recipients, std::optional<Payload> payload);
    void add_extra(Cast cast);

    const std::vector<PartyId>& corrupt() const override { return corrupt_; }
    std::vector<Cast> rewrite(int round, PartyId party,
                              const std::vector<Cast>& prescribed) override;
    std::string describe() const override;

private:
    std::vector<PartyId> corrupt_;
    std::map<std::pair<int, std::vector<PartyId>>, std::optional<Payload>> overrides_;
    std::vector<Cast> extras_;
};

/// The lower-bound adversary: keeps chain clusters (pair, pair+1) compliant,
/// corrupts everyone else, and replays a virtual execution in which both
/// copies of the sender cluster run the protocol with opposite inputs. Each
/// cast from the sender cluster misses at least one middle cluster; the
/// leftmost such cluster splits the chain, and each side receives its own
/// copy's traffic.
class ChainAdversary : public Strategy {
public:
    ChainAdversary(const ChainPartition& chain, std::size_t pair, const Config& cfg,
                   const Schedule& schedule, const Payload& real_input);
    ~ChainAdversary() override;

    const std::vector<PartyId>& corrupt() const override;
    std::vector<Cast> rewrite(int round, PartyId party,
                              const std::vector<Cast>& prescribed) override;
    std::string describe() const override;

    /// Values the kept-compliant pair's members hold in the virtual
    /// execution; the real run reproduces them.
    std::vector<Payload> predicted_pair_values() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::unique_ptr<Strategy> chain_adversary(const ChainPartition& chain, std::size_t pair,
                                          const Config& cfg, const Schedule& schedule,
                                          const Payload& real_input);

/// Bounded-exhaustive stream over deterministic strategies: every corrupt
/// set of size <= f crossed with every payload assignment to the set's
/// scheduled casts (nodes deeper than depth_bound keep honest payloads).
/// Guarded to n <= 4 and k <= 2 unless overridden.
class AdversaryEnumeration {
public:
    AdversaryEnumeration(const Config& cfg, const Schedule& schedule, int depth_bound = -1,
                         bool override_guard = false);

    /// Next strategy in deterministic order, or nullptr when exhausted.
    std::unique_ptr<Strategy> next();
    unsigned long long total_count() const { return total_; }

private:
    const Schedule* schedule_;
    Config cfg_;
    int depth_bound_;
    std::vector<std::vector<PartyId>> corrupt_sets_;
    std::size_t set_index_ = 0;
    std::vector<std::size_t> slots_;       // decision slots of the current set
    std::vector<std::uint64_t> digits_;    // current payload assignment
    bool fresh_set_ = true;
    unsigned long long total_ = 0;
    unsigned long long emitted_ = 0;

    void load_set();
};

}  // namespace kcast
