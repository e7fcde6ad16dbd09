#pragma once

#include <map>

#include "kcast/engine.hpp"
#include "kcast/schedule.hpp"
#include "kcast/trust_graph.hpp"

namespace kcast {

/// Reads the payload a party holds for a global slot, default-filled:
/// absent (or wrong-length) receipts come back as all-zeros of the slot's
/// scheduled length.
using SlotReader = std::function<Payload(std::size_t global_slot)>;

struct EvalStats {
    int multi_reach = 0;   // decide() saw paths to several clusters
    int cluster_path = 0;  // pruned graph joined two distinct clusters
};

/// Memoized agreed values, keyed by (node id, evaluating party).
using EvalMemo = std::map<std::pair<std::size_t, PartyId>, Payload>;

/// The payload the node's sender distributes: the run input at the root,
/// otherwise the serialization of its report from the parent level.
Payload node_emission(const ScheduleNode& node, const Payload& root_input,
                      const SlotReader& read);

/// The report `self` formed from the node's distribution (default-filled).
Report report_of(const ScheduleNode& node, PartyId self, const SlotReader& read);

/// The agreed value of the node's broadcast from `self`'s point of view:
/// direct receipt at a base node, otherwise trust-graph decision over the
/// agreed reports (own report for self, recursive outputs for the rest).
Payload node_output(const ScheduleNode& node, PartyId self, const SlotReader& read,
                    EvalMemo& memo, EvalStats* stats);

/// Per-party log of scheduled-slot receipts; first delivery wins.
class ReceiptStore {
public:
    ReceiptStore(const Schedule& schedule, int n);
    void record(PartyId recipient, std::size_t slot, const Payload& payload);
    std::optional<Payload> raw(PartyId recipient, std::size_t slot) const;
    SlotReader reader(PartyId recipient) const;  // default-filled view

private:
    const Schedule* schedule_;
    std::vector<std::vector<std::optional<Payload>>> slots_;  // [party][slot]
};

struct BroadcastOutcome {
    Payload sender_value;  // the sender's input
    std::vector<std::pair<PartyId, Payload>> outputs;  // every recipient, ascending id
    std::vector<PartyId> corrupt;
    EvalStats stats;
    int guarantee_violations = 0;  // sub-agreements that failed inside their budget
    long long cast_events = 0;
    int rounds = 0;

    std::optional<Payload> output_of(PartyId p) const;
    bool is_faulty(PartyId p) const;
};

/// Runs the full protocol through the round engine under `strategy`.
/// Refuses (ValidationError) if the strategy corrupts more than f parties.
BroadcastOutcome broadcast_P(const Config& cfg, PartyId sender, const Payload& input,
                             Strategy& strategy, Transcript* transcript = nullptr);

/// Same, with a prebuilt schedule (sender and payload length come from it).
BroadcastOutcome broadcast_P_with(const Schedule& schedule, const Payload& input,
                                  Strategy& strategy, Transcript* transcript = nullptr);

/// Most frequent value; ties go to the lexicographically greatest value.
Payload majority_value(const std::vector<Payload>& values);

struct ReductionResult {
    std::vector<PartyId> compliant;
    std::vector<std::pair<PartyId, Payload>> outputs;  // compliant parties, ascending
};

/// Consensus via a broadcast primitive: each party broadcasts its value,
/// everyone outputs the majority. Refuses (ValidationError) unless h > f.
/// The ideal primitive delivers each faulty party's announced value (absent
/// entries default to zeros) identically to everyone.
ReductionResult consensus_from_broadcast_ideal(const Config& cfg,
                                               const std::vector<Payload>& inputs,
                                               const std::vector<PartyId>& corrupt,
                                               const std::map<PartyId, Payload>& announced);

/// One strategy per sub-broadcast; implementations must reuse one corrupt set.
using StrategyFactory =
    std::function<std::unique_ptr<Strategy>(PartyId subrun_sender, const Schedule& schedule)>;

/// Consensus built on broadcast_P itself: n sequential sub-broadcasts, one
/// per sender, then the per-party majority.
ReductionResult consensus_from_broadcast_kcast(const Config& cfg,
                                               const std::vector<Payload>& inputs,
                                               const StrategyFactory& factory);

/// Broadcast via a consensus primitive: the sender distributes its input
/// over the k-sets, then everyone runs consensus on the values received
/// (a recipient's value is its uniform report value, or zeros). The ideal
/// consensus outputs the majority of compliant inputs.
ReductionResult broadcast_from_consensus_ideal(const Config& cfg, const Payload& input,
                                               Strategy& strategy);

}  // namespace kcast
