#pragma once

#include <memory>

#include "kcast/subsets.hpp"

namespace kcast {

/// One level of the recursive broadcast: `sender` distributes a payload
/// over the k-sets of the other participants.
struct LevelContext {
    std::vector<PartyId> participants;  // sorted, includes sender
    PartyId sender = 0;
    Config cfg;  // cfg.n == participants.size(); shared (k,h,f)
    int depth = 0;
};

/// A node of the deterministic schedule tree. Exactly one node distributes
/// per round; recursive sub-broadcasts run sequentially after their parent.
struct ScheduleNode {
    LevelContext ctx;
    const ScheduleNode* parent = nullptr;
    std::size_t id = 0;  // DFS preorder
    int round = 0;       // the node's distribution round
    int total_rounds = 1;
    bool base = false;               // m <= k: single cast, direct output
    std::size_t payload_len = 0;     // bits distributed at this node
    std::vector<PartyId> recipients; // participants minus sender
    std::vector<std::vector<PartyId>> slots;  // recipient sets, canonical order
    std::size_t slot_base = 0;                // global index of slots[0]
    std::vector<std::unique_ptr<ScheduleNode>> children;  // one per recipient

    std::size_t recipient_count() const { return recipients.size(); }
    /// Global slot indices whose recipient set contains p, canonical order.
    std::vector<std::size_t> slots_containing(PartyId p) const;
    /// Global slot index for a recipient set, if it is one of this node's.
    std::optional<std::size_t> slot_of(const std::vector<PartyId>& recipients_set) const;
};

/// Full schedule of broadcast_P for a top-level config: who distributes
/// what width of payload to which k-sets at which round.
class Schedule {
public:
    Schedule(const Config& cfg, PartyId sender, std::size_t top_payload_len);

    const ScheduleNode& root() const { return *root_; }
    const std::vector<const ScheduleNode*>& nodes() const { return by_id_; }
    const ScheduleNode* node_at_round(int round) const;
    int total_rounds() const { return root_->total_rounds; }
    std::size_t total_slots() const { return total_slots_; }
    int max_depth() const;

    struct SlotRef {
        const ScheduleNode* node;
        std::size_t index;  // into node->slots
    };
    SlotRef slot(std::size_t global_index) const;

    /// Global slots where p is the scheduled sender, ascending.
    std::vector<std::size_t> sender_slots(PartyId p) const;

private:
    std::unique_ptr<ScheduleNode> root_;
    std::vector<const ScheduleNode*> by_id_;
    std::vector<const ScheduleNode*> by_round_;
    std::size_t total_slots_ = 0;
};

/// Scheduled cast count: C(n-1,k) at the top plus (n-1) recursive levels.
long long predicted_cast_count(int n, int k);
long long predicted_rounds(int n, int k);

}  // namespace kcast
