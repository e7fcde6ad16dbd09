#include "kcast/schedule.hpp"

#include <algorithm>

namespace kcast {

std::vector<std::size_t> ScheduleNode::slots_containing(PartyId p) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < slots.size(); ++i)
        if (std::binary_search(slots[i].begin(), slots[i].end(), p))
            out.push_back(slot_base + i);
    return out;
}

std::optional<std::size_t> ScheduleNode::slot_of(const std::vector<PartyId>& recipients_set) const {
    auto it = std::lower_bound(slots.begin(), slots.end(), recipients_set);
    if (it == slots.end() || *it != recipients_set) return std::nullopt;
    return slot_base + std::size_t(it - slots.begin());
}

namespace {

std::unique_ptr<ScheduleNode> build_node(std::vector<PartyId> participants, PartyId sender,
                                         std::size_t payload_len, int depth, int round,
                                         const Config& top, const ScheduleNode* parent,
                                         std::size_t& next_id, std::size_t& next_slot,
                                         std::vector<const ScheduleNode*>& by_id,
                                         std::vector<const ScheduleNode*>& by_round) {
    auto node = std::make_unique<ScheduleNode>();
    node->ctx.participants = participants;
    node->ctx.sender = sender;
    node->ctx.cfg = Config(int(participants.size()), top.k, top.h, top.f);
    node->ctx.depth = depth;
    node->parent = parent;
    node->id = next_id++;
    node->round = round;
    node->payload_len = payload_len;

    node->recipients.reserve(participants.size() - 1);
    for (PartyId p : participants)
        if (p != sender) node->recipients.push_back(p);

    const int m = int(node->recipients.size());
    node->base = m <= top.k;
    if (node->base) {
        // one cast reaches every recipient (width m, which is k except
        // possibly at the top level when n-1 < k)
        node->slots.push_back(node->recipients);
    } else {
        node->slots = ksubsets(node->recipients, top.k);
    }
    node->slot_base = next_slot;
    next_slot += node->slots.size();

    by_id.push_back(node.get());
    by_round.push_back(node.get());

    node->total_rounds = 1;
    if (!node->base) {
        for (PartyId i : node->recipients) {
            std::size_t child_len = node->slots_containing(i).size() * payload_len;
            auto child = build_node(node->recipients, i, child_len, depth + 1,
                                    round + node->total_rounds, top, node.get(), next_id,
                                    next_slot, by_id, by_round);
            node->total_rounds += child->total_rounds;
            node->children.push_back(std::move(child));
        }
    }
    return node;
}

}  // namespace

Schedule::Schedule(const Config& cfg, PartyId sender, std::size_t top_payload_len) {
    if (cfg.d() != 0) throw ValidationError("schedule: top level requires n = h+f");
    std::vector<PartyId> participants(std::size_t(cfg.n));
    for (int i = 0; i < cfg.n; ++i) participants[std::size_t(i)] = PartyId(i);
    if (sender >= PartyId(cfg.n)) throw ValidationError("schedule: sender out of range");
    std::size_t next_id = 0, next_slot = 0;
    root_ = build_node(std::move(participants), sender, top_payload_len, 0, 0, cfg, nullptr,
                       next_id, next_slot, by_id_, by_round_);
    total_slots_ = next_slot;
    std::sort(by_round_.begin(), by_round_.end(),
              [](const ScheduleNode* a, const ScheduleNode* b) { return a->round < b->round; });
}

const ScheduleNode* Schedule::node_at_round(int round) const {
    auto it = std::partition_point(by_round_.begin(), by_round_.end(),
                                   [round](const ScheduleNode* n) { return n->round < round; });
    if (it == by_round_.end() || (*it)->round != round) return nullptr;
    return *it;
}

Schedule::SlotRef Schedule::slot(std::size_t global_index) const {
    auto it = std::partition_point(
        by_id_.begin(), by_id_.end(),
        [global_index](const ScheduleNode* n) { return n->slot_base + n->slots.size() <= global_index; });
    // by_id_ is DFS preorder, so slot_base is increasing over it
    const ScheduleNode* n = *it;
    return SlotRef{n, global_index - n->slot_base};
}

std::vector<std::size_t> Schedule::sender_slots(PartyId p) const {
    std::vector<std::size_t> out;
    for (const ScheduleNode* n : by_id_)
        if (n->ctx.sender == p)
            for (std::size_t i = 0; i < n->slots.size(); ++i) out.push_back(n->slot_base + i);
    std::sort(out.begin(), out.end());
    return out;
}

int Schedule::max_depth() const {
    int d = 0;
    for (const ScheduleNode* n : by_id_) d = std::max(d, n->ctx.depth);
    return d;
}

namespace {
long long choose(int n, int r) {
    if (r < 0 || r > n) return 0;
    long long c = 1;
    for (int i = 0; i < r; ++i) c = c * (n - i) / (i + 1);
    return c;
}
}  // namespace

long long predicted_cast_count(int n, int k) {
    int m = n - 1;
    if (m <= k) return 1;
    return choose(m, k) + m * predicted_cast_count(n - 1, k);
}

long long predicted_rounds(int n, int k) {
    int m = n - 1;
    if (m <= k) return 1;
    return 1 + m * predicted_rounds(n - 1, k);
}

}  // namespace kcast
