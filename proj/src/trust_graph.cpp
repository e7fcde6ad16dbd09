#include "kcast/trust_graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace kcast {

std::string TrustNode::label() const {
    if (kind == Kind::Recipient) return "R" + std::to_string(party);
    return "S" + value.to_hex() + "#" + std::to_string(member);
}

TrustGraph::TrustGraph(std::vector<TrustNode> nodes, int h)
    : nodes_(std::move(nodes)), adj_(nodes_.size(), std::vector<std::uint8_t>(nodes_.size(), 0)), h_(h) {}

void TrustGraph::set_edge(std::size_t a, std::size_t b, bool present) {
    if (a == b) throw ValidationError("trust graph: self loop");
    adj_[a][b] = adj_[b][a] = present ? 1 : 0;
}

std::size_t TrustGraph::edge_count() const {
    std::size_t c = 0;
    for (std::size_t a = 0; a < nodes_.size(); ++a)
        for (std::size_t b = a + 1; b < nodes_.size(); ++b) c += adj_[a][b];
    return c;
}

TrustGraph TrustGraph::build(const std::vector<Report>& agreed, const Config& cfg) {
    std::vector<const Report*> by_owner;
    {
        std::set<PartyId> owners;
        for (const auto& r : agreed) {
            if (!owners.insert(r.owner).second)
                throw ValidationError("build_trust_graph: duplicate report owner " +
                                      std::to_string(r.owner));
        }
        for (const auto& r : agreed) by_owner.push_back(&r);
        std::sort(by_owner.begin(), by_owner.end(),
                  [](const Report* a, const Report* b) { return a->owner < b->owner; });
    }

    // one cluster of 1+d nodes per distinct uniform value reported
    std::map<Payload, std::vector<PartyId>> uniform_by_value;
    for (const Report* r : by_owner) {
        if (auto v = uniform_value(*r)) uniform_by_value[*v].push_back(r->owner);
    }

    const int cluster_size = 1 + cfg.d();
    std::vector<TrustNode> nodes;
    for (const Report* r : by_owner)
        nodes.push_back(TrustNode{TrustNode::Kind::Recipient, r->owner, {}, 0});
    for (const auto& [value, owners] : uniform_by_value)
        for (int j = 0; j < cluster_size; ++j)
            nodes.push_back(TrustNode{TrustNode::Kind::Cluster, 0, value, j});

    TrustGraph g(std::move(nodes), cfg.h);

    const std::size_t nr = by_owner.size();
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = i + 1; j < nr; ++j)
            if (consistent(*by_owner[i], *by_owner[j])) g.set_edge(i, j, true);

    std::size_t base = nr;
    for (const auto& [value, owners] : uniform_by_value) {
        for (int a = 0; a < cluster_size; ++a)
            for (int b = a + 1; b < cluster_size; ++b)
                g.set_edge(base + a, base + b, true);
        for (PartyId owner : owners) {
            auto rn = g.recipient_node(owner);
            for (int a = 0; a < cluster_size; ++a) g.set_edge(base + a, *rn, true);
        }
        base += cluster_size;
    }
    return g;
}

bool TrustGraph::has_bistar(std::size_t a, std::size_t b) const {
    if (!adj_[a][b]) return false;
    int common = 0;
    for (std::size_t c = 0; c < nodes_.size(); ++c)
        if (c != a && c != b && adj_[a][c] && adj_[b][c]) ++common;
    return common >= h_ - 2;
}

namespace {

// Repeatedly remove edges in no bi-star, scanning in the given order, until
// a full pass removes nothing.
void prune_in_place(TrustGraph& g, std::vector<std::pair<std::size_t, std::size_t>> order) {
    bool removed = true;
    while (removed) {
        removed = false;
        for (auto [a, b] : order) {
            if (g.edge(a, b) && !g.has_bistar(a, b)) {
                g.set_edge(a, b, false);
                removed = true;
            }
        }
    }
}

std::vector<std::pair<std::size_t, std::size_t>> all_pairs(const TrustGraph& g) {
    std::vector<std::pair<std::size_t, std::size_t>> order;
    for (std::size_t a = 0; a < g.node_count(); ++a)
        for (std::size_t b = a + 1; b < g.node_count(); ++b) order.emplace_back(a, b);
    return order;
}

}  // namespace

TrustGraph TrustGraph::pruned() const {
    TrustGraph g = *this;
    prune_in_place(g, all_pairs(g));
    return g;
}

TrustGraph TrustGraph::pruned_shuffled(std::uint64_t seed) const {
    TrustGraph g = *this;
    auto order = all_pairs(g);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    prune_in_place(g, std::move(order));
    return g;
}

bool TrustGraph::is_pruning_fixpoint() const {
    for (std::size_t a = 0; a < nodes_.size(); ++a)
        for (std::size_t b = a + 1; b < nodes_.size(); ++b)
            if (adj_[a][b] && !has_bistar(a, b)) return false;
    return true;
}

std::vector<std::size_t> TrustGraph::components() const {
    std::vector<std::size_t> comp(nodes_.size(), SIZE_MAX);
    std::size_t next = 0;
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < nodes_.size(); ++s) {
        if (comp[s] != SIZE_MAX) continue;
        comp[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < nodes_.size(); ++v)
                if (adj_[u][v] && comp[v] == SIZE_MAX) {
                    comp[v] = next;
                    stack.push_back(v);
                }
        }
        ++next;
    }
    return comp;
}

std::optional<std::size_t> TrustGraph::recipient_node(PartyId p) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (nodes_[i].kind == TrustNode::Kind::Recipient && nodes_[i].party == p) return i;
    return std::nullopt;
}

TrustGraph::Decision TrustGraph::decide(PartyId self, std::size_t default_len) const {
    auto sn = recipient_node(self);
    if (!sn) throw ValidationError("decide: party " + std::to_string(self) + " not a recipient node");
    auto comp = components();
    std::set<Payload> reachable;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (nodes_[i].kind == TrustNode::Kind::Cluster && comp[i] == comp[*sn])
            reachable.insert(nodes_[i].value);
    Decision d;
    if (reachable.size() == 1) {
        d.value = *reachable.begin();
    } else {
        d.value = Payload::zeros(default_len);
        d.multi_reach = reachable.size() > 1;
    }
    return d;
}

bool TrustGraph::clusters_separated() const {
    auto comp = components();
    std::map<std::size_t, Payload> seen;  // component -> cluster value
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].kind != TrustNode::Kind::Cluster) continue;
        auto [it, inserted] = seen.emplace(comp[i], nodes_[i].value);
        if (!inserted && it->second != nodes_[i].value) return false;
    }
    return true;
}

std::string TrustGraph::dump() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        os << nodes_[i].label() << ":";
        for (std::size_t j = 0; j < nodes_.size(); ++j)
            if (adj_[i][j]) os << " " << nodes_[j].label();
        os << "\n";
    }
    return os.str();
}

}  // namespace kcast
