#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kcast/subsets.hpp"

namespace kcast {

/// A trust-graph node: either a recipient of the current level, or one of
/// the 1+d members of a sender cluster asserting a particular value.
struct TrustNode {
    enum class Kind { Recipient, Cluster };
    Kind kind = Kind::Recipient;
    PartyId party = 0;  // Recipient
    Payload value;      // Cluster
    int member = 0;     // Cluster: 0..d

    std::string label() const;  // "R<i>" or "S<valuehex>#<j>"
};

/// Graph on recipients plus sender clusters. Edges between recipients mean
/// their reports are consistent; each cluster is a clique joined to every
/// recipient reporting its value uniformly; clusters never interconnect.
class TrustGraph {
public:
    TrustGraph(std::vector<TrustNode> nodes, int h);

    /// Builds the graph from the agreed reports of one level. `agreed` holds
    /// one report per recipient (distinct owners); cfg supplies h and d.
    static TrustGraph build(const std::vector<Report>& agreed, const Config& cfg);

    int h() const { return h_; }
    std::size_t node_count() const { return nodes_.size(); }
    const TrustNode& node(std::size_t i) const { return nodes_[i]; }
    bool edge(std::size_t a, std::size_t b) const { return adj_[a][b] != 0; }
    void set_edge(std::size_t a, std::size_t b, bool present);
    std::size_t edge_count() const;

    /// True iff (a,b) is an edge and a,b share at least h-2 common
    /// neighbors: together they span an h-node star with two centers.
    bool has_bistar(std::size_t a, std::size_t b) const;

    /// Removes edges in no bi-star until none are left. The fixpoint is
    /// order-independent; `seed` shuffles the removal order to exercise that.
    TrustGraph pruned() const;
    TrustGraph pruned_shuffled(std::uint64_t seed) const;
    bool is_pruning_fixpoint() const;

    struct Decision {
        Payload value;
        bool multi_reach = false;  // paths to more than one cluster
    };
    /// Output value for recipient `self` on a pruned graph: the value of the
    /// unique reachable sender cluster, or all-zeros of `default_len` when
    /// none (or, anomalously, several) are reachable.
    Decision decide(PartyId self, std::size_t default_len) const;

    /// True iff no path joins two clusters with different values.
    bool clusters_separated() const;

    std::optional<std::size_t> recipient_node(PartyId p) const;

    /// Deterministic adjacency-list dump, one node per line.
    std::string dump() const;

private:
    std::vector<std::size_t> components() const;

    std::vector<TrustNode> nodes_;
    std::vector<std::vector<std::uint8_t>> adj_;
    int h_;
};

}  // namespace kcast
