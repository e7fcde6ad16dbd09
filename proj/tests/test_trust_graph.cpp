#include <doctest.h>

#include <random>

#include "kcast/trust_graph.hpp"

using namespace kcast;

namespace {

Payload bits(std::initializer_list<int> v) {
    Payload p;
    for (int b : v) p.bits.push_back(std::uint8_t(b));
    return p;
}

TrustGraph recipients_graph(int n, int h) {
    std::vector<TrustNode> nodes;
    for (int i = 0; i < n; ++i)
        nodes.push_back(TrustNode{TrustNode::Kind::Recipient, PartyId(i), {}, 0});
    return TrustGraph(std::move(nodes), h);
}

TrustGraph complete_graph(int n, int h) {
    TrustGraph g = recipients_graph(n, h);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) g.set_edge(std::size_t(a), std::size_t(b), true);
    return g;
}

// oracle for bi-star: explicit common-neighborhood intersection
int common_neighbors(const TrustGraph& g, std::size_t a, std::size_t b) {
    int count = 0;
    for (std::size_t c = 0; c < g.node_count(); ++c) {
        if (c == a || c == b) continue;
        if (g.edge(a, c) && g.edge(b, c)) ++count;
    }
    return count;
}

std::set<std::pair<std::size_t, std::size_t>> edge_set(const TrustGraph& g) {
    std::set<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t a = 0; a < g.node_count(); ++a)
        for (std::size_t b = a + 1; b < g.node_count(); ++b)
            if (g.edge(a, b)) edges.insert({a, b});
    return edges;
}

TrustGraph random_graph(std::mt19937& rng, int max_nodes = 12) {
    int n = 3 + int(rng() % std::uint32_t(max_nodes - 2));
    int h = 2 + int(rng() % 4);
    TrustGraph g = recipients_graph(n, h);
    int density = 20 + int(rng() % 70);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (int(rng() % 100) < density) g.set_edge(std::size_t(a), std::size_t(b), true);
    return g;
}

}  // namespace

TEST_CASE("bi-star membership") {
    SUBCASE("h=2: any existing edge is its own bi-star") {
        TrustGraph g = recipients_graph(4, 2);
        g.set_edge(0, 1, true);
        CHECK(g.has_bistar(0, 1));
        CHECK(!g.has_bistar(0, 2));  // no edge, no bi-star
    }
    SUBCASE("complete graph on h nodes: every edge passes") {
        for (int h = 2; h <= 6; ++h) {
            TrustGraph g = complete_graph(h, h);
            for (int a = 0; a < h; ++a)
                for (int b = a + 1; b < h; ++b)
                    CHECK(g.has_bistar(std::size_t(a), std::size_t(b)));
        }
    }
    SUBCASE("5-cycle with h=3: adjacent nodes share no neighbor") {
        TrustGraph g = recipients_graph(5, 3);
        for (int i = 0; i < 5; ++i) g.set_edge(std::size_t(i), std::size_t((i + 1) % 5), true);
        for (int i = 0; i < 5; ++i) {
            std::size_t a = std::size_t(i), b = std::size_t((i + 1) % 5);
            CHECK(common_neighbors(g, a, b) == 0);
            CHECK(!g.has_bistar(a, b));
        }
    }
}

TEST_CASE("pruning") {
    SUBCASE("complete graph on h nodes is a fixpoint") {
        TrustGraph g = complete_graph(4, 4);
        TrustGraph p = g.pruned();
        CHECK(edge_set(p) == edge_set(g));
        CHECK(p.is_pruning_fixpoint());
    }
    SUBCASE("5-cycle with h=3 collapses entirely") {
        TrustGraph g = recipients_graph(5, 3);
        for (int i = 0; i < 5; ++i) g.set_edge(std::size_t(i), std::size_t((i + 1) % 5), true);
        CHECK(g.pruned().edge_count() == 0);
    }
    SUBCASE("h-clique survives, pendant edge goes") {
        TrustGraph g = complete_graph(4, 3);  // nodes 0..3, clique on 0..2
        g.set_edge(0, 3, false);
        g.set_edge(1, 3, false);
        // now 3 hangs off node 2 only
        TrustGraph p = g.pruned();
        CHECK(p.edge(0, 1));
        CHECK(p.edge(0, 2));
        CHECK(p.edge(1, 2));
        CHECK(!p.edge(2, 3));
    }
}

TEST_CASE("pruning confluence and soundness on random graphs") {
    std::mt19937 rng(20260810);
    for (int trial = 0; trial < 40; ++trial) {
        TrustGraph g = random_graph(rng);
        TrustGraph canonical = g.pruned();
        CHECK(canonical.is_pruning_fixpoint());
        auto canonical_edges = edge_set(canonical);
        auto original_edges = edge_set(g);
        // never adds edges, never drops nodes
        for (const auto& e : canonical_edges) CHECK(original_edges.count(e));
        CHECK(canonical.node_count() == g.node_count());
        for (int order = 0; order < 10; ++order)
            CHECK(edge_set(g.pruned_shuffled(std::uint64_t(order))) == canonical_edges);
    }
}

TEST_CASE("planted clique of h nodes is untouched") {
    std::mt19937 rng(777);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 8;
        int h = 3 + int(rng() % 3);
        TrustGraph g = recipients_graph(n, h);
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (rng() % 100 < 30) g.set_edge(std::size_t(a), std::size_t(b), true);
        // plant the clique on nodes 0..h-1
        for (int a = 0; a < h; ++a)
            for (int b = a + 1; b < h; ++b) g.set_edge(std::size_t(a), std::size_t(b), true);
        TrustGraph p = g.pruned();
        for (int a = 0; a < h; ++a)
            for (int b = a + 1; b < h; ++b) CHECK(p.edge(std::size_t(a), std::size_t(b)));
    }
}

TEST_CASE("build_trust_graph from reports") {
    SUBCASE("compliant sender, no faults: complete graph plus one cluster") {
        // n=4, k=2, sender 0, recipients 1..3, everyone saw [1] everywhere
        Config cfg(4, 2, 4, 0);  // d=0
        std::vector<Report> reports;
        KSetIndex idx({1, 2, 3}, 2);
        for (PartyId p = 1; p <= 3; ++p) {
            Report r;
            r.owner = p;
            for (std::size_t pos : idx.containing(p)) {
                r.sets.push_back(idx.sets()[pos]);
                r.values.push_back(bits({1}));
            }
            reports.push_back(std::move(r));
        }
        TrustGraph g = TrustGraph::build(reports, cfg);
        REQUIRE(g.node_count() == 4);  // 3 recipients + singleton cluster (d=0)
        CHECK(g.node(3).kind == TrustNode::Kind::Cluster);
        CHECK(g.node(3).value == bits({1}));
        for (std::size_t a = 0; a < 4; ++a)
            for (std::size_t b = a + 1; b < 4; ++b) CHECK(g.edge(a, b));
        CHECK(g.dump() == "R1: R2 R3 S1#0\n"
                          "R2: R1 R3 S1#0\n"
                          "R3: R1 R2 S1#0\n"
                          "S1#0: R1 R2 R3\n");
    }

    SUBCASE("d=1 clusters have two interconnected members") {
        Config cfg(3, 2, 3, 1);  // d = 3+1-3 = 1
        Report a{1, {{1, 2}}, {bits({0})}};
        Report b{2, {{1, 2}}, {bits({0})}};
        TrustGraph g = TrustGraph::build({a, b}, cfg);
        REQUIRE(g.node_count() == 4);  // 2 recipients + 2 cluster members
        CHECK(g.edge(2, 3));           // cluster is a clique
        CHECK(g.edge(0, 2));
        CHECK(g.edge(0, 3));  // every member joins the uniform recipients
    }

    SUBCASE("split reports give two separated clusters") {
        // k=2 over recipients {1,2,3}: 1 uniform [0], 2 uniform [1], 3 mixed
        Config cfg(4, 2, 3, 1);  // d=0
        Report m1{1, {{1, 2}, {1, 3}}, {bits({0}), bits({0})}};
        Report m2{2, {{1, 2}, {2, 3}}, {bits({1}), bits({1})}};
        Report m3{3, {{1, 3}, {2, 3}}, {bits({0}), bits({1})}};
        TrustGraph g = TrustGraph::build({m1, m2, m3}, cfg);
        // nodes: R1 R2 R3 S0#0 S1#0
        REQUIRE(g.node_count() == 5);
        CHECK(!g.edge(0, 1));  // R1-R2 disagree on {1,2}
        CHECK(g.edge(0, 2));   // R1-R3 agree on {1,3}
        CHECK(g.edge(1, 2));   // R2-R3 agree on {2,3}
        CHECK(g.edge(0, 3));   // R1 - S[0]
        CHECK(g.edge(1, 4));   // R2 - S[1]
        CHECK(!g.edge(3, 4));  // clusters never interconnect
    }

    SUBCASE("duplicate owners are rejected") {
        Config cfg(3, 1, 3, 0);
        Report a{1, {{1}}, {bits({0})}};
        Report b{1, {{1}}, {bits({0})}};
        CHECK_THROWS_AS(TrustGraph::build({a, b}, cfg), ValidationError);
    }
}

TEST_CASE("decide by cluster reachability") {
    SUBCASE("adjacent to the input cluster at distance one") {
        Config cfg(4, 2, 4, 0);
        KSetIndex idx({1, 2, 3}, 2);
        std::vector<Report> reports;
        for (PartyId p = 1; p <= 3; ++p) {
            Report r;
            r.owner = p;
            for (std::size_t pos : idx.containing(p)) {
                r.sets.push_back(idx.sets()[pos]);
                r.values.push_back(bits({1}));
            }
            reports.push_back(std::move(r));
        }
        TrustGraph g = TrustGraph::build(reports, cfg).pruned();
        auto d = g.decide(1, 1);
        CHECK(d.value == bits({1}));
        CHECK(!d.multi_reach);
        CHECK(g.clusters_separated());
    }

    SUBCASE("isolated recipient outputs zeros") {
        TrustGraph g = recipients_graph(3, 2);
        auto d = g.decide(1, 1);
        CHECK(d.value == bits({0}));
        CHECK(!d.multi_reach);
    }

    SUBCASE("paths to two clusters flag the anomaly and yield zeros") {
        // hand-built: R0 joined to both S[0] and S[1]; h=2 keeps all edges
        std::vector<TrustNode> nodes{
            TrustNode{TrustNode::Kind::Recipient, 0, {}, 0},
            TrustNode{TrustNode::Kind::Cluster, 0, bits({0}), 0},
            TrustNode{TrustNode::Kind::Cluster, 0, bits({1}), 0},
        };
        TrustGraph g(std::move(nodes), 2);
        g.set_edge(0, 1, true);
        g.set_edge(0, 2, true);
        TrustGraph p = g.pruned();
        REQUIRE(p.is_pruning_fixpoint());
        auto d = p.decide(0, 1);
        CHECK(d.value == bits({0}));
        CHECK(d.multi_reach);
        CHECK(!p.clusters_separated());
    }

    SUBCASE("unknown recipient is rejected") {
        TrustGraph g = recipients_graph(3, 2);
        CHECK_THROWS_AS(g.decide(9, 1), ValidationError);
    }
}

TEST_CASE("node labels use hex cluster values") {
    CHECK(TrustNode{TrustNode::Kind::Recipient, 7, {}, 0}.label() == "R7");
    CHECK(TrustNode{TrustNode::Kind::Cluster, 0, bits({1}), 0}.label() == "S1#0");
    CHECK(TrustNode{TrustNode::Kind::Cluster, 0, bits({1, 0, 1, 1}), 2}.label() == "Sb#2");
    CHECK(TrustNode{TrustNode::Kind::Cluster, 0, bits({0, 0, 0, 0}), 1}.label() == "S0#1");
    CHECK(TrustNode{TrustNode::Kind::Cluster, 0, bits({1, 0, 1}), 0}.label() == "S5#0");
}
