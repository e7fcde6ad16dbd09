#include <doctest.h>

#include <random>

#include "kcast/subsets.hpp"

using namespace kcast;

namespace {

// independent oracle: enumerate subsets via bitmask, count and compare
std::vector<std::vector<PartyId>> bitmask_subsets(const std::vector<PartyId>& rec, int k) {
    std::vector<std::vector<PartyId>> out;
    for (unsigned mask = 0; mask < (1u << rec.size()); ++mask) {
        if (__builtin_popcount(mask) != k) continue;
        std::vector<PartyId> s;
        for (std::size_t i = 0; i < rec.size(); ++i)
            if (mask & (1u << i)) s.push_back(rec[i]);
        out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Payload bits(std::initializer_list<int> v) {
    Payload p;
    for (int b : v) p.bits.push_back(std::uint8_t(b));
    return p;
}

}  // namespace

TEST_CASE("ksubsets canonical enumeration") {
    auto sets = ksubsets({1, 2, 3}, 2);
    REQUIRE(sets.size() == 3);
    CHECK(sets[0] == std::vector<PartyId>{1, 2});
    CHECK(sets[1] == std::vector<PartyId>{1, 3});
    CHECK(sets[2] == std::vector<PartyId>{2, 3});

    auto all = ksubsets({1, 2, 3, 4}, 4);
    REQUIRE(all.size() == 1);
    CHECK(all[0] == std::vector<PartyId>{1, 2, 3, 4});

    CHECK_THROWS_AS(ksubsets({1, 2}, 3), ValidationError);
    CHECK_THROWS_AS(ksubsets({1, 2}, 0), ValidationError);
}

TEST_CASE("ksubsets matches the bitmask oracle and stays sorted") {
    for (int n = 1; n <= 8; ++n) {
        std::vector<PartyId> rec;
        for (int i = 0; i < n; ++i) rec.push_back(PartyId(10 + 3 * i));
        for (int k = 1; k <= std::min(n, 4); ++k) {
            auto got = ksubsets(rec, k);
            auto want = bitmask_subsets(rec, k);
            REQUIRE(got.size() == want.size());
            CHECK(got == want);  // lexicographic == sorted order of the oracle
            CHECK(std::is_sorted(got.begin(), got.end()));
        }
    }
}

TEST_CASE("KSetIndex positions and membership") {
    KSetIndex idx({1, 2, 3, 4}, 2);
    REQUIRE(idx.count() == 6);
    CHECK(idx.position({2, 1}) == 0);  // order-insensitive lookup
    CHECK(idx.position({3, 4}) == 5);
    CHECK(!idx.position({1, 5}));
    CHECK(idx.containing(1) == std::vector<std::size_t>{0, 1, 2});
    CHECK(idx.containing(4) == std::vector<std::size_t>{2, 4, 5});
}

TEST_CASE("distribute sends one identical cast per k-set") {
    auto casts = distribute(0, bits({1}), {1, 2, 3}, 2, 7);
    REQUIRE(casts.size() == 3);
    for (const auto& c : casts) {
        CHECK(c.sender == 0);
        CHECK(c.round == 7);
        CHECK(c.payload == bits({1}));
    }
    CHECK(casts[0].recipients == std::vector<PartyId>{1, 2});
    CHECK(casts[2].recipients == std::vector<PartyId>{2, 3});

    CHECK_THROWS_AS(distribute(1, bits({1}), {1, 2, 3}, 2, 0), ValidationError);
}

namespace {

// recipient's report is exactly the distributed casts restricted to the
// k-sets containing it
Report report_from_casts(PartyId owner, const std::vector<Cast>& casts) {
    Report r;
    r.owner = owner;
    for (const auto& c : casts) {
        if (!std::binary_search(c.recipients.begin(), c.recipients.end(), owner)) continue;
        r.sets.push_back(c.recipients);
        r.values.push_back(c.payload);
    }
    return r;
}

}  // namespace

TEST_CASE("compliant distribution makes every report uniform and every pair consistent") {
    for (int n = 2; n <= 6; ++n) {
        std::vector<PartyId> rec;
        for (int i = 1; i < n; ++i) rec.push_back(PartyId(i));
        for (int k = 1; k <= std::min(int(rec.size()), 3); ++k) {
            auto casts = distribute(0, bits({1}), rec, k, 0);
            std::vector<Report> reports;
            for (PartyId p : rec) reports.push_back(report_from_casts(p, casts));
            for (const auto& r : reports) {
                auto u = uniform_value(r);
                REQUIRE(u.has_value());
                CHECK(*u == bits({1}));
            }
            for (std::size_t i = 0; i < reports.size(); ++i)
                for (std::size_t j = i + 1; j < reports.size(); ++j)
                    CHECK(consistent(reports[i], reports[j]));
        }
    }
}

TEST_CASE("consistent compares shared k-sets only") {
    // owners 1 and 2 share exactly {1,2} when k=2 over {1,2,3}
    Report m1{1, {{1, 2}, {1, 3}}, {bits({0}), bits({1})}};
    Report m2{2, {{1, 2}, {2, 3}}, {bits({0}), bits({0})}};
    CHECK(consistent(m1, m2));
    m2.values[0] = bits({1});
    CHECK(!consistent(m1, m2));
    CHECK(!consistent(m2, m1));  // symmetric

    // k=3: single shared set {1,2,3}
    Report a{1, {{1, 2, 3}}, {bits({0})}};
    Report b{2, {{1, 2, 3}}, {bits({1})}};
    CHECK(!consistent(a, b));
    b.values[0] = bits({0});
    CHECK(consistent(a, b));

    // mismatched payload lengths are inconsistent, not an error
    Report c{2, {{1, 2, 3}}, {bits({0, 0})}};
    CHECK(!consistent(a, c));

    // no shared set: vacuously consistent
    Report d{1, {{1, 3}}, {bits({0})}};
    Report e{2, {{2, 3}}, {bits({1})}};
    CHECK(consistent(d, e));

    CHECK_THROWS_AS(consistent(a, a), ValidationError);
}

TEST_CASE("consistent is symmetric on random reports") {
    std::mt19937 rng(1234);
    KSetIndex idx({1, 2, 3, 4}, 2);
    auto random_report = [&](PartyId owner) {
        Report r;
        r.owner = owner;
        for (std::size_t pos : idx.containing(owner)) {
            r.sets.push_back(idx.sets()[pos]);
            r.values.push_back(bits({int(rng() % 2)}));
        }
        return r;
    };
    for (int trial = 0; trial < 200; ++trial) {
        Report a = random_report(1);
        Report b = random_report(2);
        CHECK(consistent(a, b) == consistent(b, a));
        // uniform values agreeing forces consistency
        auto ua = uniform_value(a);
        auto ub = uniform_value(b);
        if (ua && ub && *ua == *ub) CHECK(consistent(a, b));
    }
}

TEST_CASE("uniform_value") {
    Report r{1, {{1, 2}, {1, 3}}, {bits({0}), bits({0})}};
    CHECK(uniform_value(r) == bits({0}));
    r.values[1] = bits({1});
    CHECK(!uniform_value(r));
    Report single{1, {{1, 2}}, {bits({1})}};
    CHECK(uniform_value(single) == bits({1}));
    Report empty{1, {}, {}};
    CHECK_THROWS_AS(uniform_value(empty), ValidationError);
}

TEST_CASE("report serialization round trip") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        KSetIndex idx({1, 2, 3, 4, 5}, 3);
        std::size_t len = 1 + rng() % 4;
        Report r;
        r.owner = 2;
        for (std::size_t pos : idx.containing(2)) {
            r.sets.push_back(idx.sets()[pos]);
            Payload v;
            for (std::size_t i = 0; i < len; ++i) v.bits.push_back(std::uint8_t(rng() % 2));
            r.values.push_back(std::move(v));
        }
        Payload flat = serialize_report(r);
        Report back = parse_report(2, idx, len, flat);
        CHECK(back.sets == r.sets);
        CHECK(back.values == r.values);
    }
    KSetIndex idx({1, 2, 3}, 2);
    CHECK_THROWS_AS(parse_report(1, idx, 2, bits({0})), ValidationError);
}
