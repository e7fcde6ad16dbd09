#include "kcast/subsets.hpp"

#include <algorithm>

namespace kcast {

std::vector<std::vector<PartyId>> ksubsets(std::vector<PartyId> recipients, int k) {
    if (k < 1) throw ValidationError("ksubsets: k must be >= 1");
    std::sort(recipients.begin(), recipients.end());
    recipients.erase(std::unique(recipients.begin(), recipients.end()), recipients.end());
    const int m = int(recipients.size());
    if (m < k)
        throw ValidationError("ksubsets: need at least k=" + std::to_string(k) +
                              " recipients, have " + std::to_string(m));

    std::vector<std::vector<PartyId>> out;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        std::vector<PartyId> set(k);
        for (int i = 0; i < k; ++i) set[i] = recipients[idx[i]];
        out.push_back(std::move(set));
        int i = k - 1;
        while (i >= 0 && idx[i] == m - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

KSetIndex::KSetIndex(std::vector<PartyId> recipients, int k)
    : recipients_(std::move(recipients)), k_(k) {
    std::sort(recipients_.begin(), recipients_.end());
    sets_ = ksubsets(recipients_, k_);
}

std::optional<std::size_t> KSetIndex::position(const std::vector<PartyId>& set) const {
    std::vector<PartyId> key = set;
    std::sort(key.begin(), key.end());
    auto it = std::lower_bound(sets_.begin(), sets_.end(), key);
    if (it == sets_.end() || *it != key) return std::nullopt;
    return std::size_t(it - sets_.begin());
}

std::vector<std::size_t> KSetIndex::containing(PartyId p) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < sets_.size(); ++i)
        if (std::binary_search(sets_[i].begin(), sets_[i].end(), p)) out.push_back(i);
    return out;
}

std::vector<Cast> distribute(PartyId sender, const Payload& value,
                             const std::vector<PartyId>& recipients, int k, int round) {
    for (PartyId r : recipients)
        if (r == sender) throw ValidationError("distribute: sender among recipients");
    auto sets = ksubsets(recipients, k);
    std::vector<Cast> casts;
    casts.reserve(sets.size());
    for (auto& s : sets) casts.push_back(Cast{round, sender, s, value});
    return casts;
}

bool consistent(const Report& a, const Report& b) {
    if (a.owner == b.owner) throw ValidationError("consistent: reports share an owner");
    for (std::size_t i = 0; i < a.sets.size(); ++i) {
        if (!std::binary_search(a.sets[i].begin(), a.sets[i].end(), b.owner)) continue;
        // the shared set appears in both reports; locate it in b
        auto it = std::lower_bound(b.sets.begin(), b.sets.end(), a.sets[i]);
        if (it == b.sets.end() || *it != a.sets[i]) continue;
        const Payload& va = a.values[i];
        const Payload& vb = b.values[std::size_t(it - b.sets.begin())];
        if (va != vb) return false;  // covers mismatched lengths too
    }
    return true;
}

std::optional<Payload> uniform_value(const Report& r) {
    if (r.values.empty()) throw ValidationError("uniform_value: empty report");
    for (std::size_t i = 1; i < r.values.size(); ++i)
        if (r.values[i] != r.values[0]) return std::nullopt;
    return r.values[0];
}

Payload serialize_report(const Report& r) {
    Payload flat;
    for (const auto& v : r.values)
        flat.bits.insert(flat.bits.end(), v.bits.begin(), v.bits.end());
    return flat;
}

Report parse_report(PartyId owner, const KSetIndex& index, std::size_t value_len,
                    const Payload& flat) {
    Report rep;
    rep.owner = owner;
    auto positions = index.containing(owner);
    if (flat.size() != positions.size() * value_len)
        throw ValidationError("parse_report: payload length " + std::to_string(flat.size()) +
                              " != " + std::to_string(positions.size() * value_len));
    std::size_t off = 0;
    for (std::size_t pos : positions) {
        rep.sets.push_back(index.sets()[pos]);
        Payload v;
        v.bits.assign(flat.bits.begin() + off, flat.bits.begin() + off + value_len);
        rep.values.push_back(std::move(v));
        off += value_len;
    }
    return rep;
}

}  // namespace kcast
