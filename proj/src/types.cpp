#include "kcast/types.hpp"

#include <algorithm>

namespace kcast {

Payload::Payload(std::vector<std::uint8_t> b) : bits(std::move(b)) {
    for (auto& x : bits) x = x ? 1 : 0;
}

Payload Payload::zeros(std::size_t len) {
    Payload p;
    p.bits.assign(len, 0);
    return p;
}

Payload Payload::bit(int v) {
    Payload p;
    p.bits.push_back(v ? 1 : 0);
    return p;
}

bool Payload::is_zero() const {
    return std::all_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b == 0; });
}

std::string Payload::to_string() const {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

std::string Payload::to_hex() const {
    if (bits.empty()) return "";
    // big-endian: first bit is the most significant of the value
    std::size_t nibbles = (bits.size() + 3) / 4;
    std::string s(nibbles, '0');
    unsigned acc = 0;
    std::size_t pad = nibbles * 4 - bits.size();
    for (std::size_t i = 0; i < nibbles * 4; ++i) {
        acc = (acc << 1) | (i < pad ? 0u : unsigned(bits[i - pad]));
        if (i % 4 == 3) {
            s[i / 4] = "0123456789abcdef"[acc & 0xf];
            acc = 0;
        }
    }
    return s;
}

std::optional<Payload> Payload::from_string(std::string_view s) {
    Payload p;
    p.bits.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1') return std::nullopt;
        p.bits.push_back(c == '1' ? 1 : 0);
    }
    return p;
}

bool cast_less(const Cast& a, const Cast& b) {
    if (a.round != b.round) return a.round < b.round;
    if (a.sender != b.sender) return a.sender < b.sender;
    if (a.recipients != b.recipients) return a.recipients < b.recipients;
    return a.payload < b.payload;
}

void validate_cast(const Cast& c, int n_parties, int k, std::optional<int> required_width) {
    if (required_width) {
        if (int(c.recipients.size()) != *required_width)
            throw ValidationError("cast has " + std::to_string(c.recipients.size()) +
                                  " recipients, expected " + std::to_string(*required_width));
    } else {
        if (c.recipients.empty() || int(c.recipients.size()) > k)
            throw ValidationError("cast width " + std::to_string(c.recipients.size()) +
                                  " outside [1, k=" + std::to_string(k) + "]");
    }
    if (c.sender >= PartyId(n_parties))
        throw ValidationError("cast sender out of range");
    PartyId prev = 0;
    bool first = true;
    for (PartyId r : c.recipients) {
        if (r >= PartyId(n_parties)) throw ValidationError("cast recipient out of range");
        if (r == c.sender) throw ValidationError("cast recipient set includes the sender");
        if (!first && r <= prev) throw ValidationError("cast recipients not sorted/distinct");
        prev = r;
        first = false;
    }
}

Config::Config(int n_, int k_, int h_, int f_) : n(n_), k(k_), h(h_), f(f_) {
    if (k < 1) throw ValidationError("k must be >= 1");
    if (h < 2) throw ValidationError("h must be >= 2");
    if (f < 0) throw ValidationError("f must be >= 0");
    if (n < 2) throw ValidationError("n must be >= 2");
    if (d() < 0) throw ValidationError("n exceeds h+f");
}

}  // namespace kcast
