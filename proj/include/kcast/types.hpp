#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kcast {

/// Party index in [0, n). Party 0 is the designated sender of a run.
using PartyId = std::uint32_t;

/// Malformed values (casts, configs, reports) are rejected with this.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Engine-level contract violations (e.g. an adversary forging a cast with
/// a compliant sender identity). These abort the run.
class EngineError : public std::runtime_error {
public:
    explicit EngineError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Fixed-length bit vector carried by a cast. Length 1 at the top level of
/// a run; recursive levels carry serialized reports.
struct Payload {
    std::vector<std::uint8_t> bits;  // each element 0 or 1

    Payload() = default;
    explicit Payload(std::vector<std::uint8_t> b);

    static Payload zeros(std::size_t len);
    static Payload bit(int v);  // length-1 payload

    std::size_t size() const { return bits.size(); }
    bool is_zero() const;

    bool operator==(const Payload&) const = default;
    bool operator<(const Payload& o) const { return bits < o.bits; }

    std::string to_string() const;  // e.g. "0110"
    std::string to_hex() const;     // big-endian nibbles, e.g. 1011 -> "b"
    static std::optional<Payload> from_string(std::string_view s);
};

/// One k-cast event: sender transmits one payload to exactly k recipients,
/// each of whom also learns the sender and the co-recipients.
struct Cast {
    int round = 0;
    PartyId sender = 0;
    std::vector<PartyId> recipients;  // sorted, distinct, sender excluded
    Payload payload;

    bool operator==(const Cast&) const = default;
};

/// Canonical transcript order within a round: (sender, recipients, payload).
bool cast_less(const Cast& a, const Cast& b);

/// Validates recipient-set shape. `required_width` pins |recipients| exactly
/// (the strict k-cast contract); without it any width in [1, k] passes,
/// which is what the engine allows for out-of-schedule adversarial casts.
void validate_cast(const Cast& c, int n_parties, int k,
                   std::optional<int> required_width = std::nullopt);

/// The (n,k,h,f) parameter bundle governing one protocol level. d = h+f-n
/// counts the parties missing from the level relative to a full run.
struct Config {
    int n = 0;  // parties present
    int k = 1;  // channel width
    int h = 2;  // compliant count
    int f = 0;  // faulty budget

    Config() = default;
    Config(int n_, int k_, int h_, int f_);

    int d() const { return h + f - n; }
};

}  // namespace kcast
