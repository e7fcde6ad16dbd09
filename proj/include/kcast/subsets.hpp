#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "kcast/types.hpp"

namespace kcast {

/// All size-k subsets of `recipients`, lexicographic over sorted party ids.
/// Throws ValidationError when |recipients| < k or k < 1.
std::vector<std::vector<PartyId>> ksubsets(std::vector<PartyId> recipients, int k);

/// Canonical enumeration of the k-sets of a recipient set, with stable
/// positions and per-party membership lookups.
class KSetIndex {
public:
    KSetIndex(std::vector<PartyId> recipients, int k);

    const std::vector<std::vector<PartyId>>& sets() const { return sets_; }
    std::size_t count() const { return sets_.size(); }
    int k() const { return k_; }
    const std::vector<PartyId>& recipients() const { return recipients_; }

    std::optional<std::size_t> position(const std::vector<PartyId>& set) const;
    /// Positions of the sets containing p, in canonical order.
    std::vector<std::size_t> containing(PartyId p) const;

private:
    std::vector<PartyId> recipients_;
    int k_;
    std::vector<std::vector<PartyId>> sets_;
};

/// Party `owner`'s claimed sender-values: one payload per k-set containing
/// owner, in canonical order. All payloads share one length.
struct Report {
    PartyId owner = 0;
    std::vector<std::vector<PartyId>> sets;  // each contains owner
    std::vector<Payload> values;             // aligned with sets
};

/// One cast per k-set of `recipients`, identical payload, canonical order.
std::vector<Cast> distribute(PartyId sender, const Payload& value,
                             const std::vector<PartyId>& recipients, int k, int round);

/// True iff a and b report equal values on every k-set containing both
/// owners (vacuously true when they share none). Entries of mismatched
/// length compare unequal rather than raising.
bool consistent(const Report& a, const Report& b);

/// The single value v such that every entry of r equals v, if one exists.
std::optional<Payload> uniform_value(const Report& r);

/// Concatenation of r's values in canonical k-set order.
Payload serialize_report(const Report& r);

/// Inverse of serialize_report for a report of `owner` over `index` with
/// entries of `value_len` bits. Throws ValidationError on length mismatch.
Report parse_report(PartyId owner, const KSetIndex& index, std::size_t value_len,
                    const Payload& flat);

}  // namespace kcast
