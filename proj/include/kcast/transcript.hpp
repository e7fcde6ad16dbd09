#pragma once

#include <iosfwd>
#include <variant>
#include <vector>

#include "kcast/types.hpp"

namespace kcast {

struct CastEvent {
    Cast cast;
    bool scheduled = true;  // part of the protocol schedule (vs adversary extra)
};

/// Value of a compliant party: the sender's input or a recipient's output.
/// Only compliant parties get output events.
struct OutputEvent {
    PartyId party = 0;
    Payload value;
};

struct VerdictEvent {
    int k = 0, h = 0, f = 0;
    bool agreement = true;
    bool validity = true;  // meaningful only when sender_compliant
    bool sender_compliant = true;
    int anomalies = 0;
    long long casts = 0;
    int rounds = 0;
};

using TranscriptEvent = std::variant<CastEvent, OutputEvent, VerdictEvent>;

/// Ordered event log of one run. Serialized as JSON lines with fixed field
/// order, one event per line, so identical runs produce identical bytes.
struct Transcript {
    std::vector<TranscriptEvent> events;

    void add(TranscriptEvent e) { events.push_back(std::move(e)); }

    std::string to_jsonl() const;
    static Transcript from_jsonl(std::istream& in);  // throws ValidationError

    const VerdictEvent* verdict() const;
    std::vector<const OutputEvent*> outputs() const;
    long long cast_count() const;
};

}  // namespace kcast
