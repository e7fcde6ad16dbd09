#pragma once

#include <functional>
#include <memory>

#include "kcast/transcript.hpp"

namespace kcast {

/// One delivered cast as seen by a recipient: the payload plus the sender
/// and the full recipient set.
struct Delivery {
    int round = 0;
    PartyId sender = 0;
    std::vector<PartyId> recipients;
    Payload payload;
};

struct Inboxes {
    std::vector<std::vector<Delivery>> by_party;
    explicit Inboxes(int n) : by_party(std::size_t(n)) {}
};

/// Reliable delivery of one strict k-cast: every recipient's inbox gains an
/// identical record. Validates the recipient set (throws ValidationError).
void deliver_cast(const Cast& c, int n, int k, Inboxes& inboxes);

/// Adversary strategy: a fixed corrupt set plus a per-round rewriter for
/// faulty parties' communications. Never sees or touches compliant casts.
class Strategy {
public:
    virtual ~Strategy() = default;
    virtual const std::vector<PartyId>& corrupt() const = 0;
    /// Replacement casts for `party` (faulty) this round. `prescribed` is
    /// what the party's step function would have emitted; the result may
    /// drop, alter, or add casts, but only with `party` as sender.
    virtual std::vector<Cast> rewrite(int round, PartyId party,
                                      const std::vector<Cast>& prescribed) = 0;
    virtual std::string describe() const = 0;  // JSON descriptor
};

/// The empty adversary: nothing corrupted, nothing rewritten.
class NullStrategy : public Strategy {
public:
    const std::vector<PartyId>& corrupt() const override { return none_; }
    std::vector<Cast> rewrite(int, PartyId, const std::vector<Cast>& p) override { return p; }
    std::string describe() const override { return "{\"kind\":\"none\"}"; }

private:
    std::vector<PartyId> none_;
};

/// Step function: the casts a party emits at a round, as a pure function of
/// its identity, the round, and whatever state the closure carries.
using StepFn = std::function<std::vector<Cast>(PartyId party, int round)>;

/// Deterministic synchronous round engine. Compliant parties' casts are
/// exactly their step output; faulty parties' casts are whatever the
/// strategy emits. Deliveries land in inboxes as next-round inputs.
class Engine {
public:
    Engine(const Config& cfg, Strategy& strategy);

    /// Runs one round; returns the round's casts in canonical order.
    /// Throws EngineError if the strategy forges a compliant sender.
    std::vector<Cast> run_round(int round, const StepFn& step);

    bool is_faulty(PartyId p) const { return faulty_[p] != 0; }
    const std::vector<PartyId>& corrupt() const { return strategy_.corrupt(); }
    const Inboxes& inboxes() const { return inboxes_; }
    Transcript& transcript() { return transcript_; }
    const Config& config() const { return cfg_; }

private:
    Config cfg_;
    Strategy& strategy_;
    Inboxes inboxes_;
    Transcript transcript_;
    std::vector<std::uint8_t> faulty_;
};

}  // namespace kcast
