#include "kcast/engine.hpp"

#include <algorithm>

namespace kcast {

void deliver_cast(const Cast& c, int n, int k, Inboxes& inboxes) {
    validate_cast(c, n, k, k);
    for (PartyId r : c.recipients)
        inboxes.by_party[r].push_back(Delivery{c.round, c.sender, c.recipients, c.payload});
}

Engine::Engine(const Config& cfg, Strategy& strategy)
    : cfg_(cfg), strategy_(strategy), inboxes_(cfg.n), faulty_(std::size_t(cfg.n), 0) {
    const auto& corrupt = strategy_.corrupt();
    if (int(corrupt.size()) > cfg_.f)
        throw ValidationError("corruption budget exceeded: " + std::to_string(corrupt.size()) +
                              " > f=" + std::to_string(cfg_.f));
    for (PartyId p : corrupt) {
        if (p >= PartyId(cfg_.n)) throw ValidationError("corrupt party out of range");
        faulty_[p] = 1;
    }
}

std::vector<Cast> Engine::run_round(int round, const StepFn& step) {
    struct Emitted {
        Cast cast;
        bool scheduled;
    };
    std::vector<Emitted> emitted;

    for (PartyId p = 0; p < PartyId(cfg_.n); ++p) {
        std::vector<Cast> prescribed = step(p, round);
        for (const auto& c : prescribed) {
            if (c.sender != p || c.round != round)
                throw EngineError("step function emitted a mislabeled cast");
        }
        if (!faulty_[p]) {
            for (auto& c : prescribed) emitted.push_back({std::move(c), true});
            continue;
        }
        std::vector<Cast> replaced = strategy_.rewrite(round, p, prescribed);
        for (auto& c : replaced) {
            if (c.sender != p)
                throw EngineError("authentication violation: adversary cast with sender " +
                                  std::to_string(c.sender) + " while rewriting party " +
                                  std::to_string(p));
            if (c.round != round) throw EngineError("adversary cast with wrong round index");
            validate_cast(c, cfg_.n, cfg_.k);  // width within [1, k]
            bool scheduled = std::find_if(prescribed.begin(), prescribed.end(), [&](const Cast& q) {
                                 return q.recipients == c.recipients;
                             }) != prescribed.end();
            emitted.push_back({std::move(c), scheduled});
        }
    }

    std::sort(emitted.begin(), emitted.end(),
              [](const Emitted& a, const Emitted& b) { return cast_less(a.cast, b.cast); });

    std::vector<Cast> casts;
    casts.reserve(emitted.size());
    for (auto& e : emitted) {
        for (PartyId r : e.cast.recipients)
            inboxes_.by_party[r].push_back(
                Delivery{e.cast.round, e.cast.sender, e.cast.recipients, e.cast.payload});
        transcript_.add(CastEvent{e.cast, e.scheduled});
        casts.push_back(std::move(e.cast));
    }
    return casts;
}

}  // namespace kcast
