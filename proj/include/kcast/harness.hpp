#pragma once

#include "kcast/adversary.hpp"
#include "kcast/protocol.hpp"

namespace kcast {

struct AdversaryDesc {
    std::string kind = "none";  // none | silent | random | chain | exhaustive
    std::uint64_t seed = 0;     // random
    std::size_t pair = 0;       // chain: compliant adjacent clusters (pair, pair+1)

    std::string to_json() const;
    static AdversaryDesc from_json(const std::string& json);
};

struct RunConfig {
    int k = 1;
    int h = 2;
    int f = 0;
    int input = 0;  // sender's bit
    AdversaryDesc adversary;
    std::string trace_path;  // empty: no trace written
    int max_n = 6;           // refuse larger instances unless overridden
    bool override_guard = false;

    int n() const { return h + f; }
    std::string to_json() const;
    static RunConfig from_json(const std::string& json);
};

struct Verdict {
    bool agreement = true;
    bool validity = true;  // meaningful only when sender_compliant
    bool sender_compliant = true;
    int anomalies = 0;  // multi-reach + cluster-path + sub-agreement violations
    long long cast_count = 0;
    int rounds = 0;
    double wall_ms = 0.0;
};

struct RunResult {
    Verdict verdict;
    Transcript transcript;
    BroadcastOutcome outcome;
};

/// Executes one broadcast under the configured adversary, writes the trace
/// if requested, and returns the verdict. Throws ValidationError on bad
/// configs (including kind == "exhaustive"; use run_exhaustive for that).
RunResult run(const RunConfig& cfg);

struct ExhaustiveOutcome {
    unsigned long long strategies = 0;
    unsigned long long violations = 0;  // agreement broken, or validity with compliant sender
};

/// Runs every enumerated strategy for the config. Guarded like the
/// enumeration itself.
ExhaustiveOutcome run_exhaustive(const RunConfig& cfg);

enum class Classification { Achievable, Impossible };

/// The threshold test: broadcast with h compliant and f faulty parties over
/// width-k channels is achievable iff 2f < kh.
Classification check_threshold(int k, int h, int f);
std::string describe_threshold(int k, int h, int f);

struct SweepRow {
    int k = 0, h = 0, f = 0;
    Classification predicted = Classification::Achievable;
    std::vector<std::pair<std::string, std::string>> observed;  // class -> outcome
    bool pass = false;
};

/// One row per (k,h,f) within the bounds: predicted side of the threshold
/// vs. observed behavior per adversary class. Achievable rows must show no
/// violation; impossible rows must be defeated by the chain adversary.
std::vector<SweepRow> sweep(int max_k, int max_h, int max_f,
                            const std::vector<std::string>& classes, int random_seeds,
                            int max_n, bool override_guard);

std::string format_sweep_table(const std::vector<SweepRow>& rows);

/// Verdict recomputed purely from a transcript's output events. The k/h/f
/// and bookkeeping fields are copied from the in-band verdict event.
Verdict replay_verdict(const Transcript& t);

/// Chain-adversary sweep over all adjacent pairs; the defeating pair index
/// if one run breaks agreement.
std::optional<std::size_t> find_defeating_pair(int k, int h, int f, int input);

}  // namespace kcast
