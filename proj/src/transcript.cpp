#include "kcast/transcript.hpp"

#include <istream>
#include <sstream>

#include <json.hpp>

namespace kcast {

namespace {

const char* bstr(bool b) { return b ? "true" : "false"; }

void write_event(std::ostream& os, const CastEvent& e) {
    os << "{\"kind\":\"cast\",\"round\":" << e.cast.round << ",\"sender\":" << e.cast.sender
       << ",\"recipients\":[";
    for (std::size_t i = 0; i < e.cast.recipients.size(); ++i) {
        if (i) os << ",";
        os << e.cast.recipients[i];
    }
    os << "],\"payload\":\"" << e.cast.payload.to_string() << "\",\"scheduled\":"
       << bstr(e.scheduled) << "}";
}

void write_event(std::ostream& os, const OutputEvent& e) {
    os << "{\"kind\":\"output\",\"party\":" << e.party << ",\"value\":\""
       << e.value.to_string() << "\"}";
}

void write_event(std::ostream& os, const VerdictEvent& e) {
    os << "{\"kind\":\"verdict\",\"k\":" << e.k << ",\"h\":" << e.h << ",\"f\":" << e.f
       << ",\"agreement\":" << bstr(e.agreement) << ",\"validity\":" << bstr(e.validity)
       << ",\"sender_compliant\":" << bstr(e.sender_compliant)
       << ",\"anomalies\":" << e.anomalies << ",\"casts\":" << e.casts
       << ",\"rounds\":" << e.rounds << "}";
}

Payload parse_payload(const nlohmann::json& j, const char* field) {
    auto p = Payload::from_string(j.at(field).get<std::string>());
    if (!p) throw ValidationError(std::string("transcript: bad payload in field ") + field);
    return *p;
}

}  // namespace

std::string Transcript::to_jsonl() const {
    std::ostringstream os;
    for (const auto& ev : events) {
        std::visit([&os](const auto& e) { write_event(os, e); }, ev);
        os << "\n";
    }
    return os.str();
}

Transcript Transcript::from_jsonl(std::istream& in) {
    Transcript t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("transcript line " + std::to_string(lineno) + ": " + e.what());
        }
        try {
            const std::string kind = j.at("kind").get<std::string>();
            if (kind == "cast") {
                CastEvent e;
                e.cast.round = j.at("round").get<int>();
                e.cast.sender = j.at("sender").get<PartyId>();
                e.cast.recipients = j.at("recipients").get<std::vector<PartyId>>();
                e.cast.payload = parse_payload(j, "payload");
                e.scheduled = j.at("scheduled").get<bool>();
                t.add(e);
            } else if (kind == "output") {
                OutputEvent e;
                e.party = j.at("party").get<PartyId>();
                e.value = parse_payload(j, "value");
                t.add(e);
            } else if (kind == "verdict") {
                VerdictEvent e;
                e.k = j.at("k").get<int>();
                e.h = j.at("h").get<int>();
                e.f = j.at("f").get<int>();
                e.agreement = j.at("agreement").get<bool>();
                e.validity = j.at("validity").get<bool>();
                e.sender_compliant = j.at("sender_compliant").get<bool>();
                e.anomalies = j.at("anomalies").get<int>();
                e.casts = j.at("casts").get<long long>();
                e.rounds = j.at("rounds").get<int>();
                t.add(e);
            } else {
                throw ValidationError("transcript line " + std::to_string(lineno) +
                                      ": unknown event kind '" + kind + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("transcript line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return t;
}

const VerdictEvent* Transcript::verdict() const {
    for (auto it = events.rbegin(); it != events.rend(); ++it)
        if (auto* v = std::get_if<VerdictEvent>(&*it)) return v;
    return nullptr;
}

std::vector<const OutputEvent*> Transcript::outputs() const {
    std::vector<const OutputEvent*> out;
    for (const auto& ev : events)
        if (auto* o = std::get_if<OutputEvent>(&ev)) out.push_back(o);
    return out;
}

long long Transcript::cast_count() const {
    long long c = 0;
    for (const auto& ev : events)
        if (std::holds_alternative<CastEvent>(ev)) ++c;
    return c;
}

}  // namespace kcast
