#include "vaxpass/actors/actor.hpp"

#include <array>
#include <utility>

#include "vaxpass/core/errors.hpp"

namespace vaxpass::actors {

namespace {

constexpr std::array<std::pair<Deviation, std::string_view>, 10> kDeviations{{
    {Deviation::None, "honest"},
    {Deviation::WrongMrDispatch, "wrong_mr_dispatch"},
    {Deviation::WrongProof, "wrong_proof"},
    {Deviation::ReuseVial, "reuse_vial"},
    {Deviation::WrongfulDissent, "wrongful_dissent"},
    {Deviation::WrongfulDissent2, "wrongful_dissent2"},
    {Deviation::ForgedMd, "forged_md"},
    {Deviation::RkReplay, "rk_replay"},
    {Deviation::PiiTamper, "pii_tamper"},
    {Deviation::NegativeAck, "negative_ack"},
}};

}  // namespace

std::string to_string(Deviation d) {
    for (const auto& [k, name] : kDeviations) {
        if (k == d) return std::string(name);
    }
    return "unknown";
}

Deviation parse_deviation(std::string_view s) {
    for (const auto& [k, name] : kDeviations) {
        if (name == s) return k;
    }
    fail(ErrorKind::DecodeError, "unknown deviation '" + std::string(s) + "'");
}

Role parse_role(std::string_view s) {
    if (s == "govt") return Role::Govt;
    if (s == "vc") return Role::VC;
    if (s == "citizen") return Role::Citizen;
    if (s == "verifier") return Role::Verifier;
    fail(ErrorKind::DecodeError, "unknown role '" + std::string(s) + "'");
}

std::string to_string(MessageKind k) {
    switch (k) {
        case MessageKind::Application: return "application";
        case MessageKind::MerkleProof: return "merkle-proof";
        case MessageKind::VialHandover: return "vial-handover";
        case MessageKind::Rekey: return "rekey";
        case MessageKind::VpRequest: return "vp-request";
    }
    return "unknown";
}

std::string Pii::canonical() const {
    static constexpr std::string_view sep = "‖";
    std::string out = name;
    for (const auto* f : {&address, &dob, &citizen_id}) {
        out.append(sep);
        out.append(*f);
    }
    return out;
}

}  // namespace vaxpass::actors
