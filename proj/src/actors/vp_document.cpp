#include "vaxpass/actors/vp_document.hpp"

#include "json.hpp"

#include "vaxpass/core/errors.hpp"

namespace vaxpass::actors {

std::string VPDocument::serialize() const {
    nlohmann::ordered_json j;
    j["token_id"] = token_id;
    j["vial_id"] = vial_id;
    j["vc_id"] = vc_id;
    j["vaccination_time"] = vaccination_time;
    j["vaccine_name"] = vaccine_name;
    j["target_disease"] = target_disease;
    return j.dump();
}

VPDocument VPDocument::parse(std::string_view text) {
    try {
        auto j = nlohmann::json::parse(text);
        VPDocument d;
        d.token_id = j.at("token_id").get<std::uint64_t>();
        d.vial_id = j.at("vial_id").get<std::string>();
        d.vc_id = j.at("vc_id").get<std::uint64_t>();
        d.vaccination_time = j.at("vaccination_time").get<std::uint64_t>();
        d.vaccine_name = j.at("vaccine_name").get<std::string>();
        d.target_disease = j.at("target_disease").get<std::string>();
        return d;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::DecodeError, std::string("malformed passport document: ") + e.what());
    }
}

}  // namespace vaxpass::actors
