#include "vaxpass/contracts/common.hpp"

namespace vaxpass::contracts {

std::string to_string(Role r) {
    switch (r) {
        case Role::Govt: return "govt";
        case Role::VC: return "vc";
        case Role::Citizen: return "citizen";
        case Role::Verifier: return "verifier";
    }
    return "unknown";
}

}  // namespace vaxpass::contracts
