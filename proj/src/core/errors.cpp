#include "vaxpass/core/errors.hpp"

namespace vaxpass {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::InsufficientFunds: return "InsufficientFunds";
        case ErrorKind::EscrowNotFound: return "EscrowNotFound";
        case ErrorKind::DecodeError: return "DecodeError";
        case ErrorKind::DuplicateLeaf: return "DuplicateLeaf";
        case ErrorKind::NotALeaf: return "NotALeaf";
        case ErrorKind::SingleHopViolation: return "SingleHopViolation";
        case ErrorKind::DecryptFailure: return "DecryptFailure";
        case ErrorKind::NotFound: return "NotFound";
        case ErrorKind::Unauthorized: return "Unauthorized";
        case ErrorKind::GuardFailed: return "GuardFailed";
        case ErrorKind::WindowExpired: return "WindowExpired";
    }
    return "Unknown";
}

}  // namespace vaxpass
