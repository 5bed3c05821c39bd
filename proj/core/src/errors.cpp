#include "ricciglue/errors.hpp"

namespace ricciglue {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
        case ErrorKind::DomainViolation: return "DomainViolation";
        case ErrorKind::SingularMetric: return "SingularMetric";
        case ErrorKind::NonOrthogonalFrame: return "NonOrthogonalFrame";
        case ErrorKind::DegenerateBlock: return "DegenerateBlock";
        case ErrorKind::DegenerateProfile: return "DegenerateProfile";
        case ErrorKind::DegenerateNormal: return "DegenerateNormal";
        case ErrorKind::NotAProduct: return "NotAProduct";
        case ErrorKind::BoundaryMismatch: return "BoundaryMismatch";
        case ErrorKind::EpsilonTooLarge: return "EpsilonTooLarge";
        case ErrorKind::TauTooLarge: return "TauTooLarge";
        case ErrorKind::HypothesisViolated: return "HypothesisViolated";
        case ErrorKind::FiberHypothesisViolated: return "FiberHypothesisViolated";
        case ErrorKind::SearchExhausted: return "SearchExhausted";
        case ErrorKind::CollarTooThin: return "CollarTooThin";
    }
    return "Unknown";
}

}  // namespace ricciglue
