#include "curator/error.hpp"

namespace curator {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedUrl: return "MalformedUrl";
    case ErrorCode::BadTimestamp: return "BadTimestamp";
    case ErrorCode::InvalidTag: return "InvalidTag";
    case ErrorCode::ManifestSyntax: return "ManifestSyntax";
    case ErrorCode::ManifestSemantic: return "ManifestSemantic";
    case ErrorCode::DuplicateCollection: return "DuplicateCollection";
    case ErrorCode::BadQuery: return "BadQuery";
    case ErrorCode::ProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::UpstreamUnavailable: return "UpstreamUnavailable";
    case ErrorCode::CdxSyntax: return "CdxSyntax";
    case ErrorCode::ReadOnlyViolation: return "ReadOnlyViolation";
    case ErrorCode::DepthExceeded: return "DepthExceeded";
    case ErrorCode::DuplicateInGroup: return "DuplicateInGroup";
    case ErrorCode::NotMember: return "NotMember";
    case ErrorCode::EmptyBody: return "EmptyBody";
    case ErrorCode::Validation: return "Validation";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::Unauthorized: return "Unauthorized";
    case ErrorCode::StorageFailure: return "StorageFailure";
    case ErrorCode::CorruptState: return "CorruptState";
    case ErrorCode::BindFailure: return "BindFailure";
  }
  return "Unknown";
}

}  // namespace curator
