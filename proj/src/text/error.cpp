#include "nass/error.hpp"

namespace nass {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidEncoding: return "InvalidEncoding";
    case ErrorCode::UnknownToken: return "UnknownToken";
    case ErrorCode::NoMatch: return "NoMatch";
    case ErrorCode::LexiconFormat: return "LexiconFormat";
    case ErrorCode::InvalidRecord: return "InvalidRecord";
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::InvalidContext: return "InvalidContext";
    case ErrorCode::ZeroLines: return "ZeroLines";
    case ErrorCode::NoTargetTokens: return "NoTargetTokens";
    case ErrorCode::InsufficientDistractors: return "InsufficientDistractors";
    case ErrorCode::SubclassAbsent: return "SubclassAbsent";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
    case ErrorCode::UnknownItemId: return "UnknownItemId";
    case ErrorCode::MissingAnswerKeys: return "MissingAnswerKeys";
    case ErrorCode::CollectionExhausted: return "CollectionExhausted";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::StorageFailure: return "StorageFailure";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::CorruptStore: return "CorruptStore";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::Unauthenticated: return "Unauthenticated";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace nass
