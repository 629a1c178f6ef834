#include "biasaudit/errors.hpp"

namespace biasaudit {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return "io";
    case ErrorKind::MalformedFile: return "malformed-file";
    case ErrorKind::CorruptRecord: return "corrupt-record";
    case ErrorKind::BadMagic: return "bad-magic";
    case ErrorKind::Truncated: return "truncated";
    case ErrorKind::NonFinite: return "non-finite";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::EmptySignature: return "empty-signature";
    case ErrorKind::MassMismatch: return "mass-mismatch";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::ZeroRow: return "zero-row";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::OutOfBounds: return "out-of-bounds";
    case ErrorKind::Alignment: return "alignment";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::UnknownKind: return "unknown-kind";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

}  // namespace biasaudit
