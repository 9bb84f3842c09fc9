#pragma once

#include <stdexcept>
#include <string>

namespace teco {

// Error kinds map 1:1 onto CLI exit codes (see tools/). Kind names appear
// verbatim in the one-line error output so scripts can dispatch on them.
enum class ErrKind : int {
    Usage = 2,
    LineCountMismatch = 3,
    InvalidAlpha = 4,
    MalformedDocument = 5,
    SchemaVersionMismatch = 6,
    VocabTooSmall = 7,
    UnknownTokenId = 8,
    ModelMismatch = 9,
    EmptyCorpus = 10,
    LengthMismatch = 11,
    Io = 12,
};

inline const char* to_string(ErrKind k) {
    switch (k) {
        case ErrKind::Usage: return "UsageError";
        case ErrKind::LineCountMismatch: return "LineCountMismatch";
        case ErrKind::InvalidAlpha: return "InvalidAlpha";
        case ErrKind::MalformedDocument: return "MalformedDocument";
        case ErrKind::SchemaVersionMismatch: return "SchemaVersionMismatch";
        case ErrKind::VocabTooSmall: return "VocabTooSmall";
        case ErrKind::UnknownTokenId: return "UnknownTokenId";
        case ErrKind::ModelMismatch: return "ModelMismatch";
        case ErrKind::EmptyCorpus: return "EmptyCorpus";
        case ErrKind::LengthMismatch: return "LengthMismatch";
        case ErrKind::Io: return "IoError";
    }
    return "Error";
}

class Error : public std::runtime_error {
public:
    Error(ErrKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message),
          kind_(kind) {}

    ErrKind kind() const { return kind_; }
    int exit_code() const { return static_cast<int>(kind_); }

private:
    ErrKind kind_;
};

}  // namespace teco
