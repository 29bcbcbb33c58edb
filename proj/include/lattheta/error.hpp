#pragma once

#include <stdexcept>
#include <string>

namespace lattheta
{

enum class ErrorKind
{
    NotSymmetric,
    OddDiagonal,
    NotPositiveDefinite,
    RankMismatch,
    UnsupportedWeight,
    NotHomogeneous,
    SingularProjector,
    SingularCoefficient,
    NoRationalEmbedding,
    ResourceLimit,
    ParseError,
    CacheError,
};

inline const char *to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::OddDiagonal: return "OddDiagonal";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::UnsupportedWeight: return "UnsupportedWeight";
    case ErrorKind::NotHomogeneous: return "NotHomogeneous";
    case ErrorKind::SingularProjector: return "SingularProjector";
    case ErrorKind::SingularCoefficient: return "SingularCoefficient";
    case ErrorKind::NoRationalEmbedding: return "NoRationalEmbedding";
    case ErrorKind::ResourceLimit: return "ResourceLimit";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::CacheError: return "CacheError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace lattheta
