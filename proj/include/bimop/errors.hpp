#pragma once

#include <stdexcept>
#include <string>

namespace bimop {

/// Base of every error raised by the library. `kind()` is the stable
/// machine-readable name that the CLI reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define BIMOP_DEFINE_ERROR(Name)                                      \
    class Name : public Error {                                       \
    public:                                                           \
        explicit Name(const std::string& what) : Error(#Name, what) {} \
    }

// multiindex
BIMOP_DEFINE_ERROR(NotComparable);
BIMOP_DEFINE_ERROR(LengthMismatch);

// scalarfield
BIMOP_DEFINE_ERROR(NotSquare);
BIMOP_DEFINE_ERROR(DimensionMismatch);
BIMOP_DEFINE_ERROR(ParseError);

// measures
BIMOP_DEFINE_ERROR(TableExhausted);
BIMOP_DEFINE_ERROR(IndexOutOfRange);
BIMOP_DEFINE_ERROR(NegativeAlpha);
BIMOP_DEFINE_ERROR(NoWeightEvaluator);

// mopcore
BIMOP_DEFINE_ERROR(EmptyIndex);

// relations
BIMOP_DEFINE_ERROR(ChainInvalid);
BIMOP_DEFINE_ERROR(PathInvalid);
BIMOP_DEFINE_ERROR(IndexTooSmall);

// product
BIMOP_DEFINE_ERROR(SurplusNegative);
BIMOP_DEFINE_ERROR(BadV);
BIMOP_DEFINE_ERROR(DivisionByZeroFactor);

#undef BIMOP_DEFINE_ERROR

/// Matrix is singular. Carries the determinant as a printable string
/// since the scalar type is a template parameter elsewhere.
class Singular : public Error {
public:
    explicit Singular(std::string det)
        : Error("Singular", "matrix is singular (det = " + det + ")"), det_(std::move(det)) {}
    const std::string& det() const noexcept { return det_; }

private:
    std::string det_;
};

/// The moment matrix of a multi-index is not regular.
class NotNormal : public Error {
public:
    NotNormal(const std::string& index, std::string det)
        : Error("NotNormal", "multi-index " + index + " is not normal (det = " + det + ")"),
          index_(index), det_(std::move(det)) {}
    const std::string& index() const noexcept { return index_; }
    const std::string& det() const noexcept { return det_; }

private:
    std::string index_;
    std::string det_;
};

/// Malformed configuration document; `path()` is a JSON pointer to the field.
class SchemaError : public Error {
public:
    SchemaError(std::string path, const std::string& what)
        : Error("SchemaError", path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace bimop
