#pragma once

#include <stdexcept>
#include <string>

namespace apollo {

// Root of the pipeline error taxonomy. Every throwing operation in the
// library throws a subclass of this.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --- email ingest ---

// The input is not recognizably an RFC 822/MIME message.
class MalformedMessage : public Error {
public:
    using Error::Error;
};

// The message parsed but contains no textual part.
class EmptyBody : public Error {
public:
    using Error::Error;
};

// A dataset file violates the CSV schema. Carries the 1-based data row.
class SchemaError : public Error {
public:
    SchemaError(long row, const std::string& what)
        : Error("row " + std::to_string(row) + ": " + what), row_(row) {}
    long row() const noexcept { return row_; }

private:
    long row_;
};

// --- enrichment ---

class UnparseableUrl : public Error {
public:
    using Error::Error;
};

// Common base for failures talking to an external service (reputation,
// geolocation, chat completions). The CLI maps these to exit code 3.
class BackendError : public Error {
public:
    using Error::Error;
};

class AuthError : public BackendError {
public:
    using BackendError::BackendError;
};

class RateLimited : public BackendError {
public:
    using BackendError::BackendError;
};

class NotFound : public BackendError {
public:
    using BackendError::BackendError;
};

class TransportError : public BackendError {
public:
    using BackendError::BackendError;
};

// --- prompting / response parsing ---

// A structurally bad backend response. Distinct from BackendError: the call
// succeeded but the payload cannot be used. Also mapped to exit code 3.
class ResponseFormatError : public Error {
public:
    using Error::Error;
};

class NoJsonFound : public ResponseFormatError {
public:
    using ResponseFormatError::ResponseFormatError;
};

class MissingField : public ResponseFormatError {
public:
    explicit MissingField(const std::string& field)
        : ResponseFormatError("missing field: " + field), field_(field) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class BadLabel : public ResponseFormatError {
public:
    explicit BadLabel(const std::string& value)
        : ResponseFormatError("bad label: \"" + value + "\""), value_(value) {}
    const std::string& value() const noexcept { return value_; }

private:
    std::string value_;
};

class ProbabilityOutOfRange : public ResponseFormatError {
public:
    explicit ProbabilityOutOfRange(const std::string& value)
        : ResponseFormatError("probability out of range: " + value) {}
};

class ExplanationCountOutOfBounds : public ResponseFormatError {
public:
    explicit ExplanationCountOutOfBounds(std::size_t n)
        : ResponseFormatError("explanation list has " + std::to_string(n) +
                              " items, expected 3 to 5"),
          count_(n) {}
    std::size_t count() const noexcept { return count_; }

private:
    std::size_t count_;
};

// --- warning ---

// render_warning was asked to render a warning for an unprimed legit verdict.
class RenderPrecondition : public Error {
public:
    using Error::Error;
};

// --- metrics ---

// ROC AUC is undefined when only one truth class is present.
class SingleClass : public Error {
public:
    using Error::Error;
};

// --- io ---

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace apollo
