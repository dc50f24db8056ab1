#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace simtext {

// Base class for all domain errors. The CLI maps these to exit code 1;
// usage/config problems are reported as ConfigError and map to exit code 2.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
    DimensionMismatch(std::size_t expected, std::size_t got)
        : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                std::to_string(got)) {}
};

// Zero-norm or non-finite vector; such vectors poison cosine similarity.
class DegenerateVector : public Error {
public:
    using Error::Error;
};

class EmptyIndex : public Error {
public:
    using Error::Error;
};

class CorruptSnapshot : public Error {
public:
    CorruptSnapshot(const std::string& what, std::size_t byte_offset)
        : Error(what + " (at byte " + std::to_string(byte_offset) + ")"),
          byte_offset_(byte_offset) {}

    std::size_t byte_offset() const { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

class EmptyText : public Error {
public:
    using Error::Error;
};

class ProviderUnavailable : public Error {
public:
    using Error::Error;
};

// One element of a batch failed; index identifies the offending input.
class BatchError : public Error {
public:
    BatchError(std::size_t index, const std::string& what)
        : Error("batch element " + std::to_string(index) + ": " + what), index_(index) {}

    std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

class UnknownTemplate : public Error {
public:
    using Error::Error;
};

class EmptyResponse : public Error {
public:
    using Error::Error;
};

class InvalidFraction : public Error {
public:
    using Error::Error;
};

class ManifestMismatch : public Error {
public:
    using Error::Error;
};

class UnknownLabel : public Error {
public:
    using Error::Error;
};

class EmptyMatrix : public Error {
public:
    using Error::Error;
};

class MissingData : public Error {
public:
    using Error::Error;
};

class InvalidPlan : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Bad command line, unreadable or malformed config file. Exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace simtext
