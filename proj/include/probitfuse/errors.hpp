#pragma once

#include <cstddef>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace probitfuse {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the operation's domain (bad probability, dimension mismatch, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Cholesky failed: the matrix is not positive definite.
class FactorizationError : public Error {
public:
    using Error::Error;
};

class CalibrationError : public Error {
public:
    using Error::Error;
};

// 2x2 table with no information about the latent correlation.
class DegenerateTableError : public CalibrationError {
public:
    using CalibrationError::CalibrationError;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Input file could not be parsed. Row numbers are 1-based and count the header.
class ParseError : public Error {
public:
    ParseError(std::string path, std::size_t row, const std::string& what)
        : Error(path + ":" + std::to_string(row) + ": " + what), path_(std::move(path)), row_(row) {}

    const std::string& path() const noexcept { return path_; }
    std::size_t row() const noexcept { return row_; }

private:
    std::string path_;
    std::size_t row_;
};

// Collects non-fatal conditions. Safe to share between threads.
class Warnings {
public:
    Warnings() = default;
    Warnings(const Warnings& other) : messages_(other.snapshot()) {}
    Warnings& operator=(const Warnings& other) {
        if (this != &other) {
            auto copy = other.snapshot();
            std::lock_guard lock(mutex_);
            messages_ = std::move(copy);
        }
        return *this;
    }

    void add(std::string message) {
        std::lock_guard lock(mutex_);
        messages_.push_back(std::move(message));
    }

    std::vector<std::string> snapshot() const {
        std::lock_guard lock(mutex_);
        return messages_;
    }

    std::size_t size() const {
        std::lock_guard lock(mutex_);
        return messages_.size();
    }

    bool empty() const { return size() == 0; }

private:
    mutable std::mutex mutex_;
    std::vector<std::string> messages_;
};

inline void warn(Warnings* sink, std::string message) {
    if (sink != nullptr) sink->add(std::move(message));
}

} // namespace probitfuse
