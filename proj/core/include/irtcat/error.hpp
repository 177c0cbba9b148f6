#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace irtcat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bank file or item definition violates the bank format or item invariants.
class BankError : public Error {
 public:
  BankError(std::string message, std::optional<std::size_t> row = std::nullopt,
            std::string field = {}, std::string item_id = {});

  std::optional<std::size_t> row() const noexcept { return row_; }
  const std::string& field() const noexcept { return field_; }
  const std::string& item_id() const noexcept { return item_id_; }

 private:
  std::optional<std::size_t> row_;
  std::string field_;
  std::string item_id_;
};

/// Invalid configuration: bad rule syntax, bad endpoint settings, HTTP 4xx.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A metric is undefined for its input (empty vectors, zero variance, ...).
class MetricError : public Error {
 public:
  using Error::Error;
};

/// Remote respondent could not be reached after all retries.
class TransportError : public Error {
 public:
  TransportError(std::string message, std::string item_id);
  const std::string& item_id() const noexcept { return item_id_; }

 private:
  std::string item_id_;
};

/// Internal invariant broken; indicates a defect rather than bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace irtcat
