#include "irtcat/error.hpp"

#include <utility>

namespace irtcat {

namespace {

std::string decorate(const std::string& message, std::optional<std::size_t> row,
                     const std::string& field, const std::string& item_id) {
  std::string out;
  if (row) out += "row " + std::to_string(*row) + ": ";
  if (!field.empty()) out += "field '" + field + "': ";
  if (!item_id.empty()) out += "item '" + item_id + "': ";
  return out + message;
}

}  // namespace

BankError::BankError(std::string message, std::optional<std::size_t> row, std::string field,
                     std::string item_id)
    : Error(decorate(message, row, field, item_id)),
      row_(row),
      field_(std::move(field)),
      item_id_(std::move(item_id)) {}

TransportError::TransportError(std::string message, std::string item_id)
    : Error("item '" + item_id + "': " + message), item_id_(std::move(item_id)) {}

}  // namespace irtcat
