#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>

namespace residua {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in ordinal or group-expression text. `offset` is a byte offset
/// into the input; `expected` lists the tokens that would have been accepted.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::string message, std::set<std::string> expected = {});

  std::size_t offset() const noexcept { return offset_; }
  const std::set<std::string>& expected() const noexcept { return expected_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t offset_;
  std::string detail_;
  std::set<std::string> expected_;
};

/// An operation was called outside its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Element does not belong to the group it was handed to.
class GroupMismatch : public Error {
 public:
  using Error::Error;
};

/// Finite enumeration exceeded a hard size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// No constructor is registered for the requested group or chain shape.
class Unregistered : public Error {
 public:
  using Error::Error;
};

/// A tree level or transversal could not be materialized.
class NotMaterializable : public Error {
 public:
  using Error::Error;
};

}  // namespace residua
