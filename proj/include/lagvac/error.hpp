#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lagvac {

enum class ErrorKind {
  invalid_input,
  domain,
  superluminal,
  degenerate_map,
  invalid_weight,
  unsupported_exponent,
  simulation_aborted,
  io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base of every error raised by the library. Carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// An error tied to one grid node (J <= 0, superluminal velocity, ...).
class NodeError : public Error {
 public:
  NodeError(ErrorKind kind, std::size_t node, const std::string& what)
      : Error(kind, what + " at node " + std::to_string(node)), node_(node) {}
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorKind::invalid_input, what);
}

}  // namespace lagvac
