#ifndef CTOPO_ERRORS_HPP
#define CTOPO_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ctopo {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No matching saturates the left side of a bipartite graph.
class NoPerfectMatching : public Error {
 public:
  explicit NoPerfectMatching(std::size_t unmatched_left)
      : Error("no left-saturating matching exists (left vertex " +
              std::to_string(unmatched_left) + " cannot be matched)"),
        unmatched_left_(unmatched_left) {}

  std::size_t unmatched_left() const noexcept { return unmatched_left_; }

 private:
  std::size_t unmatched_left_;
};

/// Some vertex cannot be reached from the arborescence root.
class NotSpannable : public Error {
 public:
  explicit NotSpannable(std::size_t vertex)
      : Error("vertex " + std::to_string(vertex) + " is unreachable from the root"),
        vertex_(vertex) {}

  std::size_t vertex() const noexcept { return vertex_; }

 private:
  std::size_t vertex_;
};

/// A value violates the invariants of its type (bad index, negative weight, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Switched-system operation invoked on an instance without modes.
class NoModes : public Error {
 public:
  NoModes() : Error("instance has no modes") {}
};

/// Exact search would exceed its configured size or exploration budget.
class TooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace ctopo

#endif  // CTOPO_ERRORS_HPP
