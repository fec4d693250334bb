#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace klustree {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A malformed TSV line. `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EmptyGraphError : public Error {
 public:
  EmptyGraphError() : Error("graph input contains no triples") {}
};

/// Unknown entity, predicate, query id, ...
class NotFoundError : public Error {
 public:
  using Error::Error;
};

class UnmatchedKeywordError : public Error {
 public:
  explicit UnmatchedKeywordError(std::string keyword)
      : Error("keyword matches no node: \"" + keyword + "\""),
        keyword_(std::move(keyword)) {}
  const std::string& keyword() const noexcept { return keyword_; }

 private:
  std::string keyword_;
};

/// A violated precondition (bad parameters, mismatched LM kinds, K out of range).
class ContractError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Wraps a module error with the pipeline stage it came from.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(stage + ": " + cause.what()), stage_(std::move(stage)) {
    if (const auto* unmatched = dynamic_cast<const UnmatchedKeywordError*>(&cause)) {
      keyword_ = unmatched->keyword();
    }
  }
  const std::string& stage() const noexcept { return stage_; }
  /// The offending keyword when the cause was an UnmatchedKeywordError, else empty.
  const std::string& keyword() const noexcept { return keyword_; }

 private:
  std::string stage_;
  std::string keyword_;
};

}  // namespace klustree
