#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace modfus {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SyntaxError : Error {
  std::size_t offset;
  SyntaxError(const std::string& msg, std::size_t off)
      : Error("syntax error at byte " + std::to_string(off) + ": " + msg), offset(off) {}
};

struct ZeroDivision : Error {
  ZeroDivision() : Error("division by zero") {}
  explicit ZeroDivision(const std::string& what) : Error("division by zero: " + what) {}
};

struct DuplicateEntry : Error {
  using Error::Error;
};

struct IndexOutOfRange : Error {
  using Error::Error;
};

struct MissingEntry : Error {
  using Error::Error;
};

struct NotPermutation : Error {
  using Error::Error;
};

struct QdimMismatch : Error {
  using Error::Error;
};

// Verlinde sum that is not a rational integer; `residual` is the exact value.
struct NonIntegerResult : Error {
  int i, j, k;
  std::string residual;
  NonIntegerResult(int i_, int j_, int k_, std::string res)
      : Error("non-integer fusion coefficient N(" + std::to_string(i_) + "," + std::to_string(j_) +
              ")^" + std::to_string(k_) + " = " + res),
        i(i_), j(j_), k(k_), residual(std::move(res)) {}
};

struct NegativeResult : Error {
  int i, j, k;
  long long value;
  NegativeResult(int i_, int j_, int k_, long long v)
      : Error("negative fusion coefficient N(" + std::to_string(i_) + "," + std::to_string(j_) +
              ")^" + std::to_string(k_) + " = " + std::to_string(v)),
        i(i_), j(j_), k(k_), value(v) {}
};

struct Underivable : Error {
  using Error::Error;
};

struct Underdetermined : Error {
  std::vector<std::string> free_unknowns;
  Underdetermined(const std::string& msg, std::vector<std::string> free)
      : Error(msg), free_unknowns(std::move(free)) {}
};

struct Inconsistent : Error {
  // one line per equation in a minimal contradicting subset
  std::vector<std::string> certificate;
  Inconsistent(const std::string& msg, std::vector<std::string> cert)
      : Error(msg), certificate(std::move(cert)) {}
};

}  // namespace modfus
