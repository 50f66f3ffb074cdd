#pragma once

#include <stdexcept>
#include <string>

namespace monex {

struct PoleError : std::domain_error {
  explicit PoleError(const std::string& what) : std::domain_error(what) {}
};

struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct NoCollision : std::runtime_error {
  explicit NoCollision(const std::string& what) : std::runtime_error(what) {}
};

struct NoPairFound : std::runtime_error {
  explicit NoPairFound(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidK : std::invalid_argument {
  explicit InvalidK(const std::string& what) : std::invalid_argument(what) {}
};

struct TooLarge : std::invalid_argument {
  explicit TooLarge(const std::string& what) : std::invalid_argument(what) {}
};

struct InvalidN : std::invalid_argument {
  explicit InvalidN(const std::string& what) : std::invalid_argument(what) {}
};

struct EmptyInput : std::invalid_argument {
  explicit EmptyInput(const std::string& what) : std::invalid_argument(what) {}
};

struct NotMonotoneRelation : std::invalid_argument {
  explicit NotMonotoneRelation(const std::string& what) : std::invalid_argument(what) {}
};

struct UnknownFormat : std::invalid_argument {
  explicit UnknownFormat(const std::string& what) : std::invalid_argument(what) {}
};

struct NoConvergence : std::runtime_error {
  double residual;
  explicit NoConvergence(const std::string& what, double res)
      : std::runtime_error(what), residual(res) {}
};

struct BadPrime : std::invalid_argument {
  explicit BadPrime(const std::string& what) : std::invalid_argument(what) {}
};

struct BadDimension : std::invalid_argument {
  explicit BadDimension(const std::string& what) : std::invalid_argument(what) {}
};

struct DegenerateProbes : std::invalid_argument {
  explicit DegenerateProbes(const std::string& what) : std::invalid_argument(what) {}
};

struct ParseError : std::invalid_argument {
  explicit ParseError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace monex
