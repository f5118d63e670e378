#ifndef BN_ERROR_HPP_
#define BN_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace bn {

enum class ErrorKind {
  MissingValue,        // incomplete or out-of-range assignment
  NotAPath,            // triple is not a path in the skeleton
  InvalidQuery,        // malformed query (bad target, bad evidence)
  ImpossibleEvidence,  // evidence has zero probability
  NotAPolytree,        // polytree algorithm applied to a loopy network
  TooLarge,            // enumeration guard tripped
  Parse,               // network file syntax error
  Validation,          // network fails structural validation
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bn

#endif  // BN_ERROR_HPP_
