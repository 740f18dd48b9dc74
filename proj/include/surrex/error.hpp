#pragma once

#include <stdexcept>
#include <string>

namespace surrex {

/// Error taxonomy. The CLI maps these onto stable exit codes:
/// invalid_argument -> 2, data errors -> 3, numerical failures -> 4.
enum class Errc {
  invalid_argument,
  io_error,
  parse_error,
  multiclass_unsupported,
  no_features,
  boundary_not_found,
  one_class_sample,
  ill_conditioned,
  undefined_auc,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace surrex
