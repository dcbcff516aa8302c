// ddg: nodally bound-preserving discontinuous Galerkin drift-diffusion solvers
// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>

namespace ddg {

// Single exception type for all recoverable failures (I/O, parsing, solver
// breakdown, contract violations).  The C API maps it onto status codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ddg
