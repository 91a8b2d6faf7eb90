#pragma once

#include <functional>
#include <string>

#include "doctest.h"
#include "painleve/errors.hpp"

namespace painleve::testing {

// Runs `f` and checks that it throws painleve::Error of `kind`.
inline void require_error(ErrorKind kind, const std::function<void()>& f) {
  bool thrown = false;
  try {
    f();
  } catch (const Error& e) {
    thrown = true;
    CHECK_MESSAGE(e.kind() == kind, "got " << to_string(e.kind()) << ": "
                                           << e.what());
  }
  CHECK_MESSAGE(thrown, "expected " << to_string(kind));
}

}  // namespace painleve::testing
