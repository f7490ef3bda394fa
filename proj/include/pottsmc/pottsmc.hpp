#pragma once

#include "dynamics.hpp"
#include "errors.hpp"
#include "exact.hpp"
#include "graph.hpp"
#include "graph_io.hpp"
#include "linalg.hpp"
#include "model.hpp"
#include "rc_state.hpp"
#include "rng.hpp"
#include "stats.hpp"
#include "suites.hpp"
#include "verify.hpp"

namespace pottsmc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pottsmc
