#pragma once

#include <string>
#include <vector>

#include "kronred/crn_model.hpp"

namespace kronred::builtin {

/// Three-species reversible chain x1 <-> x2 <-> x3 with inflow 4.8 into x1,
/// outflow 7.64 from x3, output x3.
CrnNetwork glycolysis();

/// Six species, five complexes (x1+x5, x2+x6, x2, x3+x5, x4); inflow 0.01
/// into x2, outflow from x4, output complex x2.
CrnNetwork glycogen();

/// Five-state activated sludge network; inflow 1.19 into x4, output x1 + x3.
CrnNetwork asm1();

/// Kinetic proofreading chain x0 -> x1 -> ... -> x20, each x_i (i >= 1)
/// dissociating back to x0; inflow into x0, outflow 10 from x20, output x20.
CrnNetwork mckeithan();

std::vector<std::string> names();
CrnNetwork by_name(const std::string& name);

}  // namespace kronred::builtin
