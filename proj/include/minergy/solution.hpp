#pragma once

// Solution: result of any solve path. `certified` is true only when the
// closed-form dispatch proved optimality; exhaustive-search results and
// best-of-family fallbacks carry certified == false even when they are in
// fact optimal, so callers can tell how the answer was obtained.

#include <string>
#include <vector>

#include "core.hpp"
#include "graphs.hpp"

namespace minergy {

struct Solution {
  TransmissionGraph graph = TransmissionGraph::direct();
  FlowMatrix flow{1};
  double energy = 0.0;
  std::string regime;
  bool certified = false;
  /// Family graphs whose energy ties the primary (within 1e-9 relative)
  /// with a different flow; the primary is excluded.
  std::vector<TransmissionGraph> ties;
};

}  // namespace minergy
