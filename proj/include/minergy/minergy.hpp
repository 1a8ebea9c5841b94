#pragma once

// Umbrella header for the minergy library.

#include "core.hpp"
#include "graphs.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "sinr.hpp"
#include "solution.hpp"
#include "solver.hpp"
#include "thresholds.hpp"
#include "cli.hpp"
