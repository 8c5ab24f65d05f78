#pragma once

#include "tclq/core.hpp"
#include "tclq/laplace/novikov.hpp"
#include "tclq/noise/monte_carlo.hpp"
#include "tclq/pseudomode/lindblad.hpp"
#include "tclq/pseudomode/tcl.hpp"
#include "tclq/scenario/run.hpp"
#include "tclq/tcl/propagate.hpp"
