#pragma once

#include "tclq/core/expm.hpp"
#include "tclq/core/pauli.hpp"
#include "tclq/core/so3.hpp"
#include "tclq/core/state.hpp"
#include "tclq/core/superop.hpp"
#include "tclq/core/types.hpp"
