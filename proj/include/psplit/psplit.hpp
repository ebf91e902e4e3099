#pragma once

#include "psplit/lattice.hpp"
#include "psplit/fock.hpp"
#include "psplit/mode_operator.hpp"
#include "psplit/trig_poly.hpp"
#include "psplit/field_ops.hpp"
#include "psplit/checks.hpp"
#include "psplit/symbolic.hpp"
#include "psplit/anomaly.hpp"
#include "psplit/vacuum.hpp"
#include "psplit/report.hpp"
#include "psplit/commands.hpp"
