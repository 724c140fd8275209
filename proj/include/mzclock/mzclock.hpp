#pragma once

// Mach-Zehnder interferometry of a massive particle carrying an internal
// clock in a weak gravitational field: proper-time phases, visibility loss
// from which-way information, and experiment planning.

#include "mzclock/analysis.hpp"
#include "mzclock/clock.hpp"
#include "mzclock/constants.hpp"
#include "mzclock/interferometer.hpp"
#include "mzclock/io.hpp"
#include "mzclock/oracle.hpp"
#include "mzclock/run_config.hpp"
#include "mzclock/weak_field.hpp"
