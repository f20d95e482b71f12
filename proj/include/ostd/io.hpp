#pragma once

#include <ostream>
#include <string>

#include "ostd/environments.hpp"

namespace ostd {

// Fixed-format float for CSV cells; deterministic for identical doubles.
std::string csv_double(double value);

// One row per slot: slot, state components..., reward, terminated-flag.
// The flag is 1 only on the final slot of a terminated trajectory.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

}  // namespace ostd
