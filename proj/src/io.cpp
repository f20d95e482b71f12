#include "ostd/io.hpp"

#include <cstdio>

namespace ostd {

std::string csv_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  out << "# schema=1\n";
  out << "slot";
  for (long j = 0; j < traj.states.cols(); ++j) out << ",s" << j;
  out << ",reward,terminated\n";
  const long slots = traj.num_slots();
  for (long t = 0; t < slots; ++t) {
    out << (t + 1);
    for (long j = 0; j < traj.states.cols(); ++j)
      out << ',' << csv_double(traj.states(t, j));
    out << ',' << csv_double(traj.rewards[t]) << ','
        << ((traj.terminated && t + 1 == slots) ? 1 : 0) << '\n';
  }
}

}  // namespace ostd
