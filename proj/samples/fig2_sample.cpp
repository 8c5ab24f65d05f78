// Library use without the scenario layer: second- and third-order
// time-local propagation against the exact dephasing solution.

#include <cstdio>
#include <numbers>
#include <vector>

#include "tclq/tclq.hpp"

int main() {
  using namespace tclq;
  const double drive = 1e-2, phase = std::numbers::pi / 4, g = 4e-3, tau = 0.1;
  const SystemSpec sys{1.0};
  const auto d = DriveSpec::monochromatic(drive, sys.omega, phase);
  const OUNoiseParams noise{g, tau};
  const auto grid = ode::uniform_grid(1000.0, 1.0);
  const BlochVector up(0, 0, 1);

  const auto exact = invert_resolvent(LaplaceParams{0.0, drive, phase, g, tau}, up, grid);
  const auto tl2 = propagate({k1_generator(sys, d, Frame::rotating), k2_generator(sys, noise, Frame::rotating)}, up, grid);
  const auto tl3 = propagate({k1_generator(sys, d, Frame::rotating), k2_generator(sys, noise, Frame::rotating),
                              k3_dephasing_bloch(sys, d, noise, Frame::rotating)},
                             up, grid);

  std::printf("%8s %12s %12s %12s\n", "t", "r_z exact", "r_z TL2", "r_z TL3");
  for (std::size_t k = 0; k < grid.size(); k += 100)
    std::printf("%8.1f %12.6f %12.6f %12.6f\n", grid[k], exact.r[k].z(), tl2.r[k].z(), tl3.r[k].z());
}
