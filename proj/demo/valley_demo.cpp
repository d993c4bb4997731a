// Prints the ground-state entanglement valley and the squeezed-state dip shift at lab-scale
// placeholder parameters.
#include <cmath>
#include <cstdio>

#include "gravent/gravent.hpp"

int main() {
  using namespace gravent;
  PhysicalParams p = lab_defaults();
  auto sc = derive_scales(p);
  auto dip = find_dip_ground(p);
  auto sp = plateau_entropy(p);

  std::printf("m = %g kg, d = %g m\n", p.m, p.d);
  std::printf("dip: omega = %.6e rad/s, delta_x = %.6e m (%.3e x_P)\n", dip.omega_dip, dip.delta_x_dip,
              dip.delta_x_dip / sc.x_planck);
  std::printf("plateau S_p = %.6e\n\n", sp.value);

  std::printf("%14s %14s %14s\n", "dx/x_P", "S/S_p", "log10 S");
  for (int k = 0; k <= 24; k += 2) {
    double dx = std::pow(10.0, k) * sc.x_planck;
    PhysicalParams q = with_omega(p, omega_for_delta_x(p, dx));
    auto s = entropy_closed_form(q);
    auto n = s.normalized_by(sp, Normalization::per_plateau_S_p);
    std::printf("%14.3e %14.6e %14.6f\n", dx / sc.x_planck, n.value, s.log10_value);
  }
  {
    PhysicalParams q = with_omega(p, dip.omega_dip);
    auto n = entropy_closed_form(q).normalized_by(sp, Normalization::per_plateau_S_p);
    std::printf("%14.3e %14.6e   <- dip\n\n", dip.delta_x_dip / sc.x_planck, n.value);
  }

  std::printf("squeezed dips (max entropy at omega_m t = pi/2):\n");
  for (double factor : {1.0, 4.0, 0.25}) {
    auto s = derive_scales(with_omega(p, factor * omega_zero(p)));
    double r_dip = find_dip_squeezed(s);
    auto m = golden_section([&](double r) { return max_entropy_over_time(s, r).log10_value; }, -1.5, 1.5, 1e-9);
    std::printf("  omega = %5.2f omega_0: r_dip = %+.6f, golden-section minimum at %+.6f\n", factor, r_dip, m.x);
  }
  return 0;
}
