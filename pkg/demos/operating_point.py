"""Pick the working point, then size the bright reference pulse.

The search refines a coarse intensity grid with a golden-section pass.
Once the reach is known, the reference pulse must be bright enough that
a blocked signal cycle almost never hides inside the bright pulse's own
no-click probability; that floor climbs exponentially with distance.
"""

import math

from brpqkd import (
    ChannelParams,
    GYS_DETECTOR,
    brp_intensity_bound,
    optimal_signal_intensity,
)


def main():
    grid = [i / 20 for i in range(2, 21)]
    best = optimal_signal_intensity(GYS_DETECTOR, 0.21, grid)
    print(f"optimal signal intensity: mu_s = {best.mu_s_star:.4f}")
    print(f"secure reach at optimum:  {best.distance_km:.2f} km")

    channel = ChannelParams(length_km=best.distance_km)
    bound = brp_intensity_bound(best.mu_s_star, channel, GYS_DETECTOR)
    print(f"\nreference intensity floor at that reach: {bound.mu_b_min:.4e}")
    print(f"no-click probability at the floor:       {bound.g_b0_at_bound:.4e}")
    print(f"suppression budget:                      {bound.suppression_budget}")

    print("\nfloor versus distance (note the fixed decade-per-47.6-km slope)")
    print(f"{'length_km':>9}  {'mu_b_min':>12}  {'log10':>8}")
    for length in (25, 50, 75, 100, 125, 146):
        b = brp_intensity_bound(best.mu_s_star, ChannelParams(length_km=length), GYS_DETECTOR)
        print(f"{length:9d}  {b.mu_b_min:12.4e}  {math.log10(b.mu_b_min):8.4f}")


if __name__ == "__main__":
    main()
