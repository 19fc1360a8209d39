#pragma once

#include <array>

// Published per-trip results used as reference data.
namespace fixtures {

// ICEV emissions-model MAE (g/s) per test trip: QX50 (7), Blazer (2), Pacifica (4).
inline constexpr std::array<double, 13> kIcevMae{0.247, 0.235, 0.317, 0.252, 0.259, 0.398, 0.071,
                                                 0.289, 0.168, 0.292, 0.365, 0.476, 0.304};

// Per-trip EV proxy validation on 14 held-out i3 trips.
inline constexpr std::array<double, 14> kDirectMae{0.0285, 0.0280, 0.0317, 0.0333, 0.0322, 0.0411, 0.0291,
                                                   0.0440, 0.0270, 0.0233, 0.0231, 0.0271, 0.0351, 0.0216};
inline constexpr std::array<double, 14> kProxyMae{0.0290, 0.0300, 0.0290, 0.0220, 0.0300, 0.0340, 0.0270,
                                                  0.0310, 0.0310, 0.0120, 0.0240, 0.0230, 0.0300, 0.0210};
inline constexpr std::array<double, 14> kTorqueMae{4.266, 4.487, 4.510, 3.564, 3.747, 5.796, 4.140,
                                                   5.737, 6.480, 4.040, 3.903, 3.472, 4.852, 5.407};
inline constexpr std::array<double, 14> kThrottleMae{6.374, 3.498, 3.107, 3.082, 3.457, 3.029, 2.774,
                                                     3.910, 3.859, 2.172, 3.988, 7.510, 3.264, 3.311};

} // namespace fixtures
