#pragma once
// Landau-Zener-Stuckelberg estimates for a single pulse: one avoided crossing
// of minimum gap Delta traversed twice at annealing velocity v.

namespace dicke::lzs {

inline constexpr double kDefaultGap = 0.5;

// Single passage: exp(-2 pi Delta^2 / (4 v)).
double p_lz(double gap, double velocity);

// Double passage with Stuckelberg phase: 4 P (1 - P) sin^2(phase).
double p_plus_double(double gap, double velocity, double phase);

// Phase average of the double passage: 2 P (1 - P).
double p_plus_averaged(double gap, double velocity);

// Velocity maximizing p_plus_averaged, where P_LZ = 1/2: pi Delta^2 / (2 ln 2).
double peak_velocity(double gap);

}  // namespace dicke::lzs
