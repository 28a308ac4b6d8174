#pragma once

#include <numbers>

namespace gyrofdi {

/// Earth model constants. Defaults are the standard EGM/WGS values.
struct EarthConstants {
    double mu = 3.986004418e14;  // [m^3/s^2]
    double re = 6.378137e6;      // equatorial radius [m]
    double j2 = 1.08263e-3;
};

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDeg = kPi / 180.0;
inline constexpr double kDegPerHour = kDeg / 3600.0;  // deg/h -> rad/s
inline constexpr double kKm = 1000.0;

}  // namespace gyrofdi
