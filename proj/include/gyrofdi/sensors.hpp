#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gyrofdi/astro.hpp"

namespace gyrofdi {

enum class Axis { X = 0, Y = 1, Z = 2 };
enum class FaultKind { ScaleFactor, Bias };

char axis_name(Axis a);
Axis parse_axis(char c);

struct GyroNoiseSpec {
    double sigma_g = 3.6 * kDegPerHour;  // per-axis std [rad/s]
    std::uint64_t seed = 0;
};

struct RangingNoiseSpec {
    double sigma_axis = 1e-3;  // per-axis std in body frame [m]
    std::uint64_t seed = 0;
};

/// Single-axis gyro fault, inactive before t_activate. A scale factor is
/// dimensionless, a bias is in rad/s. When `profile` is set it overrides
/// `value` as a function of absolute time.
struct FaultSpec {
    Axis axis = Axis::X;
    FaultKind kind = FaultKind::ScaleFactor;
    double value = 1.0;
    double t_activate = 0.0;
    std::function<double(double)> profile;

    bool active(double t) const { return t >= t_activate; }
    double value_at(double t) const { return profile ? profile(t) : value; }
};

/// Parses "sx=0.5@56" or "bz=0.1@56" (bias in deg/s).
FaultSpec parse_fault(const std::string& text);
std::string describe(const FaultSpec& f);

struct MeasurementRecord {
    double t = 0.0;
    Vec3 omega_meas = Vec3::Zero();  // [rad/s], body
    Vec3 r_sp_meas = Vec3::Zero();   // [m], body
};

/// Zero-mean white Gaussian vectors from a seeded 64-bit Mersenne twister.
class NoiseStream {
public:
    explicit NoiseStream(std::uint64_t seed) : engine_(seed) {}

    /// Draws three i.i.d. N(0, sigma^2) values; draws nothing when sigma == 0.
    Vec3 draw(double sigma);

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Deterministic part of the gyro model: the faulty axis reads s*w + b.
Vec3 apply_fault(const Vec3& omega_true, const FaultSpec* fault, double t);

/// Faulty, noisy gyro triad. One instance per run; draws advance the stream.
class GyroSensor {
public:
    GyroSensor(GyroNoiseSpec noise, std::optional<FaultSpec> fault);
    Vec3 measure(const Vec3& omega_true, double t);

private:
    GyroNoiseSpec noise_;
    std::optional<FaultSpec> fault_;
    NoiseStream stream_;
};

class RangeSensor {
public:
    explicit RangeSensor(RangingNoiseSpec noise);
    Vec3 measure(const Vec3& r_sp_true);

private:
    RangingNoiseSpec noise_;
    NoiseStream stream_;
};

/// Five-point central differences on a window f(t-2h) .. f(t+2h).
Vec3 fd4_first_derivative(std::span<const Vec3, 5> window, double h);
Vec3 fd4_second_derivative(std::span<const Vec3, 5> window, double h);

/// Window of `series` centred on `k` with spacing `stride` samples.
/// Throws std::out_of_range when the window leaves the series.
std::array<Vec3, 5> centred_window(std::span<const Vec3> series, std::size_t k, std::size_t stride);

/// Noise gain of the second-derivative stencil: output std / input std for h = 1.
double fd4_second_noise_gain();
double fd4_first_noise_gain();

}  // namespace gyrofdi
