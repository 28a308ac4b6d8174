#include "gyrofdi/sensors.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gyrofdi {

char axis_name(Axis a) { return "xyz"[static_cast<int>(a)]; }

Axis parse_axis(char c) {
    switch (c) {
        case 'x': case 'X': return Axis::X;
        case 'y': case 'Y': return Axis::Y;
        case 'z': case 'Z': return Axis::Z;
        default: throw std::invalid_argument(std::string("unknown axis '") + c + "'");
    }
}

FaultSpec parse_fault(const std::string& text) {
    // <kind><axis>=<value>@<t_activate>
    const auto eq = text.find('=');
    const auto at = text.find('@');
    if (text.size() < 2 || eq != 2 || at == std::string::npos || at < eq) {
        throw std::invalid_argument("fault must look like sx=0.5@56 or bz=0.1@56, got '" + text + "'");
    }
    FaultSpec f;
    switch (text[0]) {
        case 's': case 'S': f.kind = FaultKind::ScaleFactor; break;
        case 'b': case 'B': f.kind = FaultKind::Bias; break;
        default: throw std::invalid_argument("fault kind must be s or b in '" + text + "'");
    }
    f.axis = parse_axis(text[1]);
    try {
        std::size_t used = 0;
        const std::string v = text.substr(eq + 1, at - eq - 1);
        f.value = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        const std::string t = text.substr(at + 1);
        f.t_activate = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed fault value or time in '" + text + "'");
    }
    if (!std::isfinite(f.value) || !std::isfinite(f.t_activate) || f.t_activate < 0.0) {
        throw std::invalid_argument("fault value and activation time must be finite, time >= 0, in '" + text + "'");
    }
    if (f.kind == FaultKind::Bias) f.value *= kDeg;
    return f;
}

std::string describe(const FaultSpec& f) {
    std::ostringstream os;
    os.precision(17);
    os << (f.kind == FaultKind::ScaleFactor ? 's' : 'b') << axis_name(f.axis) << '=';
    os << (f.kind == FaultKind::Bias ? f.value / kDeg : f.value) << '@' << f.t_activate;
    return os.str();
}

Vec3 NoiseStream::draw(double sigma) {
    if (sigma == 0.0) return Vec3::Zero();
    Vec3 out;
    for (int i = 0; i < 3; ++i) out[i] = sigma * normal_(engine_);
    return out;
}

Vec3 apply_fault(const Vec3& omega_true, const FaultSpec* fault, double t) {
    Vec3 out = omega_true;
    if (fault == nullptr || !fault->active(t)) return out;
    const int ax = static_cast<int>(fault->axis);
    const double v = fault->value_at(t);
    if (fault->kind == FaultKind::ScaleFactor) {
        out[ax] = v * omega_true[ax];
    } else {
        out[ax] = omega_true[ax] + v;
    }
    return out;
}

GyroSensor::GyroSensor(GyroNoiseSpec noise, std::optional<FaultSpec> fault)
    : noise_(noise), fault_(std::move(fault)), stream_(noise.seed) {
    if (noise_.sigma_g < 0.0) throw std::invalid_argument("gyro noise sigma must be non-negative");
}

Vec3 GyroSensor::measure(const Vec3& omega_true, double t) {
    return apply_fault(omega_true, fault_ ? &*fault_ : nullptr, t) + stream_.draw(noise_.sigma_g);
}

RangeSensor::RangeSensor(RangingNoiseSpec noise) : noise_(noise), stream_(noise.seed) {
    if (noise_.sigma_axis < 0.0) throw std::invalid_argument("ranging noise sigma must be non-negative");
}

Vec3 RangeSensor::measure(const Vec3& r_sp_true) { return r_sp_true + stream_.draw(noise_.sigma_axis); }

Vec3 fd4_first_derivative(std::span<const Vec3, 5> w, double h) {
    return (w[0] - 8.0 * w[1] + 8.0 * w[3] - w[4]) / (12.0 * h);
}

Vec3 fd4_second_derivative(std::span<const Vec3, 5> w, double h) {
    return (-w[0] + 16.0 * w[1] - 30.0 * w[2] + 16.0 * w[3] - w[4]) / (12.0 * h * h);
}

std::array<Vec3, 5> centred_window(std::span<const Vec3> series, std::size_t k, std::size_t stride) {
    if (stride == 0) throw std::invalid_argument("stencil stride must be positive");
    if (k < 2 * stride || k + 2 * stride >= series.size()) {
        throw std::out_of_range("no centred five-point window at sample " + std::to_string(k));
    }
    return {series[k - 2 * stride], series[k - stride], series[k], series[k + stride], series[k + 2 * stride]};
}

double fd4_second_noise_gain() { return std::sqrt(1.0 + 256.0 + 900.0 + 256.0 + 1.0) / 12.0; }
double fd4_first_noise_gain() { return std::sqrt(1.0 + 64.0 + 64.0 + 1.0) / 12.0; }

}  // namespace gyrofdi
