#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace hope {

using cdouble = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cdouble iu{0.0, 1.0};

/// Complex 3-vector (Cartesian components of a field or amplitude).
struct Vec3c {
    cdouble x{}, y{}, z{};

    Vec3c operator+(const Vec3c& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3c operator-(const Vec3c& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3c operator*(cdouble s) const { return {x * s, y * s, z * s}; }
    double norm2() const { return std::norm(x) + std::norm(y) + std::norm(z); }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec3c operator*(cdouble s, const Vec3c& v) { return v * s; }

enum class ErrorCategory {
    Config,
    InvalidPolarization,
    WoodAnomaly,
    NearSingularMode,
    DivergentSeries,
    Io,
};

inline const char* to_string(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::Config: return "config";
        case ErrorCategory::InvalidPolarization: return "invalid_polarization";
        case ErrorCategory::WoodAnomaly: return "wood_anomaly";
        case ErrorCategory::NearSingularMode: return "near_singular_mode";
        case ErrorCategory::DivergentSeries: return "divergent_series";
        case ErrorCategory::Io: return "io";
    }
    return "unknown";
}

/// Library-wide exception carrying a machine-readable category.
class Error : public std::runtime_error {
public:
    Error(ErrorCategory cat, const std::string& msg)
        : std::runtime_error(msg), category_(cat) {}
    ErrorCategory category() const { return category_; }

private:
    ErrorCategory category_;
};

} // namespace hope
