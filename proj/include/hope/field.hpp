#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "hope/grids.hpp"
#include "hope/types.hpp"

namespace hope {

/// Lateral-Fourier x vertical-collocation discretization shared by all fields.
struct Discretization {
    LateralGrid lat;
    VerticalGrid vert;

    Discretization() = default;
    Discretization(LateralGrid l, VerticalGrid v) : lat(std::move(l)), vert(std::move(v)) {}
};

/// Complex scalar sampled per lateral mode (p,q) and vertical node z_k.
/// Vertical profiles are contiguous in memory.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(int nx, int ny, int nz) : Nx_(nx), Ny_(ny), Nz_(nz), data_(size_t(nx) * ny * nz) {}

    int Nx() const { return Nx_; }
    int Ny() const { return Ny_; }
    int Nz() const { return Nz_; }

    cdouble& at(int i, int j, int k) { return data_[(size_t(i) * Ny_ + j) * Nz_ + k]; }
    const cdouble& at(int i, int j, int k) const { return data_[(size_t(i) * Ny_ + j) * Nz_ + k]; }

    cdouble* profile(int i, int j) { return &data_[(size_t(i) * Ny_ + j) * Nz_]; }
    const cdouble* profile(int i, int j) const { return &data_[(size_t(i) * Ny_ + j) * Nz_]; }

    std::vector<cdouble>& raw() { return data_; }
    const std::vector<cdouble>& raw() const { return data_; }

    bool same_shape(const ScalarField& o) const {
        return Nx_ == o.Nx_ && Ny_ == o.Ny_ && Nz_ == o.Nz_;
    }

    bool finite() const {
        for (const auto& v : data_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : data_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    int Nx_ = 0, Ny_ = 0, Nz_ = 0;
    std::vector<cdouble> data_;
};

/// Complex 3-vector field; each Cartesian component is a ScalarField.
class VectorField {
public:
    VectorField() = default;
    VectorField(int nx, int ny, int nz) {
        for (auto& c : comp_) c = ScalarField(nx, ny, nz);
    }

    int Nx() const { return comp_[0].Nx(); }
    int Ny() const { return comp_[0].Ny(); }
    int Nz() const { return comp_[0].Nz(); }

    ScalarField& operator[](int m) { return comp_[m]; }
    const ScalarField& operator[](int m) const { return comp_[m]; }

    Vec3c at(int i, int j, int k) const {
        return {comp_[0].at(i, j, k), comp_[1].at(i, j, k), comp_[2].at(i, j, k)};
    }

    void set(int i, int j, int k, const Vec3c& v) {
        comp_[0].at(i, j, k) = v.x;
        comp_[1].at(i, j, k) = v.y;
        comp_[2].at(i, j, k) = v.z;
    }

    bool same_shape(const VectorField& o) const { return comp_[0].same_shape(o.comp_[0]); }

    bool finite() const {
        return comp_[0].finite() && comp_[1].finite() && comp_[2].finite();
    }

    double max_abs() const {
        return std::max({comp_[0].max_abs(), comp_[1].max_abs(), comp_[2].max_abs()});
    }

    VectorField& operator+=(const VectorField& o) {
        for (int m = 0; m < 3; ++m) {
            auto& a = comp_[m].raw();
            const auto& b = o.comp_[m].raw();
            for (size_t n = 0; n < a.size(); ++n) a[n] += b[n];
        }
        return *this;
    }

    VectorField& operator*=(cdouble s) {
        for (int m = 0; m < 3; ++m)
            for (auto& v : comp_[m].raw()) v *= s;
        return *this;
    }

    /// Lateral modal trace at a vertical node (k = 0 is z = h, k = Nz-1 is z = -h).
    /// Returned as three Nx*Ny arrays in storage order.
    std::array<std::vector<cdouble>, 3> trace(int k) const {
        std::array<std::vector<cdouble>, 3> t;
        for (int m = 0; m < 3; ++m) {
            t[m].resize(size_t(Nx()) * Ny());
            for (int i = 0; i < Nx(); ++i)
                for (int j = 0; j < Ny(); ++j) t[m][size_t(i) * Ny() + j] = comp_[m].at(i, j, k);
        }
        return t;
    }

private:
    std::array<ScalarField, 3> comp_;
};

/// Lateral modal 3-vector array (a boundary trace); same storage order as fields.
struct Trace {
    int Nx = 0, Ny = 0;
    std::array<std::vector<cdouble>, 3> comp;

    Trace() = default;
    Trace(int nx, int ny) : Nx(nx), Ny(ny) {
        for (auto& c : comp) c.assign(size_t(nx) * ny, cdouble{});
    }

    cdouble& at(int m, int i, int j) { return comp[m][size_t(i) * Ny + j]; }
    const cdouble& at(int m, int i, int j) const { return comp[m][size_t(i) * Ny + j]; }

    Vec3c vec(int i, int j) const {
        return {comp[0][size_t(i) * Ny + j], comp[1][size_t(i) * Ny + j], comp[2][size_t(i) * Ny + j]};
    }
};

} // namespace hope
