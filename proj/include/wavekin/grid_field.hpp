#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wavekin/dispersion.hpp"
#include "wavekin/vec3.hpp"

namespace wavekin {

// Uniform cube grid [-K, K]^3 with N points per axis (endpoints included).
struct GridSpec {
    int n = 17;
    double k = 6.0;

    double h() const { return 2.0 * k / (n - 1); }
    size_t size() const { return static_cast<size_t>(n) * n * n; }
    bool operator==(const GridSpec& o) const { return n == o.n && k == o.k; }
};

// Scalar field sampled on a GridSpec, row-major with x outermost and z
// innermost.  Point evaluation is trilinear inside the cube and zero outside.
class GridField {
  public:
    GridField() : GridField(GridSpec{}) {}
    explicit GridField(GridSpec spec)
        : spec_(spec), v_(spec.size(), 0.0), inv_h_((spec.n - 1) / (2.0 * spec.k)) {}

    static GridField sample(GridSpec spec, const std::function<double(const Vec3&)>& f);

    const GridSpec& spec() const { return spec_; }
    size_t index(int ix, int iy, int iz) const {
        return (static_cast<size_t>(ix) * spec_.n + iy) * spec_.n + iz;
    }
    Vec3 point(int ix, int iy, int iz) const {
        const double h = spec_.h();
        return {-spec_.k + ix * h, -spec_.k + iy * h, -spec_.k + iz * h};
    }
    double& at(int ix, int iy, int iz) { return v_[index(ix, iy, iz)]; }
    double at(int ix, int iy, int iz) const { return v_[index(ix, iy, iz)]; }
    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }

    double operator()(const Vec3& p) const {
        // Map to fractional index; zero extension outside the closed cube.
        const double ux = (p.x + spec_.k) * inv_h_;
        const double uy = (p.y + spec_.k) * inv_h_;
        const double uz = (p.z + spec_.k) * inv_h_;
        const double top = static_cast<double>(spec_.n - 1);
        if (!(ux >= 0.0) || !(uy >= 0.0) || !(uz >= 0.0) || ux > top || uy > top || uz > top) {
            return 0.0;
        }
        int ix = static_cast<int>(ux);
        int iy = static_cast<int>(uy);
        int iz = static_cast<int>(uz);
        if (ix >= spec_.n - 1) ix = spec_.n - 2;
        if (iy >= spec_.n - 1) iy = spec_.n - 2;
        if (iz >= spec_.n - 1) iz = spec_.n - 2;
        const double fx = ux - ix, fy = uy - iy, fz = uz - iz;
        const size_t i000 = index(ix, iy, iz);
        const size_t sx = static_cast<size_t>(spec_.n) * spec_.n;
        const size_t sy = spec_.n;
        const double* v = v_.data();
        const double c00 = v[i000] + fz * (v[i000 + 1] - v[i000]);
        const double c01 = v[i000 + sy] + fz * (v[i000 + sy + 1] - v[i000 + sy]);
        const double c10 = v[i000 + sx] + fz * (v[i000 + sx + 1] - v[i000 + sx]);
        const double c11 = v[i000 + sx + sy] + fz * (v[i000 + sx + sy + 1] - v[i000 + sx + sy]);
        const double c0 = c00 + fy * (c01 - c00);
        const double c1 = c10 + fy * (c11 - c10);
        return c0 + fx * (c1 - c0);
    }

  private:
    GridSpec spec_;
    std::vector<double> v_;
    double inv_h_;
};

// sup over grid points of <xi>^s |f(xi)|, deterministic scan order.
double weighted_field_norm(const GridField& f, double s);
double sup_norm(const GridField& f);

// Trapezoid quadrature over the cube: integral of f, and of f * g(point).
double trapezoid_integral(const GridField& f);
double trapezoid_integral(const GridField& f, const std::function<double(const Vec3&)>& g);
// Per-point trapezoid weight (h^3 with the usual 1/2 factors on faces).
double trapezoid_weight(const GridSpec& spec, int ix, int iy, int iz);

GridField make_gaussian(GridSpec spec, double sigma, double amplitude);
GridField make_rayleigh_jeans(GridSpec spec, const DispersionRelation& rel, double a, double b);
GridField make_constant(GridSpec spec, double value);

// Elementwise helpers; shapes must match.
GridField field_product(const GridField& a, const GridField& b);
GridField field_axpy(double alpha, const GridField& x, const GridField& y);  // alpha*x + y
GridField field_scale(double alpha, const GridField& x);

// Binary field file, format tag "WKF1":
//   bytes 0..3  magic "WKF1"
//   u32         N (points per axis, little endian)
//   f64         K (half box width)
//   f64 * N^3   values, row major (x outer, z inner), little endian
void write_wkf1(const GridField& f, const std::string& path);
GridField read_wkf1(const std::string& path);

}  // namespace wavekin
