#include "wavekin/grid_field.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "wavekin/errors.hpp"

namespace wavekin {

GridField GridField::sample(GridSpec spec, const std::function<double(const Vec3&)>& f) {
    GridField out(spec);
    for (int ix = 0; ix < spec.n; ++ix) {
        for (int iy = 0; iy < spec.n; ++iy) {
            for (int iz = 0; iz < spec.n; ++iz) {
                out.at(ix, iy, iz) = f(out.point(ix, iy, iz));
            }
        }
    }
    return out;
}

double weighted_field_norm(const GridField& f, double s) {
    const GridSpec& sp = f.spec();
    double best = 0.0;
    for (int ix = 0; ix < sp.n; ++ix) {
        for (int iy = 0; iy < sp.n; ++iy) {
            for (int iz = 0; iz < sp.n; ++iz) {
                const double w = jbracket_pow(f.point(ix, iy, iz), s);
                const double v = w * std::fabs(f.at(ix, iy, iz));
                if (v > best) best = v;
            }
        }
    }
    return best;
}

double sup_norm(const GridField& f) {
    double best = 0.0;
    for (double v : f.values()) best = std::max(best, std::fabs(v));
    return best;
}

double trapezoid_weight(const GridSpec& spec, int ix, int iy, int iz) {
    const double h = spec.h();
    double w = h * h * h;
    if (ix == 0 || ix == spec.n - 1) w *= 0.5;
    if (iy == 0 || iy == spec.n - 1) w *= 0.5;
    if (iz == 0 || iz == spec.n - 1) w *= 0.5;
    return w;
}

double trapezoid_integral(const GridField& f) {
    const GridSpec& sp = f.spec();
    double acc = 0.0;
    for (int ix = 0; ix < sp.n; ++ix) {
        for (int iy = 0; iy < sp.n; ++iy) {
            for (int iz = 0; iz < sp.n; ++iz) {
                acc += trapezoid_weight(sp, ix, iy, iz) * f.at(ix, iy, iz);
            }
        }
    }
    return acc;
}

double trapezoid_integral(const GridField& f, const std::function<double(const Vec3&)>& g) {
    const GridSpec& sp = f.spec();
    double acc = 0.0;
    for (int ix = 0; ix < sp.n; ++ix) {
        for (int iy = 0; iy < sp.n; ++iy) {
            for (int iz = 0; iz < sp.n; ++iz) {
                acc += trapezoid_weight(sp, ix, iy, iz) * f.at(ix, iy, iz) *
                       g(f.point(ix, iy, iz));
            }
        }
    }
    return acc;
}

GridField make_gaussian(GridSpec spec, double sigma, double amplitude) {
    if (!(sigma > 0.0)) throw ParameterOutOfRange("gaussian seed: sigma must be positive");
    const double inv_s2 = 1.0 / (sigma * sigma);
    return GridField::sample(
        spec, [&](const Vec3& p) { return amplitude * std::exp(-norm2(p) * inv_s2); });
}

GridField make_rayleigh_jeans(GridSpec spec, const DispersionRelation& rel, double a, double b) {
    if (!(b > 0.0)) throw ParameterOutOfRange("rayleigh_jeans seed: b must be positive");
    return GridField::sample(spec, [&](const Vec3& p) { return a / (b + rel.omega(p)); });
}

GridField make_constant(GridSpec spec, double value) {
    GridField out(spec);
    for (double& v : out.values()) v = value;
    return out;
}

GridField field_product(const GridField& a, const GridField& b) {
    if (!(a.spec() == b.spec())) throw LevelMismatch("field_product: grid mismatch");
    GridField out(a.spec());
    for (size_t i = 0; i < out.values().size(); ++i) {
        out.values()[i] = a.values()[i] * b.values()[i];
    }
    return out;
}

GridField field_axpy(double alpha, const GridField& x, const GridField& y) {
    if (!(x.spec() == y.spec())) throw LevelMismatch("field_axpy: grid mismatch");
    GridField out(x.spec());
    for (size_t i = 0; i < out.values().size(); ++i) {
        out.values()[i] = alpha * x.values()[i] + y.values()[i];
    }
    return out;
}

GridField field_scale(double alpha, const GridField& x) {
    GridField out(x.spec());
    for (size_t i = 0; i < out.values().size(); ++i) out.values()[i] = alpha * x.values()[i];
    return out;
}

void write_wkf1(const GridField& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open for writing: " + path);
    os.write("WKF1", 4);
    const uint32_t n = static_cast<uint32_t>(f.spec().n);
    const double k = f.spec().k;
    os.write(reinterpret_cast<const char*>(&n), sizeof(n));
    os.write(reinterpret_cast<const char*>(&k), sizeof(k));
    os.write(reinterpret_cast<const char*>(f.values().data()),
             static_cast<std::streamsize>(f.values().size() * sizeof(double)));
    if (!os) throw FormatError("short write: " + path);
}

GridField read_wkf1(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "WKF1", 4) != 0) {
        throw FormatError("bad magic (want WKF1): " + path);
    }
    uint32_t n = 0;
    double k = 0.0;
    is.read(reinterpret_cast<char*>(&n), sizeof(n));
    is.read(reinterpret_cast<char*>(&k), sizeof(k));
    if (!is || n < 2 || n > 4096 || !(k > 0.0)) throw FormatError("bad header: " + path);
    GridField out(GridSpec{static_cast<int>(n), k});
    is.read(reinterpret_cast<char*>(out.values().data()),
            static_cast<std::streamsize>(out.values().size() * sizeof(double)));
    if (!is) throw FormatError("truncated payload: " + path);
    return out;
}

}  // namespace wavekin
