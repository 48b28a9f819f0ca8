#pragma once

#include <array>
#include <string>

#include "wavekin/vec3.hpp"

namespace wavekin {

enum class DispersionKind { schrodinger, bogoliubov, bohm_pines, low_temp_poly };

std::string to_string(DispersionKind k);
DispersionKind dispersion_kind_from_string(const std::string& s);

class DispersionRelation;
struct AssumptionReport;

// Samples radii on a geometric + uniform blend in (0, r_max] and checks the
// three assumptions below.  Marks `rel` verified when all hold.
AssumptionReport verify_assumptions(DispersionRelation& rel, double r_max,
                                    int n_samples = 512, double c2_max = 8.0);

// Isotropic dispersion law omega(xi) = Omega(|xi|).
//
// Supported profiles (coefficients all required nonnegative):
//   schrodinger    Omega(r) = r^2
//   bogoliubov     Omega(r) = sqrt(th1 r^2 + th2 r^4)
//   bohm_pines     Omega(r) = sqrt(th0 + th1 r^2 + th2 r^4)
//   low_temp_poly  Omega(r) = la0 + la1 r^2 + la2 r^4
//
// A relation starts unverified.  verify_assumptions() samples the growth and
// doubling inequalities and, on success, stamps the relation with the
// certified radius and the constants c1, c2.  Resonant-manifold construction
// refuses unverified relations.
class DispersionRelation {
  public:
    static DispersionRelation schrodinger();
    static DispersionRelation bogoliubov(double theta1, double theta2);
    static DispersionRelation bohm_pines(double theta0, double theta1, double theta2);
    static DispersionRelation low_temp_poly(double lambda0, double lambda1, double lambda2);

    double omega_radial(double r) const;        // Omega(r), r >= 0
    double omega_prime(double r) const;         // dOmega/dr
    double omega(const Vec3& xi) const { return omega_radial(norm(xi)); }

    DispersionKind kind() const { return kind_; }
    const std::array<double, 3>& coeffs() const { return c_; }

    bool verified() const { return verified_; }
    double c1() const { return c1_; }
    double c2() const { return c2_; }
    double certified_radius() const { return certified_radius_; }

  private:
    DispersionRelation(DispersionKind k, std::array<double, 3> c);

    DispersionKind kind_;
    std::array<double, 3> c_{};  // (th0, th1, th2) or (la0, la1, la2)
    bool verified_ = false;
    double c1_ = 0.0;
    double c2_ = 0.0;
    double certified_radius_ = 0.0;

    friend AssumptionReport verify_assumptions(DispersionRelation&, double, int, double);
};

// Result of the sampled assumption check.
//   smooth_nonneg : Omega >= 0 and Omega' finite on all sampled radii
//   growth_holds  : inf Omega'(x)/x > 0 over samples       (constant c1)
//   doubling_holds: exists c2 with 2 Omega(x) <= Omega(c2 x) (constant c2)
struct AssumptionReport {
    bool smooth_nonneg = false;
    bool growth_holds = false;
    bool doubling_holds = false;
    double best_c1 = 0.0;        // inf of Omega'(x)/x over samples
    double best_c2 = 0.0;        // smallest doubling factor found (0 if none)
    double worst_x_growth = 0.0; // sample attaining the growth infimum
    double worst_x_doubling = 0.0;
    double r_max = 0.0;
    int n_samples = 0;
    std::string violation;       // names the first violated inequality, empty if none

    bool all_hold() const { return smooth_nonneg && growth_holds && doubling_holds; }
};


}  // namespace wavekin
