#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "wavekin/wke.hpp"

namespace wavekin {

// One rank-1 tensor term w * g_1 (x) ... (x) g_m.  Factors are shared so that
// hierarchy operations stay cheap and caches can key on field identity.
struct TensorProductTerm {
    double weight = 1.0;
    std::vector<std::shared_ptr<const GridField>> factors;
};

struct HierarchyComponent {
    int level = 1;
    bool symmetric_hint = false;  // claimed permutation symmetry, checked by check_symmetry
    std::vector<TensorProductTerm> terms;

    int rank() const { return static_cast<int>(terms.size()); }
    // Mixture evaluation sum_i w_i prod_j g_{i,j}(points[j]); points.size() must equal level.
    double evaluate(const std::vector<Vec3>& points) const;
};

struct HierarchyState {
    enum class Provenance { factorized, mixture, general };

    Provenance provenance = Provenance::general;
    int m_max = 0;
    std::map<int, HierarchyComponent> components;  // level -> component, levels 1..m_max
    std::vector<double> seed_weights;              // factorized/mixture provenance only
    std::vector<std::shared_ptr<const GridField>> seeds;

    bool has_level(int m) const { return components.count(m) != 0; }
    const HierarchyComponent& at_level(int m) const;  // throws MissingLevel
};

HierarchyState make_factorized(const GridField& f0, int m_max);
// Seeds are (weight, field); weights must be positive and sum to 1.
HierarchyState make_mixture(const std::vector<std::pair<double, GridField>>& seeds, int m_max);
HierarchyState scale_state(const HierarchyState& st, double c);
// Componentwise term concatenation over the common levels.
HierarchyState add_states(const HierarchyState& a, const HierarchyState& b);

// Shared kernel evaluations: one collision-kernel pass per distinct ordered
// factor triple.  Triples are matched first by field identity and then by
// exact value equality (hash bucket + full comparison), so equal products
// built independently by different term applications still share one pass.
// Ordered means ordered: (a,b,c) and (a,c,b) are separate entries.  Entries
// hold the four kernel outputs every term application can need (triple-product
// gain, pair gain, and the two loss convolutions).
class KernelCache {
  public:
    struct Entry {
        std::shared_ptr<const GridField> k1, m2, m3, m4;
    };

    KernelCache(const DispersionRelation& rel, QuadConfig cfg) : rel_(&rel), cfg_(cfg) {}

    const Entry& get(const std::shared_ptr<const GridField>& a,
                     const std::shared_ptr<const GridField>& b,
                     const std::shared_ptr<const GridField>& c);

    std::size_t passes() const { return passes_; }  // kernel passes actually run
    const QuadConfig& config() const { return cfg_; }
    const DispersionRelation& relation() const { return *rel_; }

  private:
    using PtrKey = std::tuple<const GridField*, const GridField*, const GridField*>;
    using ValueKey = std::array<std::uint64_t, 3>;
    struct ValueEntry {
        std::shared_ptr<const GridField> a, b, c;  // canonical triple, kept alive
        Entry kernels;
    };

    std::uint64_t field_hash(const std::shared_ptr<const GridField>& f);

    const DispersionRelation* rel_;
    QuadConfig cfg_;
    std::map<PtrKey, const Entry*> by_ptr_;
    std::map<ValueKey, std::vector<std::unique_ptr<ValueEntry>>> by_value_;
    // Pins each hashed field so pointer-keyed memo entries cannot dangle.
    std::map<const GridField*, std::pair<std::shared_ptr<const GridField>, std::uint64_t>> hashes_;
    std::size_t passes_ = 0;
};

// Single hierarchy collision piece applied to the level-(m+2) component:
// i=1 consumes the three trailing factors through the triple-product kernel
// and rebuilds slot j; i=2,3,4 consume the two trailing factors through the
// pair/loss kernels and multiply slot j pointwise.  Returns the unsigned
// operator application; signs enter in hierarchy_collision.  With compat_xi1
// the resonance deltas are anchored at mode 1 instead of mode j, which makes
// i>=2 manifestly j-independent and parks a constant-one factor in the slot
// vacated by i=1, j>=2.
HierarchyComponent apply_C_term(int i, int j, int m, const HierarchyComponent& comp,
                                KernelCache& cache, bool compat_xi1 = false);
HierarchyComponent apply_C_term(int i, int j, int m, const HierarchyComponent& comp,
                                const DispersionRelation& rel, const QuadConfig& cfg,
                                bool compat_xi1 = false);

// Full level-m collision sum_{j=1}^m (c1 + c2 - c3 - c4) applied termwise to
// the state's level-(m+2) component.  Output rank is exactly 4*m*(input rank).
HierarchyComponent hierarchy_collision(const HierarchyState& state, int m, KernelCache& cache,
                                       bool compat_xi1 = false);
HierarchyComponent hierarchy_collision(const HierarchyState& state, int m,
                                       const DispersionRelation& rel, const QuadConfig& cfg,
                                       bool compat_xi1 = false);

// Tuples mu = (mu_1..mu_k) with 1 <= mu_r <= m+2(r-1), lexicographic.
struct TupleSet {
    int m = 1;
    int k = 0;
    std::vector<std::vector<int>> tuples;

    long long count() const;  // product formula prod_r (m+2r-2)
};
TupleSet enumerate_tuples(int m, int k);

// Duhamel partial sums Du_j(F0,t)^{(m)} = sum_{k<=j} t^k/k! * c^k[F0]^{(m)}.
// Powers of the collision operator are cached per (k, level) and kernel passes
// are shared across everything through the cache.
class DuhamelExpansion {
  public:
    DuhamelExpansion(const DispersionRelation& rel, HierarchyState f0, QuadConfig cfg,
                     bool compat_xi1 = false);

    const HierarchyComponent& c_power(int k, int m);  // c^k[F0]^{(m)}
    HierarchyState evaluate(double t, int j);         // levels 1..M_max-2j
    KernelCache& cache() { return cache_; }
    const HierarchyState& initial() const { return f0_; }

  private:
    HierarchyState f0_;
    bool compat_;
    KernelCache cache_;
    std::map<std::pair<int, int>, HierarchyComponent> powers_;
};

HierarchyState duhamel_iterate(const DispersionRelation& rel, const HierarchyState& f0, double t,
                               int j, const QuadConfig& cfg, bool compat_xi1 = false);

enum class NormMode { rank1_exact, triangle_bound, sampled_sup };

// Weighted sup norm of a component.  rank1_exact requires a single term and
// returns |w| * prod_j ||g_j||_{L_s^inf} (the absolute value of a separable
// product is separable, so this is the exact supremum).  triangle_bound sums
// that over terms; sampled_sup lower-bounds by random probing.
double component_norm(const HierarchyComponent& comp, double s, NormMode mode, int n_samples = 400,
                      unsigned long long seed = 99);

struct HierarchyNorm {
    double value = 0.0;       // sum_{m<=M_max} eps^m * component_norm(m)
    double tail_bound = 0.0;  // factorized/mixture: sum of (eps*B)^(M_max+1)/(1-eps*B)
};
HierarchyNorm hierarchy_norm(const HierarchyState& state, double s, double eps, NormMode mode,
                             int n_samples = 400, unsigned long long seed = 99);

// Max sampled |f(perm(pts)) - f(pts)| / max |f|, random points and permutations.
double check_symmetry(const HierarchyComponent& comp, int n_samples, unsigned long long seed);

// Sampled sup of |int f^{(m+1)} dxi_{m+1} - mass * f^{(m)}|, marginals taken
// factorwise by grid trapezoid.
double admissibility_residual(const HierarchyState& state, int m, double mass,
                              int n_samples = 128, unsigned long long seed = 7);

// Sampled weighted sup of |f^{(m)} - f(x)...(x)f| against the trajectory's
// final state.
double factorization_residual(const HierarchyState& state, const WkeTrajectory& traj, int m,
                              double s, int n_samples, unsigned long long seed = 11);

GridField component_to_field(const HierarchyComponent& comp);  // level 1 only

// Drops terms whose |w|*prod sup|g| falls below rel_tol times the largest.
HierarchyComponent prune_component(const HierarchyComponent& comp, double rel_tol = 1e-14);

}  // namespace wavekin
