#include "wavekin/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "wavekin/errors.hpp"

namespace wavekin {

namespace {

double next_u01(std::mt19937_64& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

Vec3 random_box_point(std::mt19937_64& eng, double k) {
    const double x = -k + 2.0 * k * next_u01(eng);
    const double y = -k + 2.0 * k * next_u01(eng);
    const double z = -k + 2.0 * k * next_u01(eng);
    return {x, y, z};
}

const GridSpec& component_spec(const HierarchyComponent& comp) {
    if (comp.terms.empty() || comp.terms.front().factors.empty()) {
        throw ParameterOutOfRange("hierarchy component has no factors to infer a grid from");
    }
    return comp.terms.front().factors.front()->spec();
}

void check_term_shapes(const HierarchyComponent& comp) {
    for (const TensorProductTerm& t : comp.terms) {
        if (static_cast<int>(t.factors.size()) != comp.level) {
            throw LevelMismatch("tensor term factor count " + std::to_string(t.factors.size()) +
                                " does not match component level " + std::to_string(comp.level));
        }
        for (const auto& g : t.factors) {
            if (!g) throw ParameterOutOfRange("tensor term holds a null factor");
        }
    }
}

std::shared_ptr<const GridField> product_field(const std::shared_ptr<const GridField>& a,
                                               const std::shared_ptr<const GridField>& b) {
    return std::make_shared<const GridField>(field_product(*a, *b));
}

// One c_{i,j;m} application to a rank-1 term of the level-(m+2) component.
// The trailing triple feeds the kernel cache; slot bookkeeping follows the
// delta anchoring (mode j by default, mode 1 in compat).
TensorProductTerm apply_term(int i, int j, int m, const TensorProductTerm& in, KernelCache& cache,
                             bool compat, std::shared_ptr<const GridField>& unit) {
    const auto& g = in.factors;
    const KernelCache::Entry& e =
        cache.get(g[static_cast<std::size_t>(m - 1)], g[static_cast<std::size_t>(m)],
                  g[static_cast<std::size_t>(m + 1)]);
    const std::shared_ptr<const GridField>& kernel = (i == 1)   ? e.k1
                                                     : (i == 2) ? e.m2
                                                     : (i == 3) ? e.m3
                                                                : e.m4;
    TensorProductTerm out;
    out.weight = in.weight;
    out.factors.resize(static_cast<std::size_t>(m));
    if (i == 1) {
        if (!compat || j == 1) {
            for (int p = 0; p + 1 < j; ++p) out.factors[static_cast<std::size_t>(p)] = g[static_cast<std::size_t>(p)];
            out.factors[static_cast<std::size_t>(j - 1)] = kernel;
            for (int p = j; p < m; ++p) out.factors[static_cast<std::size_t>(p)] = g[static_cast<std::size_t>(p - 1)];
        } else {
            if (!unit) unit = std::make_shared<const GridField>(make_constant(g[0]->spec(), 1.0));
            out.factors[0] = product_field(g[0], kernel);
            for (int p = 1; p + 1 < j; ++p) out.factors[static_cast<std::size_t>(p)] = g[static_cast<std::size_t>(p)];
            out.factors[static_cast<std::size_t>(j - 1)] = unit;
            for (int p = j; p < m; ++p) out.factors[static_cast<std::size_t>(p)] = g[static_cast<std::size_t>(p - 1)];
        }
        return out;
    }
    if (!compat) {
        for (int p = 0; p < m; ++p) out.factors[static_cast<std::size_t>(p)] = g[static_cast<std::size_t>(p)];
        out.factors[static_cast<std::size_t>(j - 1)] =
            product_field(g[static_cast<std::size_t>(j - 1)], kernel);
    } else {
        out.factors[0] = product_field(g[0], kernel);
        for (int p = 1; p < m; ++p) out.factors[static_cast<std::size_t>(p)] = g[static_cast<std::size_t>(p)];
    }
    return out;
}

void validate_term_indices(int i, int j, int m) {
    if (i < 1 || i > 4) throw ParameterOutOfRange("collision piece index i must be in 1..4");
    if (m < 1) throw ParameterOutOfRange("target level m must be >= 1");
    if (j < 1 || j > m) throw ParameterOutOfRange("slot index j must be in 1..m");
}

HierarchyComponent collision_of(const HierarchyComponent& above, int m, KernelCache& cache,
                                bool compat) {
    if (above.level != m + 2) {
        throw LevelMismatch("hierarchy collision at level " + std::to_string(m) +
                            " needs the level-" + std::to_string(m + 2) + " component, got level " +
                            std::to_string(above.level));
    }
    check_term_shapes(above);
    HierarchyComponent out;
    out.level = m;
    out.symmetric_hint = above.symmetric_hint;
    out.terms.reserve(static_cast<std::size_t>(4 * m) * above.terms.size());
    std::shared_ptr<const GridField> unit;
    for (int j = 1; j <= m; ++j) {
        for (int i = 1; i <= 4; ++i) {
            const double sign = (i <= 2) ? 1.0 : -1.0;
            for (const TensorProductTerm& t : above.terms) {
                TensorProductTerm piece = apply_term(i, j, m, t, cache, compat, unit);
                piece.weight *= sign;
                out.terms.push_back(std::move(piece));
            }
        }
    }
    return out;
}

}  // namespace

double HierarchyComponent::evaluate(const std::vector<Vec3>& points) const {
    if (static_cast<int>(points.size()) != level) {
        throw ParameterOutOfRange("component evaluation needs one point per slot");
    }
    double acc = 0.0;
    for (const TensorProductTerm& t : terms) {
        double prod = t.weight;
        for (std::size_t j = 0; j < t.factors.size(); ++j) prod *= (*t.factors[j])(points[j]);
        acc += prod;
    }
    return acc;
}

const HierarchyComponent& HierarchyState::at_level(int m) const {
    auto it = components.find(m);
    if (it == components.end()) {
        throw MissingLevel("hierarchy level " + std::to_string(m) + " missing (state holds 1.." +
                           std::to_string(m_max) + ")");
    }
    return it->second;
}

HierarchyState make_factorized(const GridField& f0, int m_max) {
    if (m_max < 1) throw ParameterOutOfRange("make_factorized: m_max must be >= 1");
    HierarchyState st;
    st.provenance = HierarchyState::Provenance::factorized;
    st.m_max = m_max;
    auto seed = std::make_shared<const GridField>(f0);
    st.seeds = {seed};
    st.seed_weights = {1.0};
    for (int m = 1; m <= m_max; ++m) {
        HierarchyComponent comp;
        comp.level = m;
        comp.symmetric_hint = true;
        TensorProductTerm t;
        t.weight = 1.0;
        t.factors.assign(static_cast<std::size_t>(m), seed);
        comp.terms.push_back(std::move(t));
        st.components.emplace(m, std::move(comp));
    }
    return st;
}

HierarchyState make_mixture(const std::vector<std::pair<double, GridField>>& seeds, int m_max) {
    if (m_max < 1) throw ParameterOutOfRange("make_mixture: m_max must be >= 1");
    if (seeds.empty()) throw ParameterOutOfRange("make_mixture: need at least one seed");
    double total = 0.0;
    for (const auto& [w, f] : seeds) {
        if (!(w > 0.0)) throw UnnormalizedWeights("mixture weights must be positive");
        if (!(f.spec() == seeds.front().second.spec())) {
            throw ParameterOutOfRange("mixture seeds must share one grid");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw UnnormalizedWeights("mixture weights sum to " + std::to_string(total) +
                                  ", expected 1");
    }
    HierarchyState st;
    st.provenance = HierarchyState::Provenance::mixture;
    st.m_max = m_max;
    for (const auto& [w, f] : seeds) {
        st.seed_weights.push_back(w);
        st.seeds.push_back(std::make_shared<const GridField>(f));
    }
    for (int m = 1; m <= m_max; ++m) {
        HierarchyComponent comp;
        comp.level = m;
        comp.symmetric_hint = true;
        for (std::size_t i = 0; i < st.seeds.size(); ++i) {
            TensorProductTerm t;
            t.weight = st.seed_weights[i];
            t.factors.assign(static_cast<std::size_t>(m), st.seeds[i]);
            comp.terms.push_back(std::move(t));
        }
        st.components.emplace(m, std::move(comp));
    }
    return st;
}

HierarchyState scale_state(const HierarchyState& st, double c) {
    HierarchyState out = st;
    if (c == 1.0) return out;
    out.provenance = HierarchyState::Provenance::general;
    out.seeds.clear();
    out.seed_weights.clear();
    for (auto& [m, comp] : out.components) {
        for (TensorProductTerm& t : comp.terms) t.weight *= c;
    }
    return out;
}

HierarchyState add_states(const HierarchyState& a, const HierarchyState& b) {
    HierarchyState out;
    out.provenance = HierarchyState::Provenance::general;
    out.m_max = std::min(a.m_max, b.m_max);
    if (out.m_max < 1) throw ParameterOutOfRange("add_states: no common levels");
    for (int m = 1; m <= out.m_max; ++m) {
        const HierarchyComponent& ca = a.at_level(m);
        const HierarchyComponent& cb = b.at_level(m);
        HierarchyComponent comp;
        comp.level = m;
        comp.symmetric_hint = ca.symmetric_hint && cb.symmetric_hint;
        comp.terms = ca.terms;
        comp.terms.insert(comp.terms.end(), cb.terms.begin(), cb.terms.end());
        out.components.emplace(m, std::move(comp));
    }
    return out;
}

std::uint64_t KernelCache::field_hash(const std::shared_ptr<const GridField>& f) {
    auto it = hashes_.find(f.get());
    if (it != hashes_.end()) return it->second.second;
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* p, std::size_t nbytes) {
        const unsigned char* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < nbytes; ++i) {
            h ^= b[i];
            h *= 1099511628211ull;
        }
    };
    const std::vector<double>& v = f->values();
    mix(v.data(), v.size() * sizeof(double));
    const int n = f->spec().n;
    const double k = f->spec().k;
    mix(&n, sizeof n);
    mix(&k, sizeof k);
    hashes_.emplace(f.get(), std::make_pair(f, h));
    return h;
}

const KernelCache::Entry& KernelCache::get(const std::shared_ptr<const GridField>& a,
                                           const std::shared_ptr<const GridField>& b,
                                           const std::shared_ptr<const GridField>& c) {
    const PtrKey pk{a.get(), b.get(), c.get()};
    auto pit = by_ptr_.find(pk);
    if (pit != by_ptr_.end()) return *pit->second;

    auto same = [](const GridField& x, const GridField& y) {
        return x.spec() == y.spec() && x.values() == y.values();
    };
    const ValueKey vk{field_hash(a), field_hash(b), field_hash(c)};
    std::vector<std::unique_ptr<ValueEntry>>& bucket = by_value_[vk];
    for (const std::unique_ptr<ValueEntry>& ve : bucket) {
        if (same(*ve->a, *a) && same(*ve->b, *b) && same(*ve->c, *c)) {
            by_ptr_.emplace(pk, &ve->kernels);
            return ve->kernels;
        }
    }

    KernelFields kf = kernel_fields(*rel_, *a, *b, *c, cfg_);
    ++passes_;
    auto ve = std::make_unique<ValueEntry>();
    ve->a = a;
    ve->b = b;
    ve->c = c;
    ve->kernels.k1 = std::make_shared<const GridField>(std::move(kf.k1));
    ve->kernels.m2 = std::make_shared<const GridField>(std::move(kf.m2));
    ve->kernels.m3 = std::make_shared<const GridField>(std::move(kf.m3));
    ve->kernels.m4 = std::make_shared<const GridField>(std::move(kf.m4));
    bucket.push_back(std::move(ve));
    by_ptr_.emplace(pk, &bucket.back()->kernels);
    return bucket.back()->kernels;
}

HierarchyComponent apply_C_term(int i, int j, int m, const HierarchyComponent& comp,
                                KernelCache& cache, bool compat_xi1) {
    validate_term_indices(i, j, m);
    if (comp.level != m + 2) {
        throw LevelMismatch("apply_C_term: component level " + std::to_string(comp.level) +
                            " does not equal m+2 = " + std::to_string(m + 2));
    }
    check_term_shapes(comp);
    HierarchyComponent out;
    out.level = m;
    out.terms.reserve(comp.terms.size());
    std::shared_ptr<const GridField> unit;
    for (const TensorProductTerm& t : comp.terms) {
        out.terms.push_back(apply_term(i, j, m, t, cache, compat_xi1, unit));
    }
    return out;
}

HierarchyComponent apply_C_term(int i, int j, int m, const HierarchyComponent& comp,
                                const DispersionRelation& rel, const QuadConfig& cfg,
                                bool compat_xi1) {
    KernelCache cache(rel, cfg);
    return apply_C_term(i, j, m, comp, cache, compat_xi1);
}

HierarchyComponent hierarchy_collision(const HierarchyState& state, int m, KernelCache& cache,
                                       bool compat_xi1) {
    if (m < 1) throw ParameterOutOfRange("hierarchy_collision: m must be >= 1");
    return collision_of(state.at_level(m + 2), m, cache, compat_xi1);
}

HierarchyComponent hierarchy_collision(const HierarchyState& state, int m,
                                       const DispersionRelation& rel, const QuadConfig& cfg,
                                       bool compat_xi1) {
    KernelCache cache(rel, cfg);
    return hierarchy_collision(state, m, cache, compat_xi1);
}

long long TupleSet::count() const {
    long long prod = 1;
    for (int r = 1; r <= k; ++r) prod *= static_cast<long long>(m + 2 * r - 2);
    return prod;
}

TupleSet enumerate_tuples(int m, int k) {
    if (m < 1 || k < 0) throw ParameterOutOfRange("enumerate_tuples: need m >= 1, k >= 0");
    TupleSet set;
    set.m = m;
    set.k = k;
    if (set.count() > 5000000) {
        throw ParameterOutOfRange("enumerate_tuples: refusing to materialize " +
                                  std::to_string(set.count()) + " tuples");
    }
    std::vector<int> tuple(static_cast<std::size_t>(k), 1);
    // Odometer over positions r = 1..k with base m+2(r-1), lexicographic.
    while (true) {
        set.tuples.push_back(tuple);
        int r = k - 1;
        while (r >= 0 && tuple[static_cast<std::size_t>(r)] == m + 2 * r) {
            tuple[static_cast<std::size_t>(r)] = 1;
            --r;
        }
        if (r < 0) break;
        ++tuple[static_cast<std::size_t>(r)];
    }
    if (k == 0) set.tuples.assign(1, {});
    return set;
}

DuhamelExpansion::DuhamelExpansion(const DispersionRelation& rel, HierarchyState f0,
                                   QuadConfig cfg, bool compat_xi1)
    : f0_(std::move(f0)), compat_(compat_xi1), cache_(rel, cfg) {}

const HierarchyComponent& DuhamelExpansion::c_power(int k, int m) {
    if (k < 0 || m < 1) throw ParameterOutOfRange("c_power: need k >= 0 and m >= 1");
    if (k == 0) return f0_.at_level(m);
    const std::pair<int, int> key{k, m};
    auto it = powers_.find(key);
    if (it != powers_.end()) return it->second;
    if (m + 2 * k > f0_.m_max) {
        throw MissingLevel("collision power k=" + std::to_string(k) + " at level " +
                           std::to_string(m) + " requires M_max >= " + std::to_string(m + 2 * k));
    }
    const HierarchyComponent& above = c_power(k - 1, m + 2);
    HierarchyComponent comp = collision_of(above, m, cache_, compat_);
    return powers_.emplace(key, std::move(comp)).first->second;
}

HierarchyState DuhamelExpansion::evaluate(double t, int j) {
    if (j < 0) throw ParameterOutOfRange("duhamel iterate: j must be >= 0");
    if (j == 0) return f0_;
    const int m_out = f0_.m_max - 2 * j;
    if (m_out < 1) {
        throw MissingLevel("duhamel iterate j=" + std::to_string(j) + " requires M_max >= " +
                           std::to_string(1 + 2 * j) + ", state has " + std::to_string(f0_.m_max));
    }
    HierarchyState out;
    out.provenance = HierarchyState::Provenance::general;
    out.m_max = m_out;
    for (int m = 1; m <= m_out; ++m) {
        HierarchyComponent comp;
        comp.level = m;
        comp.symmetric_hint = f0_.at_level(m).symmetric_hint;
        double coef = 1.0;  // t^k / k!
        for (int k = 0; k <= j; ++k) {
            if (k > 0) coef *= t / static_cast<double>(k);
            for (const TensorProductTerm& term : c_power(k, m).terms) {
                TensorProductTerm scaled = term;
                scaled.weight *= coef;
                comp.terms.push_back(std::move(scaled));
            }
        }
        out.components.emplace(m, std::move(comp));
    }
    return out;
}

HierarchyState duhamel_iterate(const DispersionRelation& rel, const HierarchyState& f0, double t,
                               int j, const QuadConfig& cfg, bool compat_xi1) {
    DuhamelExpansion expansion(rel, f0, cfg, compat_xi1);
    return expansion.evaluate(t, j);
}

double component_norm(const HierarchyComponent& comp, double s, NormMode mode, int n_samples,
                      unsigned long long seed) {
    if (s < 0.0) throw ParameterOutOfRange("component_norm: s must be >= 0");
    if (comp.terms.empty()) return 0.0;
    check_term_shapes(comp);
    switch (mode) {
        case NormMode::rank1_exact: {
            if (comp.rank() != 1) {
                throw ParameterOutOfRange("rank1_exact norm requires a single-term component");
            }
            const TensorProductTerm& t = comp.terms.front();
            double prod = std::abs(t.weight);
            for (const auto& g : t.factors) prod *= weighted_field_norm(*g, s);
            return prod;
        }
        case NormMode::triangle_bound: {
            double acc = 0.0;
            for (const TensorProductTerm& t : comp.terms) {
                double prod = std::abs(t.weight);
                for (const auto& g : t.factors) prod *= weighted_field_norm(*g, s);
                acc += prod;
            }
            return acc;
        }
        case NormMode::sampled_sup: {
            if (n_samples < 1) throw ParameterOutOfRange("sampled_sup: need n_samples >= 1");
            const double k = component_spec(comp).k;
            std::mt19937_64 eng(seed);
            std::vector<Vec3> pts(static_cast<std::size_t>(comp.level));
            double best = 0.0;
            for (int it = 0; it < n_samples; ++it) {
                double w = 1.0;
                for (Vec3& p : pts) {
                    p = random_box_point(eng, k);
                    w *= jbracket_pow(p, s);
                }
                best = std::max(best, w * std::abs(comp.evaluate(pts)));
            }
            return best;
        }
    }
    throw ParameterOutOfRange("component_norm: unknown mode");
}

HierarchyNorm hierarchy_norm(const HierarchyState& state, double s, double eps, NormMode mode,
                             int n_samples, unsigned long long seed) {
    if (!(eps > 0.0) || !(eps < 1.0)) throw ParameterOutOfRange("hierarchy_norm: need 0 < eps < 1");
    HierarchyNorm out;
    double eps_m = 1.0;
    for (int m = 1; m <= state.m_max; ++m) {
        eps_m *= eps;
        out.value += eps_m * component_norm(state.at_level(m), s, mode, n_samples, seed);
    }
    if (state.provenance != HierarchyState::Provenance::general) {
        for (std::size_t i = 0; i < state.seeds.size(); ++i) {
            const double b = weighted_field_norm(*state.seeds[i], s);
            const double q = eps * b;
            if (q >= 1.0) {
                out.tail_bound = std::numeric_limits<double>::infinity();
                break;
            }
            out.tail_bound +=
                state.seed_weights[i] * std::pow(q, state.m_max + 1) / (1.0 - q);
        }
    }
    return out;
}

double check_symmetry(const HierarchyComponent& comp, int n_samples, unsigned long long seed) {
    if (comp.level < 2) throw ParameterOutOfRange("check_symmetry: level must be >= 2");
    if (comp.terms.empty()) return 0.0;
    check_term_shapes(comp);
    const double k = component_spec(comp).k;
    std::mt19937_64 eng(seed);
    std::vector<Vec3> pts(static_cast<std::size_t>(comp.level));
    std::vector<Vec3> perm(pts.size());
    std::vector<std::size_t> order(pts.size());
    double max_diff = 0.0;
    double scale = 0.0;
    for (int it = 0; it < n_samples; ++it) {
        for (Vec3& p : pts) p = random_box_point(eng, k);
        for (std::size_t r = 0; r < order.size(); ++r) order[r] = r;
        std::shuffle(order.begin(), order.end(), eng);
        for (std::size_t r = 0; r < order.size(); ++r) perm[r] = pts[order[r]];
        const double v1 = comp.evaluate(pts);
        const double v2 = comp.evaluate(perm);
        max_diff = std::max(max_diff, std::abs(v2 - v1));
        scale = std::max({scale, std::abs(v1), std::abs(v2)});
    }
    return scale > 0.0 ? max_diff / scale : 0.0;
}

double admissibility_residual(const HierarchyState& state, int m, double mass, int n_samples,
                              unsigned long long seed) {
    if (m < 1) throw ParameterOutOfRange("admissibility_residual: m must be >= 1");
    if (n_samples < 1) throw ParameterOutOfRange("admissibility_residual: need n_samples >= 1");
    const HierarchyComponent& lower = state.at_level(m);
    const HierarchyComponent& upper = state.at_level(m + 1);
    check_term_shapes(lower);
    check_term_shapes(upper);
    if (upper.terms.empty() && lower.terms.empty()) return 0.0;
    // Factorwise marginal: the last slot integrates out by grid trapezoid.
    std::vector<double> marg_weights;
    marg_weights.reserve(upper.terms.size());
    for (const TensorProductTerm& t : upper.terms) {
        marg_weights.push_back(t.weight * trapezoid_integral(*t.factors.back()));
    }
    const double k =
        upper.terms.empty() ? component_spec(lower).k : component_spec(upper).k;
    std::mt19937_64 eng(seed);
    std::vector<Vec3> pts(static_cast<std::size_t>(m));
    double worst = 0.0;
    for (int it = 0; it < n_samples; ++it) {
        for (Vec3& p : pts) p = random_box_point(eng, k);
        double marg = 0.0;
        for (std::size_t i = 0; i < upper.terms.size(); ++i) {
            double prod = marg_weights[i];
            for (std::size_t jj = 0; jj < pts.size(); ++jj) {
                prod *= (*upper.terms[i].factors[jj])(pts[jj]);
            }
            marg += prod;
        }
        const double target = mass * (lower.terms.empty() ? 0.0 : lower.evaluate(pts));
        worst = std::max(worst, std::abs(marg - target));
    }
    return worst;
}

double factorization_residual(const HierarchyState& state, const WkeTrajectory& traj, int m,
                              double s, int n_samples, unsigned long long seed) {
    if (m < 1) throw ParameterOutOfRange("factorization_residual: m must be >= 1");
    if (n_samples < 1) throw ParameterOutOfRange("factorization_residual: need n_samples >= 1");
    if (traj.states.empty()) throw ParameterOutOfRange("factorization_residual: empty trajectory");
    const HierarchyComponent& comp = state.at_level(m);
    check_term_shapes(comp);
    const GridField& f = traj.states.back();
    const double k = f.spec().k;
    std::mt19937_64 eng(seed);
    std::vector<Vec3> pts(static_cast<std::size_t>(m));
    double worst = 0.0;
    for (int it = 0; it < n_samples; ++it) {
        double w = 1.0;
        double tensor = 1.0;
        for (Vec3& p : pts) {
            p = random_box_point(eng, k);
            w *= jbracket_pow(p, s);
            tensor *= f(p);
        }
        const double value = comp.terms.empty() ? 0.0 : comp.evaluate(pts);
        worst = std::max(worst, w * std::abs(value - tensor));
    }
    return worst;
}

GridField component_to_field(const HierarchyComponent& comp) {
    if (comp.level != 1) throw ParameterOutOfRange("component_to_field: level must be 1");
    check_term_shapes(comp);
    GridField out(component_spec(comp));
    for (const TensorProductTerm& t : comp.terms) {
        out = field_axpy(t.weight, *t.factors.front(), out);
    }
    return out;
}

HierarchyComponent prune_component(const HierarchyComponent& comp, double rel_tol) {
    check_term_shapes(comp);
    std::vector<double> magnitude;
    magnitude.reserve(comp.terms.size());
    double largest = 0.0;
    for (const TensorProductTerm& t : comp.terms) {
        double mag = std::abs(t.weight);
        for (const auto& g : t.factors) mag *= sup_norm(*g);
        magnitude.push_back(mag);
        largest = std::max(largest, mag);
    }
    HierarchyComponent out;
    out.level = comp.level;
    out.symmetric_hint = comp.symmetric_hint;
    for (std::size_t i = 0; i < comp.terms.size(); ++i) {
        if (magnitude[i] > rel_tol * largest) out.terms.push_back(comp.terms[i]);
    }
    return out;
}

}  // namespace wavekin
