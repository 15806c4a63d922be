#ifndef LECH_EXTENSIONS_HPP
#define LECH_EXTENSIONS_HPP

#include <cstdint>
#include <random>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "lech/multiplicity.hpp"

namespace lech {

enum class FlatTag { Unknown, Probed, ByConstruction };

inline const char* to_string(FlatTag t) {
    switch (t) {
    case FlatTag::Unknown: return "unknown";
    case FlatTag::Probed: return "probed";
    case FlatTag::ByConstruction: return "by-construction";
    }
    return "unknown";
}

// S/mS data of a validated local map: its ideal in the target ambient, the
// origin-local length, and the minimal generator count of the fiber ideal
// over the free ambient ring (the Artinian complete-intersection test
// compares nu against the number of ambient variables).
struct ClosedFiber {
    Ideal ideal;
    std::uint64_t length = 0;
    std::uint64_t nu = 0;
};

// Presented local K-algebra map (R,m) -> (S,n): one image polynomial per
// source variable.  Constructed through make_local_map, which certifies
// locality, well-definedness and a finite closed fiber.
class LocalMap {
public:
    LocalMap(QuotientRing source, QuotientRing target, std::vector<Polynomial> images,
             ClosedFiber fiber, FlatTag tag)
        : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)),
          fiber_(std::move(fiber)), flat_tag_(tag) {}

    const QuotientRing& source() const { return source_; }
    const QuotientRing& target() const { return target_; }
    const std::vector<Polynomial>& images() const { return images_; }
    const ClosedFiber& fiber() const { return fiber_; }
    FlatTag flat_tag() const { return flat_tag_; }

    LocalMap with_flat_tag(FlatTag tag) const {
        return LocalMap(source_, target_, images_, fiber_, tag);
    }

    // phi(f) for f in the source ambient ring.
    Polynomial push(const Polynomial& f) const {
        return f.substitute(target_.ring(), images_);
    }

    Ideal push(const Ideal& I) const {
        std::vector<Polynomial> out;
        for (const Polynomial& g : I.gens()) out.push_back(push(g));
        return Ideal(target_.ring(), std::move(out));
    }

private:
    QuotientRing source_, target_;
    std::vector<Polynomial> images_;
    ClosedFiber fiber_;
    FlatTag flat_tag_;
};

namespace detail {

// Certifies the monic-tower shape S = R[z_1..z_k]/(f_1..f_k): images are
// distinct variables, the non-inherited relations can be ordered so that
// f_i is monic in z_i (unit scalar on a pure power, nothing of higher
// z_i-degree) with the remaining terms free of later tower variables.
// Such extensions are free of rank prod(deg_i), hence flat.
inline bool monic_tower_pattern(const QuotientRing& source, const QuotientRing& target,
                                const std::vector<Polynomial>& images) {
    const RingPtr& tring = target.ring();
    std::vector<bool> is_image_var(tring->nvars(), false);
    for (const Polynomial& img : images) {
        if (img.terms().size() != 1) return false;
        const Term& t = img.terms().front();
        if (t.coeff != tring->field->one() || t.mono.degree() != 1) return false;
        std::size_t v = 0;
        for (std::size_t i = 0; i < tring->nvars(); ++i)
            if (t.mono.exps[i] == 1) v = i;
        if (is_image_var[v]) return false;  // images must be distinct
        is_image_var[v] = true;
    }

    // relations inherited from the source versus genuinely new ones
    std::vector<Polynomial> inherited;
    for (const Polynomial& rel : source.defining().gens())
        inherited.push_back(rel.substitute(tring, images));
    Ideal inherited_ideal(tring, inherited);
    std::vector<Polynomial> tower;
    for (const Polynomial& g : target.defining().gens())
        if (!inherited_ideal.contains(g)) tower.push_back(g);

    std::vector<std::size_t> new_vars;
    for (std::size_t i = 0; i < tring->nvars(); ++i)
        if (!is_image_var[i]) new_vars.push_back(i);
    if (tower.size() != new_vars.size()) return false;

    // greedy triangular assignment
    std::vector<bool> var_done(tring->nvars(), false);
    std::vector<bool> gen_done(tower.size(), false);
    for (std::size_t round = 0; round < tower.size(); ++round) {
        bool progress = false;
        for (std::size_t gi = 0; gi < tower.size() && !progress; ++gi) {
            if (gen_done[gi]) continue;
            const Polynomial& f = tower[gi];
            for (std::size_t v : new_vars) {
                if (var_done[v]) continue;
                // highest z-power must be a lone unit-scalar term, and no
                // other pending tower variable may appear
                std::uint32_t top = 0;
                for (const Term& t : f.terms()) top = std::max(top, t.mono.exps[v]);
                if (top == 0) continue;
                bool monic = true;
                for (const Term& t : f.terms()) {
                    if (t.mono.exps[v] == top) {
                        if (t.mono.degree() != top || t.coeff != tring->field->one()) monic = false;
                    }
                    for (std::size_t w : new_vars)
                        if (w != v && !var_done[w] && t.mono.exps[w] > 0) monic = false;
                    if (!monic) break;
                }
                if (!monic) continue;
                var_done[v] = true;
                gen_done[gi] = true;
                progress = true;
                break;
            }
        }
        if (!progress) return false;
    }
    return true;
}

} // namespace detail

// Validates and assembles a local map.  Rejection reasons: wrong image
// count, a non-local image (nonzero constant term modulo the target), a
// source relation not mapping into the target ideal, or an infinite closed
// fiber (the artifact's scope is finite fibers, i.e. dim S = dim R for flat
// maps).  Maps matching the monic-tower shape come out tagged flat by
// construction; everything else starts unknown and waits for the probe.
inline LocalMap make_local_map(const QuotientRing& source, const QuotientRing& target,
                               std::vector<Polynomial> images) {
    if (images.size() != source.ring()->nvars())
        throw ArgumentError("make_local_map: need one image per source variable");
    if (!source.field()->same(*target.field()))
        throw StructuralError("make_local_map: source and target fields differ");
    auto tgb = target.defining().groebner();
    for (Polynomial& img : images) {
        img = img.with_ring(target.ring());
        Polynomial nf = normal_form(img, *tgb);
        if (!target.field()->is_zero(nf.constant_coeff()))
            throw StructuralError("map is not local: image '" + img.to_string() +
                                  "' has a unit constant term");
    }
    for (const Polynomial& rel : source.defining().gens()) {
        Polynomial pushed = rel.substitute(target.ring(), images);
        if (!normal_form(pushed, *tgb).is_zero())
            throw StructuralError("map is ill-defined: relation '" + rel.to_string() +
                                  "' does not map into the target ideal");
    }
    Ideal fiber_ideal = target.defining().plus(images);
    LengthReport len = local_length(target, Ideal(target.ring(), images));
    if (!len.finite)
        throw StructuralError("closed fiber has infinite length; the map is outside scope");
    QuotientRing free_ambient(target.ring(), {});
    std::uint64_t nu = min_gens(free_ambient, fiber_ideal);
    FlatTag tag = detail::monic_tower_pattern(source, target, images) ? FlatTag::ByConstruction
                                                                      : FlatTag::Unknown;
    return LocalMap(source, target, std::move(images), ClosedFiber{fiber_ideal, len.local_len, nu},
                    tag);
}

// ---------------------------------------------------------------------------
// Freeness probe

// Necessary-condition probe for flatness: over a flat couple the length of
// S/aS is l(R/a) times the fiber length for every ideal a of finite
// colength.  The probe checks this for powers of a parameter ideal of R.
// Any failure soundly certifies non-flatness; passing only upgrades the tag
// to "probed".
struct ProbeReport {
    bool consistent = false;
    std::uint64_t rank = 0;  // candidate rank l(S/xS) / l(R/xR)
    std::vector<std::string> sop;
    std::vector<std::tuple<std::uint32_t, std::uint64_t, std::uint64_t>> rows;  // t, lhs, rhs
    std::string failure;
};

inline ProbeReport freeness_probe(const LocalMap& map, std::uint32_t t_max = 4,
                                  std::uint64_t seed = 1) {
    const QuotientRing& R = map.source();
    const QuotientRing& S = map.target();
    ProbeReport rep;

    std::vector<Polynomial> sop;
    try {
        sop = find_minimal_reduction(R, seed, 80).forms;
        // keep the probe on the original field: reductions over extensions
        // would drag the whole map through a scalar extension
        if (!sop.empty() && !sop.front().ring()->field->same(*R.field())) sop.clear();
    } catch (const SearchError&) {
        sop.clear();
    }
    if (sop.empty() && R.dim() > 0) {
        // fall back to the maximal ideal: the flat length identity holds
        // for every finite-colength ideal, parameters or not
        sop = maximal_ideal(R.ring()).gens();
    }
    for (const Polynomial& f : sop) rep.sop.push_back(f.to_string());

    Ideal xR(R.ring(), sop);
    std::vector<Polynomial> pushed;
    for (const Polynomial& f : sop) pushed.push_back(map.push(f));
    Ideal xS(S.ring(), pushed);

    LengthReport base_r = local_length(R, xR);
    LengthReport base_s = local_length(S, xS);
    if (!base_r.finite || !base_s.finite) {
        rep.failure = "probe ideal lost finiteness";
        return rep;
    }
    if (base_s.local_len % base_r.local_len != 0) {
        rep.failure = "candidate rank is not an integer";
        return rep;
    }
    rep.rank = base_s.local_len / base_r.local_len;
    if (rep.rank != map.fiber().length) {
        rep.failure = "candidate rank disagrees with the closed fiber length";
        return rep;
    }
    bool r_primary = base_r.away == 0;
    bool s_primary = base_s.away == 0;
    for (std::uint32_t t = 1; t <= t_max; ++t) {
        std::uint64_t lhs = local_length(S, ideal_power(xS, t), s_primary).local_len;
        std::uint64_t rhs = rep.rank * local_length(R, ideal_power(xR, t), r_primary).local_len;
        rep.rows.emplace_back(t, lhs, rhs);
        if (lhs != rhs) {
            rep.failure = "length identity fails at t = " + std::to_string(t);
            return rep;
        }
    }
    rep.consistent = true;
    return rep;
}

// ---------------------------------------------------------------------------
// Scalar extension of maps

inline LocalMap scalar_extend(const LocalMap& map, std::uint32_t degree) {
    QuotientRing source = extend_scalars(map.source(), degree);
    QuotientRing target = extend_scalars(map.target(), degree);
    auto table = map.target().field()->embedding_into(*target.field());
    std::vector<Polynomial> images;
    for (const Polynomial& img : map.images())
        images.push_back(map_coefficients(img, target.ring(), table));
    return make_local_map(source, target, std::move(images)).with_flat_tag(map.flat_tag());
}

// ---------------------------------------------------------------------------
// Mod-p specialization of integer presentations

struct IntegerPoly {
    std::vector<std::pair<std::vector<std::uint32_t>, std::int64_t>> terms;
};

// A flat-couple candidate presented over the integers; reduction mod p
// yields a map over F_p when the checks survive.  Relations must have unit
// content (denominators and common factors already cleared).
struct IntegerPresentation {
    std::vector<std::string> source_vars;
    std::vector<IntegerPoly> source_rels;
    std::vector<std::string> target_vars;
    std::vector<IntegerPoly> target_rels;
    std::vector<IntegerPoly> images;  // one per source variable

    void validate() const {
        if (images.size() != source_vars.size())
            throw ArgumentError("integer presentation: one image per source variable");
        auto content_one = [](const IntegerPoly& f) {
            std::int64_t g = 0;
            for (const auto& [e, c] : f.terms) {
                std::int64_t a = c < 0 ? -c : c;
                while (a) { std::int64_t t = g % a; g = a; a = t; }
            }
            return g == 1;
        };
        for (const auto& rel : source_rels)
            if (!rel.terms.empty() && !content_one(rel))
                throw ArgumentError("integer presentation: relation content must be 1");
        for (const auto& rel : target_rels)
            if (!rel.terms.empty() && !content_one(rel))
                throw ArgumentError("integer presentation: relation content must be 1");
    }
};

struct BadPrime {
    std::uint32_t p = 0;
    std::string reason;
};

namespace detail {

inline Polynomial reduce_mod_p(const IntegerPoly& f, const RingPtr& ring) {
    Polynomial out(ring);
    for (const auto& [exps, coeff] : f.terms) {
        Monomial m(ring->nvars());
        for (std::size_t i = 0; i < exps.size() && i < m.exps.size(); ++i) m.exps[i] = exps[i];
        out = out + Polynomial::monomial(ring, std::move(m), ring->field->from_int(coeff));
    }
    return out;
}

} // namespace detail

// Reduce every coefficient mod p and re-run the local-map validation.  A
// failed check is reported as a BadPrime value, not an error.
inline std::variant<LocalMap, BadPrime> specialize_mod_p(const IntegerPresentation& pres,
                                                         std::uint32_t p) {
    pres.validate();
    if (!Field::is_prime(p)) throw ArgumentError("specialize_mod_p: p must be prime");
    try {
        FieldPtr f = make_field(p);
        RingPtr rsrc = make_ring(f, pres.source_vars);
        RingPtr rtgt = make_ring(f, pres.target_vars);
        std::vector<Polynomial> srels, trels, imgs;
        for (const auto& g : pres.source_rels) srels.push_back(detail::reduce_mod_p(g, rsrc));
        for (const auto& g : pres.target_rels) trels.push_back(detail::reduce_mod_p(g, rtgt));
        for (const auto& g : pres.images) imgs.push_back(detail::reduce_mod_p(g, rtgt));
        QuotientRing R(rsrc, std::move(srels));
        QuotientRing S(rtgt, std::move(trels));
        return make_local_map(R, S, std::move(imgs));
    } catch (const Error& err) {
        return BadPrime{p, err.what()};
    }
}

// Invariants of one specialization; the harness compares them across primes.
struct PrimeSample {
    std::uint32_t p = 0;
    bool good = false;
    std::string reason;
    int dim_source = -1, dim_target = -1;
    std::uint64_t fiber_length = 0;
    std::int64_t e_source = 0, e_target = 0;
};

inline std::vector<PrimeSample> specialization_table(const IntegerPresentation& pres,
                                                     const std::vector<std::uint32_t>& primes) {
    std::vector<PrimeSample> out;
    for (std::uint32_t p : primes) {
        PrimeSample row;
        row.p = p;
        auto result = specialize_mod_p(pres, p);
        if (std::holds_alternative<BadPrime>(result)) {
            row.reason = std::get<BadPrime>(result).reason;
        } else {
            const LocalMap& map = std::get<LocalMap>(result);
            row.good = true;
            row.dim_source = map.source().dim();
            row.dim_target = map.target().dim();
            row.fiber_length = map.fiber().length;
            row.e_source = hilbert_samuel(map.source(), map.source().maximal()).e;
            row.e_target = hilbert_samuel(map.target(), map.target().maximal()).e;
        }
        out.push_back(std::move(row));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cohen-style factorization

// Factorization (R,m) -> (T,n_T) -> (S,n) = T/J with J inside n_T^2.  T is
// presented on the source variables plus one adjoined variable per target
// variable; `peeled` lists the kernel elements killed to push J into n_T^2,
// and c = edim S - edim R.
struct CohenFactorization {
    QuotientRing T;
    Ideal J;
    std::vector<Polynomial> peeled;
    int c = 0;
    std::vector<std::string> adjoined;       // z-variable names, one per target variable
    int edim_R = 0, edim_S = 0, edim_T = 0;

    // a target-ambient polynomial rewritten in T's ambient via z_j -> y_j
    Polynomial lift(const Polynomial& f) const {
        const RingPtr& tr = T.ring();
        std::size_t offset = tr->nvars() - adjoined.size();
        Polynomial out(tr);
        for (const Term& t : f.terms()) {
            Monomial m(tr->nvars());
            for (std::size_t i = 0; i < t.mono.exps.size(); ++i)
                m.exps[offset + i] = t.mono.exps[i];
            out = out + Polynomial::monomial(tr, std::move(m), t.coeff);
        }
        return out;
    }
};

namespace detail {

// Row-reduced basis of the span of the linear parts, for membership tests
// of "g has linear part inside <linear parts of D> + m^2".
class LinearSpan {
public:
    explicit LinearSpan(const Field& field) : field_(&field) {}

    void insert(std::vector<Field::Elem> v) {
        reduce(v);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (field_->is_zero(v[i])) continue;
            Field::Elem inv = field_->inv(v[i]);
            for (auto& c : v) c = field_->mul(c, inv);
            rows_.emplace_back(i, std::move(v));
            return;
        }
    }

    bool contains(std::vector<Field::Elem> v) const {
        reduce(v);
        for (Field::Elem c : v)
            if (!field_->is_zero(c)) return false;
        return true;
    }

private:
    void reduce(std::vector<Field::Elem>& v) const {
        for (const auto& [pivot, row] : rows_) {
            if (field_->is_zero(v[pivot])) continue;
            Field::Elem f = v[pivot];
            for (std::size_t i = 0; i < v.size(); ++i)
                v[i] = field_->sub(v[i], field_->mul(f, row[i]));
        }
    }

    const Field* field_;
    std::vector<std::pair<std::size_t, std::vector<Field::Elem>>> rows_;
};

} // namespace detail

// Builds T' = R-ambient plus one adjoined variable per target variable,
// computes J' = ker(T' -> S), then peels kernel elements that are
// nonzerodivisors on the closed fiber (certified by a fiber dimension drop
// of exactly one) and carry a nonzero linear part modulo n^2, until the
// kernel sits inside n_T^2.  Peel candidates are generators ordered by
// degree then index; seeded random recombinations are the fallback.
inline CohenFactorization cohen_factor(const LocalMap& map, std::uint64_t seed = 1) {
    const QuotientRing& R = map.source();
    const QuotientRing& S = map.target();
    const RingPtr& rring = R.ring();
    const RingPtr& sring = S.ring();

    // fresh names for the adjoined variables
    std::vector<std::string> tvars = rring->vars;
    std::vector<std::string> zvars;
    for (const std::string& yname : sring->vars) {
        std::string candidate = yname;
        auto taken = [&](const std::string& n) {
            for (const auto& v : tvars) if (v == n) return true;
            return false;
        };
        while (taken(candidate)) candidate += "_t";
        tvars.push_back(candidate);
        zvars.push_back(candidate);
    }
    RingPtr tring = make_ring(rring->field, tvars);
    const std::size_t nr = rring->nvars();

    // kernel of T' -> S: source vars map through the original images, the
    // adjoined variables map onto the target variables
    std::vector<Polynomial> t_images = map.images();
    for (std::size_t j = 0; j < sring->nvars(); ++j)
        t_images.push_back(Polynomial::variable(sring, j));
    Ideal kernel_raw = kernel_of_map(tvars, S, t_images);
    std::vector<Polynomial> jgens;
    for (const Polynomial& g : kernel_raw.gens()) {
        Polynomial h(tring);
        for (const Term& t : g.terms()) h = h + Polynomial::monomial(tring, t.mono, t.coeff);
        jgens.push_back(std::move(h));
    }

    std::vector<Polynomial> defining;
    for (const Polynomial& g : R.defining().gens()) defining.push_back(detail::widen(g, tring));

    std::vector<Polynomial> rvar_polys;
    for (std::size_t i = 0; i < nr; ++i) rvar_polys.push_back(Polynomial::variable(tring, i));

    const Field& F = *tring->field;
    std::mt19937_64 rng(seed);
    std::vector<Polynomial> peeled;
    const std::size_t peel_budget = zvars.size() + 2;

    while (true) {
        detail::LinearSpan span(F);
        for (const Polynomial& g : defining) span.insert(g.linear_part());
        std::vector<const Polynomial*> pending;
        for (const Polynomial& g : jgens)
            if (!span.contains(g.linear_part())) pending.push_back(&g);
        if (pending.empty()) break;
        if (peeled.size() >= peel_budget)
            throw SearchError("cohen_factor: peel loop exceeded its budget");

        std::sort(pending.begin(), pending.end(), [](const Polynomial* a, const Polynomial* b) {
            return a->degree() < b->degree();
        });

        Ideal fiber_ideal = Ideal(tring, defining).plus(rvar_polys);
        int fiber_dim = krull_dimension(*fiber_ideal.groebner());

        auto try_peel = [&](const Polynomial& y) -> bool {
            if (span.contains(y.linear_part())) return false;
            Ideal cut = fiber_ideal.plus({y});
            if (krull_dimension(*cut.groebner()) != fiber_dim - 1) return false;
            defining.push_back(y);
            peeled.push_back(y);
            return true;
        };

        bool progressed = false;
        for (const Polynomial* g : pending)
            if (try_peel(*g)) { progressed = true; break; }
        if (!progressed) {
            // random recombinations of the pending generators
            for (int attempt = 0; attempt < 40 && !progressed; ++attempt) {
                Polynomial y = Polynomial::zero(tring);
                for (const Polynomial* g : pending) {
                    Field::Elem c = static_cast<Field::Elem>(rng() % F.q());
                    y = y + g->scaled(c);
                }
                if (!y.is_zero() && try_peel(y)) progressed = true;
            }
        }
        if (!progressed)
            throw SearchError("cohen_factor: no peelable kernel element; "
                              "a larger scalar field may be needed");
    }

    CohenFactorization out;
    out.T = QuotientRing(tring, defining);
    out.J = Ideal(tring, jgens);
    out.peeled = std::move(peeled);
    out.adjoined = std::move(zvars);
    out.edim_R = embedding_dimension(R);
    out.edim_S = embedding_dimension(S);
    out.edim_T = embedding_dimension(out.T);
    out.c = out.edim_S - out.edim_R;
    if (out.c < 0)
        throw StructuralError("cohen_factor: negative embedding-dimension difference");
    if (out.edim_T != out.edim_S)
        throw StructuralError("cohen_factor: edim T = " + std::to_string(out.edim_T) +
                              " misses edim S = " + std::to_string(out.edim_S));
    return out;
}

// Artinian complete-intersection test for the closed fiber: the fiber ideal
// needs exactly as many minimal generators as the ambient has variables.
inline bool is_ci_fiber(const LocalMap& map) {
    return map.fiber().nu == map.target().ring()->nvars();
}

} // namespace lech

#endif
