#ifndef LECH_IDEAL_HPP
#define LECH_IDEAL_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "lech/groebner.hpp"
#include "lech/polynomial.hpp"

namespace lech {

// Ideal in an ambient polynomial ring.  Reduced Groebner bases are computed
// lazily and cached per monomial order; the cache is shared by copies of
// the ideal and installed with at-most-once semantics.
class Ideal {
public:
    Ideal() = default;
    Ideal(RingPtr ring, std::vector<Polynomial> gens)
        : ring_(std::move(ring)), gens_(std::move(gens)), cache_(std::make_shared<Cache>()) {
        for (const Polynomial& g : gens_)
            if (!g.is_zero() && !g.ring()->same_ambient(*ring_))
                throw StructuralError("ideal generators live in a different ring");
    }

    const RingPtr& ring() const { return ring_; }
    const std::vector<Polynomial>& gens() const { return gens_; }

    std::shared_ptr<const GroebnerBasis> groebner() const { return groebner(ring_->order); }

    std::shared_ptr<const GroebnerBasis> groebner(const MonomialOrder& order) const {
        std::scoped_lock lock(cache_->mutex);
        auto it = cache_->by_order.find(order.key());
        if (it != cache_->by_order.end()) return it->second;
        RingPtr r = order == ring_->order ? ring_ : make_ring(ring_->field, ring_->vars, order);
        auto gb = std::make_shared<const GroebnerBasis>(groebner_basis(gens_, r));
        cache_->by_order.emplace(order.key(), gb);
        return gb;
    }

    bool contains(const Polynomial& f) const { return normal_form(f, *groebner()).is_zero(); }

    bool is_unit() const { return groebner()->is_unit_ideal(); }
    bool is_zero() const { return groebner()->is_zero_ideal(); }

    // Canonical-form comparison through reduced grevlex bases.
    bool same_ideal(const Ideal& other) const {
        if (!ring_->same_ambient(*other.ring_)) return false;
        auto a = groebner(MonomialOrder::grevlex());
        auto b = other.groebner(MonomialOrder::grevlex());
        if (a->gens.size() != b->gens.size()) return false;
        for (std::size_t i = 0; i < a->gens.size(); ++i)
            if (!(a->gens[i] == b->gens[i].with_ring(a->gens[i].ring()))) return false;
        return true;
    }

    Ideal plus(const Ideal& other) const {
        std::vector<Polynomial> gens = gens_;
        for (const Polynomial& g : other.gens_) gens.push_back(g.with_ring(ring_));
        return Ideal(ring_, std::move(gens));
    }

    Ideal plus(const std::vector<Polynomial>& extra) const {
        std::vector<Polynomial> gens = gens_;
        for (const Polynomial& g : extra) gens.push_back(g.with_ring(ring_));
        return Ideal(ring_, std::move(gens));
    }

private:
    struct Cache {
        std::mutex mutex;
        std::map<std::string, std::shared_ptr<const GroebnerBasis>> by_order;
    };

    RingPtr ring_;
    std::vector<Polynomial> gens_;
    std::shared_ptr<Cache> cache_;
};

inline Ideal unit_ideal(const RingPtr& ring) {
    return Ideal(ring, {Polynomial::from_int(ring, 1)});
}

inline Ideal zero_ideal(const RingPtr& ring) { return Ideal(ring, {}); }

// The origin maximal ideal (x_1, ..., x_n).
inline Ideal maximal_ideal(const RingPtr& ring) {
    std::vector<Polynomial> gens;
    for (std::size_t i = 0; i < ring->nvars(); ++i) gens.push_back(Polynomial::variable(ring, i));
    return Ideal(ring, gens);
}

// I^t with generators all t-fold products of the generators, deduplicated.
// t = 0 yields the unit ideal by convention.
inline Ideal ideal_power(const Ideal& I, std::uint32_t t) {
    if (t == 0) return unit_ideal(I.ring());
    if (t == 1) return I;
    const auto& gens = I.gens();
    if (gens.empty()) return zero_ideal(I.ring());
    std::vector<Polynomial> out;
    std::vector<std::size_t> pick(t, 0);
    // multisets of generator indices, non-decreasing
    while (true) {
        Polynomial prod = Polynomial::from_int(I.ring(), 1);
        for (std::size_t idx : pick) prod = prod * gens[idx];
        bool dup = false;
        for (const Polynomial& seen : out)
            if (seen == prod) { dup = true; break; }
        if (!dup && !prod.is_zero()) out.push_back(std::move(prod));
        // advance multiset
        std::size_t pos = t;
        while (pos > 0 && pick[pos - 1] == gens.size() - 1) --pos;
        if (pos == 0) break;
        ++pick[pos - 1];
        for (std::size_t i = pos; i < t; ++i) pick[i] = pick[pos - 1];
    }
    if (out.empty()) return zero_ideal(I.ring());
    return Ideal(I.ring(), std::move(out));
}

// Bracket power I^[q]: q-th powers of the generators; q must be a power of
// the field characteristic (q = 1 gives back I).
inline Ideal frobenius_power(const Ideal& I, std::uint64_t q) {
    std::uint32_t p = I.ring()->field->p();
    std::uint64_t probe = q;
    while (probe > 1) {
        if (probe % p != 0) throw ArgumentError(std::to_string(q) + " is not a power of p=" + std::to_string(p));
        probe /= p;
    }
    if (probe != 1) throw ArgumentError("Frobenius exponent must be positive");
    if (q == 1) return I;
    std::vector<Polynomial> out;
    for (const Polynomial& g : I.gens())
        if (!g.is_zero()) out.push_back(g.pow(static_cast<std::uint32_t>(q)));
    return Ideal(I.ring(), std::move(out));
}

namespace detail {

// Ambient extended by one auxiliary variable, with a block order that
// eliminates it.  Variable names with '#' cannot be parsed, so no clash
// with user-declared variables is possible.
inline RingPtr ring_with_aux(const RingPtr& ring, const std::string& aux_name) {
    std::vector<std::string> vars = ring->vars;
    vars.push_back(aux_name);
    return make_ring(ring->field, std::move(vars), MonomialOrder::block({vars.size() - 1}));
}

inline Polynomial widen(const Polynomial& f, const RingPtr& wide) {
    Polynomial out(wide);
    for (const Term& t : f.terms()) {
        Monomial m(wide->nvars());
        for (std::size_t i = 0; i < t.mono.exps.size(); ++i) m.exps[i] = t.mono.exps[i];
        out = out + Polynomial::monomial(wide, std::move(m), t.coeff);
    }
    return out;
}

// Keep basis elements free of the listed variables and re-express them in
// `narrow`, whose variables are the surviving ones in order.
inline std::vector<Polynomial> select_free(const GroebnerBasis& G,
                                           const std::vector<bool>& dropped,
                                           const RingPtr& narrow) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < dropped.size(); ++i)
        if (!dropped[i]) keep.push_back(i);
    std::vector<Polynomial> out;
    for (const Polynomial& g : G.gens) {
        bool free = true;
        for (const Term& t : g.terms()) {
            for (std::size_t i = 0; i < dropped.size() && free; ++i)
                if (dropped[i] && t.mono.exps[i] > 0) free = false;
            if (!free) break;
        }
        if (!free) continue;
        Polynomial h(narrow);
        for (const Term& t : g.terms()) {
            Monomial m(narrow->nvars());
            for (std::size_t j = 0; j < keep.size(); ++j) m.exps[j] = t.mono.exps[keep[j]];
            h = h + Polynomial::monomial(narrow, std::move(m), t.coeff);
        }
        out.push_back(std::move(h));
    }
    return out;
}

} // namespace detail

// I cap K[remaining variables]: block-order basis, then the elements free of
// the dropped variables, re-expressed in the ring on the surviving names.
inline Ideal eliminate(const Ideal& I, const std::vector<std::size_t>& drop_vars) {
    const RingPtr& ring = I.ring();
    std::vector<bool> dropped(ring->nvars(), false);
    for (std::size_t v : drop_vars) {
        if (v >= ring->nvars()) throw ArgumentError("eliminate: variable index out of range");
        dropped[v] = true;
    }
    std::vector<std::size_t> elim;
    std::vector<std::string> remaining;
    for (std::size_t i = 0; i < ring->nvars(); ++i) {
        if (dropped[i]) elim.push_back(i);
        else remaining.push_back(ring->vars[i]);
    }
    auto G = I.groebner(MonomialOrder::block(elim));
    RingPtr narrow = make_ring(ring->field, remaining);
    return Ideal(narrow, detail::select_free(*G, dropped, narrow));
}

// I cap J via the classic t-trick: eliminate t from t*I + (1-t)*J.
inline Ideal intersect(const Ideal& I, const Ideal& J) {
    const RingPtr& ring = I.ring();
    if (!ring->same_ambient(*J.ring())) throw StructuralError("intersection across different rings");
    RingPtr wide = detail::ring_with_aux(ring, "#t");
    Polynomial t = Polynomial::variable(wide, wide->nvars() - 1);
    Polynomial one_minus_t = Polynomial::from_int(wide, 1) - t;
    std::vector<Polynomial> gens;
    for (const Polynomial& f : I.gens()) gens.push_back(t * detail::widen(f, wide));
    for (const Polynomial& g : J.gens()) gens.push_back(one_minus_t * detail::widen(g, wide));
    Ideal mixed(wide, std::move(gens));
    Ideal flat = eliminate(mixed, {wide->nvars() - 1});
    // eliminate() preserves the order of surviving names, so the ambient
    // matches the original ring up to the stored order
    std::vector<Polynomial> back;
    for (const Polynomial& g : flat.gens()) back.push_back(g.with_ring(ring));
    return Ideal(ring, std::move(back));
}

// Exact division g / f for g in (f); remainder must vanish.
inline Polynomial exact_divide(const Polynomial& g, const Polynomial& f) {
    const RingPtr& ring = g.ring();
    const Field& F = *ring->field;
    Polynomial quotient(ring);
    Polynomial rest = g;
    while (!rest.is_zero()) {
        const Term& lt = rest.leading_term();
        if (!f.leading_monomial().divides(lt.mono))
            throw StructuralError("exact_divide: division is not exact");
        Monomial m = lt.mono.quotient_by(f.leading_monomial());
        Field::Elem c = F.mul(lt.coeff, F.inv(f.leading_term().coeff));
        quotient = quotient + Polynomial::monomial(ring, m, c);
        rest = rest - f.times_term(m, c);
    }
    return quotient;
}

// Ideal quotient I : (f).
inline Ideal colon(const Ideal& I, const Polynomial& f) {
    if (f.is_zero()) return unit_ideal(I.ring());
    if (f.is_constant()) return I;
    Ideal meet = intersect(I, Ideal(I.ring(), {f}));
    std::vector<Polynomial> out;
    for (const Polynomial& g : meet.gens()) out.push_back(exact_divide(g, f));
    return Ideal(I.ring(), std::move(out));
}

// Ideal quotient I : J = intersection of I : (f) over the generators of J.
inline Ideal colon(const Ideal& I, const Ideal& J) {
    bool any = false;
    Ideal acc;
    for (const Polynomial& f : J.gens()) {
        if (f.is_zero()) continue;
        Ideal piece = colon(I, f);
        acc = any ? intersect(acc, piece) : piece;
        any = true;
    }
    if (!any) return unit_ideal(I.ring());  // J = 0
    return acc;
}

// Saturation I : f^infinity through the extra-variable trick.
inline Ideal saturate(const Ideal& I, const Polynomial& f) {
    if (f.is_zero()) return unit_ideal(I.ring());
    if (f.is_constant()) return I;
    const RingPtr& ring = I.ring();
    RingPtr wide = detail::ring_with_aux(ring, "#s");
    Polynomial t = Polynomial::variable(wide, wide->nvars() - 1);
    std::vector<Polynomial> gens;
    for (const Polynomial& g : I.gens()) gens.push_back(detail::widen(g, wide));
    gens.push_back(Polynomial::from_int(wide, 1) - t * detail::widen(f, wide));
    Ideal mixed(wide, std::move(gens));
    Ideal flat = eliminate(mixed, {wide->nvars() - 1});
    std::vector<Polynomial> back;
    for (const Polynomial& g : flat.gens()) back.push_back(g.with_ring(ring));
    return Ideal(ring, std::move(back));
}

// I : J^infinity as the intersection of the single-generator saturations;
// each result is certified stable by (sat : f) = sat.
inline Ideal saturate(const Ideal& I, const Ideal& J) {
    bool any = false;
    Ideal acc;
    for (const Polynomial& f : J.gens()) {
        if (f.is_zero()) continue;
        Ideal piece = saturate(I, f);
        if (!colon(piece, f).same_ideal(piece))
            throw StructuralError("saturation failed its stabilization check");
        acc = any ? intersect(acc, piece) : piece;
        any = true;
    }
    if (!any) return unit_ideal(I.ring());
    return acc;
}

// ---------------------------------------------------------------------------

// Presentation K[x_1..x_n]/J regarded locally at the origin.  Construction
// demands that every defining generator vanishes at the origin and caches
// the Krull dimension of the presentation.
class QuotientRing {
public:
    QuotientRing() = default;
    QuotientRing(RingPtr ring, std::vector<Polynomial> defining_gens)
        : ring_(std::move(ring)), defining_(ring_, normalize(ring_, std::move(defining_gens))),
          edim_cache_(std::make_shared<EdimCache>()) {
        for (const Polynomial& g : defining_.gens())
            if (!g.ring()->field->is_zero(g.constant_coeff()))
                throw StructuralError("defining generator '" + g.to_string() +
                                      "' does not vanish at the origin");
        dim_ = krull_dimension(*defining_.groebner());
    }

    const RingPtr& ring() const { return ring_; }
    const Ideal& defining() const { return defining_; }
    int dim() const { return dim_; }
    const FieldPtr& field() const { return ring_->field; }
    Ideal maximal() const { return maximal_ideal(ring_); }

    bool same_presentation(const QuotientRing& o) const {
        return ring_->same_ambient(*o.ring_) && defining_.same_ideal(o.defining_);
    }

    // at-most-once cache for the embedding dimension, shared across copies
    template <typename F>
    int cached_edim(F&& compute) const {
        if (!edim_cache_) return compute();
        std::scoped_lock lock(edim_cache_->mutex);
        if (!edim_cache_->value) edim_cache_->value = compute();
        return *edim_cache_->value;
    }

private:
    struct EdimCache {
        std::mutex mutex;
        std::optional<int> value;
    };

    static std::vector<Polynomial> normalize(const RingPtr& ring, std::vector<Polynomial> gens) {
        std::vector<Polynomial> out;
        for (Polynomial& g : gens)
            if (!g.is_zero()) out.push_back(g.with_ring(ring));
        return out;
    }

    RingPtr ring_;
    Ideal defining_;
    int dim_ = 0;
    std::shared_ptr<EdimCache> edim_cache_;
};

// Same polynomial with coefficients pushed through an element-wise field map.
inline Polynomial map_coefficients(const Polynomial& f, const RingPtr& target,
                                   const std::vector<Field::Elem>& table) {
    Polynomial out(target);
    for (const Term& t : f.terms())
        out = out + Polynomial::monomial(target, t.mono, table[t.coeff]);
    return out;
}

// Same presentation over F_{p^degree}.  The new degree must be a multiple
// of the current one; coefficients ride along the canonical embedding.
inline QuotientRing extend_scalars(const QuotientRing& Q, std::uint32_t degree);

inline QuotientRing extend_scalars(const QuotientRing& Q, std::uint32_t degree) {
    const FieldPtr& f = Q.field();
    if (degree == f->k()) return Q;
    if (degree % f->k() != 0)
        throw ArgumentError("scalar extension degree must be a multiple of the current degree");
    FieldPtr big = make_field(f->p(), degree);
    auto table = f->embedding_into(*big);
    RingPtr ring = make_ring(big, Q.ring()->vars, Q.ring()->order);
    std::vector<Polynomial> gens;
    for (const Polynomial& g : Q.defining().gens()) gens.push_back(map_coefficients(g, ring, table));
    return QuotientRing(ring, std::move(gens));
}

// Kernel of the ring map K[source_vars] -> target sending the i-th source
// variable to images[i]: graph ideal in a joint ring, then elimination of
// the target variables.  Images must lie in the target's origin maximal
// ideal so that the map is local.
inline Ideal kernel_of_map(const std::vector<std::string>& source_vars,
                           const QuotientRing& target, const std::vector<Polynomial>& images) {
    if (source_vars.size() != images.size())
        throw ArgumentError("kernel_of_map: one image per source variable required");
    const RingPtr& tring = target.ring();
    auto tgb = target.defining().groebner();
    for (const Polynomial& img : images) {
        Polynomial nf = normal_form(img.with_ring(tring), *tgb);
        if (!tring->field->is_zero(nf.constant_coeff()))
            throw StructuralError("image '" + img.to_string() + "' is not in the target maximal ideal");
    }

    // joint ring: target vars first (to be eliminated), then tagged copies
    // of the source vars
    std::vector<std::string> joint_vars = tring->vars;
    const std::size_t nt = joint_vars.size();
    for (const std::string& s : source_vars) joint_vars.push_back("#" + s);
    std::vector<std::size_t> elim(nt);
    for (std::size_t i = 0; i < nt; ++i) elim[i] = i;
    RingPtr joint = make_ring(tring->field, joint_vars, MonomialOrder::block(elim));

    std::vector<Polynomial> gens;
    for (const Polynomial& g : target.defining().gens()) gens.push_back(detail::widen(g, joint));
    for (std::size_t i = 0; i < images.size(); ++i) {
        Polynomial z = Polynomial::variable(joint, nt + i);
        gens.push_back(z - detail::widen(images[i].with_ring(tring), joint));
    }
    Ideal graph(joint, std::move(gens));
    std::vector<std::size_t> drop(nt);
    for (std::size_t i = 0; i < nt; ++i) drop[i] = i;
    Ideal eliminated = eliminate(graph, drop);

    RingPtr source_ring = make_ring(tring->field, source_vars);
    std::vector<Polynomial> out;
    for (const Polynomial& g : eliminated.gens()) {
        Polynomial h(source_ring);
        for (const Term& t : g.terms())
            h = h + Polynomial::monomial(source_ring, t.mono, t.coeff);
        out.push_back(std::move(h));
    }
    return Ideal(source_ring, std::move(out));
}

// ---------------------------------------------------------------------------
// Lengths localized at the origin

struct LengthReport {
    bool finite = false;
    std::uint64_t global = 0;     // dim_K K[x]/(J+I)
    std::uint64_t away = 0;       // colength of the saturation (components off the origin)
    std::uint64_t local_len = 0;  // global - away
};

// Length of (K[x]/(J+I))_m at the origin, computed as the global colength
// minus the colength of the saturation by m.  Infinite when J+I is not
// zero-dimensional.  `assume_origin_primary` skips the saturation; callers
// use it for powers of an ideal whose radical was already checked, since
// powers do not change the vanishing locus.
inline LengthReport local_length(const QuotientRing& Q, const Ideal& I,
                                 bool assume_origin_primary = false) {
    Ideal A = Q.defining().plus(I);
    auto G = A.groebner();
    MonomialCount global = count_standard_monomials(*G);
    if (!global.finite) return LengthReport{false, 0, 0, 0};
    if (global.count == 0) return LengthReport{true, 0, 0, 0};

    bool away_zero = assume_origin_primary;
    if (!away_zero) {
        // a pure power of every variable among the basis elements pins the
        // vanishing locus to the origin
        std::vector<bool> pinned(Q.ring()->nvars(), false);
        for (const Polynomial& g : G->gens) {
            if (g.terms().size() != 1) continue;
            const Monomial& m = g.leading_monomial();
            int var = -1;
            bool pure = true;
            for (std::size_t i = 0; i < m.exps.size(); ++i) {
                if (m.exps[i] == 0) continue;
                if (var >= 0) { pure = false; break; }
                var = static_cast<int>(i);
            }
            if (pure && var >= 0) pinned[static_cast<std::size_t>(var)] = true;
        }
        away_zero = true;
        for (bool b : pinned) away_zero = away_zero && b;
    }

    std::uint64_t away = 0;
    if (!away_zero) {
        Ideal sat = saturate(A, maximal_ideal(Q.ring()));
        MonomialCount sat_count = count_standard_monomials(*sat.groebner());
        if (!sat_count.finite)
            throw StructuralError("saturation of a zero-dimensional ideal came out infinite");
        away = sat_count.count;
    }
    return LengthReport{true, global.count, away, global.count - away};
}

// dim_K m/m^2 of the localized quotient: the colength of m^2 minus one.
inline int embedding_dimension(const QuotientRing& Q) {
    return Q.cached_edim([&] {
        Ideal m = maximal_ideal(Q.ring());
        LengthReport r = local_length(Q, ideal_power(m, 2), /*assume_origin_primary=*/true);
        return static_cast<int>(r.local_len) - 1;
    });
}

// Nakayama count of minimal generators of A over the localized quotient.
inline std::uint64_t min_gens(const QuotientRing& Q, const Ideal& A) {
    Ideal m = maximal_ideal(Q.ring());
    std::vector<Polynomial> product;
    for (const Polynomial& v : m.gens())
        for (const Polynomial& a : A.gens())
            if (!a.is_zero()) product.push_back(v * a.with_ring(Q.ring()));
    LengthReport whole = local_length(Q, A);
    LengthReport shrunk = local_length(Q, Ideal(Q.ring(), std::move(product)));
    if (!whole.finite || !shrunk.finite)
        throw StructuralError("min_gens needs finite local colengths");
    return shrunk.local_len - whole.local_len;
}

} // namespace lech

#endif
