#ifndef LECH_GROEBNER_HPP
#define LECH_GROEBNER_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <list>
#include <optional>
#include <vector>

#include "lech/polynomial.hpp"

namespace lech {

struct GroebnerBasis {
    RingPtr ring;
    std::vector<Polynomial> gens;  // monic, sorted descending by leading monomial
    bool reduced = false;

    bool is_unit_ideal() const {
        return gens.size() == 1 && gens[0].is_constant() && !gens[0].is_zero();
    }
    bool is_zero_ideal() const { return gens.empty(); }
};

// Remainder of full multivariate division by G: no term of the result is
// divisible by any leading monomial of G.  Reducers are tried in stored
// order, so the result is deterministic for a fixed basis.
inline Polynomial normal_form(const Polynomial& f, const std::vector<Polynomial>& basis) {
    if (f.is_zero() || basis.empty()) return f;
    const RingPtr& ring = f.ring();
    const Field& F = *ring->field;
    for (const Polynomial& g : basis)
        if (!g.ring()->same(*ring)) throw StructuralError("normal form across different rings");

    Polynomial remainder(ring);
    Polynomial h = f;
    while (!h.is_zero()) {
        const Term& lt = h.leading_term();
        const Polynomial* reducer = nullptr;
        for (const Polynomial& g : basis) {
            if (!g.is_zero() && g.leading_monomial().divides(lt.mono)) { reducer = &g; break; }
        }
        if (reducer) {
            Field::Elem c = F.mul(lt.coeff, F.inv(reducer->leading_term().coeff));
            h = h - reducer->times_term(lt.mono.quotient_by(reducer->leading_monomial()), c);
        } else {
            remainder = remainder + Polynomial::monomial(ring, lt.mono, lt.coeff);
            h = h - Polynomial::monomial(ring, lt.mono, lt.coeff);
        }
    }
    return remainder;
}

inline Polynomial normal_form(const Polynomial& f, const GroebnerBasis& G) {
    return normal_form(f, G.gens);
}

inline Polynomial s_polynomial(const Polynomial& f, const Polynomial& g) {
    const Field& F = *f.ring()->field;
    Monomial L = Monomial::lcm(f.leading_monomial(), g.leading_monomial());
    Polynomial a = f.times_term(L.quotient_by(f.leading_monomial()), F.inv(f.leading_term().coeff));
    Polynomial b = g.times_term(L.quotient_by(g.leading_monomial()), F.inv(g.leading_term().coeff));
    return a - b;
}

namespace detail {

struct Pair {
    std::size_t i, j;  // i < j
    Monomial lcm;
    std::uint32_t deg;
};

// Gebauer-Moeller update: prune the pending pair set against the new
// element and generate the surviving pairs involving it.
inline void gm_update(std::vector<Polynomial>& basis, std::list<Pair>& pairs,
                      const Polynomial& h) {
    const std::size_t t = basis.size();
    const Monomial& lm_h = h.leading_monomial();

    struct Cand {
        std::size_t i;
        Monomial lcm;
        bool coprime;
        bool alive = true;
    };
    std::vector<Cand> cands;
    cands.reserve(t);
    for (std::size_t i = 0; i < t; ++i) {
        Monomial L = Monomial::lcm(basis[i].leading_monomial(), lm_h);
        cands.push_back({i, std::move(L), Monomial::coprime(basis[i].leading_monomial(), lm_h)});
    }
    // among new pairs, keep one representative per divisibility class
    for (std::size_t a = 0; a < cands.size(); ++a) {
        if (!cands[a].alive) continue;
        for (std::size_t b = 0; b < cands.size(); ++b) {
            if (a == b || !cands[b].alive) continue;
            if (cands[b].lcm == cands[a].lcm) {
                // equal lcms: prefer a coprime representative, else lowest index
                if (cands[b].coprime && !cands[a].coprime) { cands[a].alive = false; break; }
                if (!cands[b].coprime && cands[a].coprime) { cands[b].alive = false; continue; }
                if (b < a) { cands[a].alive = false; break; }
                cands[b].alive = false;
            } else if (cands[b].lcm.divides(cands[a].lcm)) {
                cands[a].alive = false;
                break;
            }
        }
    }
    // drop old pairs strictly superseded by h
    for (auto it = pairs.begin(); it != pairs.end();) {
        const Monomial& L = it->lcm;
        if (lm_h.divides(L) &&
            Monomial::lcm(basis[it->i].leading_monomial(), lm_h) != L &&
            Monomial::lcm(basis[it->j].leading_monomial(), lm_h) != L)
            it = pairs.erase(it);
        else
            ++it;
    }
    for (Cand& c : cands) {
        if (!c.alive || c.coprime) continue;  // Buchberger's product criterion
        pairs.push_back({c.i, t, c.lcm, c.lcm.degree()});
    }
    basis.push_back(h);
}

inline std::list<Pair>::iterator select_pair(std::list<Pair>& pairs) {
    auto best = pairs.begin();
    for (auto it = std::next(pairs.begin()); it != pairs.end(); ++it) {
        if (it->deg < best->deg ||
            (it->deg == best->deg && (it->i < best->i || (it->i == best->i && it->j < best->j))))
            best = it;
    }
    return best;
}

} // namespace detail

// Buchberger with the normal selection strategy (minimal lcm degree, ties
// by index) and Gebauer-Moeller pair pruning.  Returns the reduced basis,
// which is unique for the ideal and order, with monic elements sorted
// descending by leading monomial.
inline GroebnerBasis groebner_basis(const std::vector<Polynomial>& input, RingPtr ring) {
    for (const Polynomial& f : input)
        if (!f.is_zero() && !f.ring()->same_ambient(*ring))
            throw StructuralError("generators live in different rings");

    std::vector<Polynomial> basis;
    std::list<detail::Pair> pairs;
    for (const Polynomial& f : input) {
        if (f.is_zero()) continue;
        Polynomial g = normal_form(f.with_ring(ring).monic(), basis);
        if (!g.is_zero()) detail::gm_update(basis, pairs, g.monic());
    }
    while (!pairs.empty()) {
        auto it = detail::select_pair(pairs);
        detail::Pair pair = *it;
        pairs.erase(it);
        Polynomial s = s_polynomial(basis[pair.i], basis[pair.j]);
        Polynomial r = normal_form(s, basis);
        if (!r.is_zero()) detail::gm_update(basis, pairs, r.monic());
    }

    // minimalize: drop elements whose leading monomial another one divides
    std::vector<Polynomial> minimal;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < basis.size() && !redundant; ++j) {
            if (i == j) continue;
            const Monomial& mi = basis[i].leading_monomial();
            const Monomial& mj = basis[j].leading_monomial();
            if (mj.divides(mi) && (mi != mj || j < i)) redundant = true;
        }
        if (!redundant) minimal.push_back(basis[i]);
    }
    // tail-reduce every element against the others
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < minimal.size(); ++i) {
            std::vector<Polynomial> others;
            others.reserve(minimal.size() - 1);
            for (std::size_t j = 0; j < minimal.size(); ++j)
                if (j != i) others.push_back(minimal[j]);
            Polynomial r = normal_form(minimal[i], others);
            if (r != minimal[i]) {
                changed = true;
                if (r.is_zero()) {
                    minimal.erase(minimal.begin() + static_cast<std::ptrdiff_t>(i));
                    --i;
                } else {
                    minimal[i] = r.monic();
                }
            }
        }
    }
    std::sort(minimal.begin(), minimal.end(), [&](const Polynomial& a, const Polynomial& b) {
        return ring->order.greater(a.leading_monomial(), b.leading_monomial());
    });
    return GroebnerBasis{std::move(ring), std::move(minimal), true};
}

// Post-hoc Buchberger criterion: every S-polynomial reduces to zero.
inline bool buchberger_criterion_holds(const GroebnerBasis& G) {
    for (std::size_t i = 0; i < G.gens.size(); ++i)
        for (std::size_t j = i + 1; j < G.gens.size(); ++j)
            if (!normal_form(s_polynomial(G.gens[i], G.gens[j]), G.gens).is_zero()) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Staircase counting

struct MonomialCount {
    bool finite = false;
    std::uint64_t count = 0;

    static MonomialCount infinite() { return {false, 0}; }
    static MonomialCount of(std::uint64_t n) { return {true, n}; }
};

namespace detail {

// Counts monomials in the listed variables divisible by none of `gens`
// (exponent vectors over the full ambient).  Splits on the trailing active
// variable, one segment per distinct exponent among the generators.
inline MonomialCount count_staircase(const std::vector<std::vector<std::uint32_t>>& gens,
                                     std::vector<std::size_t> vars) {
    for (const auto& g : gens) {
        bool unit = true;
        for (std::size_t v : vars)
            if (g[v] != 0) { unit = false; break; }
        if (unit) return MonomialCount::of(0);
    }
    if (vars.empty()) return MonomialCount::of(1);
    if (gens.empty()) return MonomialCount::infinite();

    std::size_t v = vars.back();
    std::vector<std::size_t> rest(vars.begin(), vars.end() - 1);

    std::vector<std::uint32_t> cuts{0};
    for (const auto& g : gens) cuts.push_back(g[v]);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto level_gens = [&](std::uint32_t level) {
        std::vector<std::vector<std::uint32_t>> out;
        for (const auto& g : gens)
            if (g[v] <= level) out.push_back(g);
        return out;
    };

    std::uint64_t total = 0;
    for (std::size_t c = 0; c < cuts.size(); ++c) {
        std::uint32_t lo = cuts[c];
        bool last = c + 1 == cuts.size();
        MonomialCount inner = count_staircase(level_gens(lo), rest);
        if (last) {
            if (!inner.finite || inner.count > 0) return MonomialCount::infinite();
        } else {
            if (!inner.finite) return MonomialCount::infinite();
            total += static_cast<std::uint64_t>(cuts[c + 1] - lo) * inner.count;
        }
    }
    return MonomialCount::of(total);
}

} // namespace detail

// Number of monomials outside the leading-term ideal of G; equals
// dim_K K[x]/I when finite.
inline MonomialCount count_standard_monomials(const GroebnerBasis& G) {
    if (G.is_unit_ideal()) return MonomialCount::of(0);
    std::vector<std::vector<std::uint32_t>> lms;
    lms.reserve(G.gens.size());
    for (const Polynomial& g : G.gens) lms.push_back(g.leading_monomial().exps);
    std::size_t nvars = G.ring->nvars();
    std::vector<std::size_t> vars(nvars);
    for (std::size_t i = 0; i < nvars; ++i) vars[i] = i;
    if (lms.empty()) return nvars == 0 ? MonomialCount::of(1) : MonomialCount::infinite();
    return detail::count_staircase(lms, vars);
}

// The staircase itself; std::nullopt when infinite.
inline std::optional<std::vector<Monomial>> standard_monomials(const GroebnerBasis& G) {
    MonomialCount c = count_standard_monomials(G);
    if (!c.finite) return std::nullopt;
    std::vector<Monomial> out;
    out.reserve(c.count);
    std::vector<Monomial> lms;
    for (const Polynomial& g : G.gens) lms.push_back(g.leading_monomial());
    std::size_t nvars = G.ring->nvars();
    Monomial cur(nvars);
    // DFS over exponent vectors, pruning branches that became divisible
    auto divisible = [&](const Monomial& m) {
        for (const Monomial& l : lms)
            if (l.divides(m)) return true;
        return false;
    };
    struct Walker {
        std::size_t nvars;
        std::vector<Monomial>& out;
        const std::function<bool(const Monomial&)>& divisible;
        void walk(Monomial& m, std::size_t var) {
            if (var == nvars) { out.push_back(m); return; }
            while (true) {
                if (divisible(m)) break;
                walk(m, var + 1);
                m.exps[var] += 1;
            }
            m.exps[var] = 0;
        }
    };
    std::function<bool(const Monomial&)> div_fn = divisible;
    Walker{nvars, out, div_fn}.walk(cur, 0);
    std::sort(out.begin(), out.end(), [&](const Monomial& a, const Monomial& b) {
        return G.ring->order.greater(b, a);
    });
    return out;
}

// Krull dimension of K[x]/I read off the initial ideal: the largest set of
// variables meeting no leading monomial's support.  Unit ideal gives -1.
inline int krull_dimension(const GroebnerBasis& G) {
    if (G.is_unit_ideal()) return -1;
    const std::size_t n = G.ring->nvars();
    if (n > 31) throw ResourceError("krull_dimension supports at most 31 variables");
    std::vector<std::uint32_t> supports;
    for (const Polynomial& g : G.gens) {
        std::uint32_t mask = 0;
        const Monomial& m = g.leading_monomial();
        for (std::size_t i = 0; i < n; ++i)
            if (m.exps[i] > 0) mask |= (1u << i);
        supports.push_back(mask);
    }
    int best = 0;
    for (std::uint32_t subset = 0; subset < (1u << n); ++subset) {
        int size = __builtin_popcount(subset);
        if (size <= best) continue;
        bool independent = true;
        for (std::uint32_t s : supports)
            if ((s & ~subset) == 0) { independent = false; break; }
        if (independent) best = size;
    }
    return best;
}

} // namespace lech

#endif
