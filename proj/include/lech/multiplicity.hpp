#ifndef LECH_MULTIPLICITY_HPP
#define LECH_MULTIPLICITY_HPP

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lech/ideal.hpp"
#include "lech/limits.hpp"
#include "lech/rational.hpp"

namespace lech {

// Hilbert-Samuel multiplicity read off stabilized finite differences of the
// length function t -> l(Q/I^t), together with the raw table that produced
// it.  The d-th differences must agree on three consecutive values of t.
struct MultiplicityReport {
    std::int64_t e = 0;
    std::vector<std::pair<std::uint32_t, std::uint64_t>> length_table;
    std::uint32_t stabilization_t = 0;
    int dim_used = 0;
};

namespace detail {

inline std::string table_string(const std::vector<std::pair<std::uint32_t, std::uint64_t>>& tab) {
    std::string out;
    for (const auto& [t, l] : tab) {
        if (!out.empty()) out += ",";
        out += std::to_string(t) + ":" + std::to_string(l);
    }
    return out;
}

// Base-point validation shared by every length-table computation: the
// ideal must have finite colength at the origin, and when it vanishes
// nowhere else its powers don't either, so saturation can be skipped for
// the whole table.
struct LengthContext {
    bool origin_only;
};

inline LengthContext validate_length_base(const QuotientRing& Q, const Ideal& I,
                                          const char* who) {
    LengthReport base = local_length(Q, I);
    if (!base.finite)
        throw ArgumentError(std::string(who) + ": ideal is not primary to the origin");
    return LengthContext{base.away == 0};
}

// Stabilized d-th finite difference of a length function.  `eval` maps t to
// a length; stabilization means three equal consecutive d-th differences.
template <typename Eval>
MultiplicityReport stabilized_difference(int d, std::uint32_t t_cap, Eval&& eval,
                                         const char* who) {
    if (d < 0) throw ArgumentError(std::string(who) + ": negative dimension");
    MultiplicityReport rep;
    rep.dim_used = d;
    std::vector<std::int64_t> lengths = {0};  // t = 0 contributes length 0
    std::uint32_t streak = 0;
    std::int64_t last_diff = -1;
    for (std::uint32_t t = 1; t <= t_cap; ++t) {
        std::uint64_t len = eval(t);
        rep.length_table.emplace_back(t, len);
        lengths.push_back(static_cast<std::int64_t>(len));
        if (lengths.size() < static_cast<std::size_t>(d) + 1) continue;
        std::vector<std::int64_t> diff = lengths;
        for (int i = 0; i < d; ++i)
            for (std::size_t j = diff.size() - 1; j > 0; --j) diff[j] -= diff[j - 1];
        std::int64_t current = diff.back();
        if (streak > 0 && current == last_diff) {
            ++streak;
        } else {
            streak = 1;
            last_diff = current;
        }
        if (streak >= 3) {
            rep.e = current;
            rep.stabilization_t = t;
            return rep;
        }
    }
    throw ResourceError(std::string(who) + ": length table did not stabilize within t cap",
                        table_string(rep.length_table));
}

} // namespace detail

// e(I, Q) for an ideal primary to the origin.  `dim_override` supports
// multiplicities of modules presented over a larger ring (lengths grow
// slower than t^d, giving e = 0).
inline MultiplicityReport hilbert_samuel(const QuotientRing& Q, const Ideal& I,
                                         int dim_override = -1, std::uint32_t t_cap = 0) {
    auto ctx = detail::validate_length_base(Q, I, "hilbert_samuel");
    int d = dim_override >= 0 ? dim_override : Q.dim();
    if (t_cap == 0) t_cap = Limits::current().t_cap;
    return detail::stabilized_difference(
        d, t_cap,
        [&](std::uint32_t t) {
            return local_length(Q, ideal_power(I, t), ctx.origin_only).local_len;
        },
        "hilbert_samuel");
}

// e((x), Q) for a system of parameters x.
inline MultiplicityReport sop_multiplicity(const QuotientRing& Q,
                                           const std::vector<Polynomial>& sop) {
    if (static_cast<int>(sop.size()) != Q.dim())
        throw ArgumentError("not a system of parameters: got " + std::to_string(sop.size()) +
                            " elements for dimension " + std::to_string(Q.dim()));
    return hilbert_samuel(Q, Ideal(Q.ring(), sop));
}

// First higher Euler characteristic via chi_1 = l(Q/(x)) - e((x), Q); zero
// exactly when x is a regular sequence at the origin.
struct Chi1Report {
    std::uint64_t h0 = 0;
    std::int64_t e = 0;
    std::int64_t chi1 = 0;
    bool regular_sequence = false;
};

inline Chi1Report chi1(const QuotientRing& Q, const std::vector<Polynomial>& sop) {
    MultiplicityReport mult = sop_multiplicity(Q, sop);
    LengthReport h0 = local_length(Q, Ideal(Q.ring(), sop));
    Chi1Report rep;
    rep.h0 = h0.local_len;
    rep.e = mult.e;
    rep.chi1 = static_cast<std::int64_t>(rep.h0) - rep.e;
    if (rep.chi1 < 0)
        throw StructuralError("chi_1 came out negative; length or multiplicity is wrong");
    rep.regular_sequence = rep.chi1 == 0;
    return rep;
}

// Hilbert-Kunz estimate sequence: l(Q/I^[p^e]) / p^{e d} as exact rationals
// for e = 1..e_max.
struct HKSequence {
    std::uint32_t p = 0;
    int d = 0;
    std::uint32_t e_max = 0;
    std::vector<std::pair<std::uint32_t, Rational>> estimates;
    std::vector<std::pair<std::uint32_t, std::uint64_t>> lengths;
    bool partial = false;

    const Rational& final_estimate() const {
        if (estimates.empty()) throw StructuralError("empty Hilbert-Kunz sequence");
        return estimates.back().second;
    }
};

inline HKSequence hk_sequence(const QuotientRing& Q, const Ideal& I, std::uint32_t e_max) {
    if (e_max < 1) throw ArgumentError("hk_sequence needs e_max >= 1");
    e_max = std::min(e_max, Limits::current().e_cap);
    auto ctx = detail::validate_length_base(Q, I, "hk_sequence");
    HKSequence seq;
    seq.p = Q.field()->p();
    seq.d = Q.dim();
    seq.e_max = e_max;
    for (std::uint32_t e = 1; e <= e_max; ++e) {
        std::uint64_t q = 1;
        for (std::uint32_t i = 0; i < e; ++i) q *= seq.p;
        try {
            LengthReport len = local_length(Q, frobenius_power(I, q), ctx.origin_only);
            if (!len.finite) throw StructuralError("Frobenius power lost finiteness");
            seq.lengths.emplace_back(e, len.local_len);
            seq.estimates.emplace_back(
                e, Rational(static_cast<std::int64_t>(len.local_len),
                            ipow(static_cast<std::int64_t>(seq.p),
                                 e * static_cast<std::uint32_t>(seq.d))));
        } catch (const ResourceError&) {
            seq.partial = true;
            break;
        }
    }
    if (seq.estimates.empty())
        throw ResourceError("hk_sequence: no level finished within the resource caps");
    return seq;
}

// Randomized search for d linear forms with e((x), Q) = e(m, Q).  The
// multiplicity equality is the acceptance test; scalars are extended to
// F_{p^(2k)}, F_{p^(3k)}, F_{p^(4k)} when the base field runs dry.
struct ReductionSearch {
    QuotientRing ring;               // possibly scalar-extended
    std::vector<Polynomial> forms;   // d linear forms over ring
    std::uint32_t field_degree = 1;
    std::uint64_t tries = 0;
    std::int64_t e_of_m = 0;
};

inline ReductionSearch find_minimal_reduction(const QuotientRing& Q, std::uint64_t seed,
                                              std::uint64_t max_tries = 80) {
    const int d = Q.dim();
    if (d == 0) {
        MultiplicityReport em = hilbert_samuel(Q, maximal_ideal(Q.ring()));
        return ReductionSearch{Q, {}, Q.field()->k(), 0, em.e};
    }
    std::uint64_t total_tries = 0;
    for (std::uint32_t mult = 1; mult <= 4; ++mult) {
        QuotientRing ext = extend_scalars(Q, Q.field()->k() * mult);
        const RingPtr& ring = ext.ring();
        const std::uint32_t q = ring->field->q();
        MultiplicityReport em = hilbert_samuel(ext, maximal_ideal(ring));
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * mult);
        for (std::uint64_t attempt = 0; attempt < max_tries; ++attempt) {
            ++total_tries;
            std::vector<Polynomial> forms;
            for (int i = 0; i < d; ++i) {
                Polynomial f = Polynomial::zero(ring);
                for (std::size_t v = 0; v < ring->nvars(); ++v) {
                    Field::Elem c = static_cast<Field::Elem>(rng() % q);
                    if (!ring->field->is_zero(c))
                        f = f + Polynomial::variable(ring, v).scaled(c);
                }
                forms.push_back(std::move(f));
            }
            bool zero = false;
            for (const Polynomial& f : forms) zero = zero || f.is_zero();
            if (zero) continue;
            LengthReport len = local_length(ext, Ideal(ring, forms));
            if (!len.finite) continue;
            try {
                MultiplicityReport ex = sop_multiplicity(ext, forms);
                if (ex.e == em.e)
                    return ReductionSearch{ext, forms, ring->field->k(), total_tries, em.e};
            } catch (const ResourceError&) {
                continue;
            }
        }
    }
    throw SearchError("no minimal reduction found after " + std::to_string(total_tries) +
                      " tries; a larger scalar field may be needed");
}

// e(x, T^(e) (x) S) / p^{e dim T} for S = T/J, computed purely from lengths:
// over a perfect residue field the twisted lengths are ordinary lengths of
// bracket powers, so the d-th difference of
//   t -> l(T / (J + (x)^t)^[p^e])
// recovers the twisted multiplicity.  e = 0 gives back e(x, S) exactly.
inline Rational frobenius_twisted_multiplicity(const QuotientRing& T, const Ideal& J,
                                               const std::vector<Polynomial>& sop,
                                               std::uint32_t e) {
    Ideal base = J.plus(sop);
    auto ctx = detail::validate_length_base(T, base, "frobenius_twisted_multiplicity");
    int d_module = krull_dimension(*T.defining().plus(J).groebner());
    if (d_module != static_cast<int>(sop.size()))
        throw ArgumentError("sop size " + std::to_string(sop.size()) +
                            " does not match dim T/J = " + std::to_string(d_module));
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < e; ++i) q *= T.field()->p();
    Ideal sop_ideal(T.ring(), sop);
    MultiplicityReport rep = detail::stabilized_difference(
        d_module, Limits::current().t_cap,
        [&](std::uint32_t t) {
            Ideal level = frobenius_power(J.plus(ideal_power(sop_ideal, t).gens()), q);
            return local_length(T, level, ctx.origin_only).local_len;
        },
        "frobenius_twisted_multiplicity");
    return Rational(rep.e, ipow(T.field()->p(), e * static_cast<std::uint32_t>(T.dim())));
}

} // namespace lech

#endif
