#ifndef LECH_VERIFY_HPP
#define LECH_VERIFY_HPP

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "lech/extensions.hpp"
#include "lech/multiplicity.hpp"
#include "lech/rational.hpp"

namespace lech {

enum class Verdict { Pass, Fail, Inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "fail";
}

// One executed comparison: the exact quantities on both sides, the
// tolerance that was in force, and the raw tables that produced them.
struct CheckReport {
    std::string check_id;
    std::string fixture_id;
    Verdict verdict = Verdict::Fail;
    std::string lhs, rhs;
    std::string tolerance = "0/1";
    std::string notes;
    std::vector<std::pair<std::string, std::string>> data;

    void put(const std::string& key, const std::string& value) { data.emplace_back(key, value); }
};

namespace detail {

inline std::string rstr(const Rational& r) { return to_string(r); }
inline std::string rstr(std::int64_t n) { return to_string(Rational(n)); }

inline std::string seq_string(const std::vector<std::pair<std::uint32_t, Rational>>& seq) {
    std::string out;
    for (const auto& [e, v] : seq) {
        if (!out.empty()) out += ",";
        out += std::to_string(e) + ":" + rstr(v);
    }
    return out;
}

inline Rational hk_tolerance() { return Rational(1, 20); }

} // namespace detail

// ---------------------------------------------------------------------------
// Inequality checks on flat fixtures

// e(R) <= e(S) together with the sharper bound e(R) <= max(1, d!/2^d) e(S).
inline CheckReport check_lech(const LocalMap& map, const std::string& fixture_id) {
    CheckReport rep;
    rep.check_id = "lech";
    rep.fixture_id = fixture_id;
    if (map.flat_tag() == FlatTag::Unknown)
        throw StructuralError("check_lech needs a probed or by-construction flat map");
    auto eR = hilbert_samuel(map.source(), map.source().maximal());
    auto eS = hilbert_samuel(map.target(), map.target().maximal());
    int d = map.source().dim();
    Rational bound = std::max(Rational(1), Rational(factorial(static_cast<std::uint32_t>(d)),
                                                    ipow(2, static_cast<std::uint32_t>(d))));
    rep.lhs = detail::rstr(eR.e);
    rep.rhs = detail::rstr(eS.e);
    rep.put("dim", std::to_string(d));
    rep.put("bound_factor", detail::rstr(bound));
    rep.put("lengths_R", detail::table_string(eR.length_table));
    rep.put("lengths_S", detail::table_string(eS.length_table));
    bool plain = eR.e <= eS.e;
    bool scaled = Rational(eR.e) <= bound * Rational(eS.e);
    rep.verdict = plain && scaled ? Verdict::Pass : Verdict::Fail;
    if (!plain) rep.notes = "e(R) <= e(S) fails";
    else if (!scaled) rep.notes = "scaled bound fails";
    return rep;
}

// edim R - dim R <= edim S - dim S for maps of finite flat dimension.
inline CheckReport check_edim(const LocalMap& map, const std::string& fixture_id) {
    CheckReport rep;
    rep.check_id = "edim";
    rep.fixture_id = fixture_id;
    int lhs = embedding_dimension(map.source()) - map.source().dim();
    int rhs = embedding_dimension(map.target()) - map.target().dim();
    rep.lhs = detail::rstr(lhs);
    rep.rhs = detail::rstr(rhs);
    rep.verdict = lhs <= rhs ? Verdict::Pass : Verdict::Fail;
    return rep;
}

// Monotonicity of Hilbert-Kunz multiplicities along the map plus the chain
// e(R) <= d! e_HK(R) <= d! e_HK(S) <= d! e(S) at finite level.
inline CheckReport check_hk_chain(const LocalMap& map, std::uint32_t e_max,
                                  const std::string& fixture_id) {
    CheckReport rep;
    rep.check_id = "hk_chain";
    rep.fixture_id = fixture_id;
    const QuotientRing& R = map.source();
    const QuotientRing& S = map.target();
    int d = R.dim();
    Rational dfac(factorial(static_cast<std::uint32_t>(d)));
    Rational tol = detail::hk_tolerance() * dfac;
    auto hkR = hk_sequence(R, R.maximal(), e_max);
    auto hkS = hk_sequence(S, S.maximal(), e_max);
    auto eR = hilbert_samuel(R, R.maximal());
    auto eS = hilbert_samuel(S, S.maximal());
    rep.tolerance = detail::rstr(tol);
    rep.put("hk_R", detail::seq_string(hkR.estimates));
    rep.put("hk_S", detail::seq_string(hkS.estimates));
    rep.put("e_R", detail::rstr(eR.e));
    rep.put("e_S", detail::rstr(eS.e));
    if (hkR.partial || hkS.partial) {
        rep.verdict = Verdict::Inconclusive;
        rep.notes = "resource cap hit while computing Hilbert-Kunz levels";
        return rep;
    }
    Rational estR = hkR.final_estimate(), estS = hkS.final_estimate();
    rep.lhs = detail::rstr(estR);
    rep.rhs = detail::rstr(estS);
    bool mono = estR <= estS + tol;
    bool left = Rational(eR.e) <= dfac * estR + tol;
    bool right = dfac * estS <= dfac * Rational(eS.e) + tol;
    rep.verdict = mono && left && right ? Verdict::Pass : Verdict::Fail;
    if (!mono) rep.notes = "est_HK(R) <= est_HK(S) fails";
    else if (!left) rep.notes = "e(R) <= d! est_HK(R) fails";
    else if (!right) rep.notes = "d! est_HK(S) <= d! e(S) fails";
    return rep;
}

// e(I)/d! <= e_HK(I) <= e(I): finite-level sandwich with tolerance, exact
// with zero tolerance for parameter ideals (where the sequence must also be
// constant).
inline CheckReport check_hk_sandwich(const QuotientRing& Q, const Ideal& I, std::uint32_t e_max,
                                     const std::string& fixture_id,
                                     std::optional<bool> parameter_hint = std::nullopt) {
    CheckReport rep;
    rep.check_id = "hk_sandwich";
    rep.fixture_id = fixture_id;
    int d = Q.dim();
    auto e_val = hilbert_samuel(Q, I);
    auto hk = hk_sequence(Q, I, e_max);
    rep.put("e", detail::rstr(e_val.e));
    rep.put("hk", detail::seq_string(hk.estimates));
    if (hk.partial) {
        rep.verdict = Verdict::Inconclusive;
        rep.notes = "resource cap hit";
        return rep;
    }
    bool parameter = parameter_hint.value_or(I.gens().size() == static_cast<std::size_t>(d));
    Rational est = hk.final_estimate();
    rep.lhs = detail::rstr(Rational(e_val.e, factorial(static_cast<std::uint32_t>(d))));
    rep.rhs = detail::rstr(est);
    if (parameter) {
        rep.tolerance = "0/1";
        bool ok = true;
        for (const auto& [e, v] : hk.estimates) ok = ok && v == Rational(e_val.e);
        rep.verdict = ok ? Verdict::Pass : Verdict::Fail;
        if (!ok) rep.notes = "parameter ideal sequence is not constantly e";
        rep.put("parameter_ideal", "true");
    } else {
        Rational tol = detail::hk_tolerance();
        rep.tolerance = detail::rstr(tol);
        bool low = Rational(e_val.e, factorial(static_cast<std::uint32_t>(d))) <= est + tol;
        bool high = est <= Rational(e_val.e) + tol;
        rep.verdict = low && high ? Verdict::Pass : Verdict::Fail;
        if (!low) rep.notes = "lower sandwich bound fails";
        else if (!high) rep.notes = "upper sandwich bound fails";
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Variable-adjunction identities

// Exact per-level identity for adjoining a variable:
//   l(T/(m_T^2)^[q]) = q l(R/(m^2)^[q]) + q l(R/m^[q])
// iterated over each adjoined variable, plus the estimate-level identities
// e_HK(T) = e_HK(R) and e_HK(m_T^2) = e_HK(m^2) + n e_HK(R) at every level.
inline CheckReport check_adjunction_identity(const QuotientRing& R, std::uint32_t n_extra,
                                 std::uint32_t e_max, const std::string& fixture_id) {
    CheckReport rep;
    rep.check_id = "adjunction";
    rep.fixture_id = fixture_id;
    rep.tolerance = "0/1";
    const std::uint32_t p = R.field()->p();

    auto adjoin = [](const QuotientRing& Q, const std::string& name) {
        std::vector<std::string> vars = Q.ring()->vars;
        vars.push_back(name);
        RingPtr r = make_ring(Q.field(), vars);
        std::vector<Polynomial> gens;
        for (const Polynomial& g : Q.defining().gens()) gens.push_back(detail::widen(g, r));
        return QuotientRing(r, std::move(gens));
    };
    auto bracket_len = [&](const QuotientRing& Q, const Ideal& I, std::uint64_t q) {
        LengthReport len = local_length(Q, frobenius_power(I, q));
        if (!len.finite) throw StructuralError("adjunction: infinite length");
        return len.local_len;
    };

    std::vector<QuotientRing> tower = {R};
    for (std::uint32_t i = 1; i <= n_extra; ++i) {
        std::string name = "w" + std::to_string(i);
        while (tower.back().ring()->var_index(name) >= 0) name += "_t";
        tower.push_back(adjoin(tower.back(), name));
    }

    bool ok = true;
    std::string first_failure;
    for (std::uint32_t i = 1; i <= n_extra && ok; ++i) {
        const QuotientRing& prev = tower[i - 1];
        const QuotientRing& next = tower[i];
        Ideal m_prev = prev.maximal();
        Ideal m_next = next.maximal();
        for (std::uint32_t e = 1; e <= e_max && ok; ++e) {
            std::uint64_t q = 1;
            for (std::uint32_t j = 0; j < e; ++j) q *= p;
            std::uint64_t lhs = bracket_len(next, ideal_power(m_next, 2), q);
            std::uint64_t rhs = q * bracket_len(prev, ideal_power(m_prev, 2), q) +
                                q * bracket_len(prev, m_prev, q);
            rep.put("step" + std::to_string(i) + "_e" + std::to_string(e),
                    std::to_string(lhs) + "=" + std::to_string(rhs));
            if (lhs != rhs) {
                ok = false;
                first_failure = "square identity fails at step " + std::to_string(i) +
                                ", e = " + std::to_string(e);
            }
        }
    }
    // estimate-level consequences on the full tower
    const QuotientRing& top = tower.back();
    for (std::uint32_t e = 1; e <= e_max && ok; ++e) {
        std::uint64_t q = 1;
        for (std::uint32_t j = 0; j < e; ++j) q *= p;
        Rational est_top(static_cast<std::int64_t>(bracket_len(top, top.maximal(), q)),
                         ipow(p, e * static_cast<std::uint32_t>(top.dim())));
        Rational est_base(static_cast<std::int64_t>(bracket_len(R, R.maximal(), q)),
                          ipow(p, e * static_cast<std::uint32_t>(R.dim())));
        Rational est_top2(static_cast<std::int64_t>(bracket_len(top, ideal_power(top.maximal(), 2), q)),
                          ipow(p, e * static_cast<std::uint32_t>(top.dim())));
        Rational est_base2(static_cast<std::int64_t>(bracket_len(R, ideal_power(R.maximal(), 2), q)),
                           ipow(p, e * static_cast<std::uint32_t>(R.dim())));
        if (est_top != est_base) {
            ok = false;
            first_failure = "e_HK(T) = e_HK(R) fails at e = " + std::to_string(e);
        } else if (est_top2 != est_base2 + Rational(n_extra) * est_base) {
            ok = false;
            first_failure = "square estimate identity fails at e = " + std::to_string(e);
        }
    }
    rep.lhs = rep.rhs = "0/1";
    rep.verdict = ok ? Verdict::Pass : Verdict::Fail;
    rep.notes = first_failure;
    if (n_extra == 0) rep.notes = "no adjoined variable; identity is vacuous";
    return rep;
}

// ---------------------------------------------------------------------------
// Module estimates

// e(x, N) >= nu(nN) + (1-d) nu(N) - chi_1(x, N) for a cyclic module N = S/a.
inline CheckReport check_mingen_bound(const QuotientRing& S, const std::vector<Polynomial>& sop,
                                    const Ideal& a, const std::string& fixture_id) {
    CheckReport rep;
    rep.check_id = "mingen_bound";
    rep.fixture_id = fixture_id;
    int d = S.dim();
    if (static_cast<int>(sop.size()) != d)
        throw ArgumentError("mingen_bound: sop size must equal dim S");
    QuotientRing N(S.ring(), [&] {
        std::vector<Polynomial> gens = S.defining().gens();
        for (const Polynomial& g : a.gens()) gens.push_back(g.with_ring(S.ring()));
        return gens;
    }());
    Ideal m = maximal_ideal(S.ring());
    auto e_rep = hilbert_samuel(N, Ideal(S.ring(), sop), /*dim_override=*/d);
    std::int64_t e_val = e_rep.e;
    std::uint64_t nu_N = local_length(N, m).local_len;  // 1 for a proper, cyclic N
    std::uint64_t nu_mN = local_length(N, ideal_power(m, 2)).local_len - nu_N;
    std::int64_t chi = static_cast<std::int64_t>(local_length(N, Ideal(S.ring(), sop)).local_len) - e_val;
    std::int64_t rhs = static_cast<std::int64_t>(nu_mN) +
                       (1 - d) * static_cast<std::int64_t>(nu_N) - chi;
    rep.lhs = detail::rstr(e_val);
    rep.rhs = detail::rstr(rhs);
    rep.put("nu_mN", std::to_string(nu_mN));
    rep.put("nu_N", std::to_string(nu_N));
    rep.put("chi1", std::to_string(chi));
    rep.put("lengths", detail::table_string(e_rep.length_table));
    rep.verdict = e_val >= rhs ? Verdict::Pass : Verdict::Fail;
    return rep;
}

// nu_S(n M') >= nu_R(m M) + (edim S - edim R) nu_R(M) for M = R/a and
// M' = S tensor M.
inline CheckReport check_mingen_growth(const LocalMap& map, const Ideal& a,
                                 const std::string& fixture_id) {
    CheckReport rep;
    rep.check_id = "mingen_growth";
    rep.fixture_id = fixture_id;
    const QuotientRing& R = map.source();
    const QuotientRing& S = map.target();

    QuotientRing M(R.ring(), [&] {
        std::vector<Polynomial> gens = R.defining().gens();
        for (const Polynomial& g : a.gens()) gens.push_back(g.with_ring(R.ring()));
        return gens;
    }());
    std::vector<Polynomial> aS_gens;
    for (const Polynomial& g : a.gens()) aS_gens.push_back(map.push(g));
    QuotientRing Mp(S.ring(), [&] {
        std::vector<Polynomial> gens = S.defining().gens();
        for (const Polynomial& g : aS_gens) gens.push_back(g);
        return gens;
    }());

    Ideal mR = maximal_ideal(R.ring());
    Ideal mS = maximal_ideal(S.ring());
    std::uint64_t nu_M = local_length(M, mR).local_len;
    std::uint64_t nu_mM = local_length(M, ideal_power(mR, 2)).local_len - nu_M;
    std::uint64_t nu_Mp = local_length(Mp, mS).local_len;
    std::uint64_t nu_nMp = local_length(Mp, ideal_power(mS, 2)).local_len - nu_Mp;
    int c = embedding_dimension(S) - embedding_dimension(R);

    std::int64_t rhs = static_cast<std::int64_t>(nu_mM) + c * static_cast<std::int64_t>(nu_M);
    rep.lhs = detail::rstr(static_cast<std::int64_t>(nu_nMp));
    rep.rhs = detail::rstr(rhs);
    rep.put("nu_mM", std::to_string(nu_mM));
    rep.put("nu_M", std::to_string(nu_M));
    rep.put("edim_gap", std::to_string(c));
    rep.verdict = static_cast<std::int64_t>(nu_nMp) >= rhs ? Verdict::Pass : Verdict::Fail;
    return rep;
}

// ---------------------------------------------------------------------------
// Interchange of multiplicity and Frobenius limits

// Data shared by check_interchange and check_chi1_vanishing.
struct InterchangeData {
    QuotientRing S;                      // possibly scalar-extended target
    CohenFactorization fact;
    std::vector<Polynomial> sop;         // in S's ambient
    std::vector<Polynomial> sop_lifted;  // in T's ambient
    std::int64_t A = 0;                  // e(x, S)
    bool sop_is_reduction = false;
    bool exact_anchor = false;           // T regular and J + (x) parameter
    std::uint32_t scalar_degree = 1;
    std::vector<std::pair<std::uint32_t, Rational>> B, C1, C2;
    std::vector<std::pair<std::uint32_t, std::uint64_t>> bracket_lengths;  // l(T/(J+(x))^[q])
};

// Prepares the factorization-side quantities for a sop of S (searched for
// when none is supplied, extending scalars as needed) and computes the
// three estimate sequences up to e_max.
inline InterchangeData interchange_data(const LocalMap& map_in,
                                        std::vector<Polynomial> sop, std::uint32_t e_max,
                                        std::uint64_t seed) {
    InterchangeData out;
    LocalMap map = map_in;
    if (sop.empty() && map.target().dim() > 0) {
        ReductionSearch found = find_minimal_reduction(map.target(), seed);
        out.scalar_degree = found.field_degree;
        if (found.field_degree != map.target().field()->k())
            map = scalar_extend(map_in, found.field_degree);
        sop = found.forms;
    }
    out.S = map.target();
    out.sop = sop;
    out.fact = cohen_factor(map, seed);
    const QuotientRing& T = out.fact.T;
    for (const Polynomial& f : sop) out.sop_lifted.push_back(out.fact.lift(f));

    // Part of a system of parameters of T: dim T/(x) = dim T - |x|.
    Ideal cut = T.defining().plus(out.sop_lifted);
    int dim_cut = krull_dimension(*cut.groebner());
    if (dim_cut != T.dim() - static_cast<int>(sop.size()))
        throw ArgumentError("interchange: lifted sop is not part of a system of parameters of T");

    out.A = sop_multiplicity(out.S, sop).e;
    out.sop_is_reduction =
        out.A == hilbert_samuel(out.S, out.S.maximal()).e;

    Ideal Jx = out.fact.J.plus(out.sop_lifted);
    out.exact_anchor = embedding_dimension(T) == T.dim() &&
                       min_gens(T, Jx) == static_cast<std::uint64_t>(T.dim());

    const std::uint32_t p = T.field()->p();
    QuotientRing T_mod_x(T.ring(), [&] {
        std::vector<Polynomial> gens = T.defining().gens();
        for (const Polynomial& f : out.sop_lifted) gens.push_back(f);
        return gens;
    }());
    auto ctx1 = detail::validate_length_base(T, Jx, "interchange");
    auto ctx2 = detail::validate_length_base(T_mod_x, out.fact.J, "interchange");
    for (std::uint32_t e = 1; e <= e_max; ++e) {
        std::uint64_t q = 1;
        for (std::uint32_t j = 0; j < e; ++j) q *= p;
        out.B.emplace_back(e, frobenius_twisted_multiplicity(T, out.fact.J, out.sop_lifted, e));
        LengthReport l1 = local_length(T, frobenius_power(Jx, q), ctx1.origin_only);
        if (!l1.finite) throw StructuralError("interchange: infinite bracket length");
        out.bracket_lengths.emplace_back(e, l1.local_len);
        out.C1.emplace_back(e, Rational(static_cast<std::int64_t>(l1.local_len),
                                        ipow(p, e * static_cast<std::uint32_t>(T.dim()))));
        LengthReport l2 = local_length(T_mod_x, frobenius_power(out.fact.J, q), ctx2.origin_only);
        if (!l2.finite) throw StructuralError("interchange: infinite quotient length");
        out.C2.emplace_back(e, Rational(static_cast<std::int64_t>(l2.local_len),
                                        ipow(p, e * static_cast<std::uint32_t>(T_mod_x.dim()))));
    }
    return out;
}

namespace detail {

// gaps |seq_e - A| must be non-increasing with final gap <= tol (or == 0 in
// the exact case)
inline bool gaps_ok(const std::vector<std::pair<std::uint32_t, Rational>>& seq, Rational target,
                    bool exact, Rational tol, std::string& why, const char* label) {
    Rational prev(-1);
    for (std::size_t i = 0; i < seq.size(); ++i) {
        Rational gap = rat_abs(seq[i].second - target);
        if (exact && gap != Rational(0)) {
            why = std::string(label) + " gap nonzero at e = " + std::to_string(seq[i].first);
            return false;
        }
        if (i > 0 && gap > prev) {
            why = std::string(label) + " gap increases at e = " + std::to_string(seq[i].first);
            return false;
        }
        prev = gap;
    }
    if (!seq.empty() && rat_abs(seq.back().second - target) > tol) {
        why = std::string(label) + " final gap exceeds tolerance";
        return false;
    }
    return true;
}

} // namespace detail

// e(x, S) against the three Frobenius-limit estimates of the factorization:
// the twisted multiplicities B_e, the bracket-power colengths C1_e of
// J + (x) in T, and the Hilbert-Kunz estimates C2_e of J in T/(x)T.
inline CheckReport check_interchange(const InterchangeData& data, const std::string& fixture_id) {
    CheckReport rep;
    rep.check_id = "interchange";
    rep.fixture_id = fixture_id;
    Rational A(data.A);
    rep.lhs = detail::rstr(A);
    rep.rhs = data.B.empty() ? "0/1" : detail::rstr(data.B.back().second);
    Rational tol = data.exact_anchor ? Rational(0) : detail::hk_tolerance();
    rep.tolerance = detail::rstr(tol);
    rep.put("B", detail::seq_string(data.B));
    rep.put("C1", detail::seq_string(data.C1));
    rep.put("C2", detail::seq_string(data.C2));
    rep.put("exact_anchor", data.exact_anchor ? "true" : "false");
    rep.put("sop_is_reduction", data.sop_is_reduction ? "true" : "false");
    rep.put("scalar_degree", std::to_string(data.scalar_degree));
    std::string sop_str;
    for (const Polynomial& f : data.sop) {
        if (!sop_str.empty()) sop_str += ", ";
        sop_str += f.to_string();
    }
    rep.put("sop", sop_str);
    std::string why;
    bool ok = detail::gaps_ok(data.B, A, data.exact_anchor, detail::hk_tolerance(), why, "B") &&
              detail::gaps_ok(data.C1, A, data.exact_anchor, detail::hk_tolerance(), why, "C1") &&
              detail::gaps_ok(data.C2, A, data.exact_anchor, detail::hk_tolerance(), why, "C2");
    rep.verdict = ok ? Verdict::Pass : Verdict::Fail;
    rep.notes = why;
    return rep;
}

// chi_1^(e) = l(T/(J+(x))^[q]) - p^{e dim T} B_e: non-negative, and the
// normalized sequence must not increase; identically zero over a regular T
// with parameter J + (x).
inline CheckReport check_chi1_vanishing(const InterchangeData& data,
                                        const std::string& fixture_id) {
    CheckReport rep;
    rep.check_id = "chi1";
    rep.fixture_id = fixture_id;
    const std::uint32_t p = data.fact.T.field()->p();
    const std::uint32_t dT = static_cast<std::uint32_t>(data.fact.T.dim());
    std::vector<std::pair<std::uint32_t, Rational>> normalized;
    bool ok = true;
    std::string why;
    for (std::size_t i = 0; i < data.B.size(); ++i) {
        std::uint32_t e = data.B[i].first;
        Rational scale(ipow(p, e * dT));
        Rational twisted = data.B[i].second * scale;
        if (twisted.denominator() != 1) {
            ok = false;
            why = "twisted multiplicity is not an integer";
            break;
        }
        Rational chi = Rational(static_cast<std::int64_t>(data.bracket_lengths[i].second)) - twisted;
        if (chi < Rational(0)) {
            ok = false;
            why = "chi_1 negative at e = " + std::to_string(e);
            break;
        }
        normalized.emplace_back(e, chi / scale);
    }
    if (ok) {
        for (std::size_t i = 1; i < normalized.size(); ++i)
            if (normalized[i].second > normalized[i - 1].second) {
                ok = false;
                why = "normalized chi_1 increases at e = " + std::to_string(normalized[i].first);
                break;
            }
        if (ok && data.exact_anchor)
            for (const auto& [e, v] : normalized)
                if (v != Rational(0)) {
                    ok = false;
                    why = "chi_1 nonzero on a regular anchor";
                    break;
                }
    }
    rep.put("chi1_normalized", detail::seq_string(normalized));
    rep.put("exact_anchor", data.exact_anchor ? "true" : "false");
    rep.lhs = normalized.empty() ? "0/1" : detail::rstr(normalized.back().second);
    rep.rhs = "0/1";
    rep.verdict = ok ? Verdict::Pass : Verdict::Fail;
    rep.notes = why;
    return rep;
}

// e(R) <= (c!/2^c) e(S), and additionally e(R) <= (d!/(2^d + c - d)) e(S)
// when c >= d.
inline CheckReport check_embdim_bounds(const LocalMap& map, const CohenFactorization& fact,
                                       const std::string& fixture_id) {
    CheckReport rep;
    rep.check_id = "embdim";
    rep.fixture_id = fixture_id;
    auto eR = hilbert_samuel(map.source(), map.source().maximal());
    auto eS = hilbert_samuel(map.target(), map.target().maximal());
    const std::uint32_t c = static_cast<std::uint32_t>(fact.c);
    const std::uint32_t d = static_cast<std::uint32_t>(map.source().dim());
    Rational bound1 = Rational(factorial(c), ipow(2, c));
    rep.lhs = detail::rstr(eR.e);
    rep.rhs = detail::rstr(bound1 * Rational(eS.e));
    rep.put("c", std::to_string(fact.c));
    rep.put("e_R", detail::rstr(eR.e));
    rep.put("e_S", detail::rstr(eS.e));
    bool ok = Rational(eR.e) <= bound1 * Rational(eS.e);
    std::string why = ok ? "" : "c-bound fails";
    if (ok && c >= d) {
        Rational bound2(factorial(d), ipow(2, d) + c - d);
        rep.put("large_c_bound", detail::rstr(bound2));
        ok = Rational(eR.e) <= bound2 * Rational(eS.e);
        if (!ok) why = "large-c bound fails";
    }
    rep.verdict = ok ? Verdict::Pass : Verdict::Fail;
    rep.notes = why;
    return rep;
}

// Probe verdict as a report (pass = consistent with flatness).
inline CheckReport check_probe(const LocalMap& map, const std::string& fixture_id) {
    CheckReport rep;
    rep.check_id = "probe";
    rep.fixture_id = fixture_id;
    ProbeReport probe = freeness_probe(map);
    rep.lhs = detail::rstr(static_cast<std::int64_t>(probe.rank));
    rep.rhs = detail::rstr(static_cast<std::int64_t>(map.fiber().length));
    for (const auto& [t, lhs, rhs] : probe.rows)
        rep.put("t" + std::to_string(t), std::to_string(lhs) + "=" + std::to_string(rhs));
    rep.verdict = probe.consistent ? Verdict::Pass : Verdict::Fail;
    rep.notes = probe.failure;
    return rep;
}

// ---------------------------------------------------------------------------
// Bounded-worker harness

struct VerifyJob {
    std::string fixture_id;
    std::string check_id;
    std::function<CheckReport()> run;
};

// Runs the jobs on a bounded pool; results come back in job order no matter
// the scheduling.  Resource caps turn into inconclusive verdicts, other
// errors into failures carrying the message.
inline std::vector<CheckReport> run_jobs(const std::vector<VerifyJob>& jobs, unsigned workers) {
    std::vector<CheckReport> out(jobs.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) break;
            CheckReport rep;
            try {
                rep = jobs[i].run();
            } catch (const ResourceError& err) {
                rep.verdict = Verdict::Inconclusive;
                rep.notes = err.what();
                if (!err.partial.empty()) rep.put("partial", err.partial);
            } catch (const std::exception& err) {
                rep.verdict = Verdict::Fail;
                rep.notes = err.what();
            }
            rep.fixture_id = jobs[i].fixture_id;
            rep.check_id = jobs[i].check_id;
            out[i] = std::move(rep);
        }
    };
    if (workers <= 1 || jobs.size() <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        unsigned n = std::min<unsigned>(workers, static_cast<unsigned>(jobs.size()));
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return out;
}

} // namespace lech

#endif
