#ifndef LECH_MONOMIAL_HPP
#define LECH_MONOMIAL_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "lech/errors.hpp"

namespace lech {

// Exponent vector over a fixed ambient variable list.
struct Monomial {
    std::vector<std::uint32_t> exps;

    Monomial() = default;
    explicit Monomial(std::size_t nvars) : exps(nvars, 0) {}
    explicit Monomial(std::vector<std::uint32_t> e) : exps(std::move(e)) {}

    std::uint32_t degree() const { return std::accumulate(exps.begin(), exps.end(), 0u); }
    bool is_one() const {
        return std::all_of(exps.begin(), exps.end(), [](std::uint32_t e) { return e == 0; });
    }

    bool operator==(const Monomial& o) const { return exps == o.exps; }
    bool operator!=(const Monomial& o) const { return !(*this == o); }

    Monomial operator*(const Monomial& o) const {
        Monomial out(*this);
        for (std::size_t i = 0; i < exps.size(); ++i) out.exps[i] += o.exps[i];
        return out;
    }

    bool divides(const Monomial& o) const {
        for (std::size_t i = 0; i < exps.size(); ++i)
            if (exps[i] > o.exps[i]) return false;
        return true;
    }

    // Quotient this / o; caller guarantees divisibility.
    Monomial quotient_by(const Monomial& o) const {
        Monomial out(*this);
        for (std::size_t i = 0; i < exps.size(); ++i) out.exps[i] -= o.exps[i];
        return out;
    }

    static Monomial lcm(const Monomial& a, const Monomial& b) {
        Monomial out(a);
        for (std::size_t i = 0; i < out.exps.size(); ++i)
            out.exps[i] = std::max(out.exps[i], b.exps[i]);
        return out;
    }

    static bool coprime(const Monomial& a, const Monomial& b) {
        for (std::size_t i = 0; i < a.exps.size(); ++i)
            if (a.exps[i] != 0 && b.exps[i] != 0) return false;
        return true;
    }
};

// Total orders refining divisibility.  Block orders compare the elimination
// block first (grevlex within it), so they eliminate that block's variables.
class MonomialOrder {
public:
    enum class Kind { Grevlex, Lex, Block };

    static MonomialOrder grevlex() { return MonomialOrder(Kind::Grevlex, {}); }
    static MonomialOrder lex() { return MonomialOrder(Kind::Lex, {}); }
    static MonomialOrder block(std::vector<std::size_t> elim_vars) {
        std::sort(elim_vars.begin(), elim_vars.end());
        return MonomialOrder(Kind::Block, std::move(elim_vars));
    }

    Kind kind() const { return kind_; }
    const std::vector<std::size_t>& elim_vars() const { return elim_; }

    // Strict comparison: a comes before b (a is the larger monomial).
    bool greater(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }

    int compare(const Monomial& a, const Monomial& b) const {
        switch (kind_) {
        case Kind::Grevlex:
            return grevlex_compare(a.exps, b.exps, nullptr, false);
        case Kind::Lex: {
            for (std::size_t i = 0; i < a.exps.size(); ++i) {
                if (a.exps[i] != b.exps[i]) return a.exps[i] > b.exps[i] ? 1 : -1;
            }
            return 0;
        }
        case Kind::Block: {
            std::vector<bool> mask(a.exps.size(), false);
            for (std::size_t v : elim_)
                if (v < mask.size()) mask[v] = true;
            int head = grevlex_compare(a.exps, b.exps, &mask, true);
            if (head != 0) return head;
            return grevlex_compare(a.exps, b.exps, &mask, false);
        }
        }
        return 0;
    }

    bool operator==(const MonomialOrder& o) const { return kind_ == o.kind_ && elim_ == o.elim_; }

    std::string key() const {
        switch (kind_) {
        case Kind::Grevlex: return "grevlex";
        case Kind::Lex: return "lex";
        case Kind::Block: {
            std::string out = "block";
            for (std::size_t v : elim_) out += ":" + std::to_string(v);
            return out;
        }
        }
        return "";
    }

private:
    MonomialOrder(Kind kind, std::vector<std::size_t> elim) : kind_(kind), elim_(std::move(elim)) {}

    // Grevlex over the variables selected by the mask (all when null):
    // higher restricted degree wins; on ties the rightmost differing
    // exponent decides, smaller exponent meaning the larger monomial.
    static int grevlex_compare(const std::vector<std::uint32_t>& a,
                               const std::vector<std::uint32_t>& b,
                               const std::vector<bool>* mask, bool in_mask) {
        auto selected = [&](std::size_t i) { return mask == nullptr || (*mask)[i] == in_mask; };
        long da = 0, db = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (selected(i)) { da += a[i]; db += b[i]; }
        if (da != db) return da > db ? 1 : -1;
        for (std::size_t i = a.size(); i-- > 0;) {
            if (!selected(i)) continue;
            if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
        }
        return 0;
    }

    Kind kind_;
    std::vector<std::size_t> elim_;
};

} // namespace lech

#endif
