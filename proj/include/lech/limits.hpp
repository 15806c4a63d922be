#ifndef LECH_LIMITS_HPP
#define LECH_LIMITS_HPP

#include <cstdint>
#include <cstdlib>
#include <string>

namespace lech {

// Resource caps.  Mathematical inputs always come from files or flags;
// only these caps may be overridden from the environment.
struct Limits {
    std::uint32_t degree_cap = 64;  // abort polynomial arithmetic past this total degree
    std::uint32_t t_cap = 24;       // largest ordinary power tried by length tables
    std::uint32_t e_cap = 6;        // largest Frobenius exponent ever computed

    static std::uint32_t env_or(const char* name, std::uint32_t fallback) {
        const char* v = std::getenv(name);
        if (!v || !*v) return fallback;
        char* end = nullptr;
        unsigned long parsed = std::strtoul(v, &end, 10);
        if (end == v || parsed == 0) return fallback;
        return static_cast<std::uint32_t>(parsed);
    }

    static const Limits& current() {
        static const Limits limits = [] {
            Limits l;
            l.degree_cap = env_or("LECH_DEGREE_CAP", l.degree_cap);
            l.t_cap = env_or("LECH_T_CAP", l.t_cap);
            l.e_cap = env_or("LECH_E_CAP", l.e_cap);
            return l;
        }();
        return limits;
    }
};

// Frobenius levels default to 3 for p in {2,3} and 2 for larger p; powers
// of larger primes outgrow desk scale quickly.
inline std::uint32_t default_e_max(std::uint32_t p) { return p >= 5 ? 2u : 3u; }

} // namespace lech

#endif
