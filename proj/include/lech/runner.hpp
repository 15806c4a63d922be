#ifndef LECH_RUNNER_HPP
#define LECH_RUNNER_HPP

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lech/dsl.hpp"
#include "lech/verify.hpp"

namespace lech {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunOptions {
    std::uint64_t seed = 7;
    std::optional<std::uint32_t> emax;  // overrides the per-characteristic default
    unsigned workers = 2;
    std::vector<std::string> only;  // restrict to these check kinds when non-empty
};

struct RunReport {
    std::string version = kToolVersion;
    std::uint64_t seed = 0;
    std::vector<CheckReport> checks;
    std::vector<std::string> cap_hits;
    long long total_ms = 0;
};

namespace detail {

// Compute-once cell shared between jobs that need the same expensive value.
template <typename T>
class Once {
public:
    template <typename F>
    const T& get(F&& f) {
        std::call_once(flag_, [&] {
            try {
                value_.emplace(f());
            } catch (...) {
                error_ = std::current_exception();
            }
        });
        if (error_) std::rethrow_exception(error_);
        return *value_;
    }

private:
    std::once_flag flag_;
    std::optional<T> value_;
    std::exception_ptr error_;
};

inline std::uint64_t derive_seed(std::uint64_t base, const std::string& tag) {
    std::uint64_t h = 1469598103934665603ull ^ base;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace detail

// Builds one job per declared check.  Maps are probed at most once per run;
// interchange data is shared between the interchange and chi1 checks of the
// same target and level.
inline std::vector<VerifyJob> make_jobs(const dsl::Fixture& fx, const RunOptions& options) {
    using dsl::CheckDecl;
    auto probed = std::make_shared<std::map<std::string, std::shared_ptr<detail::Once<LocalMap>>>>();
    auto idata = std::make_shared<std::map<std::string, std::shared_ptr<detail::Once<InterchangeData>>>>();
    auto facts = std::make_shared<std::map<std::string, std::shared_ptr<detail::Once<CohenFactorization>>>>();
    auto fixture = std::make_shared<dsl::Fixture>(fx);

    auto probed_map = [probed, fixture](const std::string& name) -> const LocalMap& {
        auto cell = probed->at(name);
        return cell->get([&]() -> LocalMap {
            const LocalMap& raw = fixture->map(name);
            if (raw.flat_tag() == FlatTag::ByConstruction) return raw;
            ProbeReport probe = freeness_probe(raw);
            if (!probe.consistent)
                throw StructuralError("map '" + name + "' failed the freeness probe: " + probe.failure);
            return raw.with_flat_tag(FlatTag::Probed);
        });
    };

    // pre-create the cells so concurrent jobs share them
    for (const CheckDecl& c : fx.checks) {
        if (fx.maps.count(c.target)) {
            (*probed)[c.target] = std::make_shared<detail::Once<LocalMap>>();
            (*facts)[c.target] = std::make_shared<detail::Once<CohenFactorization>>();
        }
    }

    std::vector<VerifyJob> jobs;
    for (const CheckDecl& decl : fx.checks) {
        if (!options.only.empty()) {
            bool keep = false;
            for (const auto& k : options.only) keep = keep || k == decl.kind;
            if (!keep) continue;
        }
        CheckDecl c = decl;
        std::string fixture_id = fx.id;
        RunOptions opts = options;

        auto emax_for = [opts, c](const QuotientRing& q, std::uint32_t fallback_cap) {
            std::uint32_t def = std::min(default_e_max(q.field()->p()), fallback_cap);
            return c.emax.value_or(opts.emax.value_or(def));
        };

        // interchange and chi1 with the same target, sop and level share one
        // computed InterchangeData; cells are created here, single-threaded,
        // and seeded from the shared key so the winner of the race does not
        // matter
        std::shared_ptr<detail::Once<InterchangeData>> idata_cell;
        std::uint64_t idata_seed = 0;
        if (decl.kind == "interchange" || decl.kind == "chi1") {
            std::string key = c.target + "|" + std::to_string(c.emax.value_or(0));
            for (const auto& e : c.sop) key += "|" + dsl::print_expr(e);
            auto& slot = (*idata)[key];
            if (!slot) slot = std::make_shared<detail::Once<InterchangeData>>();
            idata_cell = slot;
            idata_seed = detail::derive_seed(options.seed, fx.id + "|idata|" + key);
        }
        auto interchange_for = [idata_cell, fixture, probed_map, emax_for, idata_seed,
                                c]() -> const InterchangeData& {
            return idata_cell->get([&] {
                const LocalMap& map = probed_map(c.target);
                std::vector<Polynomial> sop;
                for (const auto& e : c.sop) sop.push_back(dsl::eval_expr(e, map.target().ring()));
                return interchange_data(map, sop, emax_for(map.target(), 6), idata_seed);
            });
        };

        VerifyJob job;
        job.fixture_id = fixture_id;
        job.check_id = decl.kind;
        if (decl.kind == "lech") {
            job.run = [=] { return check_lech(probed_map(c.target), fixture_id); };
        } else if (decl.kind == "edim") {
            job.run = [=] { return check_edim(fixture->map(c.target), fixture_id); };
        } else if (decl.kind == "hk_chain") {
            job.run = [=] {
                const LocalMap& map = probed_map(c.target);
                return check_hk_chain(map, emax_for(map.source(), 6), fixture_id);
            };
        } else if (decl.kind == "hk_sandwich") {
            job.run = [=] {
                const QuotientRing& q = fixture->ring(c.target);
                if (!c.sop.empty()) {
                    std::vector<Polynomial> sop;
                    for (const auto& e : c.sop) sop.push_back(dsl::eval_expr(e, q.ring()));
                    return check_hk_sandwich(q, Ideal(q.ring(), sop), emax_for(q, 6), fixture_id,
                                             true);
                }
                Ideal I = fixture->ideal_in(c.ideal.empty() ? "m" : c.ideal, q);
                return check_hk_sandwich(q, I, emax_for(q, 6), fixture_id);
            };
        } else if (decl.kind == "adjunction") {
            job.run = [=] {
                const QuotientRing& q = fixture->ring(c.target);
                return check_adjunction_identity(q, c.vars_n.value_or(1), emax_for(q, 2), fixture_id);
            };
        } else if (decl.kind == "mingen_bound") {
            job.run = [=] {
                const QuotientRing& q = fixture->ring(c.target);
                std::vector<Polynomial> sop;
                for (const auto& e : c.sop) sop.push_back(dsl::eval_expr(e, q.ring()));
                Ideal a = c.ideal.empty() ? zero_ideal(q.ring()) : fixture->ideal_in(c.ideal, q);
                return check_mingen_bound(q, sop, a, fixture_id);
            };
        } else if (decl.kind == "mingen_growth") {
            job.run = [=] {
                const LocalMap& map = fixture->map(c.target);
                Ideal a = c.ideal.empty() ? zero_ideal(map.source().ring())
                                          : fixture->ideal_in(c.ideal, map.source());
                return check_mingen_growth(map, a, fixture_id);
            };
        } else if (decl.kind == "interchange") {
            job.run = [=] { return check_interchange(interchange_for(), fixture_id); };
        } else if (decl.kind == "chi1") {
            job.run = [=] { return check_chi1_vanishing(interchange_for(), fixture_id); };
        } else if (decl.kind == "embdim") {
            auto fact_cell = (*facts)[c.target];
            std::uint64_t fact_seed = detail::derive_seed(options.seed, fx.id + "|fact|" + c.target);
            job.run = [=] {
                const LocalMap& map = probed_map(c.target);
                const CohenFactorization& fact =
                    fact_cell->get([&] { return cohen_factor(map, fact_seed); });
                return check_embdim_bounds(map, fact, fixture_id);
            };
        } else if (decl.kind == "probe") {
            job.run = [=] { return check_probe(fixture->map(c.target), fixture_id); };
        } else {
            job.run = [=]() -> CheckReport {
                throw ArgumentError("unhandled check kind '" + c.kind + "'");
            };
        }
        jobs.push_back(std::move(job));
    }
    return jobs;
}

inline RunReport run_fixtures(const std::vector<dsl::Fixture>& fixtures, const RunOptions& options) {
    auto start = std::chrono::steady_clock::now();
    std::vector<VerifyJob> jobs;
    for (const auto& fx : fixtures) {
        auto batch = make_jobs(fx, options);
        for (auto& j : batch) jobs.push_back(std::move(j));
    }
    RunReport report;
    report.seed = options.seed;
    report.checks = run_jobs(jobs, options.workers);
    std::stable_sort(report.checks.begin(), report.checks.end(),
                     [](const CheckReport& a, const CheckReport& b) {
                         if (a.fixture_id != b.fixture_id) return a.fixture_id < b.fixture_id;
                         return a.check_id < b.check_id;
                     });
    for (const CheckReport& c : report.checks)
        if (c.verdict == Verdict::Inconclusive)
            report.cap_hits.push_back(c.fixture_id + ":" + c.check_id);
    report.total_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    return report;
}

// ---------------------------------------------------------------------------
// Serialization: key-sorted JSON, rationals as "num/den" strings

inline nlohmann::json to_json(const CheckReport& rep) {
    nlohmann::json j;
    j["check_id"] = rep.check_id;
    j["fixture_id"] = rep.fixture_id;
    j["verdict"] = to_string(rep.verdict);
    j["lhs"] = rep.lhs;
    j["rhs"] = rep.rhs;
    j["tolerance"] = rep.tolerance;
    j["notes"] = rep.notes;
    nlohmann::json data = nlohmann::json::object();
    for (const auto& [k, v] : rep.data) data[k] = v;
    j["data"] = data;
    return j;
}

inline nlohmann::json to_json(const RunReport& report, bool include_timing = true) {
    nlohmann::json j;
    j["version"] = report.version;
    j["seed"] = report.seed;
    j["cap_hits"] = report.cap_hits;
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : report.checks) checks.push_back(to_json(c));
    j["checks"] = checks;
    if (include_timing) j["timing"] = nlohmann::json{{"total_ms", report.total_ms}};
    return j;
}

// 0: all pass; 1: some failure; 2: inconclusive only; 3 is reserved for
// usage and input errors at the CLI boundary.
inline int exit_code(const RunReport& report) {
    bool any_fail = false, any_inconclusive = false;
    for (const auto& c : report.checks) {
        any_fail = any_fail || c.verdict == Verdict::Fail;
        any_inconclusive = any_inconclusive || c.verdict == Verdict::Inconclusive;
    }
    if (any_fail) return 1;
    if (any_inconclusive) return 2;
    return 0;
}

} // namespace lech

#endif
