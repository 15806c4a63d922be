// Command-line front end: fixture files in, Groebner bases, lengths,
// multiplicities and theorem-check reports out.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lech/runner.hpp"

namespace {

constexpr int kExitError = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw lech::ArgumentError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string stem_of(const std::string& path) {
    return std::filesystem::path(path).filename().string();
}

lech::dsl::Fixture load_fixture(const std::string& path) {
    auto parsed = lech::dsl::parse_fixture(read_file(path));
    if (auto* diag = std::get_if<lech::dsl::Diagnostic>(&parsed))
        throw lech::ArgumentError(path + ":" + diag->to_string());
    return lech::dsl::elaborate(std::get<lech::dsl::Document>(parsed), stem_of(path));
}

void print_report_table(const lech::RunReport& report) {
    for (const auto& c : report.checks) {
        std::cout << c.fixture_id << "  " << c.check_id << "  " << to_string(c.verdict)
                  << "  lhs=" << c.lhs << " rhs=" << c.rhs << " tol=" << c.tolerance;
        if (!c.notes.empty()) std::cout << "  [" << c.notes << "]";
        std::cout << "\n";
    }
    std::size_t pass = 0, fail = 0, inc = 0;
    for (const auto& c : report.checks) {
        if (c.verdict == lech::Verdict::Pass) ++pass;
        else if (c.verdict == lech::Verdict::Fail) ++fail;
        else ++inc;
    }
    std::cout << "checks: " << pass << " pass, " << fail << " fail, " << inc
              << " inconclusive (" << report.total_ms << " ms)\n";
}

int write_json(const lech::RunReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write '" << path << "'\n";
        return kExitError;
    }
    out << lech::to_json(report).dump(2) << "\n";
    return 0;
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : csv) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiplicity calculator and flat-extension check harness"};
    app.require_subcommand(1);

    // resource caps travel through the environment so that every layer,
    // including lazily initialized ones, sees the same values
    std::string opt_degree_cap, opt_tmax, opt_ecap;
    app.add_option("--degree-cap", opt_degree_cap, "monomial degree cap (default 64)");
    app.add_option("--tmax", opt_tmax, "ordinary-power cap for length tables (default 24)");
    app.add_option("--ecap", opt_ecap, "hard cap on Frobenius levels (default 6)");

    std::string file, ring_name, ideal_name = "m", map_name;
    std::uint64_t seed = 7;
    unsigned workers = 2;
    std::uint32_t emax_flag = 0;
    std::string json_path, checks_csv, fixtures_dir = "fixtures";

    auto* gb = app.add_subcommand("gb", "print the reduced Groebner basis of a declared ideal");
    gb->add_option("file", file)->required();
    gb->add_option("ideal", ideal_name)->required();

    auto* length = app.add_subcommand("length", "origin-local colength of an ideal in a ring");
    length->add_option("file", file)->required();
    length->add_option("ring", ring_name)->required();
    length->add_option("ideal", ideal_name)->required();

    auto* mult = app.add_subcommand("mult", "Hilbert-Samuel multiplicity with its length table");
    mult->add_option("file", file)->required();
    mult->add_option("ring", ring_name)->required();
    mult->add_option("--ideal", ideal_name);

    auto* hk = app.add_subcommand("hk", "Hilbert-Kunz estimate sequence");
    hk->add_option("file", file)->required();
    hk->add_option("ring", ring_name)->required();
    hk->add_option("--ideal", ideal_name);
    hk->add_option("--emax", emax_flag);

    auto* cohen = app.add_subcommand("cohen", "Cohen-style factorization of a declared map");
    cohen->add_option("file", file)->required();
    cohen->add_option("map", map_name)->required();
    cohen->add_option("--seed", seed);

    auto* verify = app.add_subcommand("verify", "run the declared checks of a fixture file");
    verify->add_option("file", file)->required();
    verify->add_option("--checks", checks_csv, "comma-separated check kinds to keep");
    verify->add_option("--seed", seed);
    verify->add_option("--emax", emax_flag);
    verify->add_option("--tmax", opt_tmax, "ordinary-power cap for length tables");
    verify->add_option("--degree-cap", opt_degree_cap, "monomial degree cap");
    verify->add_option("--json", json_path, "write the machine-readable report here");
    verify->add_option("--workers", workers);

    auto* fixtures = app.add_subcommand("fixtures", "operate on a fixture directory");
    std::string fixtures_action = "list";
    fixtures->add_option("action", fixtures_action, "list | run-all")->required();
    fixtures->add_option("--dir", fixtures_dir);
    fixtures->add_option("--seed", seed);
    fixtures->add_option("--json", json_path);
    fixtures->add_option("--workers", workers);

    CLI11_PARSE(app, argc, argv);

    if (!opt_degree_cap.empty()) setenv("LECH_DEGREE_CAP", opt_degree_cap.c_str(), 1);
    if (!opt_tmax.empty()) setenv("LECH_T_CAP", opt_tmax.c_str(), 1);
    if (!opt_ecap.empty()) setenv("LECH_E_CAP", opt_ecap.c_str(), 1);

    try {
        if (gb->parsed()) {
            auto fx = load_fixture(file);
            auto it = fx.ideals.find(ideal_name);
            if (it == fx.ideals.end()) throw lech::ArgumentError("unknown ideal '" + ideal_name + "'");
            for (const auto& g : it->second.groebner()->gens) std::cout << g.to_string() << "\n";
            return 0;
        }
        if (length->parsed()) {
            auto fx = load_fixture(file);
            const auto& q = fx.ring(ring_name);
            auto rep = lech::local_length(q, fx.ideal_in(ideal_name, q));
            if (!rep.finite) {
                std::cout << "infinite\n";
                return 0;
            }
            std::cout << "global=" << rep.global << " away=" << rep.away
                      << " local=" << rep.local_len << "\n";
            return 0;
        }
        if (mult->parsed()) {
            auto fx = load_fixture(file);
            const auto& q = fx.ring(ring_name);
            auto rep = lech::hilbert_samuel(q, fx.ideal_in(ideal_name, q));
            std::cout << "e = " << rep.e << " (dim " << rep.dim_used << ", stabilized at t = "
                      << rep.stabilization_t << ")\n";
            for (const auto& [t, len] : rep.length_table)
                std::cout << "  t=" << t << " length=" << len << "\n";
            return 0;
        }
        if (hk->parsed()) {
            auto fx = load_fixture(file);
            const auto& q = fx.ring(ring_name);
            std::uint32_t e_max = emax_flag ? emax_flag : lech::default_e_max(q.field()->p());
            auto seq = lech::hk_sequence(q, fx.ideal_in(ideal_name, q), e_max);
            for (const auto& [e, est] : seq.estimates)
                std::cout << "e=" << e << "  " << lech::to_string(est) << "\n";
            if (seq.partial) std::cout << "(partial: resource cap hit)\n";
            return 0;
        }
        if (cohen->parsed()) {
            auto fx = load_fixture(file);
            auto fact = lech::cohen_factor(fx.map(map_name), seed);
            std::cout << "T ambient:";
            for (const auto& v : fact.T.ring()->vars) std::cout << " " << v;
            std::cout << "\nT relations:\n";
            for (const auto& g : fact.T.defining().gens())
                std::cout << "  " << g.to_string() << "\n";
            std::cout << "J generators:\n";
            for (const auto& g : fact.J.gens()) std::cout << "  " << g.to_string() << "\n";
            std::cout << "peeled " << fact.peeled.size() << " element(s), c = " << fact.c
                      << ", edim R/T/S = " << fact.edim_R << "/" << fact.edim_T << "/"
                      << fact.edim_S << "\n";
            return 0;
        }
        if (verify->parsed()) {
            auto fx = load_fixture(file);
            lech::RunOptions options;
            options.seed = seed;
            options.workers = workers;
            if (emax_flag) options.emax = emax_flag;
            options.only = split_list(checks_csv);
            auto report = lech::run_fixtures({fx}, options);
            print_report_table(report);
            if (!json_path.empty()) {
                int rc = write_json(report, json_path);
                if (rc != 0) return rc;
            }
            return lech::exit_code(report);
        }
        if (fixtures->parsed()) {
            std::vector<std::string> files;
            for (const auto& entry : std::filesystem::directory_iterator(fixtures_dir))
                if (entry.path().extension() == ".lk") files.push_back(entry.path().string());
            std::sort(files.begin(), files.end());
            if (fixtures_action == "list") {
                for (const auto& f : files) std::cout << f << "\n";
                return 0;
            }
            if (fixtures_action != "run-all") throw lech::ArgumentError("unknown action");
            std::vector<lech::dsl::Fixture> all;
            for (const auto& f : files) all.push_back(load_fixture(f));
            lech::RunOptions options;
            options.seed = seed;
            options.workers = workers;
            auto report = lech::run_fixtures(all, options);
            print_report_table(report);
            if (!json_path.empty()) {
                int rc = write_json(report, json_path);
                if (rc != 0) return rc;
            }
            return lech::exit_code(report);
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
