#include <iostream>

#include "CLI11.hpp"
#include "lcrit/cli.hpp"

int main(int argc, char** argv) {
    lcrit::cli::ScanRequest r;
    CLI::App app{"Dirichlet L-function phase and zero diagnostics; every command writes CSV"};
    app.set_version_flag("--version", std::string(LCRIT_VERSION));
    app.add_option("command", r.command, "what to compute")
        ->required()
        ->check(CLI::IsMember(lcrit::cli::command_names()));
    app.add_option("--q", r.q, "modulus");
    app.add_option("--chi-index", r.chi_index, "character index as listed by `characters`");
    app.add_option("--match-phase", r.match_phase, "pick the first character with phase(n) = a/b turns, as n=a/b");
    app.add_option("--t-min", r.t_min, "grid start (ledger: the single t)");
    app.add_option("--t-max", r.t_max, "grid end");
    app.add_option("--t-step", r.t_step, "grid step");
    app.add_option("--eps", r.eps, "offset from the critical line, s = 1/2 + eps + it")->capture_default_str();
    app.add_option("--p-star", r.p_star, "window parameter p* (defaults to p_max)");
    app.add_option("--p-max", r.p_max, "largest prime in the Euler product")->capture_default_str();
    app.add_option("--gw-terms", r.gw_terms, "Gauss-Weierstrass product length")->capture_default_str();
    app.add_option("--out", r.out_path, "CSV path (default stdout)");
    app.add_flag("--allow-large", r.allow_large, "permit p_max above 1e7 (hard cap 1e8)");
    app.add_option("--only", r.only, "verify: run one criterion (1-16)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    return lcrit::cli::run(r, std::cout, std::cerr);
}
