#pragma once

// Command surface behind tools/lcrit: each command writes one CSV table.
// Exit codes: 0 ok, 1 usage or parameter error, 2 verification failure.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lcrit/arith/characters.hpp"
#include "lcrit/arith/primes.hpp"
#include "lcrit/eulerphase.hpp"
#include "lcrit/eulerphase/ledger.hpp"
#include "lcrit/gammaphase.hpp"
#include "lcrit/lfunction.hpp"
#include "lcrit/verify.hpp"

#ifndef LCRIT_VERSION
#define LCRIT_VERSION "dev"
#endif

namespace lcrit::cli {

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"characters",        "gauss",     "figure-mixed", "figure-q3",
                                                "figure-q5",         "figure-symmetries", "table-odd",
                                                "scan-zeros",        "level-check",       "ledger",
                                                "verify"};
    return names;
}

inline constexpr double kDefaultPMax = 1e6;
inline constexpr double kSoftPMax = 1e7;  // above this --allow-large is required
inline constexpr double kHardPMax = 1e8;

struct ScanRequest {
    std::string command;
    std::optional<std::uint64_t> q;
    std::optional<std::size_t> chi_index;
    std::optional<std::string> match_phase;  // "n=a/b", phase in turns
    std::optional<double> t_min, t_max, t_step;
    double eps = 0;
    std::optional<double> p_star;
    double p_max = kDefaultPMax;
    std::int64_t gw_terms = GwConfig{}.terms;
    std::string out_path;  // empty: stdout
    bool allow_large = false;
    int only = 0;  // verify: single criterion
};

// A parameter problem, reported as "--flag: message".
struct UsageError : std::runtime_error {
    UsageError(const std::string& flag, const std::string& msg) : std::runtime_error(flag + ": " + msg) {}
};

namespace detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

inline std::string phase_str(const RationalPhase& p) {
    return p.is_zero() ? "0" : std::to_string(p.num()) + "/" + std::to_string(p.den());
}

// "n=a/b" or "n=0"
inline std::pair<std::int64_t, RationalPhase> parse_match(const std::string& s) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw UsageError("--match-phase", "expected n=a/b");
    try {
        const auto n = std::stoll(s.substr(0, eq));
        const auto rhs = s.substr(eq + 1);
        const auto slash = rhs.find('/');
        const auto a = std::stoll(rhs.substr(0, slash));
        const auto b = slash == std::string::npos ? 1LL : std::stoll(rhs.substr(slash + 1));
        if (b <= 0) throw UsageError("--match-phase", "denominator must be positive");
        return {n, RationalPhase(a, b)};
    } catch (const std::logic_error&) {
        throw UsageError("--match-phase", "expected n=a/b, got '" + s + "'");
    }
}

enum class Need { any, primitive, odd_primitive, real_nonprincipal };

inline bool satisfies(const DirichletCharacter& c, Need need) {
    switch (need) {
        case Need::any: return true;
        case Need::primitive: return c.is_primitive() && !c.is_principal();
        case Need::odd_primitive: return c.is_primitive() && c.parity() == 1;
        case Need::real_nonprincipal: return c.is_real() && !c.is_principal();
    }
    return false;
}

inline DirichletCharacter select_character(const ScanRequest& r, std::uint64_t q, Need need) {
    const auto chars = enumerate_characters(q);
    if (r.chi_index) {
        if (*r.chi_index >= chars.size())
            throw UsageError("--chi-index", "no character " + std::to_string(*r.chi_index) + " mod " +
                                                std::to_string(q) + " (there are " + std::to_string(chars.size()) +
                                                ")");
        if (!satisfies(chars[*r.chi_index], need))
            throw UsageError("--chi-index", "character " + std::to_string(*r.chi_index) +
                                                " does not fit this command (see characters --q " +
                                                std::to_string(q) + ")");
        return chars[*r.chi_index];
    }
    std::optional<std::pair<std::int64_t, RationalPhase>> m;
    if (r.match_phase) m = parse_match(*r.match_phase);
    for (const auto& c : chars) {
        if (!satisfies(c, need)) continue;
        if (m && !(c.is_unit(m->first) && c.phase(m->first) == m->second)) continue;
        return c;
    }
    throw UsageError(m ? "--match-phase" : "--q", "no suitable character mod " + std::to_string(q));
}

class Context {
public:
    explicit Context(const ScanRequest& r) : r_(r) {}

    std::uint64_t q(std::uint64_t fallback) const {
        const auto v = r_.q.value_or(fallback);
        if (v == 0) throw UsageError("--q", "modulus must be >= 1");
        if (v > 100'000) throw UsageError("--q", "modulus above 1e5 is outside desk scale");
        return v;
    }
    std::vector<double> grid(double lo, double hi, double step) const {
        const double a = r_.t_min.value_or(lo), b = r_.t_max.value_or(hi), h = r_.t_step.value_or(step);
        if (!(h > 0)) throw UsageError("--t-step", "must be > 0");
        if (!(b >= a)) throw UsageError("--t-max", "must be >= --t-min");
        if ((b - a) / h > 1e6) throw UsageError("--t-step", "grid above 1e6 points");
        return make_grid(a, b, h);
    }
    // Window with p* defaulting to p_max.
    WindowParams window() const {
        if (!(r_.p_max >= 2)) throw UsageError("--p-max", "must be >= 2");
        if (r_.p_max > kHardPMax) throw UsageError("--p-max", "hard cap is 1e8");
        if (r_.p_max > kSoftPMax && !r_.allow_large)
            throw UsageError("--p-max", "above 1e7 needs --allow-large");
        const double ps = r_.p_star.value_or(r_.p_max);
        if (!(ps > 1)) throw UsageError("--p-star", "must be > 1");
        if (ps > r_.p_max) throw UsageError("--p-star", "must be <= --p-max");
        return WindowParams::make(ps, r_.p_max);
    }
    double eps() const {
        if (!(r_.eps > -0.5)) throw UsageError("--eps", "must be > -1/2");
        return r_.eps;
    }
    GwConfig gw() const {
        if (r_.gw_terms < 100'000) throw UsageError("--gw-terms", "must be >= 1e5");
        if (r_.gw_terms > 100'000'000) throw UsageError("--gw-terms", "must be <= 1e8");
        return {r_.gw_terms, GwConfig{}.richardson_levels};
    }
    const ScanRequest& req() const { return r_; }

private:
    const ScanRequest& r_;
};

inline std::string provenance(const ScanRequest& r) {
    std::ostringstream o;
    o << "# lcrit " << LCRIT_VERSION << " command=" << r.command;
    if (r.q) o << " q=" << *r.q;
    if (r.chi_index) o << " chi_index=" << *r.chi_index;
    if (r.match_phase) o << " match_phase=" << *r.match_phase;
    if (r.t_min) o << " t_min=" << num(*r.t_min);
    if (r.t_max) o << " t_max=" << num(*r.t_max);
    if (r.t_step) o << " t_step=" << num(*r.t_step);
    o << " eps=" << num(r.eps);
    o << " p_star=" << num(r.p_star.value_or(r.p_max)) << " p_max=" << num(r.p_max);
    o << " gw_terms=" << r.gw_terms << "\n";
    return o.str();
}

inline void characters(const Context& c, std::ostream& o) {
    const auto q = c.q(5);
    if (q > 1000 && !c.req().allow_large) throw UsageError("--q", "table above q=1000 needs --allow-large");
    std::optional<std::pair<std::int64_t, RationalPhase>> m;
    if (c.req().match_phase) m = parse_match(*c.req().match_phase);
    o << "chi_index,conductor,parity,primitive,real";
    for (std::uint64_t n = 1; n < q || (q == 1 && n == 1); ++n) o << ",phase_" << n;
    o << "\n";
    for (const auto& chi : enumerate_characters(q)) {
        if (m && !(chi.is_unit(m->first) && chi.phase(m->first) == m->second)) continue;
        o << chi.index() << "," << chi.conductor() << "," << chi.parity() << "," << chi.is_primitive() << ","
          << chi.is_real();
        for (std::uint64_t n = 1; n < q || (q == 1 && n == 1); ++n) {
            const auto nn = static_cast<std::int64_t>(n);
            o << "," << (chi.is_unit(nn) ? phase_str(chi.phase(nn)) : "none");
        }
        o << "\n";
    }
}

inline void gauss(const Context& c, std::ostream& o) {
    const auto q = c.q(5);
    o << "chi_index,primitive,re_tau,im_tau,abs2_minus_q\n";
    for (const auto& chi : enumerate_characters(q)) {
        const auto tau = gauss_sum(chi);
        o << chi.index() << "," << chi.is_primitive() << "," << num(tau.real()) << "," << num(tau.imag()) << ","
          << num(std::norm(tau) - static_cast<double>(q)) << "\n";
    }
}

inline void figure_mixed(const Context& c, std::ostream& o) {
    const auto g = c.grid(0.05, 5.0, 0.05);
    const auto cfg = c.gw();
    for (double t : g)
        if (!(t > 0)) throw UsageError("--t-min", "must be > 0");
    std::vector<std::array<double, 3>> rows(g.size());
    parallel_for_index(g.size(), [&](std::size_t i) {
        for (int a = 0; a < 3; ++a) rows[i][static_cast<std::size_t>(a)] = mixed_second_derivative(g[i], a, Route::gw, cfg);
    });
    o << "t,mixed_alpha0,mixed_alpha1,mixed_alpha2\n";
    for (std::size_t i = 0; i < g.size(); ++i)
        o << num(g[i]) << "," << num(rows[i][0]) << "," << num(rows[i][1]) << "," << num(rows[i][2]) << "\n";
}

// prefactor curve plus windowed Euler ratios for one character
inline void prefactor_figure(const Context& c, std::ostream& o, std::uint64_t q, Need need, bool with_mixed) {
    const auto chi = select_character(c.req(), q, need);
    const auto g = c.grid(0.0, 10.0, 0.05);
    const double eps = c.eps();
    const auto w = c.window();
    const auto cfg = c.gw();
    const auto pf = prefactor_dphase_dt_grid(g, eps, PrefactorParams::for_character(chi), cfg);
    const auto table = sieve_primes(static_cast<std::uint64_t>(w.p_max));
    const EulerProduct ep(chi, table);
    const auto ex = scan_phase(ep, g, eps, Estimator::exact_arctan, w);
    const auto ap = scan_phase(ep, g, eps, Estimator::cosine_approx, w);
    std::vector<double> mixed(g.size(), 0.0);
    if (with_mixed)
        parallel_for_index(g.size(), [&](std::size_t i) {
            mixed[i] = g[i] > 0 ? mixed_second_derivative(g[i], chi.parity(), Route::gw, cfg) : 0.0;
        });
    o << "# chi_index=" << chi.index() << " parity=" << chi.parity() << "\n";
    o << "t,prefactor_dphase_dt" << (with_mixed ? ",mixed_second_derivative" : "")
      << ",windowed_exact,windowed_approx\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        o << num(g[i]) << "," << num(pf[i]);
        if (with_mixed) o << "," << num(mixed[i]);
        o << "," << num(ex.values[i]) << "," << num(ap.values[i]) << "\n";
    }
}

inline void figure_symmetries(const Context& c, std::ostream& o) {
    const auto chi = select_character(c.req(), c.q(5), Need::real_nonprincipal);
    const double lo = c.req().t_min.value_or(-15), hi = c.req().t_max.value_or(15);
    const double step = c.req().t_step.value_or(0.05);
    if (!(step > 0)) throw UsageError("--t-step", "must be > 0");
    if (!(hi >= lo)) throw UsageError("--t-max", "must be >= --t-min");
    // built as ±k·step around 0 when symmetric so mirrored points match exactly
    std::vector<double> g;
    if (lo == -hi) {
        const auto n = static_cast<std::int64_t>(std::floor(hi / step + 1e-9));
        for (std::int64_t k = -n; k <= n; ++k) g.push_back(static_cast<double>(k) * step);
    } else {
        g = c.grid(lo, hi, step);
    }
    const auto w = c.window();
    const auto table = sieve_primes(static_cast<std::uint64_t>(w.p_max));
    const EulerProduct ep(chi, table);
    const auto ex = scan_phase(ep, g, c.eps(), Estimator::exact_arctan, w);
    const auto ap = scan_phase(ep, g, c.eps(), Estimator::cosine_approx, w);
    o << "# chi_index=" << chi.index() << "\n";
    o << "t,windowed_exact,windowed_approx\n";
    for (std::size_t i = 0; i < g.size(); ++i)
        o << num(g[i]) << "," << num(ex.values[i]) << "," << num(ap.values[i]) << "\n";
}

inline void table_odd(const Context& c, std::ostream& o) {
    const auto cfg = c.gw();
    std::vector<std::uint64_t> qs{3, 4, 5, 7, 8, 9, 11};
    if (c.req().q) qs = {c.q(3)};
    o << "q,kind,t_cross\n";
    for (auto q : qs) {
        if (odd_primitive_characters(q).empty())
            throw UsageError("--q", "no odd primitive character mod " + std::to_string(q));
        const auto r = find_t_cross({q, 1, 1}, cfg);
        const char* kind = r.kind == TCross::Kind::crossing          ? "crossing"
                           : r.kind == TCross::Kind::always_positive ? "always_positive"
                                                                     : "always_negative";
        o << q << "," << kind << "," << (r.kind == TCross::Kind::crossing ? num(r.t) : "none") << "\n";
    }
}

inline void scan_zeros(const Context& c, std::ostream& o) {
    const auto q = c.q(3);
    std::vector<DirichletCharacter> chars;
    if (c.req().chi_index || c.req().match_phase)
        chars.push_back(select_character(c.req(), q, Need::primitive));
    else
        for (const auto& chi : enumerate_characters(q))
            if (satisfies(chi, Need::primitive)) chars.push_back(chi);
    if (chars.empty()) throw UsageError("--q", "no primitive non-principal character mod " + std::to_string(q));
    const double lo = c.req().t_min.value_or(0), hi = c.req().t_max.value_or(30),
                 step = c.req().t_step.value_or(0.05);
    if (!(step > 0)) throw UsageError("--t-step", "must be > 0");
    if (lo < 0) throw UsageError("--t-min", "must be >= 0");
    if (!(hi > lo)) throw UsageError("--t-max", "must be > --t-min");
    o << "modulus,chi_index,t_zero,bracket_lo,bracket_hi,tolerance,sign_before,sign_after,kind,warning\n";
    for (const auto& chi : chars)
        for (const auto& z : find_zeros_on_line(chi, lo, hi, step))
            o << z.modulus << "," << z.chi_index << "," << num(z.t_zero) << "," << num(z.bracket_lo) << ","
              << num(z.bracket_hi) << "," << num(z.tolerance) << "," << z.sign_before << "," << z.sign_after << ","
              << (z.kind == ZeroRecord::Kind::simple ? "simple" : "suspected_multiple") << ","
              << (z.warning.empty() ? "" : "\"" + z.warning + "\"") << "\n";
}

inline void level(const Context& c, std::ostream& o) {
    const auto chi = select_character(c.req(), c.q(3), Need::primitive);
    const auto g = c.grid(5.0, 30.0, 0.5);
    if (!(g.front() > 0)) throw UsageError("--t-min", "must be > 0");
    const double eps = c.eps();
    const auto w = c.window();
    const auto table = sieve_primes(static_cast<std::uint64_t>(w.p_max));
    const EulerProduct ep(chi, table);
    const CompletedL xi(chi);
    const auto spikes = detect_spikes(scan_phase(ep, g, eps, Estimator::exact_arctan, w));
    std::vector<LevelCheck> rows(g.size());
    parallel_for_index(g.size(), [&](std::size_t i) { rows[i] = level_check(g[i], eps, ep, xi, w, spikes); });
    o << "# chi_index=" << chi.index() << "\n";
    o << "t,windowed_ratio,target,lhs,xi_phase_derivative,defect,flagged\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto& r = rows[i];
        o << num(g[i]) << "," << num(r.windowed_ratio) << "," << num(r.target) << "," << num(r.lhs) << ","
          << num(r.xi_phase_derivative) << "," << num(r.defect) << "," << r.flagged << "\n";
    }
}

inline void ledger(const Context& c, std::ostream& o) {
    const auto chi = select_character(c.req(), c.q(3), Need::primitive);
    const double t = c.req().t_min.value_or(10.0);
    if (!(t > 0)) throw UsageError("--t-min", "ledger t must be > 0");
    const double eps = c.eps();
    const auto w = c.window();
    const auto table = sieve_primes(static_cast<std::uint64_t>(w.p_max));
    const EulerProduct ep(chi, table);
    const auto k_max = ledger_k_max(t, chi, w.p_max);
    const auto led = build_oscillation_ledger(t, eps, ep, w, k_max);
    o << "# chi_index=" << chi.index() << " t=" << num(t) << " k_max=" << k_max
      << " reconstruct_approx=" << num(led.reconstruct_approx()) << "\n";
    if (eps != 0) {
        const auto r = rho_ratios(build_oscillation_ledger(t, 0.0, ep, w, k_max), led);
        o << "# rho=" << num(r.rho) << " rho_plus=" << num(r.rho_plus) << " rho_minus=" << num(r.rho_minus)
          << " (eps vs 0)\n";
    }
    o << "h,k,x0,x1,x0_next,plus_count,minus_count,plus_signed,minus_signed,plus_sum,minus_sum,plus_li,minus_li\n";
    for (const auto& cell : led.cells)
        o << cell.h << "," << cell.k << "," << num(cell.x0) << "," << num(cell.x1) << "," << num(cell.x0_next) << ","
          << cell.plus_count << "," << cell.minus_count << "," << num(cell.plus_signed) << ","
          << num(cell.minus_signed) << "," << num(cell.plus_sum) << "," << num(cell.minus_sum) << ","
          << num(cell.plus_li) << "," << num(cell.minus_li) << "\n";
}

inline bool verify_all(const ScanRequest& r, std::ostream& o) {
    if (r.only < 0 || r.only > 16) throw UsageError("--only", "criterion id must be 1..16");
    bool ok = true;
    for (const auto& cr : verify::criteria()) {
        if (r.only != 0 && cr.id != r.only) continue;
        const auto res = verify::run_criterion(cr);
        o << verify::summary_line(res) << std::endl;
        ok = ok && res.pass;
    }
    return ok;
}

}  // namespace detail

inline int run(const ScanRequest& r, std::ostream& out, std::ostream& err) {
    try {
        const auto& names = command_names();
        if (std::find(names.begin(), names.end(), r.command) == names.end())
            throw UsageError("command", "unknown command '" + r.command + "'");
        std::ofstream file;
        if (!r.out_path.empty()) {
            file.open(r.out_path, std::ios::binary | std::ios::trunc);
            if (!file) throw UsageError("--out", "cannot write '" + r.out_path + "'");
        }
        std::ostream& sink = r.out_path.empty() ? out : file;
        if (r.command == "verify") return detail::verify_all(r, sink) ? 0 : 2;

        const detail::Context c(r);
        std::ostringstream body;
        if (r.command == "characters") detail::characters(c, body);
        else if (r.command == "gauss") detail::gauss(c, body);
        else if (r.command == "figure-mixed") detail::figure_mixed(c, body);
        else if (r.command == "figure-q3") detail::prefactor_figure(c, body, c.q(3), detail::Need::odd_primitive, false);
        else if (r.command == "figure-q5") detail::prefactor_figure(c, body, c.q(5), detail::Need::real_nonprincipal, true);
        else if (r.command == "figure-symmetries") detail::figure_symmetries(c, body);
        else if (r.command == "table-odd") detail::table_odd(c, body);
        else if (r.command == "scan-zeros") detail::scan_zeros(c, body);
        else if (r.command == "level-check") detail::level(c, body);
        else detail::ledger(c, body);
        sink << detail::provenance(r) << body.str();
        sink.flush();
        if (!sink) throw UsageError("--out", "write failed");
        return 0;
    } catch (const UsageError& e) {
        err << "lcrit: " << e.what() << "\n";
    } catch (const ledger_truncation_error& e) {
        err << "lcrit: --p-max: " << e.what() << "\n";
    } catch (const resource_error& e) {
        err << "lcrit: --p-max: " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "lcrit: " << r.command << ": " << e.what() << "\n";
    }
    return 1;
}

}  // namespace lcrit::cli
