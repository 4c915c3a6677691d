// Command-line driver: every experiment pipeline with schema-stable CSV
// and JSON artifacts. Identical configuration produces byte-identical
// output files; exit status is nonzero iff a verification suite failed or
// the configuration was rejected.

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "polysieve/counting.hpp"
#include "polysieve/expsums.hpp"
#include "polysieve/jsonio.hpp"
#include "polysieve/modarith.hpp"
#include "polysieve/parallel.hpp"
#include "polysieve/sieve.hpp"

using namespace polysieve;

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_artifact(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
}

struct CtxFlags {
    i64 a = 1, b = 1, h1 = 1, h2 = 1, rho = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--a", a, "quadratic coefficient of the monic quartic");
        cmd->add_option("--b", b, "linear coefficient of the monic quartic");
        cmd->add_option("--h1", h1, "first common-factor parameter");
        cmd->add_option("--h2", h2, "second common-factor parameter");
        cmd->add_option("--rho", rho, "modulus parameter of the root constraint");
    }
    QuarticContext context() const { return QuarticContext({a, b}, h1, h2, rho); }
};

IntPoly poly_from_flags(i64 a, i64 b, const std::string& coeffs) {
    if (coeffs.empty()) return IntPoly({1, 0, a, b, 0});
    std::vector<i64> cs;
    std::stringstream ss(coeffs);
    std::string tok;
    while (std::getline(ss, tok, ',')) cs.push_back(std::stoll(tok));
    if (cs.empty()) throw std::invalid_argument("--coeffs must list coefficients");
    return IntPoly(cs);
}

std::string poly_label(const IntPoly& f) {
    std::string out;
    for (char c : f.to_string())
        if (c != ' ') out += c;
    return out;
}

// ---- suite rows -----------------------------------------------------------

struct SuiteRow {
    std::string suite;
    std::string params;
    double lhs = 0, rhs = 0, abs_err = 0, rel_err = 0;
    bool pass = true;
    bool informational = false;
};

class SuiteTable {
  public:
    void add(SuiteRow row) {
        if (!row.informational && !row.pass) failures_++;
        rows_.push_back(std::move(row));
    }
    bool all_pass() const { return failures_ == 0; }
    int failures() const { return failures_; }
    std::string csv() const {
        std::string out = "suite,params,lhs,rhs,abs_err,rel_err,pass\n";
        for (const auto& r : rows_) {
            out += r.suite + "," + r.params + "," + fmt_double(r.lhs) + "," +
                   fmt_double(r.rhs) + "," + fmt_double(r.abs_err) + "," +
                   fmt_double(r.rel_err) + "," +
                   (r.informational ? "info" : (r.pass ? "1" : "0")) + "\n";
        }
        return out;
    }

  private:
    std::vector<SuiteRow> rows_;
    int failures_ = 0;
};

SuiteRow identity_row(const std::string& suite, const std::string& params, Complex a,
                      Complex b, double tol_abs) {
    SuiteRow row;
    row.suite = suite;
    row.params = params;
    row.lhs = std::abs(a);
    row.rhs = std::abs(b);
    row.abs_err = std::abs(a - b);
    double scale = std::max({1.0, std::abs(a), std::abs(b)});
    row.rel_err = row.abs_err / scale;
    row.pass = row.abs_err <= tol_abs || row.rel_err <= 1e-6;
    return row;
}

// ---- expsum-verify --------------------------------------------------------

void run_gauss_suite(SuiteTable& table, i64 pmax) {
    for (i64 p : primes_up_to(pmax)) {
        if (p == 2) continue;
        double worst = 0;
        for (i64 ell = 1; ell < p; ++ell)
            for (i64 m = 0; m < p; ++m)
                worst = std::max(worst, std::abs(gauss_sum_closed(p, ell, m) -
                                                 gauss_sum_direct(p, ell, m)));
        SuiteRow row;
        row.suite = "gauss-closed-form";
        row.params = "p=" + std::to_string(p);
        row.abs_err = worst;
        row.rel_err = worst / std::sqrt(static_cast<double>(p));
        row.pass = worst <= 1e-9 * static_cast<double>(p);
        table.add(std::move(row));
    }
}

void run_local_suites(SuiteTable& table, const QuarticContext& ctx, i64 pmax) {
    auto pool = build_prime_pool(ctx, std::min<i64>(pmax, 31));
    for (i64 p : pool) {
        if (p > 13) break;
        LocalSums sums(ctx, p);
        i64 h1_inv = mod_inverse(ctx.h1, p), h2_inv = mod_inverse(ctx.h2, p);
        double worst0 = 0, worst1 = 0, worst2 = 0;
        for (i64 M = 0; M < p; ++M)
            for (i64 N = 0; N < p; ++N) {
                Complex zero_expect = (M == 0 && N == 0)
                                          ? Complex{static_cast<double>(p) * p, 0.0}
                                          : Complex{0.0, 0.0};
                worst0 = std::max(worst0, std::abs(sums.nu_moment(0, M, N) - zero_expect));
                i64 c1 = mod_reduce(
                    static_cast<i128>(M) * h1_inv + static_cast<i128>(N) * h2_inv, p);
                i64 c2 = mod_reduce(
                    -static_cast<i128>(M) * h1_inv + static_cast<i128>(N) * h2_inv, p);
                worst1 = std::max(worst1, std::abs(sums.nu_moment(1, M, N) -
                                                   sums.surface_sum(c1, c2)));
                Complex lhs2 = sums.nu_moment(2, M, N);
                Complex rhs2 = sums.nu_moment(1, M, N) + sums.quadric_surface_sum(c1, c2) -
                               sums.quadric_diagonal_sum(c1, c2);
                worst2 = std::max(worst2, std::abs(lhs2 - rhs2));
            }
        const double tol = 1e-9 * static_cast<double>(p) * p;
        for (auto [name, worst] :
             {std::pair<const char*, double>{"nu-moment-orthogonality", worst0},
              {"first-moment-surface", worst1},
              {"second-moment-quadric", worst2}}) {
            SuiteRow row;
            row.suite = name;
            row.params = "p=" + std::to_string(p);
            row.abs_err = worst;
            row.rel_err = worst / (static_cast<double>(p) * p);
            row.pass = worst <= tol;
            table.add(std::move(row));
        }
    }
}

void run_phi_suite(SuiteTable& table, const QuarticContext& ctx) {
    for (i64 r1 = 2; r1 <= 30; ++r1)
        for (i64 r2 = r1 + 1; r1 * r2 <= 30; ++r2) {
            if (gcd64(r1, r2) != 1) continue;
            i64 rho = r1 * r2;
            double worst = 0;
            for (i64 M = 0; M < rho; ++M)
                for (i64 N = 0; N < rho; ++N) {
                    Complex d = root_exp_sum(ctx, rho, M, N);
                    Complex a = root_exp_sum_assembled(ctx, rho, M, N);
                    double scale = std::max({1.0, std::abs(d), std::abs(a)});
                    worst = std::max(worst, std::abs(d - a) / scale);
                }
            SuiteRow row;
            row.suite = "phi-multiplicativity";
            row.params = "rho=" + std::to_string(r1) + "*" + std::to_string(r2);
            row.rel_err = worst;
            row.abs_err = worst;
            row.pass = worst <= 1e-6;
            table.add(std::move(row));
        }
}

void run_psi_suite(SuiteTable& table, const QuarticContext& ctx, i64 pmax, int samples,
                   std::uint64_t seed) {
    auto pool = build_prime_pool(ctx, std::min<i64>(pmax, 13));
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<i64> pick(-1000, 1000);
    for (std::size_t a = 0; a < pool.size(); ++a)
        for (std::size_t b = a; b < pool.size(); ++b) {
            i64 p = pool[a], q = pool[b];
            if (p * q * ctx.rho > 3000) continue;
            JointSumEvaluator ev(ctx, p, q);
            double worst = 0;
            for (int t = 0; t < samples; ++t) {
                i64 m = pick(rng), n = pick(rng);
                auto direct = ev.direct_all(m, n);
                for (int i = 0; i <= 2; ++i)
                    for (int j = 0; j <= 2; ++j) {
                        Complex d = direct[static_cast<std::size_t>(i * 3 + j)];
                        Complex f = ev.factored(i, j, m, n);
                        double scale = std::max({1.0, std::abs(d), std::abs(f)});
                        worst = std::max(worst, std::abs(d - f) / scale);
                    }
            }
            SuiteRow row;
            row.suite = p == q ? "psi-equal-prime-rule" : "psi-factorization";
            row.params = "p=" + std::to_string(p) + ";q=" + std::to_string(q) +
                         ";rho=" + std::to_string(ctx.rho);
            row.rel_err = worst;
            row.abs_err = worst;
            row.pass = worst <= 1e-6;
            table.add(std::move(row));
        }
}

void run_fourier_suite(SuiteTable& table, const QuarticContext& ctx, i64 B) {
    auto pool = build_prime_pool(ctx, 13);
    if (pool.size() < 2) return;
    i64 p = pool[0], q = pool[1];
    for (int i = 0; i <= 2; ++i)
        for (int j = 0; j <= 2; ++j) {
            i128 direct = lattice_moment_sum(ctx, B, p, q, i, j);
            Complex recon = lattice_moment_fourier(ctx, B, p, q, i, j);
            double d = static_cast<double>(direct);
            table.add(identity_row("box-moment-fourier",
                                   "B=" + std::to_string(B) + ";p=" + std::to_string(p) +
                                       ";q=" + std::to_string(q) + ";i=" + std::to_string(i) +
                                       ";j=" + std::to_string(j),
                                   Complex{d, 0.0}, recon,
                                   1e-6 * std::max(1.0, std::abs(d))));
        }
}

void run_vicar_fit(SuiteTable& table, const QuarticContext& ctx, i64 pmax) {
    // Best integer mixing coefficient for the higher moments. Recorded for
    // information only; nothing is asserted.
    auto pool = build_prime_pool(ctx, std::min<i64>(pmax, 13));
    for (i64 p : pool) {
        if (p > 13) break;
        LocalSums sums(ctx, p);
        auto g1 = sums.nu_moment_grid(1);
        auto g2 = sums.nu_moment_grid(2);
        for (int t = 3; t <= 4; ++t) {
            auto gt = sums.nu_moment_grid(t);
            int best_k = 0;
            double best_res = 1e300;
            for (int k = -10; k <= 10; ++k) {
                double res = 0;
                for (i64 M = 0; M < p; ++M)
                    for (i64 N = 0; N < p; ++N) {
                        if (M == 0 && N == 0) continue;
                        std::size_t idx = static_cast<std::size_t>(M * p + N);
                        Complex model =
                            (1.0 - k) * g1[idx] + static_cast<double>(k) * g2[idx];
                        res = std::max(res, std::abs(gt[idx] - model));
                    }
                if (res < best_res) {
                    best_res = res;
                    best_k = k;
                }
            }
            SuiteRow row;
            row.suite = "higher-moment-mixing-fit";
            row.params = "p=" + std::to_string(p) + ";t=" + std::to_string(t);
            row.lhs = best_k;
            row.rhs = best_res / static_cast<double>(p);
            row.informational = true;
            table.add(std::move(row));
        }
    }
}

std::string scan_csv(const BoundScanReport& report) {
    std::string out = "family,params,value,envelope,ratio\n";
    for (const auto& row : report.rows) {
        std::string params;
        for (std::size_t i = 0; i < row.params.size(); ++i) {
            if (i) params += ";";
            params += report.param_names[i] + "=" + std::to_string(row.params[i]);
        }
        out += report.family + "," + params + "," + fmt_double(row.value) + "," +
               fmt_double(row.envelope) + "," + fmt_double(row.ratio) + "\n";
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polynomial sieve and exponential sum laboratory"};
    app.require_subcommand(1);
    int workers = 0;
    app.add_option("--workers", workers, "worker threads (0 = auto, env POLYSIEVE_WORKERS)");

    auto* sieve_cmd = app.add_subcommand("sieve-demo", "two-prime sieve bound on a family");
    std::string sieve_json, sieve_out;
    i64 sieve_alpha = 1;
    sieve_cmd->add_option("--instance", sieve_json,
                          "JSON instance file (default: built-in square demo)");
    sieve_cmd->add_option("--alpha", sieve_alpha, "weight parameter for the built-in demo");
    sieve_cmd->add_option("--out", sieve_out, "output JSON path (default stdout)");

    auto* verify_cmd = app.add_subcommand("expsum-verify", "exact identity suites");
    CtxFlags verify_ctx;
    verify_ctx.attach(verify_cmd);
    i64 verify_pmax = 13, verify_box = 24;
    int verify_samples = 40;
    std::uint64_t verify_seed = 20240901;
    std::string verify_out;
    verify_cmd->add_option("--pmax", verify_pmax, "prime cap for the suites");
    verify_cmd->add_option("--samples", verify_samples, "twist samples per prime pair");
    verify_cmd->add_option("--seed", verify_seed, "sample seed");
    verify_cmd->add_option("--box", verify_box, "box size for the reconstruction suite");
    verify_cmd->add_option("--out", verify_out, "output CSV path (default stdout)");

    auto* scan_cmd = app.add_subcommand("bounds-scan", "empirical envelope ratio scans");
    CtxFlags scan_ctx;
    scan_ctx.attach(scan_cmd);
    std::string scan_family, scan_out;
    ScanRanges ranges;
    scan_cmd
        ->add_option("--family", scan_family,
                     "one of: nu-moments, phi-prime, phi-prime-power, phi-composite, "
                     "psi-main, main-term-cancel")
        ->required();
    scan_cmd->add_option("--pmax", ranges.pmax, "prime cap");
    scan_cmd->add_option("--pkmax", ranges.prime_power_max, "prime power cap");
    scan_cmd->add_option("--rhomax", ranges.rho_max, "composite modulus cap");
    scan_cmd->add_option("--box", ranges.box, "box size for main-term families");
    scan_cmd->add_option("--out", scan_out, "output CSV path (default stdout)");

    auto* efb_cmd = app.add_subcommand("efb", "quadruple counts E(B)");
    i64 efb_a = 0, efb_b = 0, efb_bmax = 0;
    std::string efb_coeffs, efb_blist, efb_out;
    bool efb_allow_large = false;
    efb_cmd->add_option("--a", efb_a, "quadratic coefficient");
    efb_cmd->add_option("--b", efb_b, "linear coefficient");
    efb_cmd->add_option("--bmax", efb_bmax, "box bound B");
    efb_cmd->add_option("--coeffs", efb_coeffs, "explicit coefficients, leading first");
    efb_cmd->add_option("--blist", efb_blist, "comma-separated list of B values");
    efb_cmd->add_flag("--allow-large", efb_allow_large, "raise the default B cap of 10^4");
    efb_cmd->add_option("--out", efb_out, "output CSV path (default stdout)");

    auto* mom_cmd = app.add_subcommand("moments", "representation moment counts");
    i64 mom_a = 0, mom_b = 0, mom_n = 0;
    std::string mom_coeffs, mom_out;
    mom_cmd->add_option("--a", mom_a, "quadratic coefficient");
    mom_cmd->add_option("--b", mom_b, "linear coefficient");
    mom_cmd->add_option("--coeffs", mom_coeffs, "explicit coefficients, leading first");
    mom_cmd->add_option("--n", mom_n, "range bound N")->required();
    mom_cmd->add_option("--out", mom_out, "output CSV path (default stdout)");

    auto* census_cmd = app.add_subcommand("census", "solution classification census");
    i64 cen_a = 0, cen_b = 0, cen_bmax = 100, cen_C = 1, cen_H = 100;
    std::string cen_out, cen_records;
    census_cmd->add_option("--a", cen_a, "quadratic coefficient");
    census_cmd->add_option("--b", cen_b, "linear coefficient");
    census_cmd->add_option("--bmax", cen_bmax, "box bound B (<= 500)");
    census_cmd->add_option("--C", cen_C, "size threshold on |A|");
    census_cmd->add_option("--H", cen_H, "cap on max(h1, h2)");
    census_cmd->add_option("--out", cen_out, "output CSV path (default stdout)");
    census_cmd->add_option("--records", cen_records, "JSON record export path");

    auto* tr_cmd = app.add_subcommand("transform", "reduce one quadruple");
    i64 tr_a = 0, tr_b = 0, tr_C = 1, tr_H = 100;
    std::vector<i64> tr_y;
    std::string tr_out;
    tr_cmd->add_option("--a", tr_a, "quadratic coefficient");
    tr_cmd->add_option("--b", tr_b, "linear coefficient");
    tr_cmd->add_option("--y", tr_y, "the four entries")->expected(4)->required();
    tr_cmd->add_option("--C", tr_C, "size threshold on |A|");
    tr_cmd->add_option("--H", tr_H, "cap on max(h1, h2)");
    tr_cmd->add_option("--out", tr_out, "output JSON path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sieve_cmd) {
            SieveInstance inst = [&]() {
                if (!sieve_json.empty()) {
                    std::ifstream in(sieve_json);
                    if (!in) throw std::runtime_error("cannot read " + sieve_json);
                    Json j = Json::parse(in);
                    return instance_from_json(j);
                }
                auto pf = power_family(2);
                Weighting w;
                for (i64 n = 1; n <= 100; ++n) w.support.push_back({{n}, Rational(1)});
                std::vector<i64> primes;
                for (i64 p : primes_up_to(50))
                    if (p >= 3) primes.push_back(p);
                return SieveInstance(pf.family, pf.g, std::move(w), sieve_alpha,
                                     std::move(primes));
            }();
            auto [direct, expanded] = expansion_check(inst);
            SieveReport report = sieve_bound(inst, workers);
            Json j = sieve_report_to_json(report);
            j["expansion_direct"] = rational_to_string(direct);
            j["expansion_expanded"] = rational_to_string(expanded);
            bool exact = direct == expanded;
            j["expansion_exact"] = exact;
            write_artifact(sieve_out, j.dump(2) + "\n");
            return (exact && report.lower_bound_holds) ? 0 : 1;
        }

        if (*verify_cmd) {
            QuarticContext ctx = verify_ctx.context();
            SuiteTable table;
            run_gauss_suite(table, verify_pmax);
            run_local_suites(table, ctx, verify_pmax);
            run_phi_suite(table, ctx);
            run_psi_suite(table, ctx, verify_pmax, verify_samples, verify_seed);
            run_fourier_suite(table, ctx, verify_box);
            run_vicar_fit(table, ctx, verify_pmax);
            write_artifact(verify_out, table.csv());
            if (!table.all_pass())
                std::cerr << table.failures() << " identity suite(s) failed\n";
            return table.all_pass() ? 0 : 1;
        }

        if (*scan_cmd) {
            auto report = bound_scan(scan_family, scan_ctx.context(), ranges);
            write_artifact(scan_out, scan_csv(report));
            return 0;
        }

        if (*efb_cmd) {
            IntPoly f = poly_from_flags(efb_a, efb_b, efb_coeffs);
            std::vector<i64> blist;
            if (!efb_blist.empty()) {
                std::stringstream ss(efb_blist);
                std::string tok;
                while (std::getline(ss, tok, ',')) blist.push_back(std::stoll(tok));
            }
            if (efb_bmax > 0) blist.push_back(efb_bmax);
            if (blist.empty()) throw std::invalid_argument("need --bmax or --blist");
            for (i64 B : blist)
                if (B > 10'000 && !efb_allow_large)
                    throw std::invalid_argument(
                        "B above the default 10^4 cap; pass --allow-large to raise it");
            auto rows = growth_scan(f, blist, workers);
            std::string csv = "poly,B,E,E_over_B2,E_over_B_eleven_sixths\n";
            for (const auto& r : rows)
                csv += poly_label(f) + "," + std::to_string(r.B) + "," + std::to_string(r.E) +
                       "," + fmt_double(r.e_over_b2) + "," +
                       fmt_double(r.e_over_b_five_sixths) + "\n";
            write_artifact(efb_out, csv);
            return 0;
        }

        if (*mom_cmd) {
            IntPoly f = poly_from_flags(mom_a, mom_b, mom_coeffs);
            MomentReport rep = moments(f, mom_n);
            bool identity = rep.R2 == 2 * rep.R - rep.D + rep.Estar;
            std::string csv = "poly,N,R,R2,D,Estar,identity,R2_over_R\n";
            csv += poly_label(f) + "," + to_string_i128(rep.N) + "," +
                   std::to_string(rep.R) + "," + std::to_string(rep.R2) + "," +
                   std::to_string(rep.D) + "," + std::to_string(rep.Estar) + "," +
                   (identity ? "1" : "0") + "," +
                   (rep.R > 0
                        ? fmt_double(static_cast<double>(rep.R2) / static_cast<double>(rep.R))
                        : "nan") +
                   "\n";
            write_artifact(mom_out, csv);
            return identity ? 0 : 1;
        }

        if (*census_cmd) {
            auto result = census_n1_n2({cen_a, cen_b}, cen_bmax, cen_C, cen_H);
            std::string csv = "a,b,B,C,H,n1,n2,degenerate,unclassified,total\n";
            csv += std::to_string(cen_a) + "," + std::to_string(cen_b) + "," +
                   std::to_string(cen_bmax) + "," + std::to_string(cen_C) + "," +
                   std::to_string(cen_H) + "," + std::to_string(result.n1) + "," +
                   std::to_string(result.n2) + "," + std::to_string(result.degenerate) +
                   "," + std::to_string(result.unclassified) + "," +
                   std::to_string(result.total) + "\n";
            write_artifact(cen_out, csv);
            if (!cen_records.empty())
                write_artifact(cen_records, census_to_json(result).dump(2) + "\n");
            return 0;
        }

        if (*tr_cmd) {
            TransformedSolution ts =
                forward_transform({tr_y[0], tr_y[1], tr_y[2], tr_y[3]}, {tr_a, tr_b});
            auto cls = classify_solution(ts, tr_C, tr_H);
            write_artifact(tr_out, transform_to_json(ts, cls).dump(2) + "\n");
            return 0;
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 0;
}
