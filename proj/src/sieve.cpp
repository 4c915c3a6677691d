#include "polysieve/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polysieve/modarith.hpp"
#include "polysieve/parallel.hpp"

namespace polysieve {

i64 coeff_c(int i, int j, i64 alpha, i64 d) {
    if (i < 0 || i > 2 || j < 0 || j > 2)
        throw std::invalid_argument("coeff_c: indices must lie in {0,1,2}");
    // Product structure: c_{i,j} = gamma_i * gamma_j with
    // gamma = (alpha - d, 1 + d, -1).
    const i64 gamma[3] = {alpha - d, 1 + d, -1};
    return gamma[i] * gamma[j];
}

i64 weight_factor(i64 nu, i64 alpha, i64 d) { return alpha + (nu - 1) * (d - nu); }

namespace {

i64 max_abs_coord(const std::vector<i64>& point) {
    i64 m = 0;
    for (i64 c : point) m = std::max(m, c < 0 ? -c : c);
    return m;
}

}  // namespace

SieveInstance::SieveInstance(PolyFamily family, MPoly g, Weighting weighting, i64 alpha,
                             std::vector<i64> primes)
    : family_(std::move(family)),
      g_(std::move(g)),
      weighting_(std::move(weighting)),
      alpha_(alpha),
      primes_(std::move(primes)) {
    if (alpha_ < 1) throw std::invalid_argument("SieveInstance: alpha must be >= 1");
    if (g_.is_zero()) throw std::invalid_argument("SieveInstance: g must be nonzero");
    if (g_.vars() != family_.aux_vars())
        throw std::invalid_argument("SieveInstance: g variable count mismatch");
    std::sort(primes_.begin(), primes_.end());
    if (std::adjacent_find(primes_.begin(), primes_.end()) != primes_.end())
        throw std::invalid_argument("SieveInstance: duplicate primes");
    for (i64 p : primes_)
        if (!is_prime(p)) throw std::invalid_argument("SieveInstance: non-prime in prime set");

    const double coord_cap = std::exp(static_cast<double>(primes_.size()));
    for (const auto& wp : weighting_.support) {
        if (static_cast<int>(wp.point.size()) != family_.aux_vars())
            throw std::invalid_argument("SieveInstance: support point dimension mismatch");
        if (wp.weight < 0) throw std::invalid_argument("SieveInstance: negative weight");
        if (wp.weight == 0) continue;
        i128 gh = 0;
        i128 gv = g_.eval(wp.point);
        i128 hv = h_gcd(family_, wp.point);
        gh = (gv == 0 || hv == 0) ? 0 : 1;
        if (gh == 0)
            throw std::invalid_argument(
                "SieveInstance: nonzero weight at a point with g(n)h(n) = 0");
        if (static_cast<double>(max_abs_coord(wp.point)) >= coord_cap)
            throw std::invalid_argument(
                "SieveInstance: support point with |n| >= exp(P) carries nonzero weight");
    }
}

void SieveInstance::build_tables() const {
    if (tables_ready_) return;
    const auto& support = weighting_.support;
    const std::size_t npts = support.size();
    const std::size_t npr = primes_.size();
    nu_.assign(npts, std::vector<i64>(npr, 0));
    divides_.assign(npts, std::vector<char>(npr, 0));
    gh_zero_.assign(npts, 0);
    for (std::size_t k = 0; k < npts; ++k) {
        const auto& n = support[k].point;
        i128 gv = g_.eval(n);
        i128 hv = h_gcd(family_, n);
        gh_zero_[k] = (gv == 0 || hv == 0) ? 1 : 0;
        for (std::size_t a = 0; a < npr; ++a) {
            i64 p = primes_[a];
            divides_[k][a] = (gh_zero_[k] || mod_reduce(gv, p) == 0 || mod_reduce(hv, p) == 0)
                                 ? 1
                                 : 0;
            nu_[k][a] = nu_p(family_, n, p);
        }
    }
    tables_ready_ = true;
}

const std::vector<std::vector<i64>>& SieveInstance::nu_table() const {
    build_tables();
    return nu_;
}
const std::vector<std::vector<char>>& SieveInstance::divides_table() const {
    build_tables();
    return divides_;
}
const std::vector<char>& SieveInstance::gh_zero() const {
    build_tables();
    return gh_zero_;
}

namespace {

std::size_t prime_index(const SieveInstance& inst, i64 p) {
    const auto& ps = inst.primes();
    auto it = std::lower_bound(ps.begin(), ps.end(), p);
    if (it == ps.end() || *it != p)
        throw std::invalid_argument("prime not in the instance prime set");
    return static_cast<std::size_t>(it - ps.begin());
}

i64 ipow(i64 base, int e) {
    i64 r = 1;
    while (e-- > 0) r *= base;
    return r;
}

}  // namespace

Rational s_ij(const SieveInstance& inst, int i, int j, i64 p, i64 q) {
    if (i < 0 || i > 2 || j < 0 || j > 2)
        throw std::invalid_argument("s_ij: indices must lie in {0,1,2}");
    std::size_t pa = prime_index(inst, p), qa = prime_index(inst, q);
    const auto& nu = inst.nu_table();
    const auto& div = inst.divides_table();
    const auto& support = inst.weighting().support;
    Rational acc = 0;
    for (std::size_t k = 0; k < support.size(); ++k) {
        if (div[k][pa] || div[k][qa]) continue;
        i64 factor = ipow(nu[k][pa], i) * ipow(nu[k][qa], j);
        if (factor != 0) acc += support[k].weight * factor;
    }
    return acc;
}

Rational sigma_direct(const SieveInstance& inst) {
    const auto& nu = inst.nu_table();
    const auto& div = inst.divides_table();
    const auto& support = inst.weighting().support;
    const i64 alpha = inst.alpha();
    const i64 d = inst.family().degree();
    Rational acc = 0;
    for (std::size_t k = 0; k < support.size(); ++k) {
        i64 inner = 0;
        for (std::size_t a = 0; a < inst.primes().size(); ++a)
            if (!div[k][a]) inner += weight_factor(nu[k][a], alpha, d);
        if (inner != 0) acc += support[k].weight * (inner * inner);
    }
    return acc;
}

std::pair<Rational, Rational> expansion_check(const SieveInstance& inst) {
    Rational direct = sigma_direct(inst);
    const i64 alpha = inst.alpha();
    const i64 d = inst.family().degree();
    Rational expanded = 0;
    for (i64 p : inst.primes())
        for (i64 q : inst.primes())
            for (int i = 0; i <= 2; ++i)
                for (int j = 0; j <= 2; ++j) {
                    i64 c = coeff_c(i, j, alpha, d);
                    if (c != 0) expanded += s_ij(inst, i, j, p, q) * c;
                }
    return {direct, expanded};
}

SieveReport sieve_bound(const SieveInstance& inst, int workers) {
    if (inst.primes().empty())
        throw std::invalid_argument("sieve_bound: empty prime set");
    const auto& support = inst.weighting().support;
    const auto& ghz = inst.gh_zero();
    const auto& div = inst.divides_table();

    SieveReport report;
    report.sigma = sigma_direct(inst);

    // Direct side: weighted count of soluble fibres. Solubility is decided
    // exactly, so the root search must stay in its supported range.
    report.s_of_a = 0;
    report.min_clean = inst.prime_count();
    bool any_counted = false;
    for (std::size_t k = 0; k < support.size(); ++k) {
        if (support[k].weight == 0 || ghz[k]) continue;
        IntPoly fx = inst.family().specialize(support[k].point);
        if (fx.is_zero()) continue;  // h(n) = 0 is already excluded above
        if (fx.cauchy_bound() >= 1'000'000)
            throw std::invalid_argument(
                "sieve_bound: specialized polynomial root bound exceeds 10^6");
        if (!has_integer_root(fx)) continue;
        any_counted = true;
        report.s_of_a += support[k].weight;
        i64 dividing = 0;
        for (std::size_t a = 0; a < inst.primes().size(); ++a)
            if (div[k][a]) ++dividing;
        report.min_clean = std::min(report.min_clean, inst.prime_count() - dividing);
    }
    if (!any_counted) report.min_clean = 0;

    // Bound side: the (p,q) cells are independent; compute them in a fixed
    // partition and merge in index order.
    const auto& primes = inst.primes();
    const i64 np = static_cast<i64>(primes.size());
    const i64 cells = np * np;
    std::vector<Rational> cell_abs(static_cast<std::size_t>(cells));
    std::vector<std::map<std::tuple<i64, i64, int, int>, Rational>> cell_tables(
        static_cast<std::size_t>(cells));
    inst.nu_table();  // materialize caches before the parallel section
    run_partitioned(cells, worker_count(workers), [&](int, std::int64_t b, std::int64_t e) {
        for (std::int64_t cell = b; cell < e; ++cell) {
            i64 p = primes[static_cast<std::size_t>(cell / np)];
            i64 q = primes[static_cast<std::size_t>(cell % np)];
            Rational inner = 0;
            for (int i = 0; i <= 2; ++i)
                for (int j = 0; j <= 2; ++j) {
                    Rational val = s_ij(inst, i, j, p, q);
                    cell_tables[static_cast<std::size_t>(cell)][{p, q, i, j}] = val;
                    inner += val * coeff_c(i, j, inst.alpha(), inst.family().degree());
                }
            cell_abs[static_cast<std::size_t>(cell)] = inner < 0 ? Rational(-inner) : inner;
        }
    });
    Rational total = 0;
    for (i64 cell = 0; cell < cells; ++cell) {
        total += cell_abs[static_cast<std::size_t>(cell)];
        for (auto& kv : cell_tables[static_cast<std::size_t>(cell)])
            report.sij_table.insert(kv);
    }
    report.bound_value = total / (np * np);
    report.lower_bound_holds =
        report.sigma >= report.s_of_a * (report.min_clean * report.min_clean);
    return report;
}

std::pair<i64, i64> square_sieve_identity(i64 n, i64 p, i64 q, i64 alpha) {
    if (p == 2 || q == 2 || !is_prime(p) || !is_prime(q))
        throw std::invalid_argument("square_sieve_identity: p, q must be odd primes");
    i128 two_n = static_cast<i128>(2) * n;
    if (mod_reduce(two_n, p) == 0 || mod_reduce(two_n, q) == 0)
        throw std::invalid_argument("square_sieve_identity: gcd(pq, 2n) != 1");
    const i64 d = 2;
    i64 chi_p = legendre(n, p), chi_q = legendre(n, q);
    i64 nu_p_val = 1 + chi_p, nu_q_val = 1 + chi_q;
    i64 lhs = 0;
    for (int i = 0; i <= 2; ++i)
        for (int j = 0; j <= 2; ++j)
            lhs += coeff_c(i, j, alpha, d) * ipow(nu_p_val, i) * ipow(nu_q_val, j);
    i64 rhs = (alpha - 1) * (alpha - 1) + (alpha - 1) * (chi_p + chi_q) + chi_p * chi_q;
    return {lhs, rhs};
}

}  // namespace polysieve
