#include "polysieve/counting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polysieve/parallel.hpp"

namespace polysieve {

namespace {

constexpr i64 kHardBoxCap = 50'000;
constexpr i64 kPairCountCap = 100'000'000;

std::vector<i128> value_table(const IntPoly& f, i64 B) {
    std::vector<i128> v(static_cast<std::size_t>(B) + 1, 0);
    for (i64 y = 1; y <= B; ++y) v[static_cast<std::size_t>(y)] = f.eval(y);
    return v;
}

// Meet-in-the-middle core: fills one pair-sum block per worker, sorts each
// block, then streams a deterministic W-way merge through `consume(value,
// run_length)`. The merged order is the sorted multiset, so results do not
// depend on the worker count.
template <typename Sum, typename Consume>
void merge_pair_sums(const std::vector<i128>& values, i64 B, int workers, Consume&& consume) {
    const i64 total = B * B;
    std::vector<Sum> sums(static_cast<std::size_t>(total));
    std::vector<std::pair<i64, i64>> blocks;  // [begin, end) in pair index space
    {
        i64 per = (B + workers - 1) / workers;
        for (i64 y0 = 1; y0 <= B; y0 += per) {
            i64 y1 = std::min(B, y0 + per - 1);
            blocks.emplace_back((y0 - 1) * B, y1 * B);
        }
    }
    run_partitioned(static_cast<i64>(blocks.size()), workers,
                    [&](int, std::int64_t bb, std::int64_t be) {
                        for (std::int64_t bi = bb; bi < be; ++bi) {
                            auto [begin, end] = blocks[static_cast<std::size_t>(bi)];
                            for (i64 idx = begin; idx < end; ++idx) {
                                i64 y = idx / B + 1, z = idx % B + 1;
                                sums[static_cast<std::size_t>(idx)] = static_cast<Sum>(
                                    values[static_cast<std::size_t>(y)] +
                                    values[static_cast<std::size_t>(z)]);
                            }
                            std::sort(sums.begin() + begin, sums.begin() + end);
                        }
                    });
    // W-way merge with run-length counting.
    std::vector<i64> head(blocks.size());
    for (std::size_t i = 0; i < blocks.size(); ++i) head[i] = blocks[i].first;
    bool have_current = false;
    Sum current{};
    i64 run = 0;
    while (true) {
        int best = -1;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            if (head[i] >= blocks[i].second) continue;
            if (best < 0 || sums[static_cast<std::size_t>(head[i])] <
                                sums[static_cast<std::size_t>(head[static_cast<std::size_t>(best)])])
                best = static_cast<int>(i);
        }
        if (best < 0) break;
        Sum v = sums[static_cast<std::size_t>(head[static_cast<std::size_t>(best)])];
        ++head[static_cast<std::size_t>(best)];
        if (have_current && v == current) {
            ++run;
        } else {
            if (have_current) consume(current, run);
            current = v;
            run = 1;
            have_current = true;
        }
    }
    if (have_current) consume(current, run);
}

bool fits_i64(const std::vector<i128>& values) {
    constexpr i128 cap = static_cast<i128>(1) << 62;
    for (i128 v : values)
        if (v >= cap || v <= -cap) return false;
    return true;
}

}  // namespace

i64 count_E(const IntPoly& f, i64 B, int workers) {
    if (B < 0) throw std::invalid_argument("count_E: B must be nonnegative");
    if (B > kHardBoxCap) throw std::invalid_argument("count_E: B exceeds the 5*10^4 cap");
    if (B == 0) return 0;
    if (f.is_zero()) throw std::invalid_argument("count_E: zero polynomial");
    auto values = value_table(f, B);
    const int w = worker_count(workers);
    i128 sum_k2 = 0;
    auto consume = [&](auto, i64 k) { sum_k2 += static_cast<i128>(k) * k; };
    if (fits_i64(values))
        merge_pair_sums<i64>(values, B, w, consume);
    else
        merge_pair_sums<i128>(values, B, w, consume);
    i128 trivial = static_cast<i128>(2) * B * B - B;
    i128 out = sum_k2 - trivial;
    if (out > INT64_MAX) throw std::overflow_error("count_E: count out of range");
    return static_cast<i64>(out);
}

namespace {

// Unordered pair-sum entries (value, multiplicity) with value <= N, sorted.
// multiplicity is 2 off the diagonal and 1 on it.
struct PairEntry {
    i128 value;
    i64 mult;
    bool operator<(const PairEntry& other) const { return value < other.value; }
};

std::vector<PairEntry> bounded_pairs(const IntPoly& f, i128 N, i64* diag_count) {
    if (f.is_zero() || f.leading() <= 0)
        throw std::invalid_argument("moment counts: need a positive leading coefficient");
    // Increasing on the positive integers is a precondition; verify as we
    // scan so a bad f is an error rather than a wrong count.
    std::vector<i128> vals;
    const i128 f1 = f.eval(1);
    i128 prev = f1 - 1;
    for (i64 y = 1;; ++y) {
        i128 v = f.eval(y);
        if (v <= prev)
            throw std::invalid_argument("moment counts: polynomial not increasing on y >= 1");
        prev = v;
        if (v + f1 > N) break;  // f increasing: no later y can pair under N
        vals.push_back(v);
    }
    const i64 ymax = static_cast<i64>(vals.size());
    if (ymax * (ymax + 1) / 2 > kPairCountCap)
        throw std::invalid_argument("moment counts: pair enumeration exceeds cap");
    std::vector<PairEntry> entries;
    i64 diag = 0;
    for (i64 y = 1; y <= ymax; ++y) {
        i128 vy = vals[static_cast<std::size_t>(y - 1)];
        if (vy + vy <= N) ++diag;
        for (i64 z = y; z <= ymax; ++z) {
            i128 sum = vy + vals[static_cast<std::size_t>(z - 1)];
            if (sum > N) break;
            entries.push_back({sum, y == z ? 1 : 2});
        }
    }
    std::sort(entries.begin(), entries.end());
    if (diag_count) *diag_count = diag;
    return entries;
}

}  // namespace

std::map<i128, i64> r_table(const IntPoly& f, i128 N) {
    std::map<i128, i64> out;
    for (const auto& e : bounded_pairs(f, N, nullptr)) out[e.value] += e.mult;
    return out;
}

MomentReport moments(const IntPoly& f, i128 N) {
    MomentReport report;
    report.N = N;
    i64 diag = 0;
    auto entries = bounded_pairs(f, N, &diag);
    report.D = diag;
    i128 R = 0, R2 = 0, Estar = 0;
    std::size_t i = 0;
    while (i < entries.size()) {
        std::size_t j = i;
        i64 k = 0;
        i128 class_sq = 0;
        while (j < entries.size() && entries[j].value == entries[i].value) {
            k += entries[j].mult;
            class_sq += static_cast<i128>(entries[j].mult) * entries[j].mult;
            ++j;
        }
        R += k;
        R2 += static_cast<i128>(k) * k;
        Estar += static_cast<i128>(k) * k - class_sq;
        i = j;
    }
    if (R2 != 2 * R - report.D + Estar)
        throw std::logic_error("moments: internal identity R2 = 2R - D + E* failed");
    if (R > INT64_MAX || R2 > INT64_MAX)
        throw std::overflow_error("moments: counts out of range");
    report.R = static_cast<i64>(R);
    report.R2 = static_cast<i64>(R2);
    report.Estar = static_cast<i64>(Estar);
    return report;
}

std::vector<GrowthRow> growth_scan(const IntPoly& f, const std::vector<i64>& b_list,
                                   int workers) {
    std::vector<GrowthRow> rows;
    i64 prev_b = -1, prev_e = -1;
    for (i64 B : b_list) {
        GrowthRow row;
        row.B = B;
        row.E = count_E(f, B, workers);
        if (prev_b >= 0 && B >= prev_b && row.E < prev_e)
            throw std::logic_error("growth_scan: E decreased while B increased");
        prev_b = B;
        prev_e = row.E;
        double b = static_cast<double>(B);
        row.e_over_b2 = static_cast<double>(row.E) / (b * b);
        row.e_over_b_five_sixths = static_cast<double>(row.E) / std::pow(b, 2.0 - 1.0 / 6.0);
        rows.push_back(row);
    }
    return rows;
}

CensusResult census_n1_n2(QuarticParams params, i64 B, i64 C, i64 H) {
    if (B < 0 || B > 500) throw std::invalid_argument("census: B must lie in [0, 500]");
    CensusResult result;
    IntPoly f = params.to_poly();
    if (B == 0) return result;

    // Unordered value classes keyed by pair sum.
    struct ClassEntry {
        i128 sum;
        i64 y, z;  // y <= z
        i64 count;  // ordered pairs realizing the class: 1 or 2
    };
    std::vector<ClassEntry> classes;
    std::vector<i128> values = value_table(f, B);
    for (i64 y = 1; y <= B; ++y)
        for (i64 z = y; z <= B; ++z)
            classes.push_back({values[static_cast<std::size_t>(y)] +
                                   values[static_cast<std::size_t>(z)],
                               y, z, y == z ? 1 : 2});
    std::sort(classes.begin(), classes.end(),
              [](const ClassEntry& a, const ClassEntry& b) {
                  if (a.sum != b.sum) return a.sum < b.sum;
                  if (a.y != b.y) return a.y < b.y;
                  return a.z < b.z;
              });

    std::size_t i = 0;
    while (i < classes.size()) {
        std::size_t j = i;
        while (j < classes.size() && classes[j].sum == classes[i].sum) ++j;
        for (std::size_t a = i; a < j; ++a)
            for (std::size_t b = a + 1; b < j; ++b) {
                i64 orbit = 2 * classes[a].count * classes[b].count;
                std::array<i64, 4> quad{classes[a].y, classes[a].z, classes[b].y,
                                        classes[b].z};
                try {
                    TransformedSolution ts = forward_transform(quad, params);
                    Classification cls = classify_solution(ts, C, H);
                    (cls.cls == SolutionClass::N1 ? result.n1 : result.n2) += orbit;
                    result.records.push_back({ts, cls, orbit});
                } catch (const TransformError& err) {
                    if (err.fault() == TransformFault::EqualDifferences)
                        result.degenerate += orbit;
                    else if (err.fault() == TransformFault::NonCanonical)
                        result.unclassified += orbit;
                    else
                        throw;
                }
            }
        i = j;
    }
    result.total = result.n1 + result.n2 + result.degenerate + result.unclassified;
    if (result.total != count_E(f, B))
        throw std::logic_error("census: totals do not reconcile with the quadruple count");
    return result;
}

}  // namespace polysieve
