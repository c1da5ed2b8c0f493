#include "signspan/verify.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "signspan/bounds.hpp"
#include "signspan/estimators.hpp"
#include "signspan/span_events.hpp"

namespace signspan {

PointConfig random_spanning_config(CounterRng& rng) {
    for (;;) {
        const int ambient = 3 + static_cast<int>(rng.next_below(3));
        const int t = ambient + static_cast<int>(rng.next_below(9 - ambient));
        IntMatrix pts(t, std::vector<long long>(ambient));
        for (auto& row : pts)
            for (auto& v : row) v = static_cast<long long>(rng.next_below(7)) - 3;
        try {
            PointConfig h = PointConfig::create(ambient, std::move(pts));
            if (h.spans_ambient()) return h;
        } catch (const std::invalid_argument&) {
            // zero vector or duplicate point; redraw
        }
    }
}

PointConfig random_degenerate_config(CounterRng& rng) {
    for (;;) {
        const int ambient = 3 + static_cast<int>(rng.next_below(3));
        const int t = 2 + static_cast<int>(rng.next_below(7));
        const int dead = static_cast<int>(rng.next_below(ambient));
        IntMatrix pts(t, std::vector<long long>(ambient));
        for (auto& row : pts)
            for (int j = 0; j < ambient; ++j)
                row[j] = j == dead ? 0 : static_cast<long long>(rng.next_below(7)) - 3;
        try {
            return PointConfig::create(ambient, std::move(pts));
        } catch (const std::invalid_argument&) {
        }
    }
}

PointConfig generic_points_config(int ambient, int count) {
    IntMatrix pts(count, std::vector<long long>(ambient));
    for (int i = 0; i < count; ++i) {
        long long v = 1;
        for (int j = 0; j < ambient; ++j) {
            pts[i][j] = v;
            v *= i + 1;
        }
    }
    return PointConfig::create(ambient, std::move(pts));
}

PointConfig en_config(int k) {
    const int t = 1 << k;
    IntMatrix pts(t, std::vector<long long>(k + 1));
    for (int b = 0; b < t; ++b) {
        pts[b][0] = 1;
        for (int j = 0; j < k; ++j) pts[b][j + 1] = (b >> j) & 1 ? -1 : 1;
    }
    return PointConfig::create(k + 1, std::move(pts));
}

PointConfig basis_config(int ambient) {
    IntMatrix pts(ambient, std::vector<long long>(ambient, 0));
    for (int i = 0; i < ambient; ++i) pts[i][i] = 1;
    return PointConfig::create(ambient, std::move(pts));
}

std::vector<std::vector<Rational>> standard_weight_sets(int t) {
    std::vector<std::vector<Rational>> sets;
    std::vector<Rational> delta(t, Rational(0));
    delta[0] = 1;
    sets.push_back(std::move(delta));
    sets.emplace_back(t, Rational(1, t));
    std::vector<Rational> negative(t, Rational(0));
    negative[0] = 2;
    negative[1] = -1;
    sets.push_back(std::move(negative));
    return sets;
}

bool triple_pattern_matches(int n, int sign, std::uint64_t* counted, std::uint64_t* expected) {
    const std::uint64_t size = std::uint64_t{1} << n;
    const std::uint64_t mask = SignVector::mask(n);
    std::uint64_t count = 0;
    for (std::uint64_t a = 0; a < size; ++a)
        for (std::uint64_t b = 0; b < size; ++b)
            for (std::uint64_t c = 0; c < size; ++c) {
                // |a_j + b_j (+-) c_j| == 3 exactly at the masked positions
                const std::uint64_t bad = sign > 0 ? ~(a ^ b) & ~(a ^ c) & mask
                                                   : ~(a ^ b) & (a ^ c) & mask;
                if (bad == 0) ++count;
            }

    // Per-coordinate oracle: the coordinates are independent, so the count is
    // (number of admissible sign triples)^n.
    std::uint64_t per_coord = 0;
    for (int s1 : {1, -1})
        for (int s2 : {1, -1})
            for (int s3 : {1, -1})
                if (std::abs(s1 + s2 + sign * s3) == 1) ++per_coord;
    std::uint64_t expect = 1;
    for (int j = 0; j < n; ++j) expect *= per_coord;

    if (counted) *counted = count;
    if (expected) *expected = expect;
    return count == expect;
}

namespace {

std::string big_str(const BigInt& v) { return v.str(); }

void check_eta_identity(const BatteryOptions& opts, CheckResult& r) {
    FlagSumOptions fopts;
    fopts.negate_top_weight_mutation = opts.inject_flag_sign_error;
    CounterRng rng = CounterRng::stream(opts.seed, 101);
    int failures = 0;
    int ran = 0;
    for (int s = 0; s < opts.samples; ++s) {
        const PointConfig h = random_spanning_config(rng);
        const auto cc = cross_check_eta_star(h, standard_weight_sets(h.size()), fopts);
        ++ran;
        if (!cc.pass) ++failures;
    }
    for (int k : {2, 3}) {
        const PointConfig h = en_config(k);
        const auto cc = cross_check_eta_star(h, standard_weight_sets(h.size()), fopts);
        ++ran;
        if (!cc.pass) ++failures;
    }
    r.pass = failures == 0;
    std::ostringstream d;
    d << ran << " configurations, 3 weight sets each (one negative), " << failures << " mismatches";
    r.detail = d.str();
}

void check_eta_closed_forms(CheckResult& r) {
    r.pass = true;
    std::ostringstream d;
    for (int n = 2; n <= 4; ++n) {
        const PointConfig basis = basis_config(n + 1);
        const long long hb = eta_star_homology(basis);
        const Rational fb = eta_star_flagsum(basis);
        const PointConfig generic = generic_points_config(n + 1, n + 2);
        const long long hg = eta_star_homology(generic);
        const Rational fg = eta_star_flagsum(generic);
        if (hb != 1 || fb != 1 || hg != n + 1 || fg != n + 1) r.pass = false;
        d << "n=" << n << ": basis " << hb << "/" << fb << ", generic " << hg << "/" << fg << "; ";
    }
    r.detail = d.str();
}

void check_eta_degenerate(const BatteryOptions& opts, CheckResult& r) {
    CounterRng rng = CounterRng::stream(opts.seed, 102);
    r.pass = true;
    for (int s = 0; s < 20; ++s) {
        const PointConfig h = random_degenerate_config(rng);
        if (eta_star_homology(h) != 0 || eta_star_flagsum(h) != 0) r.pass = false;
    }
    r.detail = "20 non-spanning configurations, both evaluations zero";
}

void check_kso_small_p(const BatteryOptions& opts, CheckResult& r) {
    r.pass = true;
    ExactOptions eo;
    eo.workers = opts.workers;
    for (int n = 1; n <= 6; ++n) {
        const auto res = exact_event_probability(EventSpec{EventKind::kKso, 1, n, 0}, eo);
        if (res.count != 0) r.pass = false;
    }
    for (int n = 2; n <= 4; ++n) {
        const auto res = exact_event_probability(EventSpec{EventKind::kKso, 2, n, 0}, eo);
        if (res.count != 0) r.pass = false;
    }
    if (binomial(1ul, 3ul) != 0 || binomial(2ul, 3ul) != 0) r.pass = false;
    r.detail = "exact KSO probability 0 for p=1 (n<=6) and p=2 (n<=4); main term vanishes for p<3";
}

void check_triples(CheckResult& r) {
    r.pass = true;
    std::uint64_t got = 0, want = 0;
    for (int n = 1; n <= 6; ++n)
        for (int sign : {1, -1})
            if (!triple_pattern_matches(n, sign, &got, &want)) r.pass = false;
    r.detail = "sum and difference triple patterns match the per-coordinate product for n<=6";
}

void check_support2(const BatteryOptions& opts, CheckResult& r) {
    r.pass = true;
    long long pairs = 0;
    auto probe = [&](int n, std::uint64_t a, std::uint64_t b) {
        SignMatrix m(2, n);
        m.rows[0] = SignVector(n, a);
        m.rows[1] = SignVector(n, b);
        if (canonical_bits(n, a) == canonical_bits(n, b)) return;  // dependent pair
        const auto census = witness_support_census(m);  // throws on a support-2 class
        if (census.count(2)) r.pass = false;
        ++pairs;
    };
    for (int n = 2; n <= 5; ++n) {
        const std::uint64_t size = std::uint64_t{1} << n;
        for (std::uint64_t a = 0; a < size; ++a)
            for (std::uint64_t b = 0; b < size; ++b) probe(n, a, b);
    }
    CounterRng rng = CounterRng::stream(opts.seed, 103);
    for (int s = 0; s < 10000; ++s) {
        const int n = 2 + static_cast<int>(rng.next_below(15));
        probe(n, rng.next() & SignVector::mask(n), rng.next() & SignVector::mask(n));
    }
    std::ostringstream d;
    d << pairs << " independent pairs, no support-2 witness class";
    r.detail = d.str();
}

void check_census_example(CheckResult& r) {
    const SignMatrix m = parse_sign_matrix_text("+++\n+-+\n+--\n");
    const auto census = witness_support_census(m);
    const auto witness = kso_check(m);
    r.pass = census.size() == 2 && census.at(1) == 3 && census.at(3) == 1 && witness.has_value() &&
             witness->witness == SignVector(3, 0b100) && witness->support == 3;
    if (witness && r.pass) {
        const std::vector<Rational> want{Rational(1), Rational(-1), Rational(1)};
        if (witness->coefficients != want) r.pass = false;
    }
    r.detail = "three independent rows: census {1:3, 3:1}, witness (+,+,-) with coefficients (1,-1,1)";
}

void check_symmetry(const BatteryOptions& opts, CheckResult& r) {
    r.pass = true;
    const std::vector<EventSpec> specs = {
        {EventKind::kKso, 2, 3, 0},           {EventKind::kKso, 3, 4, 0},
        {EventKind::kKso, 3, 5, 0},           {EventKind::kSingularPm1, 2, 2, 0},
        {EventKind::kSingularPm1, 3, 3, 0},   {EventKind::kSupportM, 3, 4, 3},
        {EventKind::kSupportMIndep, 3, 5, 3}, {EventKind::kRankDeficient, 3, 5, 0},
    };
    for (const auto& e : specs) {
        ExactOptions with{true, false, opts.workers};
        ExactOptions without{false, false, opts.workers};
        if (exact_event_probability(e, with).count != exact_event_probability(e, without).count)
            r.pass = false;
    }
    r.detail = "first-row-pinned counts match plain exhaustion on every event family (p*n <= 16)";
}

void check_tuple_counts(const BatteryOptions& opts, CheckResult& r) {
    r.pass = true;
    std::ostringstream d;
    if (count_kso_independent_tuples(1) != 0) r.pass = false;
    if (count_kso_independent_tuples(2) != 0) r.pass = false;
    for (int n = 2; n <= 3; ++n) {
        const BigInt lhs = count_kso_independent_tuples(n, false, opts.workers);
        const auto all = exact_event_probability(EventSpec{EventKind::kKso, n, n + 1, 0},
                                                 ExactOptions{true, false, opts.workers});
        const BigInt rhs = all.count >> n;  // 2^{n^2} * probability, exactly
        if (lhs > rhs) r.pass = false;
        d << "n=" << n << ": " << big_str(lhs) << (lhs == rhs ? " == " : " < ") << big_str(rhs)
          << "; ";
    }
    r.detail = d.str() + "tuple count never exceeds the all-matrix bound";
}

void check_decomposition(const BatteryOptions& opts, CheckResult& r) {
    r.pass = true;
    std::map<std::pair<int, int>, EventTally> tallies;
    ExactOptions eo;
    eo.workers = opts.workers;
    for (int p = 2; p <= 4; ++p)
        for (int n = p; n <= 5; ++n) tallies[{p, n}] = exhaustive_event_tally(p, n, eo);

    int checked = 0;
    for (const auto& [key, t] : tallies) {
        const auto [p, n] = key;
        for (int m = 2; m <= p; ++m) {
            // Counted form of the subset bound.
            const auto& small = tallies.at({m, n});
            const BigInt rhs = binomial(static_cast<unsigned long>(p), static_cast<unsigned long>(m)) *
                               small.support_indep[m] * pow2(static_cast<unsigned>((p - m) * n));
            if (t.support_indep[m] > rhs) r.pass = false;
            // Event splits by rank.
            if (t.support[m] > t.support_indep[m] + t.rank_deficient) r.pass = false;
            ++checked;
        }
        BigInt indep_union = 0;
        for (int m = 3; m <= p; ++m) indep_union += t.support_indep[m];
        if (t.kso > indep_union + t.rank_deficient) r.pass = false;
    }
    std::ostringstream d;
    d << tallies.size() << " exhaustive tallies (p<=4, n<=5), " << checked
      << " subset/rank bounds hold on exact counts";
    r.detail = d.str();
}

void check_elo(const BatteryOptions& opts, CheckResult& r) {
    r.pass = true;
    CounterRng rng = CounterRng::stream(opts.seed, 104);
    for (int s = 0; s < 1000; ++s) {
        const int m = 1 + static_cast<int>(rng.next_below(12));
        long long num[12], den[12];
        long long common = 1;
        for (int i = 0; i < m; ++i) {
            num[i] = static_cast<long long>(rng.next_below(18)) - 9;
            if (num[i] >= 0) ++num[i];  // nonzero in [-9,9]
            den[i] = 1 + static_cast<long long>(rng.next_below(9));
            common = std::lcm(common, den[i]);
        }
        long long scaled[12];
        for (int i = 0; i < m; ++i) scaled[i] = num[i] * (common / den[i]);
        // Gray walk over {+-1}^m, dot updated incrementally.
        long long dot = 0;
        for (int i = 0; i < m; ++i) dot += scaled[i];
        std::uint64_t signs = 0;
        long long hits = 0;
        const std::uint64_t total = std::uint64_t{1} << m;
        for (std::uint64_t g = 0;; ++g) {
            if (dot == common || dot == -common) ++hits;
            if (g + 1 == total) break;
            const int j = std::countr_zero(g + 1);
            const long long step = ((signs >> j) & 1) ? 2 : -2;
            signs ^= std::uint64_t{1} << j;
            dot += step * scaled[j];
        }
        const BigInt cap = 2 * binomial(static_cast<unsigned long>(m), static_cast<unsigned long>(m / 2));
        if (BigInt(hits) > cap) r.pass = false;
        if (elo_column_bound(m) * Rational(pow2(static_cast<unsigned>(m))) != Rational(cap))
            r.pass = false;
    }
    r.detail = "1000 random nonzero rational combinations (m<=12): counts within 2*C(m,m/2)";
}

void check_delta(CheckResult& r) {
    r.pass = true;
    for (int n = 1; n <= 4; ++n)
        if (delta_dependent_fraction(n, 1) != 0) r.pass = false;
    if (delta_dependent_fraction(2, 3) != 0) r.pass = false;
    if (delta_dependent_fraction(3, 2) != 0) r.pass = false;
    r.detail = "single points and pairs independent; all triples from the 4-point square independent";
}

void check_singular_exact(const BatteryOptions& opts, CheckResult& r) {
    r.pass = true;
    ExactOptions eo;
    eo.workers = opts.workers;
    std::ostringstream d;
    for (int n = 2; n <= 4; ++n) {
        const auto res = exact_event_probability(EventSpec{EventKind::kSingularPm1, n, n, 0}, eo);
        if (n == 2 && res.probability != Rational(1, 2)) r.pass = false;
        d << "P_" << n << "=" << to_fraction_string(res.probability) << " ";
        if (n <= 3) {
            const auto est = mc_estimate(EventSpec{EventKind::kSingularPm1, n, n, 0}, 100000,
                                         opts.seed + n, 0.99, opts.workers);
            const double exact = res.probability.convert_to<double>();
            if (exact < est.ci_low || exact > est.ci_high) r.pass = false;
        }
    }
    r.detail = d.str() + "(n=2 exactly 1/2; Monte Carlo intervals cover the exact values)";
}

void check_bounds_cross(CheckResult& r) {
    double worst = 0;
    for (long n : {4L, 8L, 16L, 23L, 32L, 47L, 64L})
        worst = std::max(worst, bounds_cross_deviation(n, default_epsilon(), default_case_constant()));
    r.pass = worst < 1e-12;
    std::ostringstream d;
    d << "max relative deviation " << worst << " between evaluators";
    r.detail = d.str();
}

void check_wilson(CheckResult& r) {
    r.pass = true;
    if (wilson_interval(0, 100, 0.95).first != 0.0) r.pass = false;
    if (wilson_interval(100, 100, 0.95).second != 1.0) r.pass = false;
    // Closed-form recomputation in a different arrangement.
    const auto [lo, hi] = wilson_interval(50, 100, 0.95);
    const double z = normal_quantile(0.975);
    const double t = 100, ph = 0.5;
    const double lo2 =
        (2 * t * ph + z * z - z * std::sqrt(z * z + 4 * t * ph * (1 - ph))) / (2 * (t + z * z));
    const double hi2 =
        (2 * t * ph + z * z + z * std::sqrt(z * z + 4 * t * ph * (1 - ph))) / (2 * (t + z * z));
    if (std::abs(lo - lo2) > 1e-12 || std::abs(hi - hi2) > 1e-12) r.pass = false;
    if (std::abs((lo + hi) / 2 - 0.5) > 1e-12) r.pass = false;
    r.detail = "endpoints exact at 0 and all hits; midpoint case matches the quadratic form";
}

void check_determinism(const BatteryOptions& opts, CheckResult& r) {
    r.pass = true;
    const EventSpec e{EventKind::kKso, 4, 10, 0};
    const Estimate one = mc_estimate(e, 2000, opts.seed, 0.95, 1);
    for (unsigned w : {1u, 2u, 8u}) {
        const Estimate est = mc_estimate(e, 2000, opts.seed, 0.95, w);
        if (est.hits != one.hits || est.p_hat != one.p_hat || est.ci_low != one.ci_low ||
            est.ci_high != one.ci_high)
            r.pass = false;
    }
    const EventSpec x{EventKind::kKso, 3, 4, 0};
    const BigInt c1 = exact_event_probability(x, ExactOptions{true, false, 1}).count;
    for (unsigned w : {2u, 8u}) {
        if (exact_event_probability(x, ExactOptions{true, false, w}).count != c1) r.pass = false;
    }
    r.detail = "estimates and exact counts identical across 1, 2, 8 workers";
}

}  // namespace

std::vector<CheckResult> run_battery(const BatteryOptions& opts) {
    std::vector<CheckResult> results;
    auto add = [&](const std::string& name, auto&& fn) {
        if (!opts.only.empty() && name.find(opts.only) == std::string::npos) return;
        CheckResult r;
        r.name = name;
        try {
            fn(r);
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        results.push_back(std::move(r));
    };

    add("eta-identity", [&](CheckResult& r) { check_eta_identity(opts, r); });
    add("eta-closed-forms", [&](CheckResult& r) { check_eta_closed_forms(r); });
    add("eta-degenerate", [&](CheckResult& r) { check_eta_degenerate(opts, r); });
    add("kso-small-p", [&](CheckResult& r) { check_kso_small_p(opts, r); });
    add("triples", [&](CheckResult& r) { check_triples(r); });
    add("support2", [&](CheckResult& r) { check_support2(opts, r); });
    add("census-example", [&](CheckResult& r) { check_census_example(r); });
    add("symmetry", [&](CheckResult& r) { check_symmetry(opts, r); });
    add("tuple-count", [&](CheckResult& r) { check_tuple_counts(opts, r); });
    add("decomposition", [&](CheckResult& r) { check_decomposition(opts, r); });
    add("elo-dominance", [&](CheckResult& r) { check_elo(opts, r); });
    add("delta", [&](CheckResult& r) { check_delta(r); });
    add("singular-exact", [&](CheckResult& r) { check_singular_exact(opts, r); });
    add("bounds-cross", [&](CheckResult& r) { check_bounds_cross(r); });
    add("wilson", [&](CheckResult& r) { check_wilson(r); });
    add("determinism", [&](CheckResult& r) { check_determinism(opts, r); });
    return results;
}

}  // namespace signspan
