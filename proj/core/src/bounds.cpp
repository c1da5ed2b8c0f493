#include "signspan/bounds.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>

namespace signspan {

namespace {

void check_epsilon(const Rational& epsilon) {
    if (!(epsilon > 0 && epsilon < Rational(1, 100)))
        throw std::invalid_argument("bounds: need 0 < epsilon < 1/100");
}

void check_case_constant(const Rational& c) {
    if (c < Rational(184, 25)) throw std::invalid_argument("bounds: need c >= 7.36");
}

template <typename R>
R real_of(const Rational& q) {
    return R(q);
}

}  // namespace

Rational p3_main_term(long p, long n) {
    if (p < 3) throw std::invalid_argument("p3_main_term: p >= 3");
    if (n < 0) throw std::invalid_argument("p3_main_term: n >= 0");
    return Rational(4) * Rational(binomial(static_cast<unsigned long>(p), 3)) *
           pow_rational(Rational(3, 4), n);
}

Rational elo_column_bound(long m) {
    if (m < 1) throw std::invalid_argument("elo_column_bound: m >= 1");
    return Rational(2 * binomial(static_cast<unsigned long>(m), static_cast<unsigned long>(m / 2)),
                    pow2(static_cast<unsigned>(m)));
}

Rational rm_case1_bound(long m, long p, long n) {
    if (!(1 <= m && m <= p && p <= n))
        throw std::invalid_argument("rm_case1_bound: need 1 <= m <= p <= n");
    const Rational per_column(binomial(static_cast<unsigned long>(m), static_cast<unsigned long>(m / 2)),
                              pow2(static_cast<unsigned>(m)));
    return Rational(pow2(static_cast<unsigned>(n))) *
           Rational(binomial(static_cast<unsigned long>(p), static_cast<unsigned long>(m))) *
           Rational(binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(m))) *
           pow_rational(per_column, n - m);
}

std::string case_label_name(CaseLabel c) {
    switch (c) {
        case CaseLabel::kDirect: return "direct";
        case CaseLabel::kCase1: return "case1";
        case CaseLabel::kCase2: return "case2";
        case CaseLabel::kCase3: return "case3";
    }
    return "?";
}

CaseLabel case_partition(long m, long n, const Rational& epsilon, const Rational& c) {
    check_epsilon(epsilon);
    check_case_constant(c);
    if (!(3 <= m && m <= n - 1))
        throw std::invalid_argument("case_partition: need 3 <= m <= n-1");
    if (m == 3 || m == 4) return CaseLabel::kDirect;
    if (Rational(m) <= epsilon * epsilon * Rational(n)) return CaseLabel::kCase1;

    // Case 2 iff (n - m) log2(n) >= c n.  The threshold is rational exactly
    // when n is a power of two; otherwise equality is impossible and high
    // precision settles the comparison.
    bool case2;
    if ((n & (n - 1)) == 0) {
        long k = 0;
        while ((1L << k) < n) ++k;
        case2 = Rational(n - m) * k >= c * Rational(n);
    } else {
        const RealHi lhs = RealHi(n - m) * log2(RealHi(n));
        const RealHi rhs = real_of<RealHi>(c) * n;
        case2 = lhs >= rhs;
    }
    return case2 ? CaseLabel::kCase2 : CaseLabel::kCase3;
}

LemmaBounds lemma_bounds(long n, const Rational& epsilon, const Rational& c) {
    check_epsilon(epsilon);
    check_case_constant(c);
    if (n < 4) throw std::invalid_argument("lemma_bounds: n >= 4");

    LemmaBounds out;
    out.b1_exact = pow_rational(Rational(5, 8), n) * pow_rational(Rational(1) + epsilon, n);
    const Real eps = real_of<Real>(epsilon);
    const Real cc = real_of<Real>(c);
    out.b1 = pow(Real(5) / 8, n) * pow(Real(1) + eps, n);

    const Real l = log2(Real(n));
    const Real pi = boost::math::constants::pi<Real>();
    out.b2 = pow(Real(2), Real(3 * n) - cc * n / 2) * pow(Real(2) / (pi * eps * eps), cc * n / (2 * l));

    const Real e = boost::math::constants::e<Real>();
    out.b3 = pow(e * l / cc, 2 * cc * n / l) * Real(n) * n / pow(Real(2), Real(n) - cc * n / l);
    return out;
}

std::vector<BoundRow> misc_asymptotes(long n) {
    if (n < 2) throw std::invalid_argument("misc_asymptotes: n >= 2");
    const BigInt space = pow2(static_cast<unsigned>(n)) - 1;  // 2^n - 1
    std::vector<BoundRow> rows;

    auto push = [&](const std::string& name, Rational exact) {
        BoundRow r;
        r.name = name;
        r.n = n;
        r.value = real_of<Real>(exact);
        r.exact = std::move(exact);
        rows.push_back(std::move(r));
    };

    push("threshold-main-term", Rational(2 * binomial(space, static_cast<unsigned long>(n))));
    push("singularity-asymptote",
         Rational(BigInt(n - 1) * (n - 1) * 2, pow2(static_cast<unsigned>(n))));
    BigInt schl = 0;
    for (long i = 0; i <= n; ++i) schl += binomial(space, static_cast<unsigned long>(i));
    push("schlafli-bound", Rational(2 * schl));
    push("kso-tuple-fraction-bound", Rational(BigInt(n) * n, pow2(static_cast<unsigned>(n - 1))));
    push("rankdef-leading", Rational(BigInt(n - 1) * (n - 1), pow2(static_cast<unsigned>(n - 1))));
    return rows;
}

std::vector<BoundRow> bound_table(long n, const Rational& epsilon, const Rational& c) {
    if (n < 2) throw std::invalid_argument("bound_table: n >= 2");
    std::vector<BoundRow> rows;

    {
        BoundRow r;
        r.name = "p3-main-term";
        r.n = n;
        r.p = std::max(3L, n);
        Rational v = p3_main_term(r.p, n);
        r.value = real_of<Real>(v);
        r.exact = std::move(v);
        rows.push_back(std::move(r));
    }
    {
        BoundRow r;
        r.name = "elo-column";
        r.n = n;
        r.m = n;
        Rational v = elo_column_bound(n);
        r.value = real_of<Real>(v);
        r.exact = std::move(v);
        rows.push_back(std::move(r));
    }
    {
        BoundRow r;
        r.name = "rm-case1";
        r.n = n;
        r.p = n;
        r.m = std::min(5L, n);
        Rational v = rm_case1_bound(r.m, r.p, n);
        r.value = real_of<Real>(v);
        r.exact = std::move(v);
        rows.push_back(std::move(r));
    }
    if (n >= 4) {
        const LemmaBounds lb = lemma_bounds(n, epsilon, c);
        BoundRow r1;
        r1.name = "lemma-case1-bound";
        r1.n = n;
        r1.epsilon = epsilon;
        r1.exact = lb.b1_exact;
        r1.value = lb.b1;
        rows.push_back(std::move(r1));
        BoundRow r2;
        r2.name = "lemma-case2-bound";
        r2.n = n;
        r2.epsilon = epsilon;
        r2.c = c;
        r2.value = lb.b2;
        rows.push_back(std::move(r2));
        BoundRow r3;
        r3.name = "lemma-case3-bound";
        r3.n = n;
        r3.c = c;
        r3.value = lb.b3;
        rows.push_back(std::move(r3));
    }
    for (auto& r : misc_asymptotes(n)) rows.push_back(std::move(r));
    return rows;
}

std::string bound_csv_header() { return "name,n,p,m,epsilon,c,value_exact,value_real"; }

std::string bound_csv_row(const BoundRow& r) {
    std::ostringstream out;
    out << r.name << ',' << r.n << ',' << r.p << ',' << r.m << ','
        << (r.epsilon == 0 ? "" : to_fraction_string(r.epsilon)) << ','
        << (r.c == 0 ? "" : to_fraction_string(r.c)) << ','
        << (r.exact ? to_fraction_string(*r.exact) : "") << ','
        << r.value.str(25, std::ios_base::scientific);
    return out.str();
}

namespace {

// Independent high-precision recomputations in log2 space (different
// operation order from the Real evaluators).
std::vector<RealHi> recompute_hi(long n, const Rational& epsilon, const Rational& c) {
    std::vector<RealHi> vals;
    const RealHi two(2);

    {
        const long p = std::max(3L, n);
        vals.push_back(RealHi(4 * binomial(static_cast<unsigned long>(p), 3)) *
                       pow(two, n * log2(RealHi(3) / 4)));
    }
    {
        vals.push_back(RealHi(binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(n / 2))) *
                       pow(two, RealHi(1 - n)));
    }
    {
        const long m = std::min(5L, n);
        const RealHi lc = log2(RealHi(binomial(static_cast<unsigned long>(m), static_cast<unsigned long>(m / 2))));
        const RealHi lp = log2(RealHi(binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(m))));
        vals.push_back(pow(two, RealHi(n) + 2 * lp + (n - m) * (lc - m)));
    }
    if (n >= 4) {
        const RealHi eps = real_of<RealHi>(epsilon);
        const RealHi cc = real_of<RealHi>(c);
        const RealHi l = log2(RealHi(n));
        const RealHi pi = boost::math::constants::pi<RealHi>();
        const RealHi loge = boost::math::constants::log2_e<RealHi>();
        vals.push_back(pow(two, n * (log2(RealHi(5) / 8) + log2(RealHi(1) + eps))));
        vals.push_back(pow(two, RealHi(3 * n) - cc * n / 2 + cc * n / (2 * l) * log2(two / (pi * eps * eps))));
        vals.push_back(pow(two, (2 * cc * n / l) * (loge + log2(l) - log2(cc)) + 2 * log2(RealHi(n)) -
                                    (RealHi(n) - cc * n / l)));
    }
    // misc rows via running products/sums
    const RealHi space = pow(two, static_cast<int>(n)) - 1;
    {
        RealHi prod(2);
        for (long i = 0; i < n; ++i) prod = prod * (space - i) / (i + 1);
        vals.push_back(prod);
    }
    vals.push_back(RealHi(n - 1) * (n - 1) * pow(two, static_cast<int>(1 - n)));
    {
        RealHi term(1), sum(1);
        for (long i = 1; i <= n; ++i) {
            term = term * (space - (i - 1)) / i;
            sum += term;
        }
        vals.push_back(2 * sum);
    }
    vals.push_back(pow(two, 2 * log2(RealHi(n)) - (n - 1)));
    vals.push_back(pow(two, 2 * log2(RealHi(n - 1)) - (n - 1)));
    return vals;
}

}  // namespace

double bounds_cross_deviation(long n, const Rational& epsilon, const Rational& c) {
    const auto rows = bound_table(n, epsilon, c);
    const auto hi = recompute_hi(n, epsilon, c);
    if (rows.size() != hi.size()) throw std::logic_error("bounds cross-check: row count mismatch");
    RealHi worst(0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const RealHi a(rows[i].value);
        const RealHi rel = abs(a - hi[i]) / abs(hi[i]);
        if (rel > worst) worst = rel;
    }
    return worst.convert_to<double>();
}

}  // namespace signspan
