#pragma once

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "signspan/rational.hpp"

namespace signspan {

// >= 128-bit mantissa working precision; the cross-check evaluators run at
// double that with a different operation order.
using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<40>>;
using RealHi = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<80>>;

inline Rational default_epsilon() { return Rational(1, 128); }
inline Rational default_case_constant() { return Rational(184, 25); }  // 7.36

/// 4 C(p,3) (3/4)^n; a main term, not a probability (may exceed 1).
Rational p3_main_term(long p, long n);

/// 2 * 2^-m * C(m, floor(m/2)): the chance a fixed nonzero combination of m
/// random signs lands in {-1,+1}.
Rational elo_column_bound(long m);

/// 2^n C(p,m) C(n,m) [2^-m C(m, floor(m/2))]^(n-m), for m <= p <= n.
Rational rm_case1_bound(long m, long p, long n);

enum class CaseLabel { kDirect, kCase1, kCase2, kCase3 };
std::string case_label_name(CaseLabel c);

/// Partition of 3 <= m <= n-1: m in {3,4} -> direct; 5 <= m <= eps^2 n ->
/// case 1; m <= n - c n / log2 n -> case 2; else case 3.  Exact rational
/// comparisons where possible (the case-2/3 threshold is rational only for n
/// a power of two; otherwise no tie is possible and high precision decides).
CaseLabel case_partition(long m, long n, const Rational& epsilon, const Rational& c);

struct LemmaBounds {
    Rational b1_exact;  // (5/8)^n (1+eps)^n
    Real b1;
    Real b2;  // 2^(3n - cn/2) * (2/(pi eps^2))^(cn / (2 log2 n))
    Real b3;  // (e log2 n / c)^(2cn/log2 n) * n^2 / 2^(n - cn/log2 n)
};
LemmaBounds lemma_bounds(long n, const Rational& epsilon, const Rational& c);

struct BoundRow {
    std::string name;
    long n = 0;
    long p = 0;
    long m = 0;
    Rational epsilon = 0;
    Rational c = 0;
    std::optional<Rational> exact;
    Real value = 0;
};

/// Closed-form reference quantities at a given n (leading terms only; no
/// invented constants for o(1) factors).
std::vector<BoundRow> misc_asymptotes(long n);

/// All evaluators at one n, for the CSV report (parameter choices: p = max(3,n),
/// elo at m = n, the case-1 bound at m = min(5,n), p = n).
std::vector<BoundRow> bound_table(long n, const Rational& epsilon, const Rational& c);

std::string bound_csv_header();
std::string bound_csv_row(const BoundRow& r);

/// Max relative deviation between every table value at n and an independent
/// recomputation (higher precision, different operation order).
double bounds_cross_deviation(long n, const Rational& epsilon, const Rational& c);

}  // namespace signspan
