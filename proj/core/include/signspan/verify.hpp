#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "signspan/eta_star.hpp"
#include "signspan/rng.hpp"

namespace signspan {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct BatteryOptions {
    int samples = 100;  // random configurations for the eta identity check
    std::uint64_t seed = 1;
    std::string only;  // substring filter on check names; empty runs all
    unsigned workers = 1;
    // Test hook: corrupt the flag evaluation so the battery must fail.
    bool inject_flag_sign_error = false;
};

/// The desk-scale verification battery behind `verify`.
std::vector<CheckResult> run_battery(const BatteryOptions& opts);

// Helpers shared with the acceptance suite.

/// Random full-span configuration: ambient in [3,5], up to 8 points with
/// coordinates in [-3,3].  Deterministic in rng state.
PointConfig random_spanning_config(CounterRng& rng);

/// Random configuration whose points all lie in a coordinate hyperplane.
PointConfig random_degenerate_config(CounterRng& rng);

/// Points on the moment curve (1, t, t^2, ...): any ambient-many of them are
/// independent.
PointConfig generic_points_config(int ambient, int count);

/// The 2^k projective representatives (1, b_1..b_k) as a PointConfig in
/// dimension k+1.
PointConfig en_config(int k);

/// Standard basis of the ambient space.
PointConfig basis_config(int ambient);

/// Weight sets used by the identity checks: (1,0,...), uniform, and one with
/// a negative entry, all summing to 1.
std::vector<std::vector<Rational>> standard_weight_sets(int t);

/// Exhaustive count of triples (v1,v2,v3) in ({+-1}^n)^3 with
/// v1+v2+sign*v3 a sign vector, against the per-coordinate product oracle.
bool triple_pattern_matches(int n, int sign, std::uint64_t* counted, std::uint64_t* expected);

}  // namespace signspan
