#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "signspan/span_events.hpp"

namespace signspan {

/// Seeded Monte Carlo outcome.  Identical (event, trials, seed) give an
/// identical Estimate for any worker count: trial t always draws from the
/// counter stream (seed, t).
struct Estimate {
    EventSpec event;
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
    double p_hat = 0;
    double ci_low = 0;
    double ci_high = 0;
    double confidence = 0;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

Estimate mc_estimate(const EventSpec& e, std::uint64_t trials, std::uint64_t seed,
                     double confidence, unsigned workers);

/// Wilson score interval for a binomial proportion; lower bound is exactly 0
/// at zero hits and the upper bound exactly 1 at all hits.
std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t trials,
                                          double confidence);

/// One-sided Wilson upper bound for a zero-hit run ("below resolution").
double rare_event_upper_bound(std::uint64_t trials, double confidence);

/// Inverse standard normal CDF (bisection on erfc; deterministic).
double normal_quantile(double p);

struct SweepRow {
    int n = 0;
    Estimate estimate;
    double asymptote = 0;  // (n-1)^2 * 2^(1-n)
};

/// Singularity estimates for n = 2..n_max next to the asymptote, report-only.
std::vector<SweepRow> singularity_sweep(int n_max, std::uint64_t trials, std::uint64_t seed,
                                        unsigned workers = 1);

// CSV row schema: event,p,n,m,trials,hits,p_hat,ci_low,ci_high,confidence,seed,workers
std::string estimate_csv_header();
std::string estimate_csv_row(const Estimate& e);
Estimate parse_estimate_csv_row(const std::string& line);

}  // namespace signspan
