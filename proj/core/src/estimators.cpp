#include "signspan/estimators.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "signspan/parallel.hpp"
#include "signspan/rng.hpp"
#include "signspan/sign_vector.hpp"

namespace signspan {

namespace {

bool evaluate_event_words(const EventSpec& e, const std::uint64_t* words) {
    switch (e.kind) {
        case EventKind::kKso:
            return detail::kso_exists_words(words, e.p, e.n);
        case EventKind::kSupportM:
            return detail::support_event_words(words, e.p, e.n, e.m, false);
        case EventKind::kSupportMIndep:
            return detail::support_event_words(words, e.p, e.n, e.m, true);
        case EventKind::kRankDeficient:
            return detail::rank_deficient_words(words, e.p, e.n);
        case EventKind::kSingularPm1:
            return detail::singular_words(words, e.n, false);
        case EventKind::kSingular01:
            return detail::singular_words(words, e.n, true);
    }
    return false;
}

}  // namespace

Estimate mc_estimate(const EventSpec& e, std::uint64_t trials, std::uint64_t seed,
                     double confidence, unsigned workers) {
    e.validate();
    if (trials < 1) throw std::invalid_argument("mc_estimate: trials >= 1");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw std::invalid_argument("mc_estimate: confidence in (0,1)");
    if (workers == 0) workers = 1;

    const int rows = e.p;
    const std::uint64_t mask = SignVector::mask(e.n);
    const std::uint64_t hits = parallel_block_reduce<std::uint64_t>(
        trials, workers, 0, [&](std::uint64_t lo, std::uint64_t hi) {
            std::uint64_t acc = 0;
            std::uint64_t words[65];
            for (std::uint64_t t = lo; t < hi; ++t) {
                CounterRng rng = CounterRng::stream(seed, t);
                for (int i = 0; i < rows; ++i) words[i] = rng.next() & mask;
                if (evaluate_event_words(e, words)) ++acc;
            }
            return acc;
        });

    Estimate out;
    out.event = e;
    out.trials = trials;
    out.hits = hits;
    out.p_hat = static_cast<double>(hits) / static_cast<double>(trials);
    const auto ci = wilson_interval(hits, trials, confidence);
    out.ci_low = ci.first;
    out.ci_high = ci.second;
    out.confidence = confidence;
    out.seed = seed;
    out.workers = workers;
    return out;
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p in (0,1)");
    if (p == 0.5) return 0.0;
    const bool flip = p < 0.5;
    const double q = flip ? 1.0 - p : p;
    const auto cdf = [](double x) { return 1.0 - 0.5 * std::erfc(x / std::sqrt(2.0)); };
    double lo = 0.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (cdf(mid) < q ? lo : hi) = mid;
    }
    const double x = 0.5 * (lo + hi);
    return flip ? -x : x;
}

std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t trials,
                                          double confidence) {
    if (trials < 1 || hits > trials) throw std::invalid_argument("wilson_interval: bad counts");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw std::invalid_argument("wilson_interval: confidence in (0,1)");
    const double z = normal_quantile(0.5 * (1.0 + confidence));
    const double t = static_cast<double>(trials);
    const double ph = static_cast<double>(hits) / t;
    const double z2t = z * z / t;
    const double denom = 1.0 + z2t;
    const double center = (ph + 0.5 * z2t) / denom;
    const double half = z * std::sqrt(ph * (1.0 - ph) / t + 0.25 * z2t / t) / denom;
    double low = hits == 0 ? 0.0 : std::max(0.0, center - half);
    double high = hits == trials ? 1.0 : std::min(1.0, center + half);
    return {low, high};
}

double rare_event_upper_bound(std::uint64_t trials, double confidence) {
    if (trials < 1) throw std::invalid_argument("rare_event_upper_bound: trials >= 1");
    const double z = normal_quantile(confidence);
    const double t = static_cast<double>(trials);
    return z * z / (t + z * z);
}

std::vector<SweepRow> singularity_sweep(int n_max, std::uint64_t trials, std::uint64_t seed,
                                        unsigned workers) {
    if (n_max < 2 || n_max > 64)
        throw std::invalid_argument("singularity_sweep: n_max in [2,64]");
    std::vector<SweepRow> rows;
    rows.reserve(n_max - 1);
    for (int n = 2; n <= n_max; ++n) {
        SweepRow row;
        row.n = n;
        row.estimate = mc_estimate(EventSpec{EventKind::kSingularPm1, n, n, 0}, trials, seed,
                                   0.95, workers);
        row.asymptote = static_cast<double>(n - 1) * (n - 1) * std::ldexp(1.0, 1 - n);
        rows.push_back(row);
    }
    return rows;
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string estimate_csv_header() {
    return "event,p,n,m,trials,hits,p_hat,ci_low,ci_high,confidence,seed,workers";
}

std::string estimate_csv_row(const Estimate& e) {
    std::ostringstream out;
    out << e.event.name() << ',' << e.event.p << ',' << e.event.n << ',' << e.event.m << ','
        << e.trials << ',' << e.hits << ',' << fmt_double(e.p_hat) << ',' << fmt_double(e.ci_low)
        << ',' << fmt_double(e.ci_high) << ',' << fmt_double(e.confidence) << ',' << e.seed << ','
        << e.workers;
    return out.str();
}

Estimate parse_estimate_csv_row(const std::string& line) {
    std::vector<std::string> f;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            f.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    f.push_back(cur);
    if (f.size() != 12) throw std::invalid_argument("estimate CSV: expected 12 fields");
    Estimate e;
    const auto kind = EventSpec::kind_from_name(f[0]);
    if (!kind) throw std::invalid_argument("estimate CSV: unknown event '" + f[0] + "'");
    e.event.kind = *kind;
    e.event.p = std::stoi(f[1]);
    e.event.n = std::stoi(f[2]);
    e.event.m = std::stoi(f[3]);
    e.trials = std::stoull(f[4]);
    e.hits = std::stoull(f[5]);
    e.p_hat = std::stod(f[6]);
    e.ci_low = std::stod(f[7]);
    e.ci_high = std::stod(f[8]);
    e.confidence = std::stod(f[9]);
    e.seed = std::stoull(f[10]);
    e.workers = static_cast<unsigned>(std::stoul(f[11]));
    return e;
}

}  // namespace signspan
