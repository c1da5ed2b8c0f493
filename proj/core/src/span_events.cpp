#include "signspan/span_events.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include <json.hpp>

#include "signspan/parallel.hpp"
#include "signspan/span_basis.hpp"

namespace signspan {

void EventSpec::validate() const {
    if (n < 1 || n > 64) throw std::invalid_argument("event: n out of range [1,64]");
    switch (kind) {
        case EventKind::kKso:
        case EventKind::kSupportM:
        case EventKind::kSupportMIndep:
            if (p < 1 || p > 32)
                throw std::invalid_argument("event: span events need 1 <= p <= 32");
            if (uses_m() && (m < 1 || m > p))
                throw std::invalid_argument("event: need 1 <= m <= p");
            break;
        case EventKind::kRankDeficient:
            if (p < 1 || p > 64) throw std::invalid_argument("event: need 1 <= p <= 64");
            break;
        case EventKind::kSingularPm1:
        case EventKind::kSingular01:
            if (p != n) throw std::invalid_argument("event: singular events need p == n");
            break;
    }
}

std::string EventSpec::name() const {
    switch (kind) {
        case EventKind::kKso: return "kso";
        case EventKind::kSupportM: return "support";
        case EventKind::kSupportMIndep: return "support-indep";
        case EventKind::kRankDeficient: return "rank-deficient";
        case EventKind::kSingularPm1: return "singular";
        case EventKind::kSingular01: return "singular01";
    }
    return "?";
}

std::optional<EventKind> EventSpec::kind_from_name(const std::string& s) {
    if (s == "kso") return EventKind::kKso;
    if (s == "support") return EventKind::kSupportM;
    if (s == "support-indep") return EventKind::kSupportMIndep;
    if (s == "rank-deficient" || s == "rankdef") return EventKind::kRankDeficient;
    if (s == "singular") return EventKind::kSingularPm1;
    if (s == "singular01") return EventKind::kSingular01;
    return std::nullopt;
}

namespace {

SpanReducer64& ws64() {
    static thread_local SpanReducer64 w;
    return w;
}

SpanReducerBig& wsbig() {
    static thread_local SpanReducerBig w;
    return w;
}

template <typename I>
struct Wide {
    using type = I;
};
template <>
struct Wide<long long> {
    using type = __int128;
};

// Support of the combination beta^T * transform over the original rows.
template <typename I>
int combination_support(const SpanReducer<I>& red, std::uint64_t beta) {
    const int p = red.input_rows();
    const int r = red.rank();
    int nnz = 0;
    for (int j = 0; j < p; ++j) {
        typename Wide<I>::type c(0);
        for (int i = 0; i < r; ++i) {
            if ((beta >> i) & 1)
                c -= typename Wide<I>::type(red.transform(i, j));
            else
                c += typename Wide<I>::type(red.transform(i, j));
        }
        if (c != 0) ++nnz;
    }
    return nnz;
}

template <typename I>
bool kso_scan_reduced(const SpanReducer<I>& red, const std::uint64_t* words, int p, int n) {
    bool found = false;
    red.scan_sign_vectors([&](std::uint64_t bits, std::uint64_t) {
        for (int i = 0; i < p; ++i)
            if (bits == canonical_bits(n, words[i])) return true;
        found = true;
        return false;
    });
    return found;
}

// Some sign vector in span(sub) admits a representation using all m rows
// with nonzero coefficients.  Representations of u form an affine space; a
// coordinate i can be forced nonzero unless row i is outside span(rest) and
// u's (then well-defined) coefficient on it vanishes, i.e. u lies in
// span(rest).  So: u works iff u avoids span(sub \ i) for every i whose row
// is independent of the others.
template <typename I>
std::optional<bool> subset_support_event(const std::uint64_t* sub, int m, int n) {
    SpanReducer<I> rs;
    if (!rs.reduce_sign_words(sub, m, n) || !rs.sign_scan_safe()) return std::nullopt;
    const int rank_s = rs.rank();
    std::vector<SpanReducer<I>> criticals;
    criticals.reserve(m);
    std::uint64_t rest[SpanReducer64::kMaxRows];
    for (int i = 0; i < m; ++i) {
        int k = 0;
        for (int j = 0; j < m; ++j)
            if (j != i) rest[k++] = sub[j];
        SpanReducer<I> ri;
        if (!ri.reduce_sign_words(rest, m - 1, n)) return std::nullopt;
        if (ri.rank() < rank_s) criticals.push_back(std::move(ri));
    }
    bool found = false;
    rs.scan_sign_vectors([&](std::uint64_t bits, std::uint64_t) {
        for (const auto& ri : criticals)
            if (ri.contains_sign_bits(bits)) return true;
        found = true;
        return false;
    });
    return found;
}

bool dependent_support_event(const std::uint64_t* words, int p, int n, int m) {
    if (m == 1) return true;
    std::uint64_t sub[SpanReducer64::kMaxRows];
    std::vector<int> idx(m);
    for (int i = 0; i < m; ++i) idx[i] = i;
    while (true) {
        for (int i = 0; i < m; ++i) sub[i] = words[idx[i]];
        auto fast = subset_support_event<long long>(sub, m, n);
        const bool hit = fast ? *fast : *subset_support_event<BigInt>(sub, m, n);
        if (hit) return true;
        // next combination
        int i = m - 1;
        while (i >= 0 && idx[i] == p - m + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
    return false;
}

// Exact rank of a word matrix: plain fraction-free elimination when Hadamard
// bounds keep it in int64, otherwise a GF(p) prefilter (full rank there is
// conclusive) with a big-integer confirmation.
constexpr long long kRankPrime = 2147483647;  // 2^31 - 1

int rank_mod_prime_words(const std::uint64_t* words, int p, int n, bool zero_one) {
    long long a[64][64];
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < n; ++j) {
            const int bit = (words[i] >> j) & 1;
            a[i][j] = zero_one ? bit : (bit ? kRankPrime - 1 : 1);
        }
    int r = 0;
    for (int c = 0; c < n && r < p; ++c) {
        int piv = -1;
        for (int i = r; i < p; ++i)
            if (a[i][c] != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != r)
            for (int j = c; j < n; ++j) std::swap(a[r][j], a[piv][j]);
        long long inv = 1, base = a[r][c];
        for (long long e = kRankPrime - 2; e; e >>= 1) {
            if (e & 1) inv = static_cast<long long>(static_cast<unsigned long long>(inv) * base % kRankPrime);
            base = static_cast<long long>(static_cast<unsigned long long>(base) * base % kRankPrime);
        }
        for (int j = c; j < n; ++j)
            a[r][j] = static_cast<long long>(static_cast<unsigned long long>(a[r][j]) * inv % kRankPrime);
        for (int i = r + 1; i < p; ++i) {
            const long long f = a[i][c];
            if (f == 0) continue;
            for (int j = c; j < n; ++j) {
                long long v = a[i][j] -
                              static_cast<long long>(static_cast<unsigned long long>(f) * a[r][j] % kRankPrime);
                a[i][j] = v < 0 ? v + kRankPrime : v;
            }
        }
        ++r;
    }
    return r;
}

int rank_i64_words(const std::uint64_t* words, int p, int n, bool zero_one) {
    long long a[64][64];
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < n; ++j) {
            const int bit = (words[i] >> j) & 1;
            a[i][j] = zero_one ? bit : (bit ? -1 : 1);
        }
    long long prev = 1;
    int r = 0;
    for (int c = 0; c < n && r < p; ++c) {
        int piv = -1;
        for (int i = r; i < p; ++i)
            if (a[i][c] != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != r)
            for (int j = c; j < n; ++j) std::swap(a[r][j], a[piv][j]);
        for (int i = r + 1; i < p; ++i) {
            const long long f = a[i][c];
            for (int j = c + 1; j < n; ++j)
                a[i][j] = static_cast<long long>(
                    (static_cast<__int128>(a[i][j]) * a[r][c] - static_cast<__int128>(f) * a[r][j]) / prev);
            a[i][c] = 0;
        }
        prev = a[r][c];
        ++r;
    }
    return r;
}

int exact_rank_words_impl(const std::uint64_t* words, int p, int n, bool zero_one) {
    if (std::min(p, n) <= 24) return rank_i64_words(words, p, n, zero_one);
    const int rp = rank_mod_prime_words(words, p, n, zero_one);
    if (rp == std::min(p, n)) return rp;
    IntMatrix m(p, std::vector<long long>(n));
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < n; ++j) {
            const int bit = (words[i] >> j) & 1;
            m[i][j] = zero_one ? bit : (bit ? -1 : 1);
        }
    return rank_int(m);
}

std::vector<std::uint64_t> matrix_words(const SignMatrix& m) {
    std::vector<std::uint64_t> words(m.p);
    for (int i = 0; i < m.p; ++i) words[i] = m.rows[i].bits();
    return words;
}

template <typename I>
std::optional<WitnessReport> kso_report(const SpanReducer<I>& red, const std::uint64_t* words,
                                        int p, int n) {
    std::optional<WitnessReport> out;
    red.scan_sign_vectors([&](std::uint64_t bits, std::uint64_t beta) {
        for (int i = 0; i < p; ++i)
            if (bits == canonical_bits(n, words[i])) return true;
        WitnessReport rep;
        rep.witness = SignVector(n, bits);
        const auto comb = red.combination_over_inputs(beta);
        rep.coefficients.reserve(p);
        for (int j = 0; j < p; ++j) {
            Rational c(BigInt(comb[j]), BigInt(red.scale()));
            if (c != 0) ++rep.support;
            rep.coefficients.push_back(std::move(c));
        }
        out = std::move(rep);
        return false;
    });
    return out;
}

}  // namespace

namespace detail {

bool kso_exists_words(const std::uint64_t* words, int p, int n) {
    auto& w = ws64();
    if (w.reduce_sign_words(words, p, n) && w.sign_scan_safe())
        return kso_scan_reduced(w, words, p, n);
    auto& wb = wsbig();
    wb.reduce_sign_words(words, p, n);
    return kso_scan_reduced(wb, words, p, n);
}

bool rank_deficient_words(const std::uint64_t* words, int p, int n) {
    return exact_rank_words_impl(words, p, n, false) < p;
}

bool singular_words(const std::uint64_t* words, int n, bool zero_one) {
    if (n > 24) {
        // Full rank mod p certifies nonsingularity; only the rare remainder
        // needs the exact (big-integer) confirmation.
        if (rank_mod_prime_words(words, n, n, zero_one) == n) return false;
    }
    return exact_rank_words_impl(words, n, n, zero_one) < n;
}

bool support_event_words(const std::uint64_t* words, int p, int n, int m, bool need_independent) {
    if (m == 1 && !need_independent) return true;
    auto& w = ws64();
    const bool fast = w.reduce_sign_words(words, p, n) && w.sign_scan_safe();
    if (fast) {
        if (w.rank() == p) {
            if (m == 1) return true;
            bool found = false;
            w.scan_sign_vectors([&](std::uint64_t, std::uint64_t beta) {
                if (combination_support(w, beta) == m) {
                    found = true;
                    return false;
                }
                return true;
            });
            return found;
        }
        if (need_independent) return false;
        return dependent_support_event(words, p, n, m);
    }
    auto& wb = wsbig();
    wb.reduce_sign_words(words, p, n);
    if (wb.rank() == p) {
        if (m == 1) return true;
        bool found = false;
        wb.scan_sign_vectors([&](std::uint64_t, std::uint64_t beta) {
            if (combination_support(wb, beta) == m) {
                found = true;
                return false;
            }
            return true;
        });
        return found;
    }
    if (need_independent) return false;
    return dependent_support_event(words, p, n, m);
}

int exact_rank_sign_words(const std::uint64_t* words, int p, int n) {
    return exact_rank_words_impl(words, p, n, false);
}

}  // namespace detail

std::optional<WitnessReport> kso_check(const SignMatrix& m) {
    if (m.p < 1 || m.p > 32) throw std::invalid_argument("kso_check: need 1 <= p <= 32");
    const auto words = matrix_words(m);
    auto& w = ws64();
    if (w.reduce_sign_words(words.data(), m.p, m.n) && w.sign_scan_safe())
        return kso_report(w, words.data(), m.p, m.n);
    auto& wb = wsbig();
    wb.reduce_sign_words(words.data(), m.p, m.n);
    return kso_report(wb, words.data(), m.p, m.n);
}

bool kso_exists(const SignMatrix& m) {
    if (m.p < 1 || m.p > 32) throw std::invalid_argument("kso_exists: need 1 <= p <= 32");
    const auto words = matrix_words(m);
    return detail::kso_exists_words(words.data(), m.p, m.n);
}

namespace {

template <typename I>
std::map<int, long long> census_reduced(const SpanReducer<I>& red) {
    std::map<int, long long> census;
    red.scan_sign_vectors([&](std::uint64_t, std::uint64_t beta) {
        ++census[combination_support(red, beta)];
        return true;
    });
    if (census.count(2))
        throw std::logic_error("witness census: support-2 class found for independent rows");
    if (census[1] != red.input_rows())
        throw std::logic_error("witness census: row classes do not tally to p");
    return census;
}

}  // namespace

std::map<int, long long> witness_support_census(const SignMatrix& m) {
    if (m.p < 1 || m.p > 32) throw std::invalid_argument("census: need 1 <= p <= 32");
    const auto words = matrix_words(m);
    auto& w = ws64();
    if (w.reduce_sign_words(words.data(), m.p, m.n) && w.sign_scan_safe()) {
        if (w.rank() != m.p) throw std::invalid_argument("census: rows must be independent");
        return census_reduced(w);
    }
    auto& wb = wsbig();
    wb.reduce_sign_words(words.data(), m.p, m.n);
    if (wb.rank() != m.p) throw std::invalid_argument("census: rows must be independent");
    return census_reduced(wb);
}

namespace {

template <typename Pred>
BigInt count_matrices(int p, int n, bool fix_first_row, unsigned workers, Pred&& pred) {
    const int var_rows = fix_first_row ? p - 1 : p;
    if (static_cast<long>(var_rows) * n > 62)
        throw std::invalid_argument("exhaustive count: index space exceeds 2^62");
    const std::uint64_t total = std::uint64_t{1} << (var_rows * n);
    const std::uint64_t mask = SignVector::mask(n);
    const std::uint64_t hits = parallel_block_reduce<std::uint64_t>(
        total, workers, 0, [&](std::uint64_t lo, std::uint64_t hi) {
            std::uint64_t acc = 0;
            std::uint64_t words[65];
            for (std::uint64_t code = lo; code < hi; ++code) {
                int base = 0;
                if (fix_first_row) {
                    words[0] = 0;
                    base = 1;
                }
                std::uint64_t c = code;
                for (int i = 0; i < var_rows; ++i) {
                    words[base + i] = c & mask;
                    c >>= n;
                }
                if (pred(words)) ++acc;
            }
            return acc;
        });
    BigInt result = hits;
    if (fix_first_row) result <<= n;
    return result;
}

}  // namespace

ExactCount exact_event_probability(const EventSpec& e, const ExactOptions& opts) {
    e.validate();
    const bool zero_one = e.kind == EventKind::kSingular01;
    const bool sym = opts.symmetry && !zero_one;
    const long bits = static_cast<long>(e.p) * e.n;
    if (!opts.force) {
        if (sym && bits > kSymmetricExhaustBits)
            throw std::invalid_argument("exhaustive count: p*n exceeds guard (32 with symmetry)");
        if (!sym && bits > kPlainExhaustBits)
            throw std::invalid_argument("exhaustive count: p*n exceeds guard (26)");
    }

    const int p = e.p, n = e.n, m = e.m;
    BigInt count;
    switch (e.kind) {
        case EventKind::kKso:
            count = count_matrices(p, n, sym, opts.workers, [p, n](const std::uint64_t* w) {
                return detail::kso_exists_words(w, p, n);
            });
            break;
        case EventKind::kSupportM:
            count = count_matrices(p, n, sym, opts.workers, [p, n, m](const std::uint64_t* w) {
                return detail::support_event_words(w, p, n, m, false);
            });
            break;
        case EventKind::kSupportMIndep:
            count = count_matrices(p, n, sym, opts.workers, [p, n, m](const std::uint64_t* w) {
                return detail::support_event_words(w, p, n, m, true);
            });
            break;
        case EventKind::kRankDeficient:
            count = count_matrices(p, n, sym, opts.workers, [p, n](const std::uint64_t* w) {
                return detail::rank_deficient_words(w, p, n);
            });
            break;
        case EventKind::kSingularPm1:
            count = count_matrices(n, n, sym, opts.workers, [n](const std::uint64_t* w) {
                return detail::singular_words(w, n, false);
            });
            break;
        case EventKind::kSingular01:
            count = count_matrices(n, n, false, opts.workers, [n](const std::uint64_t* w) {
                return detail::singular_words(w, n, true);
            });
            break;
    }

    ExactCount out;
    out.count = count;
    out.total = pow2(static_cast<unsigned>(bits));
    out.probability = Rational(out.count, out.total);
    return out;
}

EventTally exhaustive_event_tally(int p, int n, const ExactOptions& opts) {
    EventSpec probe{EventKind::kKso, p, n, 0};
    probe.validate();
    const bool sym = opts.symmetry;
    const long bits = static_cast<long>(p) * n;
    if (!opts.force) {
        if (sym && bits > kSymmetricExhaustBits)
            throw std::invalid_argument("event tally: p*n exceeds guard (32 with symmetry)");
        if (!sym && bits > kPlainExhaustBits)
            throw std::invalid_argument("event tally: p*n exceeds guard (26)");
    }

    struct Acc {
        std::uint64_t kso = 0, rankdef = 0;
        std::array<std::uint64_t, 33> pm{}, rm{};
        Acc& operator+=(const Acc& o) {
            kso += o.kso;
            rankdef += o.rankdef;
            for (std::size_t i = 0; i < pm.size(); ++i) {
                pm[i] += o.pm[i];
                rm[i] += o.rm[i];
            }
            return *this;
        }
    };

    const int var_rows = sym ? p - 1 : p;
    if (static_cast<long>(var_rows) * n > 62)
        throw std::invalid_argument("event tally: index space exceeds 2^62");
    const std::uint64_t total = std::uint64_t{1} << (var_rows * n);
    const std::uint64_t mask = SignVector::mask(n);

    const Acc sum = parallel_block_reduce<Acc>(
        total, opts.workers, Acc{}, [&](std::uint64_t lo, std::uint64_t hi) {
            Acc acc;
            std::uint64_t words[SpanReducer64::kMaxRows + 1];
            for (std::uint64_t code = lo; code < hi; ++code) {
                int base = 0;
                if (sym) {
                    words[0] = 0;
                    base = 1;
                }
                std::uint64_t c = code;
                for (int i = 0; i < var_rows; ++i) {
                    words[base + i] = c & mask;
                    c >>= n;
                }
                auto profile = [&](const auto& w) {
                    if (w.rank() == p) {
                        std::uint32_t present = 0;
                        w.scan_sign_vectors([&](std::uint64_t, std::uint64_t beta) {
                            present |= std::uint32_t{1} << combination_support(w, beta);
                            return true;
                        });
                        if (present >> 2) ++acc.kso;
                        for (int mm = 2; mm <= p; ++mm)
                            if ((present >> mm) & 1) {
                                ++acc.pm[mm];
                                ++acc.rm[mm];
                            }
                    } else {
                        ++acc.rankdef;
                        if (kso_scan_reduced(w, words, p, n)) ++acc.kso;
                        for (int mm = 2; mm <= p; ++mm)
                            if (dependent_support_event(words, p, n, mm)) ++acc.pm[mm];
                    }
                };
                auto& w = ws64();
                if (w.reduce_sign_words(words, p, n) && w.sign_scan_safe()) {
                    profile(w);
                } else {
                    auto& wb = wsbig();
                    wb.reduce_sign_words(words, p, n);
                    profile(wb);
                }
            }
            return acc;
        });

    EventTally t;
    t.p = p;
    t.n = n;
    t.total = pow2(static_cast<unsigned>(bits));
    const unsigned shift = sym ? static_cast<unsigned>(n) : 0;
    t.kso = BigInt(sum.kso) << shift;
    t.rank_deficient = BigInt(sum.rankdef) << shift;
    t.support.assign(p + 1, BigInt(0));
    t.support_indep.assign(p + 1, BigInt(0));
    for (int mm = 2; mm <= p; ++mm) {
        t.support[mm] = BigInt(sum.pm[mm]) << shift;
        t.support_indep[mm] = BigInt(sum.rm[mm]) << shift;
    }
    return t;
}

BigInt count_kso_independent_tuples(int n, bool force, unsigned workers) {
    if (n < 1) throw std::invalid_argument("tuple count: n >= 1");
    if (n > kTupleCountMaxN && !force)
        throw std::invalid_argument("tuple count: n exceeds guard (5)");
    if (n > 24) throw std::invalid_argument("tuple count: infeasible n");

    const std::uint64_t npts = std::uint64_t{1} << n;
    // KSO and independence are order-free, so count n-subsets of the 2^n
    // projective points and scale by n! at the end.  Parallel over the
    // smallest element.
    const std::uint64_t subsets = parallel_block_reduce<std::uint64_t>(
        npts, workers, 0, [&](std::uint64_t lo, std::uint64_t hi) {
            std::uint64_t acc = 0;
            std::vector<int> idx(n);
            std::uint64_t words[SpanReducer64::kMaxRows];
            for (std::uint64_t first = lo; first < hi; ++first) {
                if (first + n > npts) continue;
                idx[0] = static_cast<int>(first);
                for (int i = 1; i < n; ++i) idx[i] = idx[i - 1] + 1;
                while (true) {
                    for (int i = 0; i < n; ++i)
                        words[i] = static_cast<std::uint64_t>(idx[i]) << 1;
                    auto& w = ws64();
                    if (w.reduce_sign_words(words, n, n + 1) && w.sign_scan_safe()) {
                        if (w.rank() == n && kso_scan_reduced(w, words, n, n + 1)) ++acc;
                    } else {
                        auto& wb = wsbig();
                        wb.reduce_sign_words(words, n, n + 1);
                        if (wb.rank() == n && kso_scan_reduced(wb, words, n, n + 1)) ++acc;
                    }
                    int i = n - 1;
                    while (i >= 1 && idx[i] == static_cast<int>(npts) - n + i) --i;
                    if (i < 1) break;  // keep idx[0] == first
                    ++idx[i];
                    for (int j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
                }
            }
            return acc;
        });
    return BigInt(subsets) * factorial(static_cast<unsigned long>(n));
}

Rational delta_dependent_fraction(int n, int k, bool force) {
    if (n < 1 || k < 1 || k > n + 1) throw std::invalid_argument("delta: need 1 <= k <= n+1");
    if (n > kDeltaExactMaxN && !force) throw std::invalid_argument("delta: n exceeds guard (4)");
    if (n > 24) throw std::invalid_argument("delta: infeasible n");

    const std::uint64_t npts = std::uint64_t{1} << n;
    std::uint64_t dependent = 0;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::uint64_t words[SpanReducer64::kMaxRows];
    if (k <= static_cast<int>(npts)) {
        while (true) {
            for (int i = 0; i < k; ++i) words[i] = static_cast<std::uint64_t>(idx[i]) << 1;
            if (detail::exact_rank_sign_words(words, k, n + 1) < k) ++dependent;
            int i = k - 1;
            while (i >= 0 && idx[i] == static_cast<int>(npts) - k + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    const BigInt total = falling_factorial(BigInt(npts), static_cast<unsigned long>(k));
    if (total == 0) throw std::invalid_argument("delta: no tuples");
    return Rational(BigInt(dependent) * factorial(static_cast<unsigned long>(k)), total);
}

std::string exact_result_json(const EventSpec& e, const ExactCount& r) {
    nlohmann::ordered_json j;
    j["event"] = e.name();
    j["p"] = e.p;
    j["n"] = e.n;
    if (e.uses_m()) j["m"] = e.m;
    j["count"] = r.count.str();
    j["total"] = r.total.str();
    j["probability"] = to_fraction_string(r.probability);
    return j.dump();
}

}  // namespace signspan
