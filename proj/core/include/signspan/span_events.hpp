#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "signspan/rational.hpp"
#include "signspan/sign_vector.hpp"

namespace signspan {

/// A sign vector found in the row span, with a coefficient certificate over
/// the original rows (coefficients * rows == witness, exactly) and the number
/// of nonzero coefficients.
struct WitnessReport {
    SignVector witness;
    std::vector<Rational> coefficients;
    int support = 0;
};

enum class EventKind {
    kKso,            // span contains a sign vector besides the +-rows
    kSupportM,       // some m rows combine, all coefficients nonzero, into a sign vector
    kSupportMIndep,  // same, restricted to matrices with independent rows
    kRankDeficient,  // rank < p
    kSingularPm1,    // square +-1 matrix singular
    kSingular01,     // square 0/1 matrix singular
};

struct EventSpec {
    EventKind kind = EventKind::kKso;
    int p = 0;
    int n = 0;
    int m = 0;

    void validate() const;
    std::string name() const;
    static std::optional<EventKind> kind_from_name(const std::string& s);
    bool uses_m() const { return kind == EventKind::kSupportM || kind == EventKind::kSupportMIndep; }
};

/// Searches span(rows) for a sign vector different from every +-row.  One
/// representative per +-pair is examined; either sign of a found class is a
/// valid witness.  Coefficients are unique when the rows are independent.
std::optional<WitnessReport> kso_check(const SignMatrix& m);
bool kso_exists(const SignMatrix& m);

/// For independent rows: tallies every projective witness class in the span
/// by the support of its (unique) coefficient vector.  census[1] == p always;
/// a support-2 class would contradict independence and is rejected as
/// corruption.  Throws if the rows are dependent.
std::map<int, long long> witness_support_census(const SignMatrix& m);

// Exhaustion guards (overridable via ExactOptions::force).
constexpr int kPlainExhaustBits = 26;
constexpr int kSymmetricExhaustBits = 32;
constexpr int kTupleCountMaxN = 5;
constexpr int kDeltaExactMaxN = 4;

struct ExactOptions {
    bool symmetry = true;
    bool force = false;
    unsigned workers = 1;
};

struct ExactCount {
    BigInt count = 0;
    BigInt total = 0;
    Rational probability = 0;
};

/// Exact probability of the event over all equiprobable matrices.  With
/// symmetry enabled (sign-matrix events only) the first row is pinned to
/// all-ones and the count scaled by 2^n; the result is identical to the
/// unreduced count.
ExactCount exact_event_probability(const EventSpec& e, const ExactOptions& opts = {});

/// |KSO(n, n+1) ∩ independent distinct n-tuples of (1, b_1..b_n) points|.
BigInt count_kso_independent_tuples(int n, bool force = false, unsigned workers = 1);

/// Fraction of ordered k-tuples of distinct (1, b_1..b_n) points that are
/// linearly dependent.
Rational delta_dependent_fraction(int n, int k, bool force = false);

/// One exhaustive sweep tallying every event family at once (for the
/// decomposition inequalities).  support[m] counts matrices where some m rows
/// admit an all-nonzero-coefficient sign-vector combination; support_indep[m]
/// additionally requires independent rows.
struct EventTally {
    int p = 0;
    int n = 0;
    BigInt total = 0;
    BigInt kso = 0;
    BigInt rank_deficient = 0;
    std::vector<BigInt> support;
    std::vector<BigInt> support_indep;
};
EventTally exhaustive_event_tally(int p, int n, const ExactOptions& opts = {});

std::string exact_result_json(const EventSpec& e, const ExactCount& r);

namespace detail {
// Word-level entry points shared by the exhaustive sweeps and the Monte
// Carlo driver; words encode +-1 rows (set bit = -1) or 0/1 rows.
bool kso_exists_words(const std::uint64_t* words, int p, int n);
bool rank_deficient_words(const std::uint64_t* words, int p, int n);
bool singular_words(const std::uint64_t* words, int n, bool zero_one);
bool support_event_words(const std::uint64_t* words, int p, int n, int m, bool need_independent);
int exact_rank_sign_words(const std::uint64_t* words, int p, int n);
}  // namespace detail

}  // namespace signspan
