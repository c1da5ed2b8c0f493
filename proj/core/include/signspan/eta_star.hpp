#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "signspan/exact_matrix.hpp"
#include "signspan/rational.hpp"

namespace signspan {

constexpr int kEtaMaxPoints = 20;
constexpr int kEtaMaxAmbient = 7;
constexpr int kFlagSumMaxPoints = 16;
constexpr int kFlagSumMaxTupleLen = 4;

/// A finite set of distinct projective points with rational weights summing
/// to 1 (weights may be zero or negative).  Points are stored canonically:
/// integer coordinates divided by their gcd, first nonzero coordinate
/// positive, so projective equality is plain equality.
struct PointConfig {
    int ambient = 0;  // dimension of the surrounding space, n+1
    IntMatrix points;
    std::vector<Rational> weights;

    int n() const { return ambient - 1; }
    int size() const { return static_cast<int>(points.size()); }

    /// Validates, canonicalizes, rejects duplicates; default weights are
    /// (1, 0, ..., 0).
    static PointConfig create(int ambient, IntMatrix pts,
                              std::optional<std::vector<Rational>> weights = std::nullopt);

    PointConfig with_weights(std::vector<Rational> w) const;

    bool spans_ambient() const;

    /// {"ambient": d, "points": [[int,...],...], "weights": ["num/den",...]};
    /// weights entries may also be plain integers; the field is optional.
    static PointConfig from_json_text(const std::string& text);
    std::string to_json() const;
};

std::vector<long long> canonicalize_point(std::vector<long long> x);

/// The slices of the proper-span complex needed for the top homology rank:
/// index sets of sizes n-1, n, n+1 whose span is a proper subspace.
struct SkeletonSlice {
    int n = 0;
    std::vector<std::vector<int>> size_nm1;  // (n-2)-simplices; empty when n == 1
    std::vector<std::vector<int>> size_n;    // (n-1)-simplices
    std::vector<std::vector<int>> size_np1;  // n-simplices
};

SkeletonSlice build_skeleton(const PointConfig& h);

struct HomologyField {
    bool rational = true;
    std::uint64_t prime = 0;

    static HomologyField rationals() { return {true, 0}; }
    static HomologyField gf(std::uint64_t p) { return {false, p}; }
};

/// Rank of the (n-1)-st reduced homology of the proper-span complex; 0 when
/// the points do not span the ambient space.
long long eta_star_homology(const PointConfig& h,
                            const HomologyField& field = HomologyField::rationals());

/// The counts q_l = |span(last l tuple points) ∩ points|, stored as
/// (q_n, ..., q_1), their product, and 1 minus the weight of the points lying
/// in the full tuple span.
struct FlagValue {
    std::vector<long long> q;
    BigInt product = 1;
    Rational top_weight = 0;
};

/// Flag of an ordered independent tuple of length n (indices into h.points).
/// Throws on repeated indices or a dependent tuple.
FlagValue flag_of(const std::vector<int>& tuple, const PointConfig& h);

struct FlagSumOptions {
    bool force = false;
    // Test hook: corrupts the numerator sign so mutation runs must fail the
    // cross-check.
    bool negate_top_weight_mutation = false;
};

/// Sum of top_weight / product over all ordered independent n-tuples,
/// computed exactly; 0 when the points do not span.  Equals the homology
/// rank for every weight vector summing to 1.
Rational eta_star_flagsum(const PointConfig& h, const FlagSumOptions& opts = {});

struct EtaCrossCheck {
    long long homology = 0;
    std::vector<Rational> flag_sums;
    bool pass = false;
};

/// Computes the homology rank once and the flag sum for each weight set;
/// passes iff every flag sum equals the rank exactly.
EtaCrossCheck cross_check_eta_star(const PointConfig& h,
                                   const std::vector<std::vector<Rational>>& weight_sets,
                                   const FlagSumOptions& opts = {});

}  // namespace signspan
