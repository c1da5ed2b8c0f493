#pragma once

#include <bit>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "signspan/exact_matrix.hpp"
#include "signspan/rng.hpp"

namespace signspan {

/// Bit-packed vector in {+1,-1}^n.  Coordinate j is (-1)^bit_j, so a clear
/// bit encodes +1 and the all-ones vector is the zero word.
class SignVector {
  public:
    static constexpr int kMaxLen = 64;

    SignVector() = default;
    SignVector(int n, std::uint64_t bits) : n_(n), bits_(bits & mask(n)) {
        if (n < 1 || n > kMaxLen) throw std::invalid_argument("SignVector: length out of range");
    }

    static constexpr std::uint64_t mask(int n) {
        return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    }

    int size() const { return n_; }
    std::uint64_t bits() const { return bits_; }
    int coord(int j) const { return (bits_ >> j) & 1 ? -1 : +1; }
    bool first_coord_positive() const { return (bits_ & 1) == 0; }

    SignVector negated() const { return SignVector(n_, ~bits_ & mask(n_)); }

    int dot(const SignVector& o) const {
        return n_ - 2 * std::popcount(bits_ ^ o.bits_);
    }

    std::vector<long long> to_ints() const {
        std::vector<long long> v(n_);
        for (int j = 0; j < n_; ++j) v[j] = coord(j);
        return v;
    }

    friend bool operator==(const SignVector& a, const SignVector& b) {
        return a.n_ == b.n_ && a.bits_ == b.bits_;
    }

  private:
    int n_ = 1;
    std::uint64_t bits_ = 0;
};

/// The representative of {v, -v} whose first coordinate is +1.
inline SignVector canonical_projective(const SignVector& v) {
    return v.first_coord_positive() ? v : v.negated();
}

inline std::uint64_t canonical_bits(int n, std::uint64_t bits) {
    return (bits & 1) ? ~bits & SignVector::mask(n) : bits;
}

struct SignMatrix {
    int p = 0;
    int n = 0;
    std::vector<SignVector> rows;

    SignMatrix() = default;
    SignMatrix(int p_, int n_) : p(p_), n(n_), rows(p_, SignVector(n_, 0)) {
        if (p_ < 1) throw std::invalid_argument("SignMatrix: need at least one row");
    }
};

/// Projective representative (1, b_1, ..., b_n) of a length-n sign vector:
/// length n+1, first coordinate +1.
struct EnPoint {
    SignVector v;
};

inline EnPoint embed_en(const SignVector& b) {
    return EnPoint{SignVector(b.size() + 1, b.bits() << 1)};
}

constexpr int kEnumerationMaxLen = 30;

/// Calls fn on all 2^n sign vectors in increasing bit-pattern order.
template <typename Fn>
void enumerate_sign_vectors(int n, Fn&& fn) {
    if (n < 1 || n > kEnumerationMaxLen)
        throw std::invalid_argument("enumerate_sign_vectors: n out of range [1,30]");
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t b = 0; b < count; ++b) fn(SignVector(n, b));
}

std::vector<SignVector> all_sign_vectors(int n);

/// Each of the p*n entries is an independent fair sign drawn from rng.
SignMatrix random_sign_matrix(int p, int n, CounterRng& rng);

ExactMatrix to_exact_matrix(const SignMatrix& m);
IntMatrix to_int_rows(const SignMatrix& m);

/// Text format: one row per line of '+'/'-' characters; '#' starts a comment
/// line; blank lines are skipped.  Row lengths must agree.
SignMatrix parse_sign_matrix(std::istream& in);
SignMatrix parse_sign_matrix_text(const std::string& text);
std::string format_sign_matrix(const SignMatrix& m);

}  // namespace signspan
