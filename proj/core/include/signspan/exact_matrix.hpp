#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "signspan/rational.hpp"

namespace signspan {

using IntMatrix = std::vector<std::vector<long long>>;

/// Dense matrix of exact rationals, row-major.
struct ExactMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Rational> entries;

    ExactMatrix() = default;
    ExactMatrix(int r, int c) : rows(r), cols(c), entries(static_cast<std::size_t>(r) * c) {}

    Rational& at(int r, int c) { return entries[static_cast<std::size_t>(r) * cols + c]; }
    const Rational& at(int r, int c) const { return entries[static_cast<std::size_t>(r) * cols + c]; }

    static ExactMatrix identity(int n);
    static ExactMatrix from_int_rows(const IntMatrix& m);

    std::vector<Rational> row(int r) const;
};

/// Row-space basis in reduced echelon form (unit pivots, strictly increasing
/// pivot columns) together with the row operations that produced it:
/// transform * generators == basis, exactly.
struct RowBasis {
    int ambient = 0;
    ExactMatrix basis;
    std::vector<int> pivots;
    ExactMatrix transform;

    int rank() const { return basis.rows; }
};

/// Exact rank of the row space.  Empty matrix has rank 0.
int rank(const ExactMatrix& m);

RowBasis build_row_basis(const ExactMatrix& generators);

/// Coefficients of w over the ORIGINAL generator rows of b, if w lies in the
/// row space; absent otherwise.  Unique when the generators are independent.
/// Throws on dimension mismatch.
std::optional<std::vector<Rational>> express_in_span(const RowBasis& b,
                                                     const std::vector<Rational>& w);

/// Rank of an integer matrix over GF(prime).  Throws if `prime` is not a
/// prime below 2^31.
int rank_mod_p(const IntMatrix& m, std::uint64_t prime);

/// Fraction-free rank of an integer matrix (exact, arbitrary precision).
int rank_int(const IntMatrix& m);

}  // namespace signspan
