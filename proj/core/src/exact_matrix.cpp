#include "signspan/exact_matrix.hpp"

#include <stdexcept>

namespace signspan {

ExactMatrix ExactMatrix::identity(int n) {
    ExactMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

ExactMatrix ExactMatrix::from_int_rows(const IntMatrix& rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
    ExactMatrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c)
            throw std::invalid_argument("from_int_rows: ragged rows");
        for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

std::vector<Rational> ExactMatrix::row(int r) const {
    return std::vector<Rational>(entries.begin() + static_cast<std::size_t>(r) * cols,
                                 entries.begin() + static_cast<std::size_t>(r + 1) * cols);
}

namespace {

// Fraction-free (Bareiss) elimination on big integers.  Entries after step k
// are (k+1)-minors of the input; the division by the previous pivot is exact.
int bareiss_rank(std::vector<std::vector<BigInt>> a) {
    const int rows = static_cast<int>(a.size());
    if (rows == 0) return 0;
    const int cols = static_cast<int>(a[0].size());
    BigInt prev = 1;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (a[i][c] != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(a[r], a[piv]);
        for (int i = r + 1; i < rows; ++i) {
            for (int j = c + 1; j < cols; ++j)
                a[i][j] = (a[i][j] * a[r][c] - a[i][c] * a[r][j]) / prev;
            a[i][c] = 0;
        }
        prev = a[r][c];
        ++r;
    }
    return r;
}

}  // namespace

int rank_int(const IntMatrix& m) {
    std::vector<std::vector<BigInt>> a(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) a[i].assign(m[i].begin(), m[i].end());
    return bareiss_rank(std::move(a));
}

int rank(const ExactMatrix& m) {
    if (m.rows == 0 || m.cols == 0) return 0;
    // Scale each row to integers (rank is invariant under row scaling), then
    // eliminate fraction-free.
    std::vector<std::vector<BigInt>> a(m.rows, std::vector<BigInt>(m.cols));
    for (int i = 0; i < m.rows; ++i) {
        BigInt lcm = 1;
        for (int j = 0; j < m.cols; ++j)
            lcm = boost::multiprecision::lcm(lcm, BigInt(denominator(m.at(i, j))));
        for (int j = 0; j < m.cols; ++j) {
            const Rational& q = m.at(i, j);
            a[i][j] = BigInt(numerator(q)) * (lcm / BigInt(denominator(q)));
        }
    }
    return bareiss_rank(std::move(a));
}

RowBasis build_row_basis(const ExactMatrix& generators) {
    const int p = generators.rows;
    const int n = generators.cols;
    // Rational Gauss-Jordan on [G | I]; the identity block records the row
    // operations and becomes the transform.
    ExactMatrix work = generators;
    ExactMatrix tr = ExactMatrix::identity(p);

    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < n && r < p; ++c) {
        int piv = -1;
        for (int i = r; i < p; ++i)
            if (work.at(i, c) != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != r) {
            for (int j = 0; j < n; ++j) std::swap(work.at(r, j), work.at(piv, j));
            for (int j = 0; j < p; ++j) std::swap(tr.at(r, j), tr.at(piv, j));
        }
        const Rational inv = Rational(1) / work.at(r, c);
        for (int j = 0; j < n; ++j) work.at(r, j) *= inv;
        for (int j = 0; j < p; ++j) tr.at(r, j) *= inv;
        for (int i = 0; i < p; ++i) {
            if (i == r || work.at(i, c) == 0) continue;
            const Rational f = work.at(i, c);
            for (int j = 0; j < n; ++j) work.at(i, j) -= f * work.at(r, j);
            for (int j = 0; j < p; ++j) tr.at(i, j) -= f * tr.at(r, j);
        }
        pivots.push_back(c);
        ++r;
    }

    RowBasis b;
    b.ambient = n;
    b.pivots = std::move(pivots);
    b.basis = ExactMatrix(r, n);
    b.transform = ExactMatrix(r, p);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < n; ++j) b.basis.at(i, j) = work.at(i, j);
        for (int j = 0; j < p; ++j) b.transform.at(i, j) = tr.at(i, j);
    }
    return b;
}

std::optional<std::vector<Rational>> express_in_span(const RowBasis& b,
                                                     const std::vector<Rational>& w) {
    if (static_cast<int>(w.size()) != b.ambient)
        throw std::invalid_argument("express_in_span: dimension mismatch");
    const int r = b.rank();
    // RREF with unit pivots: the only possible basis coefficients are w's
    // values at the pivot columns.
    std::vector<Rational> c(r);
    for (int i = 0; i < r; ++i) c[i] = w[b.pivots[i]];
    for (int j = 0; j < b.ambient; ++j) {
        Rational acc = w[j];
        for (int i = 0; i < r; ++i) acc -= c[i] * b.basis.at(i, j);
        if (acc != 0) return std::nullopt;
    }
    const int p = b.transform.cols;
    std::vector<Rational> coeff(p, Rational(0));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < p; ++j) coeff[j] += c[i] * b.transform.at(i, j);
    return coeff;
}

namespace {

bool is_prime_u64(std::uint64_t v) {
    if (v < 2) return false;
    for (std::uint64_t d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

}  // namespace

int rank_mod_p(const IntMatrix& m, std::uint64_t prime) {
    if (prime >= (1ULL << 31) || !is_prime_u64(prime))
        throw std::invalid_argument("rank_mod_p: modulus must be a prime below 2^31");
    const int rows = static_cast<int>(m.size());
    if (rows == 0) return 0;
    const int cols = static_cast<int>(m[0].size());
    const long long p = static_cast<long long>(prime);
    std::vector<std::vector<long long>> a(rows, std::vector<long long>(cols));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a[i][j] = ((m[i][j] % p) + p) % p;

    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (a[i][c] != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(a[r], a[piv]);
        // Modular inverse by Fermat.
        long long inv = 1, base = a[r][c], e = p - 2;
        while (e) {
            if (e & 1) inv = static_cast<long long>(static_cast<unsigned long long>(inv) * base % p);
            base = static_cast<long long>(static_cast<unsigned long long>(base) * base % p);
            e >>= 1;
        }
        for (int j = c; j < cols; ++j)
            a[r][j] = static_cast<long long>(static_cast<unsigned long long>(a[r][j]) * inv % p);
        for (int i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            const long long f = a[i][c];
            for (int j = c; j < cols; ++j) {
                long long v = a[i][j] - static_cast<long long>(static_cast<unsigned long long>(f) * a[r][j] % p);
                a[i][j] = v < 0 ? v + p : v;
            }
        }
        ++r;
    }
    return r;
}

}  // namespace signspan
