#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "signspan/exact_matrix.hpp"
#include "signspan/rational.hpp"

namespace signspan {

// Fraction-free Gauss-Jordan workspace for small integer matrices.  After
// reduce(), rows 0..rank-1 hold scale * RREF (pivot entries == scale > 0,
// zeros in the other pivot columns) and transform * input == rows, all exact.
// Entries are minors of the input, so products are formed in __int128 for the
// int64 instantiation and every stored value is guarded; reduce() returns
// false when the guard would be exceeded and the caller must switch to the
// BigInt instantiation.
//
// The scan_sign_vectors() member enumerates every w in {+-1}^cols that lies
// in the row space, one representative per +-w pair, by Gray-coding the sign
// pattern of w at the pivot columns: those r signs determine w uniquely, and
// w is a sign vector iff every free-column value of the combination equals
// +-scale.  Flipping one pivot sign updates the free-column values in
// O(cols - rank).
template <typename I>
class SpanReducer {
  public:
    static constexpr int kMaxRows = 32;
    static constexpr int kMaxCols = 64;
    static constexpr long long kEntryGuard = 1LL << 62;

    bool reduce_rows(const IntMatrix& input) {
        const int p = static_cast<int>(input.size());
        const int n = p == 0 ? 0 : static_cast<int>(input[0].size());
        begin(p, n);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < n; ++j) a_[i][j] = I(input[i][j]);
        return run();
    }

    // Rows of +-1 entries, bit-encoded (set bit = -1).
    bool reduce_sign_words(const std::uint64_t* words, int p, int n) {
        begin(p, n);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < n; ++j) a_[i][j] = (words[i] >> j) & 1 ? I(-1) : I(1);
        return run();
    }

    // Rows of {0,1} entries, bit-encoded (set bit = 1).
    bool reduce_01_words(const std::uint64_t* words, int p, int n) {
        begin(p, n);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < n; ++j) a_[i][j] = I((words[i] >> j) & 1);
        return run();
    }

    int rank() const { return rank_; }
    int cols() const { return cols_; }
    int input_rows() const { return rows_in_; }
    const I& scale() const { return scale_; }
    int pivot(int i) const { return pivots_[i]; }
    int free_col(int f) const { return free_[f]; }
    int free_count() const { return nfree_; }
    const I& entry(int i, int j) const { return a_[i][j]; }
    const I& transform(int i, int j) const { return t_[i][j]; }

    // True when running Gray-scan sums of basis entries cannot overflow the
    // int64 instantiation.  Always true for BigInt.
    bool sign_scan_safe() const {
        if constexpr (std::is_same_v<I, long long>) {
            return max_abs_ <= (kEntryGuard >> 6);  // rank <= 32 terms of the sum
        } else {
            return true;
        }
    }

    // Exact membership of an integer vector in the row space.
    bool contains_int_vector(const std::vector<long long>& x) const {
        if (static_cast<int>(x.size()) != cols_)
            throw std::invalid_argument("contains_int_vector: dimension mismatch");
        for (int f = 0; f < nfree_; ++f) {
            const int c = free_[f];
            if constexpr (std::is_same_v<I, long long>) {
                __int128 acc = static_cast<__int128>(x[c]) * scale_;
                for (int i = 0; i < rank_; ++i)
                    acc -= static_cast<__int128>(x[pivots_[i]]) * a_[i][c];
                if (acc != 0) return false;
            } else {
                I acc = I(x[c]) * scale_;
                for (int i = 0; i < rank_; ++i) acc -= I(x[pivots_[i]]) * a_[i][c];
                if (acc != 0) return false;
            }
        }
        return true;
    }

    bool contains_sign_bits(std::uint64_t bits) const {
        for (int f = 0; f < nfree_; ++f) {
            const int c = free_[f];
            if constexpr (std::is_same_v<I, long long>) {
                __int128 acc = (bits >> c) & 1 ? -static_cast<__int128>(scale_)
                                               : static_cast<__int128>(scale_);
                for (int i = 0; i < rank_; ++i) {
                    const int pc = pivots_[i];
                    acc -= (bits >> pc) & 1 ? -static_cast<__int128>(a_[i][c])
                                            : static_cast<__int128>(a_[i][c]);
                }
                if (acc != 0) return false;
            } else {
                I acc = (bits >> c) & 1 ? -scale_ : scale_;
                for (int i = 0; i < rank_; ++i) {
                    const int pc = pivots_[i];
                    acc -= (bits >> pc) & 1 ? -a_[i][c] : a_[i][c];
                }
                if (acc != 0) return false;
            }
        }
        return true;
    }

    // Combination beta^T * transform over the original input rows; the
    // rational coefficient vector of the scanned sign vector is this divided
    // by scale().  Bit i of beta: sign of basis row i (set = -1).
    std::vector<I> combination_over_inputs(std::uint64_t beta) const {
        std::vector<I> c(rows_in_, I(0));
        for (int i = 0; i < rank_; ++i) {
            if ((beta >> i) & 1) {
                for (int j = 0; j < rows_in_; ++j) c[j] -= t_[i][j];
            } else {
                for (int j = 0; j < rows_in_; ++j) c[j] += t_[i][j];
            }
        }
        return c;
    }

    // fn(bits, beta) -> bool; return false to stop.  Requires pivot(0) == 0
    // (always true for +-1 rows), so every emitted w has w[0] = +1.
    template <typename Fn>
    void scan_sign_vectors(Fn&& fn) const {
        if (rank_ == 0 || pivots_[0] != 0)
            throw std::logic_error("scan_sign_vectors: needs a column-0 pivot");
        const int r = rank_;
        const I d = scale_;
        I s[kMaxCols];
        int mismatch = 0;
        for (int f = 0; f < nfree_; ++f) {
            I acc(0);
            for (int i = 0; i < r; ++i) acc += a_[i][free_[f]];
            s[f] = acc;
            if (acc != d && acc != -d) ++mismatch;
        }
        std::uint64_t beta = 0;
        const std::uint64_t steps = std::uint64_t{1} << (r - 1);
        for (std::uint64_t g = 0;; ++g) {
            if (mismatch == 0) {
                std::uint64_t bits = 0;
                for (int i = 0; i < r; ++i) bits |= ((beta >> i) & 1) << pivots_[i];
                for (int f = 0; f < nfree_; ++f)
                    if (s[f] == -d) bits |= std::uint64_t{1} << free_[f];
                if (!fn(bits, beta)) return;
            }
            if (g + 1 == steps) break;
            const int j = std::countr_zero(g + 1) + 1;
            const int step = ((beta >> j) & 1) ? 2 : -2;
            beta ^= std::uint64_t{1} << j;
            for (int f = 0; f < nfree_; ++f) {
                const I old = s[f];
                const I now = old + step * a_[j][free_[f]];
                s[f] = now;
                const bool was = (old == d || old == -d);
                const bool is = (now == d || now == -d);
                mismatch += static_cast<int>(was) - static_cast<int>(is);
            }
        }
    }

  private:
    void begin(int p, int n) {
        if (p < 0 || p > kMaxRows || n < 0 || n > kMaxCols)
            throw std::invalid_argument("SpanReducer: shape exceeds capacity");
        rows_in_ = p;
        cols_ = n;
        rank_ = 0;
        nfree_ = 0;
        scale_ = I(1);
        max_abs_ = 1;
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) t_[i][j] = I(i == j ? 1 : 0);
    }

    bool run() {
        const int p = rows_in_, n = cols_;
        I prev(1);
        int r = 0;
        for (int c = 0; c < n; ++c) {
            int piv = -1;
            for (int i = r; i < p; ++i)
                if (a_[i][c] != 0) { piv = i; break; }
            if (piv < 0) {
                free_[nfree_++] = c;
                continue;
            }
            if (piv != r) {
                for (int j = 0; j < n; ++j) std::swap(a_[r][j], a_[piv][j]);
                for (int j = 0; j < p; ++j) std::swap(t_[r][j], t_[piv][j]);
            }
            const I pivval = a_[r][c];
            for (int i = 0; i < p; ++i) {
                if (i == r) continue;
                // Every other row is combined, even at f == 0: the update is
                // also the rescale that keeps all pivot entries equal.
                const I f = a_[i][c];
                if (!combine_row(a_[i], a_[r], pivval, f, prev, n)) return false;
                if (!combine_row(t_[i], t_[r], pivval, f, prev, p)) return false;
                a_[i][c] = I(0);
            }
            // Rows already pivoted keep their own pivot equal to the newest
            // pivot value, so a single trailing normalization is enough.
            pivots_[r] = c;
            prev = pivval;
            ++r;
        }
        rank_ = r;
        scale_ = prev;
        if (scale_ < 0) {
            for (int i = 0; i < r; ++i) {
                for (int j = 0; j < n; ++j) a_[i][j] = -a_[i][j];
                for (int j = 0; j < p; ++j) t_[i][j] = -t_[i][j];
            }
            scale_ = -scale_;
        }
        if constexpr (std::is_same_v<I, long long>) {
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < n; ++j) {
                    const long long v = a_[i][j] < 0 ? -a_[i][j] : a_[i][j];
                    if (v > max_abs_) max_abs_ = v;
                }
        }
        return true;
    }

    // row_i = (row_i * piv - f * row_r) / prev, exactly.
    bool combine_row(I* row_i, const I* row_r, const I& piv, const I& f, const I& prev, int len) {
        if constexpr (std::is_same_v<I, long long>) {
            for (int j = 0; j < len; ++j) {
                const __int128 num =
                    static_cast<__int128>(row_i[j]) * piv - static_cast<__int128>(f) * row_r[j];
                const __int128 q = num / prev;
                if (q > kEntryGuard || q < -kEntryGuard) return false;
                row_i[j] = static_cast<long long>(q);
            }
        } else {
            for (int j = 0; j < len; ++j) row_i[j] = (row_i[j] * piv - f * row_r[j]) / prev;
        }
        return true;
    }

    int rows_in_ = 0;
    int cols_ = 0;
    int rank_ = 0;
    int nfree_ = 0;
    I scale_ = I(1);
    long long max_abs_ = 1;
    int pivots_[kMaxRows] = {};
    int free_[kMaxCols] = {};
    I a_[kMaxRows][kMaxCols];
    I t_[kMaxRows][kMaxRows];
};

using SpanReducer64 = SpanReducer<long long>;
using SpanReducerBig = SpanReducer<BigInt>;

}  // namespace signspan
