#include <doctest.h>

#include "signspan/exact_matrix.hpp"
#include "signspan/rng.hpp"
#include "signspan/span_basis.hpp"

using namespace signspan;

namespace {

ExactMatrix from_rows(const IntMatrix& rows) { return ExactMatrix::from_int_rows(rows); }

IntMatrix random_int_matrix(CounterRng& rng, int max_dim, long long lo, long long hi) {
    const int r = 1 + static_cast<int>(rng.next_below(max_dim));
    const int c = 1 + static_cast<int>(rng.next_below(max_dim));
    IntMatrix m(r, std::vector<long long>(c));
    for (auto& row : m)
        for (auto& v : row) v = lo + static_cast<long long>(rng.next_below(hi - lo + 1));
    return m;
}

IntMatrix transpose(const IntMatrix& m) {
    if (m.empty()) return {};
    IntMatrix t(m[0].size(), std::vector<long long>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[0].size(); ++j) t[j][i] = m[i][j];
    return t;
}

}  // namespace

TEST_CASE("rank of simple shapes") {
    CHECK(rank(ExactMatrix::identity(4)) == 4);
    CHECK(rank(ExactMatrix(3, 5)) == 0);
    CHECK(rank(ExactMatrix()) == 0);
    // pairwise orthogonal rows
    CHECK(rank(from_rows({{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}})) == 4);
}

TEST_CASE("row basis of simple shapes") {
    SUBCASE("single scaled row") {
        const RowBasis b = build_row_basis(from_rows({{2, 4}}));
        REQUIRE(b.rank() == 1);
        CHECK(b.basis.at(0, 0) == 1);
        CHECK(b.basis.at(0, 1) == 2);
        CHECK(b.transform.at(0, 0) == Rational(1, 2));
    }
    SUBCASE("full rank pair") {
        const RowBasis b = build_row_basis(from_rows({{1, 1}, {1, -1}}));
        REQUIRE(b.rank() == 2);
        CHECK(b.basis.at(0, 0) == 1);
        CHECK(b.basis.at(0, 1) == 0);
        CHECK(b.basis.at(1, 0) == 0);
        CHECK(b.basis.at(1, 1) == 1);
    }
    SUBCASE("dependent rows collapse") {
        const RowBasis b = build_row_basis(from_rows({{1, 1}, {2, 2}}));
        CHECK(b.rank() == 1);
    }
}

TEST_CASE("express_in_span") {
    const ExactMatrix gens = from_rows({{1, 1, 1}, {1, -1, 1}});
    const RowBasis b = build_row_basis(gens);
    REQUIRE(b.rank() == 2);

    SUBCASE("member with unique coefficients") {
        const auto c = express_in_span(b, {Rational(1), Rational(0), Rational(1)});
        REQUIRE(c.has_value());
        CHECK((*c)[0] == Rational(1, 2));
        CHECK((*c)[1] == Rational(1, 2));
    }
    SUBCASE("non-member (rank oracle confirms)") {
        const std::vector<Rational> w{Rational(0), Rational(0), Rational(1)};
        ExactMatrix stacked = from_rows({{1, 1, 1}, {1, -1, 1}, {0, 0, 1}});
        CHECK(rank(stacked) == 3);  // w genuinely outside the span
        CHECK_FALSE(express_in_span(b, w).has_value());
    }
    SUBCASE("negated single row") {
        const RowBasis one = build_row_basis(from_rows({{3, -1, 2}}));
        const auto c = express_in_span(one, {Rational(-3), Rational(1), Rational(-2)});
        REQUIRE(c.has_value());
        CHECK((*c)[0] == Rational(-1));
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(express_in_span(b, {Rational(1)}), std::invalid_argument);
    }
}

TEST_CASE("rank over prime fields") {
    CHECK(rank_mod_p({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 2) == 3);
    CHECK(rank_mod_p({{2, 4}}, 2) == 0);
    SUBCASE("rank depends on the field") {
        const IntMatrix m{{1, 1}, {1, -1}};
        CHECK(rank_mod_p(m, 2) == 1);
        CHECK(rank(from_rows(m)) == 2);
    }
    CHECK_THROWS_AS(rank_mod_p({{1}}, 4), std::invalid_argument);
    CHECK_THROWS_AS(rank_mod_p({{1}}, 1), std::invalid_argument);
}

TEST_CASE("rank equals rank of the transpose") {
    CounterRng rng = CounterRng::stream(11, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const IntMatrix m = random_int_matrix(rng, 6, -3, 3);
        CHECK(rank(from_rows(m)) == rank(from_rows(transpose(m))));
    }
}

TEST_CASE("basis rows reproduce exactly through the transform") {
    CounterRng rng = CounterRng::stream(12, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const IntMatrix m = random_int_matrix(rng, 5, -4, 4);
        const ExactMatrix gens = from_rows(m);
        const RowBasis b = build_row_basis(gens);
        for (int i = 0; i < b.rank(); ++i)
            for (int j = 0; j < b.ambient; ++j) {
                Rational acc(0);
                for (int g = 0; g < gens.rows; ++g) acc += b.transform.at(i, g) * gens.at(g, j);
                CHECK(acc == b.basis.at(i, j));
            }
    }
}

TEST_CASE("express coefficients recombine to the input vector") {
    CounterRng rng = CounterRng::stream(13, 0);
    int members = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const IntMatrix m = random_int_matrix(rng, 5, -3, 3);
        const ExactMatrix gens = from_rows(m);
        const RowBasis b = build_row_basis(gens);
        // Random combination of generators is always a member.
        std::vector<Rational> w(b.ambient, Rational(0));
        for (int g = 0; g < gens.rows; ++g) {
            const Rational coef(static_cast<long long>(rng.next_below(7)) - 3, 1 + static_cast<long long>(rng.next_below(3)));
            for (int j = 0; j < b.ambient; ++j) w[j] += coef * gens.at(g, j);
        }
        const auto c = express_in_span(b, w);
        REQUIRE(c.has_value());
        ++members;
        for (int j = 0; j < b.ambient; ++j) {
            Rational acc(0);
            for (int g = 0; g < gens.rows; ++g) acc += (*c)[g] * gens.at(g, j);
            CHECK(acc == w[j]);
        }
    }
    CHECK(members == 200);
}

TEST_CASE("rational rank dominates every prime-field rank") {
    CounterRng rng = CounterRng::stream(14, 0);
    for (int trial = 0; trial < 150; ++trial) {
        const IntMatrix m = random_int_matrix(rng, 6, -5, 5);
        const int rq = rank(from_rows(m));
        for (std::uint64_t prime : {2ull, 3ull, 5ull, 7ull}) CHECK(rq >= rank_mod_p(m, prime));
    }
}

TEST_CASE("fraction-free reduction matches the rational row basis") {
    CounterRng rng = CounterRng::stream(15, 0);
    for (int trial = 0; trial < 150; ++trial) {
        const IntMatrix m = random_int_matrix(rng, 6, -2, 2);
        SpanReducer64 red;
        if (!red.reduce_rows(m)) continue;
        const RowBasis b = build_row_basis(from_rows(m));
        REQUIRE(red.rank() == b.rank());
        REQUIRE(red.scale() > 0);
        for (int i = 0; i < b.rank(); ++i) {
            CHECK(red.pivot(i) == b.pivots[i]);
            for (int j = 0; j < b.ambient; ++j)
                CHECK(Rational(BigInt(red.entry(i, j)), BigInt(red.scale())) == b.basis.at(i, j));
        }
        // transform * input == scaled basis rows
        for (int i = 0; i < red.rank(); ++i)
            for (int j = 0; j < b.ambient; ++j) {
                long long acc = 0;
                for (std::size_t g = 0; g < m.size(); ++g)
                    acc += red.transform(i, static_cast<int>(g)) * m[g][j];
                CHECK(acc == red.entry(i, j));
            }
    }
}
