#include <doctest.h>

#include <map>
#include <optional>

#include "signspan/exact_matrix.hpp"
#include "signspan/rng.hpp"
#include "signspan/span_events.hpp"

using namespace signspan;

namespace {

// Independent oracle path: hypercube scan with rank/RowBasis membership
// (rational elimination), no shared code with the production scan.

std::vector<Rational> to_rationals(const SignVector& v) {
    std::vector<Rational> out;
    out.reserve(v.size());
    for (int j = 0; j < v.size(); ++j) out.emplace_back(v.coord(j));
    return out;
}

bool kso_naive(const SignMatrix& m) {
    const ExactMatrix gens = to_exact_matrix(m);
    const int base_rank = rank(gens);
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << (m.n - 1)); ++c) {
        const SignVector w(m.n, c << 1);  // canonical: first coordinate +1
        bool is_row = false;
        for (const auto& row : m.rows)
            if (canonical_projective(row) == w) is_row = true;
        if (is_row) continue;
        IntMatrix stacked = to_int_rows(m);
        stacked.push_back(w.to_ints());
        if (rank(ExactMatrix::from_int_rows(stacked)) == base_rank) return true;
    }
    return false;
}

std::map<int, long long> census_naive(const SignMatrix& m) {
    const RowBasis basis = build_row_basis(to_exact_matrix(m));
    REQUIRE(basis.rank() == m.p);
    std::map<int, long long> census;
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << (m.n - 1)); ++c) {
        const SignVector w(m.n, c << 1);
        const auto coeffs = express_in_span(basis, to_rationals(w));
        if (!coeffs) continue;
        int support = 0;
        for (const auto& x : *coeffs)
            if (x != 0) ++support;
        ++census[support];
    }
    return census;
}

SignMatrix matrix_from_words(int p, int n, const std::vector<std::uint64_t>& words) {
    SignMatrix m(p, n);
    for (int i = 0; i < p; ++i) m.rows[i] = SignVector(n, words[i]);
    return m;
}

}  // namespace

TEST_CASE("witness search on the worked example") {
    const SignMatrix m = parse_sign_matrix_text("+++\n+-+\n+--\n");
    const auto w = kso_check(m);
    REQUIRE(w.has_value());
    CHECK(w->witness == SignVector(3, 0b100));  // (+1,+1,-1)
    CHECK(w->support == 3);
    REQUIRE(w->coefficients.size() == 3);
    CHECK(w->coefficients[0] == 1);
    CHECK(w->coefficients[1] == -1);
    CHECK(w->coefficients[2] == 1);
    // certificate recombines exactly
    for (int j = 0; j < m.n; ++j) {
        Rational acc(0);
        for (int i = 0; i < m.p; ++i) acc += w->coefficients[i] * Rational(m.rows[i].coord(j));
        CHECK(acc == w->witness.coord(j));
    }
}

TEST_CASE("single rows never produce a witness") {
    for (int n = 1; n <= 6; ++n)
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
            const SignMatrix m = matrix_from_words(1, n, {bits});
            CHECK_FALSE(kso_check(m).has_value());
        }
}

TEST_CASE("no pair of rows in dimension 3 produces a witness") {
    for (std::uint64_t a = 0; a < 8; ++a)
        for (std::uint64_t b = 0; b < 8; ++b) {
            const SignMatrix m = matrix_from_words(2, 3, {a, b});
            CHECK_FALSE(kso_exists(m));
            CHECK_FALSE(kso_naive(m));
        }
}

TEST_CASE("scanner agrees with the rank-based oracle on random matrices") {
    CounterRng rng = CounterRng::stream(31, 0);
    int found = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int p = 1 + static_cast<int>(rng.next_below(5));
        const int n = 2 + static_cast<int>(rng.next_below(7));
        SignMatrix m = random_sign_matrix(p, n, rng);
        const bool fast = kso_exists(m);
        CHECK(fast == kso_naive(m));
        if (fast) {
            ++found;
            const auto w = kso_check(m);
            REQUIRE(w.has_value());
            CHECK(w->support >= 1);
            for (int j = 0; j < m.n; ++j) {
                Rational acc(0);
                for (int i = 0; i < m.p; ++i)
                    acc += w->coefficients[i] * Rational(m.rows[i].coord(j));
                CHECK(acc == w->witness.coord(j));
            }
            // a witness never coincides with a row class
            for (const auto& row : m.rows)
                CHECK(canonical_projective(row) != canonical_projective(w->witness));
        }
    }
    CHECK(found > 0);
}

TEST_CASE("support census") {
    SUBCASE("worked example") {
        const SignMatrix m = parse_sign_matrix_text("+++\n+-+\n+--\n");
        const auto census = witness_support_census(m);
        REQUIRE(census.size() == 2);
        CHECK(census.at(1) == 3);
        CHECK(census.at(3) == 1);
    }
    SUBCASE("single row") {
        const SignMatrix m = parse_sign_matrix_text("+-+-\n");
        const auto census = witness_support_census(m);
        REQUIRE(census.size() == 1);
        CHECK(census.at(1) == 1);
    }
    SUBCASE("full span counts every projective class") {
        const SignMatrix m = parse_sign_matrix_text("++++\n++--\n+-+-\n+--+\n");
        const auto census = witness_support_census(m);
        long long total = 0;
        for (const auto& [support, count] : census) total += count;
        CHECK(total == 8);  // 2^(4-1)
        CHECK(census.at(1) == 4);
    }
    SUBCASE("dependent rows are rejected") {
        const SignMatrix m = parse_sign_matrix_text("++++\n----\n");
        CHECK_THROWS_AS(witness_support_census(m), std::invalid_argument);
    }
    SUBCASE("census agrees with the rational-elimination oracle") {
        CounterRng rng = CounterRng::stream(32, 0);
        int compared = 0;
        while (compared < 300) {
            const int p = 1 + static_cast<int>(rng.next_below(5));
            const int n = 2 + static_cast<int>(rng.next_below(7));
            SignMatrix m = random_sign_matrix(p, n, rng);
            if (rank(to_exact_matrix(m)) != p) continue;
            CHECK(witness_support_census(m) == census_naive(m));
            ++compared;
        }
    }
}

TEST_CASE("exact event probabilities") {
    CHECK(exact_event_probability({EventKind::kKso, 1, 3, 0}).count == 0);
    CHECK(exact_event_probability({EventKind::kKso, 2, 3, 0}).count == 0);

    const auto s2 = exact_event_probability({EventKind::kSingularPm1, 2, 2, 0});
    CHECK(s2.probability == Rational(1, 2));
    CHECK(s2.count == 8);
    CHECK(s2.total == 16);

    // Frozen from exhaustion; the n=2..4 counts also match the published
    // census of singular sign matrices (8, 320, 43264).
    CHECK(exact_event_probability({EventKind::kSingularPm1, 3, 3, 0}).count == 320);
    CHECK(exact_event_probability({EventKind::kSingularPm1, 4, 4, 0}).count == 43264);
    CHECK(exact_event_probability({EventKind::kSingular01, 2, 2, 0}).probability == Rational(5, 8));
}

TEST_CASE("symmetry reduction is exact") {
    for (const EventSpec e : {EventSpec{EventKind::kKso, 3, 4, 0},
                              EventSpec{EventKind::kSingularPm1, 3, 3, 0},
                              EventSpec{EventKind::kSupportM, 3, 4, 3}}) {
        const auto reduced = exact_event_probability(e, {true, false, 1});
        const auto plain = exact_event_probability(e, {false, false, 1});
        CHECK(reduced.count == plain.count);
        CHECK(reduced.probability == plain.probability);
    }
}

TEST_CASE("event tally is consistent with the per-event counts") {
    const EventTally t = exhaustive_event_tally(3, 4);
    CHECK(t.kso == exact_event_probability({EventKind::kKso, 3, 4, 0}).count);
    CHECK(t.rank_deficient == exact_event_probability({EventKind::kRankDeficient, 3, 4, 0}).count);
    for (int m = 2; m <= 3; ++m) {
        CHECK(t.support[m] == exact_event_probability({EventKind::kSupportM, 3, 4, m}).count);
        CHECK(t.support_indep[m] ==
              exact_event_probability({EventKind::kSupportMIndep, 3, 4, m}).count);
    }
    CHECK(t.support_indep[2] == 0);  // no support-2 witnesses on independent rows
}

TEST_CASE("ordered tuple counts") {
    CHECK(count_kso_independent_tuples(1) == 0);
    CHECK(count_kso_independent_tuples(2) == 0);
    CHECK(count_kso_independent_tuples(3) == 288);

    SUBCASE("direct ordered enumeration oracle") {
        for (int n = 2; n <= 3; ++n) {
            const int ambient = n + 1;
            const int npts = 1 << n;
            long long ordered = 0;
            std::vector<int> idx(n, 0);
            // odometer over ordered tuples with distinct entries
            for (;;) {
                bool distinct = true;
                for (int i = 0; i < n && distinct; ++i)
                    for (int j = i + 1; j < n; ++j)
                        if (idx[i] == idx[j]) distinct = false;
                if (distinct) {
                    IntMatrix rows(n, std::vector<long long>(ambient));
                    for (int i = 0; i < n; ++i) {
                        rows[i][0] = 1;
                        for (int j = 0; j < n; ++j) rows[i][j + 1] = (idx[i] >> j) & 1 ? -1 : 1;
                    }
                    if (rank(ExactMatrix::from_int_rows(rows)) == n) {
                        SignMatrix m(n, ambient);
                        for (int i = 0; i < n; ++i)
                            m.rows[i] = SignVector(ambient, static_cast<std::uint64_t>(idx[i]) << 1);
                        if (kso_naive(m)) ++ordered;
                    }
                }
                int pos = n - 1;
                while (pos >= 0 && idx[pos] == npts - 1) idx[pos--] = 0;
                if (pos < 0) break;
                ++idx[pos];
            }
            CHECK(BigInt(ordered) == count_kso_independent_tuples(n));
        }
    }

    CHECK_THROWS_AS(count_kso_independent_tuples(6), std::invalid_argument);
}

TEST_CASE("dependent tuple fractions") {
    for (int n = 1; n <= 4; ++n) CHECK(delta_dependent_fraction(n, 1) == 0);
    CHECK(delta_dependent_fraction(2, 3) == 0);
    CHECK(delta_dependent_fraction(3, 2) == 0);
    CHECK(delta_dependent_fraction(3, 4) == Rational(6, 35));

    SUBCASE("subset-rank oracle at n=3, k=4") {
        // 4-subsets of the 8 points (1, b1, b2, b3) with rank < 4
        long long dependent = 0, total = 0;
        for (int a = 0; a < 8; ++a)
            for (int b = a + 1; b < 8; ++b)
                for (int c = b + 1; c < 8; ++c)
                    for (int d = c + 1; d < 8; ++d) {
                        IntMatrix rows;
                        for (int idx : {a, b, c, d}) {
                            std::vector<long long> row{1};
                            for (int j = 0; j < 3; ++j) row.push_back((idx >> j) & 1 ? -1 : 1);
                            rows.push_back(std::move(row));
                        }
                        ++total;
                        if (rank(ExactMatrix::from_int_rows(rows)) < 4) ++dependent;
                    }
        CHECK(total == 70);
        CHECK(Rational(dependent, total) == delta_dependent_fraction(3, 4));
    }

    CHECK_THROWS_AS(delta_dependent_fraction(5, 3), std::invalid_argument);
    CHECK_THROWS_AS(delta_dependent_fraction(3, 5), std::invalid_argument);
    CHECK(delta_dependent_fraction(5, 2, /*force=*/true) == 0);
}

TEST_CASE("event specification validation") {
    CHECK_THROWS_AS(EventSpec{EventKind::kSingularPm1, 3, 4, 0}.validate(), std::invalid_argument);
    CHECK_THROWS_AS(EventSpec{EventKind::kSupportM, 3, 4, 0}.validate(), std::invalid_argument);
    CHECK_THROWS_AS(EventSpec{EventKind::kSupportM, 3, 4, 4}.validate(), std::invalid_argument);
    CHECK_THROWS_AS(EventSpec{EventKind::kKso, 0, 4, 0}.validate(), std::invalid_argument);
    for (const char* name :
         {"kso", "support", "support-indep", "rank-deficient", "singular", "singular01"}) {
        const auto kind = EventSpec::kind_from_name(name);
        REQUIRE(kind.has_value());
        EventSpec e{*kind, 2, 2, 1};
        CHECK(e.name() == name);
    }
    CHECK_FALSE(EventSpec::kind_from_name("nope").has_value());
}

TEST_CASE("exhaustion guards") {
    CHECK_THROWS_AS(exact_event_probability({EventKind::kKso, 7, 5, 0}), std::invalid_argument);
    CHECK_THROWS_AS(exact_event_probability({EventKind::kKso, 7, 5, 0}, {false, false, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(exact_event_probability({EventKind::kSingular01, 6, 6, 0}),
                    std::invalid_argument);
}
