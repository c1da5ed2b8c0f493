#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "signspan/sign_vector.hpp"

using namespace signspan;

TEST_CASE("enumeration order and cardinality") {
    SUBCASE("n=1") {
        std::vector<SignVector> v;
        enumerate_sign_vectors(1, [&](const SignVector& s) { v.push_back(s); });
        REQUIRE(v.size() == 2);
        CHECK(v[0].coord(0) == 1);
        CHECK(v[1].coord(0) == -1);
    }
    SUBCASE("n=2 endpoints") {
        const auto v = all_sign_vectors(2);
        REQUIRE(v.size() == 4);
        CHECK(v.front().bits() == 0);   // (+1,+1)
        CHECK(v.back().bits() == 3);    // (-1,-1)
    }
    SUBCASE("n=5 cardinality") { CHECK(all_sign_vectors(5).size() == 32); }
    SUBCASE("range guard") {
        CHECK_THROWS_AS(enumerate_sign_vectors(0, [](const SignVector&) {}), std::invalid_argument);
        CHECK_THROWS_AS(enumerate_sign_vectors(31, [](const SignVector&) {}), std::invalid_argument);
    }
}

TEST_CASE("projective canonicalization") {
    const SignVector keep(2, 0b10);  // (+1,-1)
    CHECK(canonical_projective(keep) == keep);
    const SignVector flip(2, 0b01);  // (-1,+1)
    CHECK(canonical_projective(flip) == keep);
    SUBCASE("idempotent over all of {+-1}^4") {
        enumerate_sign_vectors(4, [](const SignVector& v) {
            CHECK(canonical_projective(canonical_projective(v)) == canonical_projective(v));
        });
    }
    SUBCASE("partitions into 2^(n-1) classes of size 2") {
        for (int n = 1; n <= 6; ++n) {
            std::map<std::uint64_t, int> classes;
            enumerate_sign_vectors(n, [&](const SignVector& v) {
                ++classes[canonical_projective(v).bits()];
            });
            CHECK(classes.size() == (std::size_t{1} << (n - 1)));
            for (const auto& [bits, count] : classes) {
                CHECK(count == 2);
                CHECK((bits & 1) == 0);
            }
        }
    }
}

TEST_CASE("projective embedding") {
    CHECK(embed_en(SignVector(2, 0b00)).v == SignVector(3, 0b000));  // (+,+) -> (+,+,+)
    CHECK(embed_en(SignVector(2, 0b01)).v == SignVector(3, 0b010));  // (-,+) -> (+,-,+)
    SUBCASE("all 2^n images are distinct canonical points") {
        for (int n = 1; n <= 4; ++n) {
            std::set<std::uint64_t> seen;
            enumerate_sign_vectors(n, [&](const SignVector& b) {
                const EnPoint e = embed_en(b);
                CHECK(e.v.first_coord_positive());
                seen.insert(e.v.bits());
            });
            CHECK(seen.size() == (std::size_t{1} << n));
        }
    }
}

TEST_CASE("popcount dot product equals the exact-matrix dot") {
    for (int n : {2, 5, 10}) {
        const auto vecs = all_sign_vectors(n);
        // Convert once; compare every pair through exact arithmetic.
        std::vector<std::vector<Rational>> exact(vecs.size());
        for (std::size_t i = 0; i < vecs.size(); ++i) {
            exact[i].reserve(n);
            for (int j = 0; j < n; ++j) exact[i].push_back(Rational(vecs[i].coord(j)));
        }
        long long mismatches = 0;
        for (std::size_t i = 0; i < vecs.size(); ++i)
            for (std::size_t j = 0; j < vecs.size(); ++j) {
                Rational acc(0);
                for (int k = 0; k < n; ++k) acc += exact[i][k] * exact[j][k];
                if (acc != vecs[i].dot(vecs[j])) ++mismatches;
            }
        CHECK(mismatches == 0);
    }
}

TEST_CASE("random matrices are reproducible and unbiased") {
    SUBCASE("determinism under state reset") {
        CounterRng a = CounterRng::stream(42, 5);
        CounterRng b = CounterRng::stream(42, 5);
        const SignMatrix ma = random_sign_matrix(6, 17, a);
        const SignMatrix mb = random_sign_matrix(6, 17, b);
        for (int i = 0; i < 6; ++i) CHECK(ma.rows[i] == mb.rows[i]);
    }
    SUBCASE("single cell") {
        CounterRng rng = CounterRng::stream(1, 0);
        const SignMatrix m = random_sign_matrix(1, 1, rng);
        CHECK((m.rows[0].coord(0) == 1 || m.rows[0].coord(0) == -1));
    }
    SUBCASE("entry mean within the 6-sigma band") {
        CounterRng rng = CounterRng::stream(2024, 0);
        long long sum = 0;
        const int draws = 100000;
        for (int i = 0; i < draws / 10; ++i) {
            const SignMatrix m = random_sign_matrix(1, 10, rng);
            for (int j = 0; j < 10; ++j) sum += m.rows[0].coord(j);
        }
        const double mean = static_cast<double>(sum) / draws;
        CHECK(mean > -0.02);
        CHECK(mean < 0.02);
    }
}

TEST_CASE("matrix text format") {
    SUBCASE("comments, blanks and whitespace") {
        const std::string text = "# header comment\n\n+ + -\n--+\n  # trailing\n";
        const SignMatrix m = parse_sign_matrix_text(text);
        CHECK(m.p == 2);
        CHECK(m.n == 3);
        CHECK(m.rows[0] == SignVector(3, 0b100));
        CHECK(m.rows[1] == SignVector(3, 0b011));
    }
    SUBCASE("round trip") {
        const std::string text = "++-+\n-+-+\n----\n";
        CHECK(format_sign_matrix(parse_sign_matrix_text(text)) == text);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(parse_sign_matrix_text("++\n+\n"), std::invalid_argument);
        CHECK_THROWS_AS(parse_sign_matrix_text("+x+\n"), std::invalid_argument);
        CHECK_THROWS_AS(parse_sign_matrix_text("# only comments\n"), std::invalid_argument);
    }
}

TEST_CASE("exact conversion preserves entries") {
    CounterRng rng = CounterRng::stream(7, 3);
    const SignMatrix m = random_sign_matrix(4, 9, rng);
    const ExactMatrix e = to_exact_matrix(m);
    const IntMatrix ints = to_int_rows(m);
    for (int i = 0; i < m.p; ++i)
        for (int j = 0; j < m.n; ++j) {
            CHECK(e.at(i, j) == m.rows[i].coord(j));
            CHECK(ints[i][j] == m.rows[i].coord(j));
        }
}
