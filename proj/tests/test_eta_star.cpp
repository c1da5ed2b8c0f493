#include <doctest.h>

#include "signspan/eta_star.hpp"
#include "signspan/exact_matrix.hpp"
#include "signspan/verify.hpp"

using namespace signspan;

TEST_CASE("point canonicalization") {
    CHECK(canonicalize_point({2, 4}) == std::vector<long long>{1, 2});
    CHECK(canonicalize_point({0, -2, 4}) == std::vector<long long>{0, 1, -2});
    CHECK(canonicalize_point({-3, 0, 0}) == std::vector<long long>{1, 0, 0});
    CHECK_THROWS_AS(canonicalize_point({0, 0, 0}), std::invalid_argument);
}

TEST_CASE("configuration validation") {
    CHECK_THROWS_AS(PointConfig::create(3, {{1, 1, 1}, {2, 2, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(PointConfig::create(3, {{1, 1, 1}, {-1, -1, -1}}), std::invalid_argument);
    CHECK_THROWS_AS(PointConfig::create(3, {{1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(PointConfig::create(1, {{1}}), std::invalid_argument);
    CHECK_THROWS_AS(
        PointConfig::create(3, {{1, 0, 0}, {0, 1, 0}}, std::vector<Rational>{Rational(1)}),
        std::invalid_argument);
    CHECK_THROWS_AS(PointConfig::create(3, {{1, 0, 0}, {0, 1, 0}},
                                        std::vector<Rational>{Rational(1), Rational(1)}),
                    std::invalid_argument);

    const PointConfig h = PointConfig::create(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    CHECK(h.weights[0] == 1);
    CHECK(h.weights[1] == 0);
    CHECK(h.spans_ambient());
    CHECK_FALSE(PointConfig::create(3, {{1, 0, 0}, {0, 1, 0}}).spans_ambient());
}

TEST_CASE("configuration JSON") {
    const PointConfig h = PointConfig::from_json_text(
        R"({"ambient":3,"points":[[1,1,1],[1,1,-1],[1,-1,1],[1,-1,-1]],"weights":["1/2","1/2",0,"0"]})");
    CHECK(h.ambient == 3);
    CHECK(h.size() == 4);
    CHECK(h.weights[0] == Rational(1, 2));
    const PointConfig back = PointConfig::from_json_text(h.to_json());
    CHECK(back.points == h.points);
    CHECK(back.weights == h.weights);

    CHECK_THROWS_AS(PointConfig::from_json_text("not json"), std::invalid_argument);
    CHECK_THROWS_AS(PointConfig::from_json_text(R"({"points":[[1,0]]})"), std::invalid_argument);
    CHECK_THROWS_AS(PointConfig::from_json_text(
                        R"({"ambient":3,"points":[[1,0,0],[0,1,0],[0,0,1]],"weights":["1","1","0"]})"),
                    std::invalid_argument);
}

TEST_CASE("skeleton slices") {
    SUBCASE("triangle boundary") {
        const SkeletonSlice s = build_skeleton(basis_config(3));
        CHECK(s.size_n.size() == 3);    // all pairs span planes
        CHECK(s.size_np1.empty());      // the full triple spans everything
        CHECK(s.size_nm1.size() == 3);  // vertices
    }
    SUBCASE("four generic points keep only the edge skeleton") {
        const SkeletonSlice s = build_skeleton(generic_points_config(3, 4));
        CHECK(s.size_n.size() == 6);
        CHECK(s.size_np1.empty());
    }
    SUBCASE("a dependent triple becomes a filled cell") {
        const PointConfig h = PointConfig::create(3, {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}});
        const SkeletonSlice s = build_skeleton(h);
        CHECK(s.size_np1.size() == 1);  // exactly {0,1,2} spans a plane only
    }
    SUBCASE("guards and preconditions") {
        CHECK_THROWS_AS(build_skeleton(PointConfig::create(3, {{1, 0, 0}, {0, 1, 0}})),
                        std::invalid_argument);
        IntMatrix many;
        for (int i = 0; i < 21; ++i) many.push_back({1, i, i * i});
        CHECK_THROWS_AS(build_skeleton(PointConfig::create(3, std::move(many))),
                        std::invalid_argument);
    }
}

TEST_CASE("homology rank closed forms") {
    for (int n = 2; n <= 4; ++n) {
        CHECK(eta_star_homology(basis_config(n + 1)) == 1);
        CHECK(eta_star_homology(generic_points_config(n + 1, n + 2)) == n + 1);
    }
    SUBCASE("ambient 2: isolated vertices") {
        const PointConfig h = PointConfig::create(2, {{1, 0}, {0, 1}, {1, 1}, {1, 2}});
        CHECK(eta_star_homology(h) == 3);   // T - 1 components
        CHECK(eta_star_flagsum(h) == 3);
    }
}

TEST_CASE("the square configuration") {
    const PointConfig e2 = en_config(2);
    SUBCASE("all four triples are genuinely independent") {
        for (int drop = 0; drop < 4; ++drop) {
            IntMatrix rows;
            for (int i = 0; i < 4; ++i)
                if (i != drop) rows.push_back(e2.points[i]);
            CHECK(rank(ExactMatrix::from_int_rows(rows)) == 3);
        }
    }
    CHECK(eta_star_homology(e2) == 3);
    CHECK(eta_star_flagsum(e2) == 3);
    SUBCASE("weights do not matter") {
        for (const auto& w : standard_weight_sets(4))
            CHECK(eta_star_flagsum(e2.with_weights(w)) == 3);
    }
}

TEST_CASE("the cube configuration agrees across both routes") {
    const PointConfig e3 = en_config(3);
    const long long h = eta_star_homology(e3);
    CHECK(h == 23);
    CHECK(eta_star_flagsum(e3) == h);
    CHECK(eta_star_flagsum(e3.with_weights(standard_weight_sets(8)[2])) == h);
}

TEST_CASE("field independence of the homology rank") {
    std::vector<PointConfig> configs{basis_config(4), generic_points_config(4, 6), en_config(2),
                                     en_config(3)};
    CounterRng rng = CounterRng::stream(55, 0);
    for (int i = 0; i < 10; ++i) configs.push_back(random_spanning_config(rng));
    for (const auto& h : configs) {
        const long long over_q = eta_star_homology(h);
        CHECK(over_q == eta_star_homology(h, HomologyField::gf(2)));
        CHECK(over_q == eta_star_homology(h, HomologyField::gf(3)));
    }
    CHECK_THROWS_AS(eta_star_homology(configs[0], HomologyField::gf(4)), std::invalid_argument);
}

TEST_CASE("degenerate configurations evaluate to zero on both routes") {
    CounterRng rng = CounterRng::stream(56, 0);
    for (int i = 0; i < 20; ++i) {
        const PointConfig h = random_degenerate_config(rng);
        CHECK(eta_star_homology(h) == 0);
        CHECK(eta_star_flagsum(h) == 0);
    }
}

TEST_CASE("flags") {
    SUBCASE("basis pair") {
        PointConfig h = basis_config(3).with_weights(
            {Rational(1, 2), Rational(1, 4), Rational(1, 4)});
        const FlagValue f = flag_of({0, 1}, h);
        REQUIRE(f.q.size() == 2);
        CHECK(f.q[0] == 2);  // q_2
        CHECK(f.q[1] == 1);  // q_1
        CHECK(f.product == 2);
        CHECK(f.top_weight == Rational(1, 4));  // the missing basis point's weight
    }
    SUBCASE("square pair") {
        const FlagValue f = flag_of({0, 3}, en_config(2));
        CHECK(f.q[0] == 2);
        CHECK(f.q[1] == 1);
        CHECK(f.product == 2);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(flag_of({0, 0}, en_config(2)), std::invalid_argument);
        CHECK_THROWS_AS(flag_of({0}, en_config(2)), std::invalid_argument);
        CHECK_THROWS_AS(flag_of({0, 9}, en_config(2)), std::invalid_argument);
        const PointConfig dep =
            PointConfig::create(4, {{1, 0, 0, 0}, {0, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
        CHECK_THROWS_AS(flag_of({0, 1, 2}, dep), std::invalid_argument);
    }
    SUBCASE("flag count profile is monotone and bounded below") {
        CounterRng rng = CounterRng::stream(57, 0);
        for (int s = 0; s < 10; ++s) {
            const PointConfig h = random_spanning_config(rng);
            const int n = h.n();
            // walk all independent tuples via rejection over index odometers
            std::vector<int> idx(n, 0);
            long long flags = 0;
            for (;;) {
                bool distinct = true;
                for (int i = 0; i < n && distinct; ++i)
                    for (int j = i + 1; j < n; ++j)
                        if (idx[i] == idx[j]) distinct = false;
                if (distinct) {
                    try {
                        const FlagValue f = flag_of(idx, h);
                        ++flags;
                        for (int l = 1; l <= n; ++l) CHECK(f.q[n - l] >= l);
                        for (std::size_t k = 1; k < f.q.size(); ++k) CHECK(f.q[k - 1] >= f.q[k]);
                    } catch (const std::invalid_argument&) {
                        // dependent tuple
                    }
                }
                int pos = n - 1;
                while (pos >= 0 && idx[pos] == h.size() - 1) idx[pos--] = 0;
                if (pos < 0) break;
                ++idx[pos];
            }
            CHECK(flags > 0);
        }
    }
}

TEST_CASE("flag sums are weight independent, integral, and guarded") {
    CounterRng rng = CounterRng::stream(58, 0);
    for (int s = 0; s < 15; ++s) {
        const PointConfig h = random_spanning_config(rng);
        const long long reference = eta_star_homology(h);
        for (const auto& w : standard_weight_sets(h.size())) {
            const Rational sum = eta_star_flagsum(h.with_weights(w));
            CHECK(sum == reference);
            CHECK(denominator(sum) == 1);
            CHECK(sum >= 0);
        }
    }
    SUBCASE("guard") {
        IntMatrix many;
        for (int i = 0; i < 17; ++i) many.push_back({1, i, i * i});
        CHECK_THROWS_AS(eta_star_flagsum(PointConfig::create(3, std::move(many))),
                        std::invalid_argument);
    }
}

TEST_CASE("cross-check runner and the mutation hook") {
    const PointConfig e2 = en_config(2);
    const auto good = cross_check_eta_star(e2, standard_weight_sets(4));
    CHECK(good.pass);
    CHECK(good.homology == 3);
    for (const auto& s : good.flag_sums) CHECK(s == 3);

    FlagSumOptions corrupt;
    corrupt.negate_top_weight_mutation = true;
    const auto bad = cross_check_eta_star(e2, standard_weight_sets(4), corrupt);
    CHECK_FALSE(bad.pass);
}

TEST_CASE("large coordinates fall back to exact big-integer reduction") {
    const long long big = 3'000'000'000'000'000'000LL;  // beyond the int64 minor guard
    const PointConfig h = PointConfig::create(
        3, {{big, 1, 0}, {1, big, 0}, {0, 1, big}, {1, 1, 1}});
    CHECK(h.spans_ambient());
    const long long rank_h = eta_star_homology(h);
    CHECK(eta_star_flagsum(h) == rank_h);
}
