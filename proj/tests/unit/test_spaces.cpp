#include <doctest.h>

#include <cmath>
#include <random>

#include "stdrep/errors.hpp"
#include "stdrep/representation.hpp"
#include "stdrep/sampling.hpp"
#include "stdrep/simd/coins.hpp"
#include "stdrep/spaces.hpp"
#include "stdrep/stats.hpp"
#include "support.hpp"

using namespace stdrep;
using testsupport::make_space;

TEST_CASE("validate_space") {
    SUBCASE("already normalized is unchanged") {
        auto s = validate_space({{"a", "b"}, {0.5, 0.5}});
        CHECK(s.probs() == std::vector<double>{0.5, 0.5});
        CHECK_FALSE(s.renormalized());
    }
    SUBCASE("small excess is renormalized") {
        const double sum = 0.5 + (0.5 + 1e-10);
        auto s = validate_space({{"a", "b"}, {0.5, 0.5 + 1e-10}});
        CHECK(s.renormalized());
        CHECK(s.prob(0) == 0.5 / sum);
        CHECK(s.prob(1) == (0.5 + 1e-10) / sum);
    }
    SUBCASE("sum 1.4 rejected") {
        CHECK_THROWS_AS(validate_space({{"a", "b"}, {0.7, 0.7}}), SpecError);
    }
    SUBCASE("negative probability rejected") {
        CHECK_THROWS_AS(validate_space({{"a", "b"}, {1.2, -0.2}}), SpecError);
    }
    SUBCASE("duplicate ids rejected") {
        CHECK_THROWS_AS(validate_space({{"a", "a"}, {0.5, 0.5}}), SpecError);
    }
    SUBCASE("zero-probability atoms flagged") {
        auto s = validate_space({{"a", "b", "c"}, {0.25, 0.0, 0.75}});
        CHECK(s.zero_prob_atoms() == std::vector<std::size_t>{1});
    }
    SUBCASE("error text names probs") {
        try {
            validate_space({{"a", "b"}, {0.7, 0.7}});
            FAIL("expected SpecError");
        } catch (const SpecError& e) {
            CHECK(std::string(e.what()).find("probs") != std::string::npos);
        }
    }
}

TEST_CASE("interval_partition") {
    CHECK(interval_partition(*make_space({"a", "b", "c"}, {0.5, 0.3, 0.2})).breakpoints() ==
          std::vector<double>{0.0, 0.5, 0.8, 1.0});
    CHECK(interval_partition(*make_space({"a"}, {1.0})).breakpoints() ==
          std::vector<double>{0.0, 1.0});
    auto p = interval_partition(*make_space({"a", "b", "c"}, {0.25, 0.0, 0.75}));
    CHECK(p.breakpoints() == std::vector<double>{0.0, 0.25, 0.25, 1.0});
    CHECK(p.length(1) == 0.0);

    SUBCASE("trailing zero atoms stay empty") {
        auto q = interval_partition(*make_space({"a", "b", "c"}, {0.1, 0.9, 0.0}));
        CHECK(q.length(2) == 0.0);
        CHECK(q.breakpoints().back() == 1.0);
    }
}

TEST_CASE("interval_partition lengths match probabilities (property)") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t atoms = 1 + rng() % 12;
        auto s = testsupport::random_space(rng, atoms, true);
        auto p = interval_partition(*s);
        CHECK(p.breakpoints().front() == 0.0);
        CHECK(p.breakpoints().back() == 1.0);
        double total = 0.0;
        for (std::size_t k = 0; k < atoms; ++k) {
            total += p.length(k);
            // One rounding of the prefix sum per step, plus the pinned end.
            CHECK(std::abs(p.length(k) - s->prob(k)) <= 4 * std::numeric_limits<double>::epsilon());
        }
        CHECK(std::abs(total - 1.0) <= 1e-15);
    }
}

TEST_CASE("lookup_cell") {
    IntervalPartition half({0.0, 0.5, 1.0}, {"a", "b"});
    CHECK(lookup_cell(half, 0.5) == 1);
    CHECK(lookup_cell(half, 0.4999) == 0);
    CHECK(lookup_cell(half, 0.0) == 0);
    CHECK(lookup_cell(half, std::nextafter(1.0, 0.0)) == 1);

    IntervalPartition gap({0.0, 0.25, 0.25, 1.0}, {"a", "b", "c"});
    CHECK(lookup_cell(gap, 0.25) == 2);
    CHECK(lookup_cell(gap, std::nextafter(0.25, 0.0)) == 0);

    CHECK_THROWS_AS(lookup_cell(half, 1.0), DomainError);
    CHECK_THROWS_AS(lookup_cell(half, -0.1), DomainError);
    CHECK_THROWS_AS(lookup_cell(half, std::nan("")), DomainError);
}

TEST_CASE("lookup_cell frequencies match lengths within 4 sigma") {
    auto s = make_space({"a", "b", "c", "d"}, {0.1, 0.0, 0.6, 0.3});
    auto p = interval_partition(*s);
    const std::size_t draws = 100000;
    std::vector<double> u(draws);
    simd::uniform_row_scalar(2024, 9, 0, 1, draws, u.data());
    std::vector<std::size_t> hits(p.cells(), 0);
    for (double x : u) ++hits[lookup_cell(p, x)];
    CHECK(hits[1] == 0);
    for (std::size_t k = 0; k < p.cells(); ++k) {
        const double q = p.length(k);
        const double sd = std::sqrt(draws * q * (1 - q));
        CHECK(std::abs(static_cast<double>(hits[k]) - draws * q) <= 4 * sd);
    }
}

TEST_CASE("Cdf validation") {
    CHECK_THROWS_AS(Cdf::step({1.0, 0.0}, {0.5, 1.0}), SpecError);
    CHECK_THROWS_AS(Cdf::step({0.0, 1.0}, {0.6, 0.5}), SpecError);
    CHECK_THROWS_AS(Cdf::step({0.0, 1.0}, {0.5, 0.9}), SpecError);
    CHECK_THROWS_AS(Cdf::piecewise_linear({0.0, 1.0}, {0.1, 1.0}), SpecError);
    CHECK_NOTHROW(Cdf::step({0.0, 1.0}, {0.5, 1.0 - 1e-13}));
}

TEST_CASE("transport_map") {
    auto id = transport_map(Cdf::piecewise_linear({0.0, 1.0}, {0.0, 1.0}));
    for (double x : {0.0, 0.1, 0.42, 0.999}) CHECK(id(x) == doctest::Approx(x).epsilon(1e-15));

    auto bent = transport_map(Cdf::piecewise_linear({0.0, 0.5, 1.0}, {0.0, 0.8, 1.0}));
    CHECK(bent(0.25) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(bent(-1.0) == 0.0);
    CHECK(bent(2.0) == 1.0);

    CHECK_THROWS_AS(transport_map(Cdf::step({0.0, 1.0}, {0.3, 1.0})), KindError);
}

TEST_CASE("transport_map pushes the encoded measure to uniform (KS)") {
    auto F = Cdf::piecewise_linear({-2.0, 0.0, 0.5, 3.0}, {0.0, 0.1, 0.7, 1.0});
    auto T = transport_map(F);
    const std::size_t draws = 100000;
    std::vector<double> u(draws);
    simd::uniform_row_scalar(77, 5, 0, 1, draws, u.data());
    std::vector<double> moved(draws);
    for (std::size_t i = 0; i < draws; ++i) moved[i] = T(quantile(F, u[i]));
    CHECK(stats::ks_uniform(moved).p_value > 0.01);
}

TEST_CASE("cdf_of_pushforward") {
    auto s2 = make_space({"a", "b"}, {0.3, 0.7});
    std::vector<double> g{1.0, 0.0};
    auto F = cdf_of_pushforward(*s2, g);
    CHECK(F.kind() == CdfKind::Step);
    CHECK(F.xs() == std::vector<double>{0.0, 1.0});
    CHECK(F.cs() == std::vector<double>{0.7, 1.0});

    std::vector<double> five{5.0, 5.0};
    auto C = cdf_of_pushforward(*s2, five);
    CHECK(C.xs() == std::vector<double>{5.0});
    CHECK(C.cs() == std::vector<double>{1.0});

    auto s3 = make_space({"a", "b", "c"}, {0.25, 0.25, 0.5});
    std::vector<double> g3{2.0, 2.0, 1.0};
    auto M = cdf_of_pushforward(*s3, g3);
    CHECK(M.xs() == std::vector<double>{1.0, 2.0});
    CHECK(M.cs() == std::vector<double>{0.5, 1.0});
}

TEST_CASE("cdf_of_pushforward then quantile preserves the law (property)") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 100; ++rep) {
        auto s = testsupport::random_space(rng, 1 + rng() % 8, true);
        std::vector<double> g(s->size());
        for (auto& v : g) v = static_cast<double>(rng() % 4);
        auto F = cdf_of_pushforward(*s, g);
        // Pushforward of Lebesgue through quantile(F, .): y_j has preimage
        // [c_{j-1}, c_j), so its distribution function is F again.
        std::vector<double> img(F.xs().size());
        for (std::size_t j = 0; j < img.size(); ++j) {
            const double lo = j ? F.cs()[j - 1] : 0.0;
            CHECK(quantile(F, lo) == F.xs()[j]);
            CHECK(quantile(F, std::nextafter(F.cs()[j], 0.0)) == F.xs()[j]);
            img[j] = quantile(F, lo);
        }
        auto G = Cdf::step(img, F.cs());
        CHECK(G == F);
    }
}
