#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "tspga/core/rng.hpp"
#include "tspga/core/tour.hpp"
#include "tspga/io/tsplib.hpp"
#include "tspga/operators/crossover.hpp"

using namespace tspga;
using core::Tour;

namespace {

Tour from_labels(std::initializer_list<int> labels) {
    Tour t;
    for (const int city : labels) t.push_back(city - 1);
    return t;
}

io::TspInstance random_euc2d(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> coord(0.0, 1000.0);
    std::vector<std::pair<double, double>> coords;
    for (int i = 0; i < n; ++i) coords.emplace_back(coord(rng), coord(rng));
    return io::TspInstance::from_coords("random", io::WeightKind::Euc2d, std::move(coords));
}

Tour random_tour(int n, std::mt19937& rng) {
    Tour t(n);
    std::iota(t.begin(), t.end(), 0);
    std::shuffle(t.begin(), t.end(), rng);
    return t;
}

}  // namespace

TEST_CASE("elastic collision, closed-form cases") {
    SECTION("equal masses exchange velocities") {
        const auto [v1, v2] = ops::elastic_collision(5.0, 3.0, 5.0, -3.0);
        CHECK(v1 == -3.0);
        CHECK(v2 == 3.0);
    }
    SECTION("light object reflects off a heavy one") {
        const auto [v1, v2] = ops::elastic_collision(1.0, 2.0, 3.0, -2.0);
        CHECK(v1 == -4.0);
        CHECK(v2 == 0.0);
    }
    SECTION("massless second object") {
        const auto [v1, v2] = ops::elastic_collision(2.0, 1.5, 0.0, -0.5);
        CHECK(v1 == 1.5);
        CHECK(v2 == 2.0 * 1.5 - (-0.5));
    }
    SECTION("massless pair is stationary") {
        const auto [v1, v2] = ops::elastic_collision(0.0, 4.0, 0.0, -4.0);
        CHECK(v1 == 0.0);
        CHECK(v2 == 0.0);
    }
    SECTION("near-zero results clamp to exactly zero") {
        const auto out = ops::collide_gene(3.0, 1.0, 1.0, -1.0 + 2e-13);
        CHECK(out.v1_new == 0.0);
        CHECK(out.stays_1);
    }
}

TEST_CASE("elastic collision conserves momentum and kinetic energy") {
    std::mt19937 rng(2025);
    std::uniform_real_distribution<double> mass(0.0, 100.0);
    std::uniform_real_distribution<double> velocity(-100.0, 100.0);
    for (int k = 0; k < 10000; ++k) {
        const double m1 = mass(rng), m2 = mass(rng);
        if (m1 + m2 <= 0.0) continue;
        const double v1 = velocity(rng), v2 = velocity(rng);
        const auto [v1n, v2n] = ops::elastic_collision(m1, v1, m2, v2);

        const double p_before = m1 * v1 + m2 * v2;
        const double p_after = m1 * v1n + m2 * v2n;
        const double p_scale = std::max(1.0, std::abs(m1 * v1) + std::abs(m2 * v2));
        CHECK(std::abs(p_after - p_before) <= 1e-9 * p_scale);

        const double e_before = m1 * v1 * v1 + m2 * v2 * v2;
        const double e_after = m1 * v1n * v1n + m2 * v2n * v2n;
        const double e_scale = std::max(1.0, e_before);
        CHECK(std::abs(e_after - e_before) <= 1e-9 * e_scale);
    }
}

TEST_CASE("one-point order crossover") {
    const auto p1 = from_labels({1, 3, 8, 7, 5, 6, 2, 9, 4});
    const auto p2 = from_labels({1, 5, 9, 8, 4, 3, 7, 6, 2});

    SECTION("degenerate cuts clone the parents") {
        const auto [a0, b0] = ops::modified_crossover(p1, p2, 0);
        CHECK(a0 == p2);
        CHECK(b0 == p1);
        const auto [an, bn] = ops::modified_crossover(p1, p2, 9);
        CHECK(an == p1);
        CHECK(bn == p2);
    }
    SECTION("worked example, cut = 5") {
        const auto [c1, c2] = ops::modified_crossover(p1, p2, 5);
        CHECK(c1 == from_labels({1, 3, 8, 7, 5, 9, 4, 6, 2}));
        CHECK(c2 == from_labels({1, 5, 9, 8, 4, 3, 7, 6, 2}));
    }
    SECTION("cut out of range throws") {
        CHECK_THROWS_AS(ops::modified_crossover(p1, p2, 10), std::out_of_range);
        CHECK_THROWS_AS(ops::modified_crossover(p1, p2, -1), std::out_of_range);
    }
    SECTION("the first exchanged position takes the donor's first unused city") {
        std::mt19937 rng(31);
        for (int k = 0; k < 200; ++k) {
            const int n = 4 + static_cast<int>(rng() % 30);
            const auto a = random_tour(n, rng);
            const auto b = random_tour(n, rng);
            const int cut = static_cast<int>(rng() % n);  // < n so the tail is non-empty
            const auto [c1, c2] = ops::modified_crossover(a, b, cut);
            std::vector<bool> in_prefix(n, false);
            for (int i = 0; i < cut; ++i) in_prefix[a[i]] = true;
            for (const int city : b) {
                if (!in_prefix[city]) {
                    CHECK(c1[cut] == city);
                    break;
                }
            }
        }
    }
}

TEST_CASE("partially mapped crossover") {
    SECTION("identical parents are fixed points") {
        const auto p = from_labels({4, 2, 1, 5, 3});
        const auto [c1, c2] = ops::pmx(p, p, 1, 3);
        CHECK(c1 == p);
        CHECK(c2 == p);
    }
    SECTION("whole-segment swap") {
        const auto p1 = from_labels({1, 2, 3, 4, 5});
        const auto p2 = from_labels({3, 4, 5, 1, 2});
        const auto [c1, c2] = ops::pmx(p1, p2, 0, 5);
        CHECK(c1 == p2);
        CHECK(c2 == p1);
    }
    SECTION("worked example with mapping repair") {
        const auto p1 = from_labels({1, 2, 3, 4, 5});
        const auto p2 = from_labels({3, 4, 5, 1, 2});
        const auto [c1, c2] = ops::pmx(p1, p2, 1, 3);
        CHECK(c1 == from_labels({1, 4, 5, 2, 3}));
        CHECK(c2 == from_labels({5, 2, 3, 1, 4}));
    }
    SECTION("bad cut pairs throw") {
        const auto p = from_labels({1, 2, 3, 4, 5});
        CHECK_THROWS_AS(ops::pmx(p, p, 3, 3), std::out_of_range);
        CHECK_THROWS_AS(ops::pmx(p, p, -1, 2), std::out_of_range);
        CHECK_THROWS_AS(ops::pmx(p, p, 0, 6), std::out_of_range);
    }
}

TEST_CASE("cut-on-worst-gene crossover picks the parent with the longer worst edge") {
    const auto inst = io::figure2_instance();
    const auto p1 = from_labels({1, 3, 8, 7, 5, 6, 2, 9, 4});
    const auto p2 = from_labels({1, 5, 9, 8, 4, 3, 7, 6, 2});

    // parent 2's worst edge (60) beats parent 1's (22), so the shared cut is
    // parent 2's worst-gene position.
    const auto children = ops::cowgc(inst, p1, p2);
    const auto expected = ops::modified_crossover(p1, p2, core::worst_gene_edge(inst, p2).position);
    CHECK(children == expected);
    CHECK(core::worst_gene_edge(inst, p2).position == 4);

    SECTION("identical parents reproduce themselves") {
        const auto [c1, c2] = ops::cowgc(inst, p1, p1);
        CHECK(c1 == p1);
        CHECK(c2 == p1);
    }
    SECTION("value ties resolve to parent 1") {
        std::vector<std::vector<int>> m(5, std::vector<int>(5, 9));
        for (int i = 0; i < 5; ++i) m[i][i] = 0;
        const auto equi = io::TspInstance::from_matrix("equi", m);
        const auto a = from_labels({1, 2, 3, 4, 5});
        const auto b = from_labels({5, 4, 3, 2, 1});
        CHECK(ops::cowgc(equi, a, b) == ops::modified_crossover(a, b, 1));
    }
}

TEST_CASE("cut-on-worst-L+R crossover picks the parent with the larger sum") {
    const auto inst = io::figure2_instance();
    const auto p1 = from_labels({1, 4, 2, 8, 9, 6, 3, 7, 5});
    const auto p2 = from_labels({1, 9, 5, 7, 8, 2, 3, 4, 6});

    // parent 1 wins (51 vs 32); cut at its city-8 position.
    const auto children = ops::cowlrgc(inst, p1, p2);
    CHECK(children == ops::modified_crossover(p1, p2, 3));

    const auto [c1, c2] = ops::cowlrgc(inst, p2, p2);
    CHECK(c1 == p2);
    CHECK(c2 == p2);
}

TEST_CASE("collision crossover keeps reflected and stationary genes") {
    const auto inst = io::figure2_instance();
    std::mt19937 meta(808);

    SECTION("identical parents reproduce themselves") {
        for (int k = 0; k < 20; ++k) {
            const auto p = random_tour(9, meta);
            core::Rng rng(static_cast<std::uint64_t>(k));
            const auto [c1, c2] = ops::collision(inst, p, p, rng);
            CHECK(c1 == p);
            CHECK(c2 == p);
        }
    }

    SECTION("consumes exactly two draws and is seed-deterministic") {
        const auto p1 = random_tour(9, meta);
        const auto p2 = random_tour(9, meta);
        core::Rng a(42);
        const auto first = ops::collision(inst, p1, p2, a);
        CHECK(a.draw_count() == 2);
        core::Rng b(42);
        CHECK(ops::collision(inst, p1, p2, b) == first);
    }

    SECTION("children match an independent re-evaluation of the physics") {
        for (int k = 0; k < 50; ++k) {
            const int n = 5 + static_cast<int>(meta() % 40);
            const auto inst2 = random_euc2d(n, static_cast<unsigned>(900 + k));
            const auto p1 = random_tour(n, meta);
            const auto p2 = random_tour(n, meta);
            const std::uint64_t seed = 1234 + static_cast<std::uint64_t>(k);

            core::Rng rng(seed);
            const auto [c1, c2] = ops::collision(inst2, p1, p2, rng);

            // Re-derive everything from scratch: masses, velocities (same
            // draw order), per-gene update via the centre-of-mass identity,
            // then the order-preserving fill.
            const auto mass_of = [&](const Tour& t, int i) {
                double m = 0.0;
                if (i > 0) m += inst2.distance(t[i], t[i - 1]);
                if (i + 1 < n) m += inst2.distance(t[i], t[i + 1]);
                return m;
            };
            const auto closed_len = [&](const Tour& t) {
                double len = 0.0;
                for (int i = 0; i + 1 < n; ++i) len += inst2.distance(t[i], t[i + 1]);
                return len + inst2.distance(t[n - 1], t[0]);
            };
            core::Rng replay(seed);
            const double v1 = replay.uniform_real(1.0, std::max(1.0, closed_len(p1)));
            const double v2 = -replay.uniform_real(1.0, std::max(1.0, closed_len(p2)));

            std::vector<char> keep1(n), keep2(n);
            for (int i = 0; i < n; ++i) {
                const double m1 = mass_of(p1, i);
                const double m2 = mass_of(p2, i);
                double v1n, v2n;
                if (m1 + m2 <= 0.0) {
                    v1n = v2n = 0.0;
                } else {
                    const double vcm = (m1 * v1 + m2 * v2) / (m1 + m2);
                    v1n = 2.0 * vcm - v1;
                    v2n = 2.0 * vcm - v2;
                    if (std::abs(v1n) <= 1e-12) v1n = 0.0;
                    if (std::abs(v2n) <= 1e-12) v2n = 0.0;
                }
                keep1[i] = v1n <= 0.0;
                keep2[i] = v2n >= 0.0;
            }
            const auto fill = [&](const Tour& keeper, const std::vector<char>& keep,
                                  const Tour& donor) {
                Tour child(n, -1);
                std::vector<bool> used(n, false);
                for (int i = 0; i < n; ++i)
                    if (keep[i]) {
                        child[i] = keeper[i];
                        used[keeper[i]] = true;
                    }
                std::size_t next = 0;
                for (int i = 0; i < n; ++i) {
                    if (keep[i]) continue;
                    while (used[donor[next]]) ++next;
                    child[i] = donor[next];
                    used[donor[next]] = true;
                }
                return child;
            };
            CHECK(c1 == fill(p1, keep1, p2));
            CHECK(c2 == fill(p2, keep2, p1));
            CHECK(core::valid_tour(c1, n));
            CHECK(core::valid_tour(c2, n));
        }
    }
}

TEST_CASE("all operators emit valid permutations") {
    std::mt19937 meta(909);
    for (int k = 0; k < 1000; ++k) {
        const int n = 4 + static_cast<int>(meta() % 97);
        const auto inst = random_euc2d(n, static_cast<unsigned>(3000 + k));
        const auto p1 = random_tour(n, meta);
        const auto p2 = random_tour(n, meta);
        core::Rng rng(static_cast<std::uint64_t>(k));

        const int cut = static_cast<int>(meta() % (n + 1));
        int cut1 = static_cast<int>(meta() % n);
        int cut2 = cut1 + 1 + static_cast<int>(meta() % (n - cut1));

        const auto check_pair = [&](const std::pair<Tour, Tour>& children) {
            CHECK(core::valid_tour(children.first, n));
            CHECK(core::valid_tour(children.second, n));
        };
        check_pair(ops::modified_crossover(p1, p2, cut));
        check_pair(ops::pmx(p1, p2, cut1, cut2));
        check_pair(ops::cowgc(inst, p1, p2));
        check_pair(ops::cowlrgc(inst, p1, p2));
        check_pair(ops::collision(inst, p1, p2, rng));
    }
}
