#include <doctest.h>

#include <cmath>

#include "properties.hpp"

using namespace lpdiscrim;

TEST_SUITE("properties") {

TEST_CASE("rows of every transcript table sum to one") { CHECK(testing::row_stochasticity_violations(101, 100) == 0); }

TEST_CASE("random measurements are complete") { CHECK(testing::completeness_violations(202, 100) == 0); }

TEST_CASE("tables are covariant under local unitaries") { CHECK(testing::covariance_violations(303, 100) == 0); }

TEST_CASE("party order within a copy does not matter") { CHECK(testing::order_violations(404, 100) == 0); }

TEST_CASE("MAP never does worse than guessing the likeliest state") {
    CHECK(testing::map_dominance_violations(505, 100) == 0);
}

TEST_CASE("negativity is invariant under local unitaries") {
    std::mt19937_64 rng(606);
    const auto split = BipartitionSplit::of({0}, 2);
    for (int k = 0; k < 50; ++k) {
        const auto s = testing::random_ensemble(rng, {2, 3}, {"A", "B"}, 1, true, false).states()[0];
        const auto moved = apply_local_operator(apply_local_operator(s, testing::random_unitary(rng, 2, true), {0}),
                                                testing::random_unitary(rng, 3, true), {1});
        CHECK(std::abs(negativity(s, split) - negativity(moved, split)) < 1e-9);
    }
}

}
