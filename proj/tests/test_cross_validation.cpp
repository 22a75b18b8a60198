#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "finsent/cross_validation.hpp"
#include "finsent/errors.hpp"
#include "finsent/rng.hpp"

using namespace finsent;

namespace {

// y follows a step in x0; plenty of signal for a depth-1 tree.
DenseDataset step_dataset(int n, uint64_t seed) {
    Rng rng(seed);
    DenseDataset data;
    for (int i = 0; i < n; ++i) {
        double x = rng.uniform();
        data.add_row(std::vector<double>{x}, x < 0.5 ? -0.8 : 0.8);
    }
    return data;
}

RandomForestParams tree_params(int max_depth) {
    RandomForestParams p;
    p.trees_count = 1;
    p.bootstrap = false;
    p.features_per_split = 10;
    p.max_depth = max_depth;
    return p;
}

}  // namespace

TEST_CASE("fold accounting: every fold is scored for every cell") {
    auto data = step_dataset(40, 1);
    auto result = cross_validate(data, {tree_params(-1), tree_params(0)}, 10, 3);
    REQUIRE(result.cells.size() == 2);
    for (const auto& cell : result.cells) {
        REQUIRE(cell.folds.size() == 10);
        double mc = 0.0, mm = 0.0;
        for (const auto& f : cell.folds) {
            mc += f.cosine;
            mm += f.mae;
        }
        CHECK(cell.mean_cosine == doctest::Approx(mc / 10.0));
        CHECK(cell.mean_mae == doctest::Approx(mm / 10.0));
    }
}

TEST_CASE("the informative depth beats the stump on step data") {
    auto data = step_dataset(60, 2);
    // Grid order puts the stump first so a win by the real tree is not a tie
    // artifact.
    auto result = cross_validate(data, {tree_params(0), tree_params(-1)}, 10, 5);
    CHECK(result.best_index == 1);
    CHECK(result.cells[1].mean_cosine > result.cells[0].mean_cosine);
    CHECK(result.cells[1].mean_mae < result.cells[0].mean_mae);
    CHECK(std::get<RandomForestParams>(result.best_params()).max_depth == -1);
    // Step targets are learnable almost perfectly.
    CHECK(result.cells[1].mean_cosine > 0.9);
    CHECK(result.cells[1].mean_mae < 0.1);
}

TEST_CASE("leave-one-out: folds == N") {
    auto data = step_dataset(12, 3);
    auto result = cross_validate(data, {tree_params(-1)}, 12, 1);
    REQUIRE(result.cells[0].folds.size() == 12);
    // Single-row held-out sets still produce scores; cosine of two scalars
    // is the product sign.
    for (const auto& f : result.cells[0].folds) {
        CHECK(std::abs(f.cosine) == doctest::Approx(1.0));
    }
}

TEST_CASE("identical cells tie and grid order wins") {
    auto data = step_dataset(30, 4);
    auto result = cross_validate(data, {tree_params(-1), tree_params(-1)}, 5, 9);
    CHECK(result.cells[0].mean_cosine == result.cells[1].mean_cosine);
    CHECK(result.cells[0].mean_mae == result.cells[1].mean_mae);
    CHECK(result.best_index == 0);
}

TEST_CASE("cross-validation is deterministic in the seed") {
    auto data = step_dataset(40, 5);
    std::vector<RegressorParams> grid = {tree_params(-1), tree_params(0)};
    auto a = cross_validate(data, grid, 8, 42);
    auto b = cross_validate(data, grid, 8, 42);
    CHECK(a.best_index == b.best_index);
    for (size_t c = 0; c < a.cells.size(); ++c) {
        for (size_t f = 0; f < a.cells[c].folds.size(); ++f) {
            CHECK(a.cells[c].folds[f].cosine == b.cells[c].folds[f].cosine);
            CHECK(a.cells[c].folds[f].mae == b.cells[c].folds[f].mae);
        }
    }

    auto c = cross_validate(data, grid, 8, 43);
    bool identical = true;
    for (size_t f = 0; f < 8; ++f)
        identical &= (a.cells[0].folds[f].mae == c.cells[0].folds[f].mae);
    CHECK(!identical);
}

TEST_CASE("mixed-kind grids compare across regressor families") {
    auto data = step_dataset(50, 6);
    SvrParams svr;
    svr.epochs = 40;
    MlpParams mlp;
    mlp.hidden_size = 4;
    mlp.epochs = 40;
    mlp.batch_size = 8;
    auto result = cross_validate(data, {tree_params(-1), svr, mlp}, 5, 2);
    REQUIRE(result.cells.size() == 3);
    CHECK(result.best_index < 3);
    for (const auto& cell : result.cells) {
        CHECK(std::isfinite(cell.mean_cosine));
        CHECK(std::isfinite(cell.mean_mae));
        CHECK(cell.mean_mae >= 0.0);
    }
}

TEST_CASE("input validation") {
    auto data = step_dataset(10, 7);
    CHECK_THROWS_AS(cross_validate(data, {}, 5, 1), ConfigError);
    CHECK_THROWS_AS(cross_validate(data, {tree_params(-1)}, 1, 1), ConfigError);
    CHECK_THROWS_WITH_AS(cross_validate(data, {tree_params(-1)}, 11, 1),
                         doctest::Contains("fewer folds"), SplitError);
}
