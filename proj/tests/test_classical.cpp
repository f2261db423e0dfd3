#include <catch2/catch_amalgamated.hpp>

#include "ghostsim/ghost.hpp"
#include "helpers.hpp"

using namespace ghostsim;
using testutil::cubic_phase;
using testutil::matched_grid;
using testutil::quadratic_phase;
using testutil::rel_rms;

namespace {

constexpr double kLambda = 0.5e-6;

}  // namespace

TEST_CASE("full steering coverage reproduces the entangled fast path") {
  // unmatched desk grid on purpose: the equivalence is geometric, not a
  // DFT-matching artifact
  const GridGeometry grid = make_grid(1, 256, 2e-3);
  const OpticalLayout layout = make_layout(kLambda, 0.2, 0.2);
  const ObjectMask object = standard_object("double-slit", grid);

  for (const PhaseMap& phi :
       {make_phase_map(grid), cubic_phase(grid, 40.0), quadratic_phase(grid, 10.0)}) {
    const CoincidenceImage classical = classical_ghost(layout, object, phi, grid.n);
    const CoincidenceImage fast = ghost_fast(layout, object, phi);
    REQUIRE(rel_rms(classical.rate, fast.rate) < 1e-12);
  }
}

TEST_CASE("odd aberrations cancel for the classical source") {
  const GridGeometry grid = matched_grid(128, kLambda, 0.2);
  const OpticalLayout layout = make_layout(kLambda, 0.2, 0.2);
  const ObjectMask object = standard_object("double-slit", grid);
  const CoincidenceImage free = classical_ghost(layout, object, make_phase_map(grid), grid.n);
  const CoincidenceImage odd = classical_ghost(layout, object, cubic_phase(grid, 40.0), grid.n);
  REQUIRE(rel_rms(odd.rate, free.rate) < 1e-6);
}

TEST_CASE("a single on-axis steering sample has no transverse resolution") {
  // one plane-wave pair carries a flat coincidence kernel: the image of a
  // point at the axis is constant, with its (tied) peak reported on-axis
  const GridGeometry grid = matched_grid(64, kLambda, 0.2);
  const OpticalLayout layout = make_layout(kLambda, 0.2, 0.2);
  const ObjectMask point = standard_object("point", grid, 0.0);
  const CoincidenceImage img = classical_ghost(layout, point, make_phase_map(grid), 1);
  for (double v : img.rate) REQUIRE(v == Catch::Approx(1.0).epsilon(1e-12));
  const ImageMetrics m = image_metrics(img, img);
  REQUIRE(m.peak_location[0] == 0.0);
}

TEST_CASE("partial steering coverage converges toward the fast path") {
  const GridGeometry grid = matched_grid(128, kLambda, 0.2);
  const OpticalLayout layout = make_layout(kLambda, 0.2, 0.2);
  const ObjectMask object = standard_object("double-slit", grid);
  const PhaseMap phi = make_phase_map(grid);
  const CoincidenceImage fast = ghost_fast(layout, object, phi);
  const double err_quarter =
      rel_rms(classical_ghost(layout, object, phi, grid.n / 4).rate, fast.rate);
  const double err_full = rel_rms(classical_ghost(layout, object, phi, grid.n).rate, fast.rate);
  REQUIRE(err_full < err_quarter);
}

TEST_CASE("classical engine runs in 2D and matches the fast path at full coverage") {
  const GridGeometry grid = matched_grid(32, kLambda, 0.2, 2);
  const OpticalLayout layout = make_layout(kLambda, 0.2, 0.2);
  const ObjectMask object = standard_object("double-slit", grid);
  PhaseMap phi = make_phase_map(grid);
  for (int iy = 0; iy < grid.n; ++iy)
    for (int ix = 0; ix < grid.n; ++ix) {
      const double tx = grid.coord(ix) / (grid.extent / 2);
      const double ty = grid.coord(iy) / (grid.extent / 2);
      phi.values[grid.flat(iy, ix)] = 3.0 * tx * tx + 5.0 * tx * ty * ty;
    }
  const CoincidenceImage classical = classical_ghost(layout, object, phi, grid.n);
  const CoincidenceImage fast = ghost_fast(layout, object, phi);
  REQUIRE(rel_rms(classical.rate, fast.rate) < 1e-12);
}

TEST_CASE("classical engine validates its inputs") {
  const GridGeometry grid = matched_grid(64, kLambda, 0.2);
  const OpticalLayout layout = make_layout(kLambda, 0.2, 0.2);
  const ObjectMask object = standard_object("uniform", grid);
  REQUIRE_THROWS_AS(classical_ghost(layout, object, make_phase_map(grid), 0),
                    std::invalid_argument);
}
