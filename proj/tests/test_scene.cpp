#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <numbers>
#include <random>

#include "ghostsim/layout.hpp"
#include "ghostsim/objects.hpp"
#include "ghostsim/pgm.hpp"
#include "ghostsim/pump.hpp"

using namespace ghostsim;

TEST_CASE("layout focal length from symmetric and asymmetric conjugates") {
  const OpticalLayout sym = make_layout(1.0, 2.0, 2.0);
  REQUIRE(sym.f == Catch::Approx(1.0).epsilon(1e-15));

  const OpticalLayout asym = make_layout(1.0, 3.0, 1.5);
  REQUIRE(asym.f == Catch::Approx(1.0).epsilon(1e-15));

  const OpticalLayout desk = make_layout(0.5e-6, 0.2, 0.2);
  REQUIRE(desk.f == Catch::Approx(0.1).epsilon(1e-15));
  REQUIRE(desk.wavenumber() == Catch::Approx(4.0e6 * std::numbers::pi).epsilon(1e-15));
}

TEST_CASE("layout imaging condition holds for randomized inputs") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  for (int i = 0; i < 200; ++i) {
    const double z1 = u(rng), z2 = u(rng), lambda = u(rng) * 1e-6;
    const OpticalLayout layout = make_layout(lambda, z1, z2);
    REQUIRE(std::abs(1.0 / z1 + 1.0 / z2 - 1.0 / layout.f) <= 1e-9 / layout.f);
  }
}

TEST_CASE("layout rejects non-positive inputs and inconsistent focal lengths") {
  REQUIRE_THROWS_AS(make_layout(0.0, 1.0, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(make_layout(1.0, -1.0, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(make_layout(1.0, 1.0, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(make_layout(1.0, 2.0, 2.0, 1.1), std::invalid_argument);
  REQUIRE_NOTHROW(make_layout(1.0, 2.0, 2.0, 1.0));
}

TEST_CASE("pump sampling") {
  const GridGeometry grid = make_grid(1, 64, 2.0);

  SECTION("plane pump is constant") {
    const ComplexField f = sample_pump(plane_pump(), grid);
    for (const cdouble& v : f.values) REQUIRE(v == cdouble(1.0, 0.0));
  }

  SECTION("gaussian peak and 1/e point") {
    const double w = grid.extent;
    const ComplexField f = sample_pump(gaussian_pump(w, cdouble(2.0, 0.0)), grid);
    REQUIRE(f.values[std::size_t(grid.n / 2)] == cdouble(2.0, 0.0));
    // nearest sample to xi = w is off-grid here; evaluate on a grid that holds it
    const GridGeometry g2 = make_grid(1, 64, 4.0);
    const ComplexField f2 = sample_pump(gaussian_pump(1.0), g2);
    const int i = g2.n / 2 + int(std::lround(1.0 / g2.spacing()));
    REQUIRE(f2.values[std::size_t(i)].real() ==
            Catch::Approx(std::exp(-1.0)).epsilon(1e-12));
  }

  SECTION("gaussian requires positive width") {
    REQUIRE_THROWS_AS(gaussian_pump(0.0), std::invalid_argument);
  }
}

TEST_CASE("standard objects") {
  const GridGeometry grid = make_grid(1, 128, 2e-3);

  SECTION("uniform transmits everywhere") {
    const ObjectMask m = standard_object("uniform", grid);
    for (const cdouble& t : m.transmittance) REQUIRE(std::norm(t) == 1.0);
  }

  SECTION("point has exactly one nonzero sample at the offset") {
    const double off = grid.extent / 8.0;
    const ObjectMask m = standard_object("point", grid, off);
    int count = 0;
    int where = -1;
    for (int i = 0; i < grid.n; ++i)
      if (std::abs(m.transmittance[std::size_t(i)]) > 0) {
        ++count;
        where = i;
      }
    REQUIRE(count == 1);
    REQUIRE(grid.coord(where) == Catch::Approx(off).margin(grid.spacing() / 2));
  }

  SECTION("double slit opens two symmetric intervals") {
    const ObjectMask m = standard_object("double-slit", grid);
    int open = 0;
    for (int i = 0; i < grid.n; ++i) {
      const bool on = std::abs(m.transmittance[std::size_t(i)]) > 0;
      if (on) ++open;
      const int r = grid.reflect(i);
      if (i != 0)
        REQUIRE(on == (std::abs(m.transmittance[std::size_t(r)]) > 0));
    }
    REQUIRE(open > 0);
    REQUIRE(open <= grid.n / 8 + 2);  // two slits of width L/16
  }

  SECTION("all named objects satisfy the transmittance bound") {
    const GridGeometry g2 = make_grid(2, 64, 2e-3);
    for (const std::string& name : standard_object_names()) {
      const ObjectMask m = standard_object(name, g2);
      REQUIRE_NOTHROW(require_mask_bound(m));
    }
  }

  SECTION("unknown names and 1D letter-E are rejected") {
    REQUIRE_THROWS_AS(standard_object("triangle", grid), std::invalid_argument);
    REQUIRE_THROWS_AS(standard_object("letter-E", grid), std::invalid_argument);
  }
}

TEST_CASE("PGM mask round-trip stays within one 8-bit step") {
  const GridGeometry grid = make_grid(2, 32, 1e-3);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ObjectMask mask{grid, std::vector<cdouble>(grid.size())};
  for (auto& t : mask.transmittance) t = cdouble(u(rng), 0.0);

  const auto path = std::filesystem::temp_directory_path() / "ghostsim_mask_test.pgm";
  save_mask_pgm(mask, path);
  const ObjectMask back = load_mask_pgm(path, grid);
  for (std::size_t i = 0; i < mask.transmittance.size(); ++i)
    REQUIRE(std::abs(back.transmittance[i].real() - mask.transmittance[i].real()) <=
            1.0 / 255.0);
  std::filesystem::remove(path);
}

TEST_CASE("16-bit scalar quantization round-trips within one step") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-3.0, 7.0);
  std::vector<double> values(256);
  for (double& v : values) v = u(rng);
  double lo = 0, hi = 0;
  const PgmImage img = quantize_scalar_map(values, 256, 1, lo, hi);
  const double span = hi - lo;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double restored = lo + span * double(img.pixels[i]) / 65535.0;
    REQUIRE(std::abs(restored - values[i]) <= span / 65535.0);
  }
}

TEST_CASE("PGM loader rejects mismatched geometry") {
  const GridGeometry grid = make_grid(1, 64, 1.0);
  const ObjectMask m = standard_object("uniform", grid);
  const auto path = std::filesystem::temp_directory_path() / "ghostsim_mask_geom.pgm";
  save_mask_pgm(m, path);
  REQUIRE_THROWS_AS(load_mask_pgm(path, make_grid(1, 32, 1.0)), IoError);
  std::filesystem::remove(path);
}
