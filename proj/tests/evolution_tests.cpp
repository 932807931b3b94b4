#include <cmath>
#include <numbers>

#include <doctest.h>

#include "magloop/evolution.hpp"

using namespace magloop;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("symplectic form pairs x with px and y with py") {
  const Evolution4 j = symplectic_form();
  Evolution4 expected = Evolution4::Zero();
  expected(0, 2) = 1.0;
  expected(1, 3) = 1.0;
  expected(2, 0) = -1.0;
  expected(3, 1) = -1.0;
  CHECK((j - expected).norm() == 0.0);
  CHECK((j * j + Evolution4::Identity()).norm() == 0.0);
}

TEST_CASE("symplectic_defect vanishes exactly on canonical maps") {
  CHECK(symplectic_defect(Evolution4::Identity()) == 0.0);
  CHECK(symplectic_defect(pair_rotation(0.83)) < 1e-15);
  Evolution4 stretched = Evolution4::Identity();
  stretched(0, 0) = 2.0;
  CHECK(symplectic_defect(stretched) > 1.0);
}

TEST_CASE("cell_step matches the frozen-field flow") {
  SUBCASE("free shear") {
    const Cell2 b = cell_step(0.0, 0.3);
    CHECK(b(0, 0) == 1.0);
    CHECK(b(0, 1) == 0.3);
    CHECK(b(1, 0) == 0.0);
    CHECK(b(1, 1) == 1.0);
  }

  SUBCASE("oscillator rotation") {
    const double beta = 1.7;
    const double h = 0.25;
    const Cell2 b = cell_step(beta, h);
    CHECK(b(0, 0) == doctest::Approx(std::cos(beta * h)));
    CHECK(b(0, 1) == doctest::Approx(std::sin(beta * h) / beta));
    CHECK(b(1, 0) == doctest::Approx(-beta * std::sin(beta * h)));
    CHECK(b(1, 1) == doctest::Approx(std::cos(beta * h)));
    CHECK(b.determinant() == doctest::Approx(1.0).epsilon(1e-15));
  }

  SUBCASE("negative amplitude enters through beta squared") {
    CHECK((cell_step(-1.7, 0.25) - cell_step(1.7, 0.25)).norm() < 1e-15);
  }
}

TEST_CASE("constant-field cell closes at the cyclotron period") {
  const double beta = 0.9;
  const Cell2 half = integrate_cell(ConstantField{beta}, 0.0, kPi / beta);
  CHECK((half + Cell2::Identity()).norm() < 1e-12);

  const Evolution4 u = assemble_u(ConstantField{beta}, kPi / beta);
  CHECK((u - Evolution4::Identity()).norm() < 1e-12);
}

TEST_CASE("twin_cells interleaves one cell over both coordinate pairs") {
  Cell2 b;
  b << 1.0, 2.0, 3.0, 4.0;
  const Evolution4 w = twin_cells(b);
  CHECK(w(0, 0) == 1.0);
  CHECK(w(0, 2) == 2.0);
  CHECK(w(2, 0) == 3.0);
  CHECK(w(2, 2) == 4.0);
  CHECK(w(1, 1) == 1.0);
  CHECK(w(1, 3) == 2.0);
  CHECK(w(3, 1) == 3.0);
  CHECK(w(3, 3) == 4.0);
  CHECK(w(0, 1) == 0.0);
  CHECK(w(2, 3) == 0.0);
}

TEST_CASE("pair_rotation turns both pairs clockwise") {
  const Evolution4 r = pair_rotation(kPi / 2);
  Vec4 q;
  q << 1.0, 0.0, 0.0, 0.0;
  const Vec4 image = r * q;
  CHECK(image(0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(image(1) == doctest::Approx(-1.0));
  CHECK((pair_rotation(0.4) * pair_rotation(-0.4) - Evolution4::Identity())
            .norm() < 1e-15);
}

TEST_CASE("assemble_u factors into rotation times twin cell") {
  const FieldProfile profile = HarmonicField{1.1, 0.9};
  const double t = 0.37;
  const Evolution4 u = assemble_u(profile, t);
  const Evolution4 factored = pair_rotation(gamma_integral(profile, t)) *
                              twin_cells(integrate_cell(profile, 0.0, t));
  CHECK((u - factored).norm() < 1e-14);
}

TEST_CASE("evolution stays symplectic over a hundred periods") {
  const FieldProfile harmonic = HarmonicField{1.1, 0.9};
  const FieldProfile biharmonic = BiharmonicField{2.40, 2.68};
  for (const FieldProfile* profile : {&harmonic, &biharmonic}) {
    Cell2 b = Cell2::Identity();
    for (int n = 0; n < 100; ++n) {
      b = integrate_cell(*profile, n, n + 1.0) * b;
      CHECK(std::abs(b.determinant() - 1.0) < 1e-9);
    }
    const Evolution4 u =
        pair_rotation(100 * gamma_integral(*profile, 1.0)) * twin_cells(b);
    CHECK(symplectic_defect(u) < 1e-8);
  }
}

TEST_CASE("landau gauge conserves px for every profile") {
  const FieldProfile profiles[] = {
      FieldProfile{ConstantField{0.8}},
      FieldProfile{HarmonicField{1.1, 0.9}},
      FieldProfile{PiecewiseField{{{2.0, 0.5}, {-1.0, 0.3}}}},
  };
  for (const FieldProfile& profile : profiles) {
    const Evolution4 u = landau_integrate(profile, 0.77);
    CHECK(u(2, 0) == 0.0);
    CHECK(u(2, 1) == 0.0);
    CHECK(u(2, 2) == 1.0);
    CHECK(u(2, 3) == 0.0);
    CHECK(symplectic_defect(u) < 1e-10);
  }
}

TEST_CASE("both gauges close a constant field at the cyclotron period") {
  const double beta = 0.8;
  const double period = kPi / beta;
  const Evolution4 cylindrical =
      evolution_matrix(ConstantField{beta}, Geometry::cylindrical, period);
  const Evolution4 landau =
      evolution_matrix(ConstantField{beta}, Geometry::landau, period);
  CHECK((cylindrical - Evolution4::Identity()).norm() < 1e-12);
  CHECK((landau - Evolution4::Identity()).norm() < 1e-12);
}

TEST_CASE("evolve_affine without force follows the evolution matrix") {
  const FieldProfile profile = BiharmonicField{2.40, 2.68};
  Vec4 q0;
  q0 << 0.3, -0.2, 0.1, 0.4;
  const auto samples = evolve_affine(profile, Geometry::cylindrical,
                                     Force2::Zero(), q0, 2.0);
  REQUIRE(!samples.empty());
  CHECK(samples.front().t == 0.0);
  CHECK((samples.front().q - q0).norm() == 0.0);
  CHECK(samples.back().t == doctest::Approx(2.0));
  const Vec4 expected = evolution_matrix(profile, Geometry::cylindrical, 2.0) * q0;
  CHECK((samples.back().q - expected).norm() < 1e-10);
}

TEST_CASE("evolve_affine integrates a constant force exactly on the free field") {
  Vec4 q0;
  q0 << 1.0, -0.5, 0.2, 0.1;
  Force2 force;
  force << 0.3, -0.7;
  const auto samples = evolve_affine(ConstantField{0.0}, Geometry::cylindrical,
                                     force, q0, 1.5, 512);
  const double t = samples.back().t;
  CHECK(samples.back().q(2) == doctest::Approx(q0(2) + force(0) * t));
  CHECK(samples.back().q(3) == doctest::Approx(q0(3) + force(1) * t));
  CHECK(samples.back().q(0) ==
        doctest::Approx(q0(0) + q0(2) * t + force(0) * t * t / 2));
  CHECK(samples.back().q(1) ==
        doctest::Approx(q0(1) + q0(3) * t + force(1) * t * t / 2));
}

TEST_CASE("sample_stride keeps the first and last nodes") {
  const auto samples = evolve_affine(ConstantField{1.0}, Geometry::cylindrical,
                                     Force2::Zero(), Vec4::Ones(), 1.0, 64, 7);
  CHECK(samples.front().t == 0.0);
  CHECK(samples.back().t == doctest::Approx(1.0));
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    CHECK(samples[i].t == doctest::Approx((7.0 * i) / 64));
  }
}

TEST_CASE("orbit radius about the fuzzy center measures the energy") {
  // H = ((px + beta y)^2 + (py - beta x)^2) / 2 generates the clockwise
  // orbit; the distance to the center X = x/2 + py/(2 beta),
  // Y = y/2 - px/(2 beta) satisfies rho^2 = H / (2 beta^2).
  const double beta = 0.7;
  Vec4 q0;
  q0 << 1.3, -0.4, 0.2, 0.9;
  const auto samples = evolve_affine(ConstantField{beta}, Geometry::cylindrical,
                                     Force2::Zero(), q0, 3 * kPi / beta, 2048, 16);
  const auto energy = [beta](const Vec4& q) {
    const double vx = q(2) + beta * q(1);
    const double vy = q(3) - beta * q(0);
    return (vx * vx + vy * vy) / 2;
  };
  const double h0 = energy(q0);
  for (const auto& sample : samples) {
    const Vec4& q = sample.q;
    CHECK(std::abs(energy(q) - h0) < 1e-10);
    const double cx = q(0) / 2 + q(3) / (2 * beta);
    const double cy = q(1) / 2 - q(2) / (2 * beta);
    const double rho2 = (q(0) - cx) * (q(0) - cx) + (q(1) - cy) * (q(1) - cy);
    CHECK(std::abs(rho2 - h0 / (2 * beta * beta)) < 1e-10);
  }
}

TEST_CASE("cell_refinement_error reflects the step-size order") {
  const FieldProfile profile = HarmonicField{1.1, 0.9};
  const double coarse = cell_refinement_error(profile, 0.0, 1.0, 256);
  const double fine = cell_refinement_error(profile, 0.0, 1.0, 512);
  CHECK(coarse > 0.0);
  CHECK(coarse / fine > 3.0);
  CHECK(coarse / fine < 5.0);
  CHECK(cell_refinement_error(ConstantField{1.3}, 0.0, 2.0, 64) < 1e-13);
}
