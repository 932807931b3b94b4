#include <cmath>
#include <complex>
#include <cstring>
#include <numbers>
#include <stdexcept>

#include <doctest.h>

#include "magloop/floquet.hpp"

using namespace magloop;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("stability_name tokens are stable") {
  CHECK(stability_name(StabilityClass::stable) == "stable");
  CHECK(stability_name(StabilityClass::threshold_plus) == "threshold_plus");
  CHECK(stability_name(StabilityClass::threshold_minus) == "threshold_minus");
  CHECK(stability_name(StabilityClass::resonant_plus) == "resonant_plus");
  CHECK(stability_name(StabilityClass::resonant_minus) == "resonant_minus");
  CHECK(threshold_kind_name(ThresholdKind::kick) == "kick");
  CHECK(threshold_kind_name(ThresholdKind::free_evolution) == "free_evolution");
  CHECK(threshold_kind_name(ThresholdKind::mixed) == "mixed");
}

TEST_CASE("half-turn constant field sits on the lower threshold") {
  const FloquetReport report = floquet_report(ConstantField{kPi});
  CHECK(report.tr == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(report.stability == StabilityClass::threshold_minus);
  CHECK((report.b1 + Cell2::Identity()).norm() < 1e-12);
  CHECK(report.gamma1 == doctest::Approx(kPi));
  CHECK(report.lambda_plus.real() == doctest::Approx(-1.0));
  CHECK(report.lambda_plus.imag() == doctest::Approx(0.0));
}

TEST_CASE("zero field is the free-evolution threshold") {
  const FloquetReport report = floquet_report(BiharmonicField{0.0, 0.0});
  CHECK(report.tr == 2.0);
  CHECK(report.stability == StabilityClass::threshold_plus);
  CHECK(report.b1(0, 0) == 1.0);
  CHECK(report.b1(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(report.b1(1, 0) == 0.0);
  CHECK(report.gamma1 == doctest::Approx(0.0));
}

TEST_CASE("eigenvalues solve the reciprocal characteristic equation") {
  SUBCASE("stable cell carries a conjugate unit-circle pair") {
    const FloquetReport report = floquet_report(HarmonicField{0.3, 0.2});
    CHECK(report.stability == StabilityClass::stable);
    CHECK(std::abs(report.lambda_plus) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.lambda_plus == std::conj(report.lambda_minus));
    CHECK((report.lambda_plus * report.lambda_minus).real() ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK((report.lambda_plus + report.lambda_minus).real() ==
          doctest::Approx(report.tr).epsilon(1e-12));
    CHECK(report.gamma1 == doctest::Approx(0.3));
  }

  SUBCASE("resonant cell carries a real reciprocal pair") {
    const FloquetReport report = floquet_report(BiharmonicField{2.40, 3.50});
    CHECK(report.tr == doctest::Approx(-2.44351044257187).epsilon(1e-10));
    CHECK(report.stability == StabilityClass::resonant_minus);
    CHECK(report.lambda_plus.imag() == 0.0);
    CHECK((report.lambda_plus * report.lambda_minus).real() ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("inversion-point cell matches its four quoted digits") {
  const FloquetReport report = floquet_report(BiharmonicField{2.40, 2.68});
  CHECK(std::abs(report.b1(0, 0) - (-1.000)) < 5e-3);
  CHECK(std::abs(report.b1(0, 1) - 0.369) < 5e-3);
  CHECK(std::abs(report.b1(1, 0) - 0.000) < 5e-3);
  CHECK(std::abs(report.b1(1, 1) - (-1.000)) < 5e-3);
  CHECK(report.b1(0, 0) == doctest::Approx(-1.00023972961852).epsilon(1e-9));
  CHECK(report.b1(0, 1) == doctest::Approx(0.368839886959745).epsilon(1e-9));

  SUBCASE("the class honors the threshold tolerance band") {
    CHECK(report.stability == StabilityClass::resonant_minus);
    const FloquetReport banded =
        floquet_report(BiharmonicField{2.40, 2.68}, kDefaultStepsPerUnit, 1e-3);
    CHECK(banded.stability == StabilityClass::threshold_minus);
  }
}

TEST_CASE("family_profile names the two scan families") {
  const FieldProfile harmonic = family_profile(MapFamily::harmonic, 1.1, 0.9);
  const auto* h = std::get_if<HarmonicField>(&harmonic);
  REQUIRE(h != nullptr);
  CHECK(h->beta0 == 1.1);
  CHECK(h->beta1 == 0.9);

  const FieldProfile biharmonic = family_profile(MapFamily::biharmonic, 2.4, 2.68);
  const auto* b = std::get_if<BiharmonicField>(&biharmonic);
  REQUIRE(b != nullptr);
  CHECK(b->beta1 == 2.4);
  CHECK(b->beta2 == 2.68);
}

TEST_CASE("harmonic slice at zero modulation is the constant-field chart") {
  const StabilityMap map = scan_map(MapFamily::harmonic, {0.1, 2.9}, {0.0, 0.0},
                                    8, 2, 512);
  CHECK(map.res1 == 8);
  CHECK(map.res2 == 2);
  CHECK(map.p1_at(0) == doctest::Approx(0.1));
  CHECK(map.p1_at(7) == doctest::Approx(2.9));
  for (int i2 = 0; i2 < 2; ++i2) {
    for (int i1 = 0; i1 < 8; ++i1) {
      const int idx = map.index(i1, i2);
      CHECK(map.tr[idx] ==
            doctest::Approx(2 * std::cos(map.p1_at(i1))).epsilon(1e-12));
      CHECK(map.cls[idx] == StabilityClass::stable);
      CHECK(map.gamma1[idx] == doctest::Approx(map.p1_at(i1)));
    }
  }
}

TEST_CASE("scan results do not depend on the worker count") {
  const StabilityMap one = scan_map(MapFamily::biharmonic, {0.0, 4.0},
                                    {0.0, 4.0}, 24, 24, 512, 1e-6, 1);
  const StabilityMap four = scan_map(MapFamily::biharmonic, {0.0, 4.0},
                                     {0.0, 4.0}, 24, 24, 512, 1e-6, 4);
  REQUIRE(one.tr.size() == four.tr.size());
  CHECK(std::memcmp(one.tr.data(), four.tr.data(),
                    one.tr.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(one.gamma1.data(), four.gamma1.data(),
                    one.gamma1.size() * sizeof(double)) == 0);
  CHECK(one.cls == four.cls);
}

TEST_CASE("inner lower branch hosts distorted free evolutions") {
  const auto points = trace_separatrix(MapFamily::biharmonic, -1, {2.0, 3.0},
                                       {2.0, 3.4}, 32, 1e-10, 1024);
  REQUIRE(!points.empty());
  for (const auto& pt : points) {
    CHECK(pt.branch_sign == -1);
    CHECK(std::abs(pt.b1.trace() + 2.0) < 1e-8);
    CHECK(pt.window == SymmetryWindow::symmetric);
    CHECK(pt.kind == ThresholdKind::free_evolution);
    CHECK(std::abs(pt.b1(1, 0)) < kDefaultJordanZeroTol);
    CHECK(pt.value == doctest::Approx(-pt.b1(0, 1)).epsilon(1e-12));
    CHECK(pt.value < 0.0);
  }
}

TEST_CASE("refine_to_threshold lands on the inversion point") {
  const SeparatrixPoint pt =
      refine_to_threshold(MapFamily::biharmonic, 2.40, 2.68, -1);
  CHECK(pt.p1 == 2.40);
  CHECK(pt.p2 == doctest::Approx(2.67937134944135).epsilon(1e-9));
  CHECK(pt.kind == ThresholdKind::free_evolution);
  CHECK(pt.value == doctest::Approx(-0.368954890730346).epsilon(1e-9));
  CHECK(std::abs(pt.b1.trace() + 2.0) < 1e-11);

  CHECK_THROWS_AS(refine_to_threshold(MapFamily::biharmonic, 2.40, 2.0, -1),
                  std::invalid_argument);
}

TEST_CASE("harmonic thresholds only get a centered window") {
  double bracket = -1.0;
  double prev = floquet_report(HarmonicField{2.8, 0.0}, 1024).tr;
  for (double q = 0.1; q <= 3.0; q += 0.1) {
    const double tr = floquet_report(HarmonicField{2.8, q}, 1024).tr;
    if ((prev + 2.0) * (tr + 2.0) < 0.0) {
      bracket = q;
      break;
    }
    prev = tr;
  }
  REQUIRE(bracket > 0.0);
  const SeparatrixPoint pt = refine_to_threshold(
      MapFamily::harmonic, 2.8, bracket - 0.05, -1, 0.1, 1e-12, 1024);
  CHECK(pt.window == SymmetryWindow::centered);
  CHECK(std::abs(pt.b1.trace() + 2.0) < 1e-10);
}

TEST_CASE("find_loop_curve locates constant-field roots") {
  const auto quarter = find_loop_curve(MapFamily::harmonic, 1, 4, {0.1, 0.0},
                                       {3.0, 0.0}, 1e-10, 128, 512);
  REQUIRE(quarter.size() == 1);
  CHECK(quarter[0].p1 == doctest::Approx(kPi / 2).epsilon(1e-9));
  CHECK(quarter[0].tr == doctest::Approx(0.0).epsilon(1e-9));

  const auto third = find_loop_curve(MapFamily::harmonic, 1, 3, {0.1, 0.0},
                                     {3.0, 0.0}, 1e-10, 128, 512);
  REQUIRE(third.size() == 1);
  CHECK(third[0].p1 == doctest::Approx(2 * kPi / 3).epsilon(1e-9));

  const auto both = find_loop_curve(MapFamily::harmonic, 1, 4, {0.1, 0.0},
                                    {6.0, 0.0}, 1e-10, 256, 512);
  CHECK(both.size() == 2);
}

TEST_CASE("detect_loop counts periods to closure") {
  const auto whole = detect_loop(ConstantField{kPi}, Geometry::cylindrical, 4, 1e-9);
  REQUIRE(whole.has_value());
  CHECK(whole->n == 1);
  CHECK(whole->residual < 1e-11);

  const auto six = detect_loop(BiharmonicField{kPi / 2, 9.97177488903483},
                               Geometry::cylindrical, 8, 1e-6);
  REQUIRE(six.has_value());
  CHECK(six->n == 6);
  CHECK(six->residual < 1e-9);

  CHECK(!detect_loop(HarmonicField{0.3, 0.2}, Geometry::cylindrical, 8, 1e-6)
             .has_value());
}

TEST_CASE("refine_loop polishes the three quoted loops") {
  SUBCASE("biharmonic six-loop") {
    const RefinedLoop loop = refine_loop(MapFamily::biharmonic, kPi / 2, 9.966);
    CHECK(loop.n == 6);
    CHECK(loop.p2 == doctest::Approx(9.97177488903483).epsilon(1e-9));
    CHECK(loop.residual < 1e-6);
    CHECK(loop.p1 == kPi / 2);
  }

  SUBCASE("harmonic fifteen-loop") {
    const RefinedLoop loop = refine_loop(MapFamily::harmonic, -kPi / 5, -1.152);
    CHECK(loop.n == 15);
    CHECK(loop.p2 == doctest::Approx(-1.15746477791363).epsilon(1e-9));
    CHECK(loop.residual < 1e-6);
  }

  SUBCASE("harmonic forty-loop nearest the quoted eighth-turn point") {
    const RefinedLoop loop = refine_loop(MapFamily::harmonic, kPi / 8, -0.815);
    CHECK(loop.n == 40);
    CHECK(loop.p2 == doctest::Approx(-0.823946832224999).epsilon(1e-9));
    CHECK(loop.residual < 1e-6);
  }

  SUBCASE("weak stable fields refuse to close quickly") {
    CHECK_THROWS_AS(refine_loop(MapFamily::biharmonic, 0.3, 0.4, 3),
                    std::invalid_argument);
  }
}

TEST_CASE("squeezing_axes returns the reciprocal eigenstructure") {
  SUBCASE("diagonal stretch") {
    Cell2 b;
    b << 2.0, 0.0, 0.0, 0.5;
    const SqueezeAxes axes = squeezing_axes(b);
    CHECK(axes.lambda_plus == doctest::Approx(2.0));
    CHECK(axes.lambda_minus == doctest::Approx(0.5));
    CHECK(!axes.with_parity);
    CHECK((axes.axis_plus * b - axes.lambda_plus * axes.axis_plus).norm() < 1e-12);
    CHECK((axes.axis_minus * b - axes.lambda_minus * axes.axis_minus).norm() < 1e-12);
  }

  SUBCASE("negative-trace squeeze carries the parity flag") {
    Cell2 b;
    b << -2.0, -1.0, -1.0, -1.0;
    const SqueezeAxes axes = squeezing_axes(b);
    CHECK(axes.with_parity);
    CHECK(axes.lambda_plus == doctest::Approx((-3.0 - std::sqrt(5.0)) / 2));
    CHECK(axes.lambda_plus * axes.lambda_minus == doctest::Approx(1.0));
    CHECK(std::abs(axes.lambda_plus) >= 1.0);
    CHECK((axes.axis_plus * b - axes.lambda_plus * axes.axis_plus).norm() < 1e-12);
  }

  SUBCASE("resonant biharmonic cell") {
    const FloquetReport report = floquet_report(BiharmonicField{2.40, 3.50});
    const SqueezeAxes axes = squeezing_axes(report.b1);
    CHECK(axes.lambda_plus == doctest::Approx(-1.92367104297643).epsilon(1e-9));
    CHECK(axes.lambda_minus == doctest::Approx(-0.519839399595439).epsilon(1e-9));
    CHECK(axes.with_parity);
  }

  SUBCASE("bounded cells have no squeeze axes") {
    Cell2 rotation;
    rotation << 0.0, 1.0, -1.0, 0.0;
    CHECK_THROWS_AS(squeezing_axes(rotation), std::domain_error);
    CHECK_THROWS_AS(squeezing_axes(Cell2::Identity()), std::domain_error);
  }
}
