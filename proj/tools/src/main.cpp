#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "magloop/center.hpp"
#include "magloop/csv.hpp"
#include "magloop/evolution.hpp"
#include "magloop/field_profile.hpp"
#include "magloop/floquet.hpp"
#include "magloop/landau.hpp"
#include "magloop/literals.hpp"
#include "magloop/packet.hpp"

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

magloop::Geometry parse_geometry(const std::string& name) {
  if (name == "cylindrical") return magloop::Geometry::cylindrical;
  if (name == "landau") return magloop::Geometry::landau;
  throw ConfigError("geometry must be cylindrical or landau");
}

magloop::MapFamily parse_family(const std::string& name) {
  if (name == "harmonic") return magloop::MapFamily::harmonic;
  if (name == "biharmonic") return magloop::MapFamily::biharmonic;
  throw ConfigError("family must be harmonic or biharmonic");
}

double expression(const std::string& text) {
  try {
    return magloop::parse_expression(text);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

magloop::FieldProfile profile_from(const std::string& literal) {
  try {
    return magloop::parse_profile(literal);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

std::vector<std::string> split_on(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (const char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  return parts;
}

magloop::AxisRange parse_span(const std::string& text) {
  const auto parts = split_on(text, ':');
  if (parts.size() != 2) throw ConfigError("range \"" + text + "\" must be LO:HI");
  return {expression(parts[0]), expression(parts[1])};
}

std::pair<magloop::AxisRange, magloop::AxisRange> parse_ranges(const std::string& text) {
  const auto parts = split_on(text, ',');
  if (parts.size() != 2) throw ConfigError("ranges \"" + text + "\" must be LO:HI,LO:HI");
  return {parse_span(parts[0]), parse_span(parts[1])};
}

std::pair<int, int> parse_resolution(const std::string& text) {
  const auto parts = split_on(text, ',');
  if (parts.size() > 2) throw ConfigError("resolution must be RES or RES1,RES2");
  try {
    const int res1 = std::stoi(parts[0]);
    const int res2 = parts.size() == 2 ? std::stoi(parts[1]) : res1;
    return {res1, res2};
  } catch (const std::exception&) {
    throw ConfigError("resolution \"" + text + "\" is not an integer pair");
  }
}

magloop::Force2 parse_force(const std::string& text) {
  const auto parts = split_on(text, ',');
  if (parts.size() != 2) throw ConfigError("force \"" + text + "\" must be FX,FY");
  return {expression(parts[0]), expression(parts[1])};
}

magloop::Vec4 parse_mean(const std::string& text) {
  const auto parts = split_on(text, ',');
  if (parts.size() != 4) throw ConfigError("mean must be X,Y,PX,PY");
  magloop::Vec4 mean;
  for (int j = 0; j < 4; ++j) mean(j) = expression(parts[static_cast<std::size_t>(j)]);
  return mean;
}

Eigen::Matrix4d parse_covariance(const std::string& text) {
  const auto parts = split_on(text, ',');
  if (parts.size() != 10) {
    throw ConfigError("covariance must list the 10 upper-triangle entries row by row");
  }
  Eigen::Matrix4d cov;
  std::size_t k = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      cov(i, j) = expression(parts[k++]);
      cov(j, i) = cov(i, j);
    }
  }
  return cov;
}

struct FamilyPoint {
  magloop::MapFamily family;
  double p1 = 0.0;
  double p2 = 0.0;
};

std::optional<FamilyPoint> family_of(const magloop::FieldProfile& profile) {
  if (const auto* h = std::get_if<magloop::HarmonicField>(&profile)) {
    return FamilyPoint{magloop::MapFamily::harmonic, h->beta0, h->beta1};
  }
  if (const auto* b = std::get_if<magloop::BiharmonicField>(&profile)) {
    return FamilyPoint{magloop::MapFamily::biharmonic, b->beta1, b->beta2};
  }
  return std::nullopt;
}

std::array<double, 2> profile_parameters(const magloop::FieldProfile& profile) {
  if (const auto point = family_of(profile)) return {point->p1, point->p2};
  if (const auto* c = std::get_if<magloop::ConstantField>(&profile)) return {c->beta, 0.0};
  return {0.0, 0.0};
}

void with_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  if (path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file \"" + path + "\"");
  fn(out);
  if (!out) throw std::runtime_error("write to \"" + path + "\" failed");
}

std::ostream& note_stream(const std::string& out_path) {
  return out_path == "-" ? std::cerr : std::cout;
}

std::string format_vec2(const magloop::Force2& v) {
  return "(" + magloop::format_double(v(0)) + ", " + magloop::format_double(v(1)) + ")";
}

struct CommonFlags {
  std::string out = "-";
  std::string geometry = "cylindrical";
  int steps_per_unit = magloop::kDefaultStepsPerUnit;
  int workers = 0;
  double tol = 0.0;
  CLI::Option* tol_option = nullptr;

  double tol_or(double fallback) const {
    return tol_option != nullptr && tol_option->count() > 0 ? tol : fallback;
  }
};

void write_loop_lines(const std::string& map_out, const magloop::AxisRange& range1,
                      int n_max) {
  if (map_out == "-") {
    throw ConfigError("--loop-lines needs --out FILE so the companion CSV has a name");
  }
  struct Line {
    int n;
    int l;
    double p1;
  };
  std::vector<Line> lines;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (int n = 1; n <= n_max; ++n) {
    const int l_lo = static_cast<int>(std::ceil(range1.lo * n / two_pi));
    const int l_hi = static_cast<int>(std::floor(range1.hi * n / two_pi));
    for (int l = l_lo; l <= l_hi; ++l) {
      if (l == 0 || std::gcd(std::abs(l), n) != 1) continue;
      lines.push_back({n, l, two_pi * l / n});
    }
  }
  std::sort(lines.begin(), lines.end(),
            [](const Line& a, const Line& b) { return a.p1 < b.p1; });
  with_output(map_out + ".loop_lines.csv", [&](std::ostream& out) {
    out << "n,l,p1\n";
    for (const auto& line : lines) {
      out << line.n << ',' << line.l << ',' << magloop::format_double(line.p1) << '\n';
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Charged-particle loops in time-dependent magnetic fields"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key = value configuration file");

  CommonFlags common;
  app.add_option("--out", common.out, "Output CSV path, - for stdout")
      ->capture_default_str();
  app.add_option("--geometry", common.geometry, "Evolution gauge")
      ->check(CLI::IsMember({"cylindrical", "landau"}))
      ->capture_default_str();
  app.add_option("--steps-per-unit", common.steps_per_unit, "Integration steps per unit time")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--workers", common.workers, "Scan worker threads, 0 for hardware")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  common.tol_option =
      app.add_option("--tol", common.tol, "Tolerance override, meaning set by subcommand");

  struct ScanFlags {
    std::string family;
    std::string range;
    std::string res = "512";
    int loop_lines = 0;
  } scan_flags;
  auto* scan = app.add_subcommand("scan", "Floquet stability map over a family plane");
  scan->fallthrough();
  scan->add_option("--family", scan_flags.family, "harmonic or biharmonic")
      ->required()
      ->check(CLI::IsMember({"harmonic", "biharmonic"}));
  scan->add_option("--range", scan_flags.range, "Axis ranges LO:HI,LO:HI")->required();
  scan->add_option("--res", scan_flags.res, "Grid resolution RES or RES1,RES2")
      ->capture_default_str();
  scan->add_option("--loop-lines", scan_flags.loop_lines,
                   "Also write constant-field loop lines up to this period count");

  struct SeparatrixFlags {
    std::string family;
    std::string box;
    int branch = 0;
    int grid_res = 96;
    double zero_tol = magloop::kDefaultJordanZeroTol;
  } sep_flags;
  auto* separatrix =
      app.add_subcommand("separatrix", "Trace and classify a threshold curve");
  separatrix->fallthrough();
  separatrix->add_option("--family", sep_flags.family, "harmonic or biharmonic")
      ->required()
      ->check(CLI::IsMember({"harmonic", "biharmonic"}));
  separatrix->add_option("--branch", sep_flags.branch, "+1 for tr=+2, -1 for tr=-2")
      ->required()
      ->check(CLI::IsMember({1, -1}));
  separatrix->add_option("--box", sep_flags.box, "Search box LO:HI,LO:HI")->required();
  separatrix->add_option("--grid-res", sep_flags.grid_res, "Edge-scan resolution")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  separatrix->add_option("--zero-tol", sep_flags.zero_tol,
                         "Off-diagonal size treated as zero when classifying")
      ->capture_default_str();

  struct LoopFlags {
    std::string profile;
    int n_max = 64;
    double window = 0.02;
    bool refine = true;
  } loop_flags;
  auto* loop = app.add_subcommand("loop", "Detect and refine loop closure of a profile");
  loop->fallthrough();
  loop->add_option("--profile", loop_flags.profile, "Field profile literal")->required();
  loop->add_option("--nmax", loop_flags.n_max, "Largest period count tried")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  loop->add_option("--window", loop_flags.window, "Refinement window on the second amplitude")
      ->capture_default_str();
  loop->add_flag("--refine,!--no-refine", loop_flags.refine,
                 "Polish family amplitudes onto the exact closure");

  struct CenterFlags {
    std::string profile;
    int n_periods = 1;
    double window_start = 0.0;
    double closure_tol = magloop::kDefaultClosureTol;
    double vanish_tol = magloop::kDefaultVanishTol;
    double window = 0.02;
    int n_max = 64;
    bool refine = true;
    CLI::Option* window_start_option = nullptr;
    CLI::Option* n_option = nullptr;
  } center_flags;
  auto* center = app.add_subcommand("center", "Time-averaged loop center observables");
  center->fallthrough();
  center->add_option("--profile", center_flags.profile, "Field profile literal")->required();
  center_flags.n_option =
      center->add_option("--n", center_flags.n_periods, "Loop length in profile periods")
          ->check(CLI::PositiveNumber)
          ->capture_default_str();
  center_flags.window_start_option = center->add_option(
      "--window-start", center_flags.window_start,
      "Average one open period from this start instead of a closed loop");
  center->add_option("--closure-tol", center_flags.closure_tol, "Loop residual accepted")
      ->capture_default_str();
  center->add_option("--vanish-tol", center_flags.vanish_tol,
                     "Row norm below which the center vanishes")
      ->capture_default_str();
  center->add_option("--window", center_flags.window,
                     "Refinement window on the second amplitude")
      ->capture_default_str();
  center->add_option("--nmax", center_flags.n_max, "Largest period count tried when refining")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  center->add_flag("--refine,!--no-refine", center_flags.refine,
                   "Polish family amplitudes onto the exact closure");

  struct DriftFlags {
    std::string profile;
    std::string force;
    std::string trajectory_out;
    int blocks = 50;
    int block_periods = 0;
    double closure_tol = magloop::kDefaultClosureTol;
    double window = 0.02;
    int n_max = 64;
    int sample_stride = 4;
    bool refine = true;
  } drift_flags;
  auto* drift = app.add_subcommand("drift", "Forced drift of the loop center");
  drift->fallthrough();
  drift->add_option("--profile", drift_flags.profile, "Field profile literal")->required();
  drift->add_option("--force", drift_flags.force, "Constant force FX,FY")->required();
  drift->add_option("--blocks", drift_flags.blocks, "Number of averaging blocks")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  drift->add_option("--block-periods", drift_flags.block_periods,
                    "Profile periods per block, default the detected loop length");
  drift->add_option("--closure-tol", drift_flags.closure_tol, "Loop residual accepted")
      ->capture_default_str();
  drift->add_option("--window", drift_flags.window,
                    "Refinement window on the second amplitude")
      ->capture_default_str();
  drift->add_option("--nmax", drift_flags.n_max, "Largest period count tried")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  drift->add_option("--sample-stride", drift_flags.sample_stride,
                    "Keep every k-th trajectory sample")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  drift->add_option("--trajectory-out", drift_flags.trajectory_out,
                    "Also write the forced trajectory CSV here");
  drift->add_flag("--refine,!--no-refine", drift_flags.refine,
                  "Polish family amplitudes onto the exact closure");

  struct PacketFlags {
    std::string profile;
    std::string mean = "0,0,0,0";
    std::string cov = "6,0,1.5,0,6,0,1.5,0.5,0,0.5";
    std::string force = "0,0";
    double beta1 = 2.40;
    double beta2 = 2.68;
    int n_double = 4;
    double time = 0.0;
    int samples = 16;
    double threshold_tol = 1e-3;
    double window = 0.02;
    CLI::Option* profile_option = nullptr;
  } packet_flags;
  auto* packet = app.add_subcommand(
      "packet", "Gaussian packet propagation and the inverted-evolution demo");
  packet->fallthrough();
  packet_flags.profile_option = packet->add_option(
      "--profile", packet_flags.profile,
      "Propagate under this profile instead of running the inversion demo");
  packet->add_option("--time", packet_flags.time, "Propagation time for --profile mode");
  packet->add_option("--samples", packet_flags.samples, "Snapshot count for --profile mode")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  packet->add_option("--force", packet_flags.force, "Constant force FX,FY")
      ->capture_default_str();
  packet->add_option("--mean", packet_flags.mean, "Initial mean X,Y,PX,PY")
      ->capture_default_str();
  packet->add_option("--cov", packet_flags.cov,
                     "Initial covariance, 10 upper-triangle entries row by row")
      ->capture_default_str();
  packet->add_option("--beta1", packet_flags.beta1, "First biharmonic amplitude")
      ->capture_default_str();
  packet->add_option("--beta2", packet_flags.beta2, "Second biharmonic amplitude")
      ->capture_default_str();
  packet->add_option("--n-double", packet_flags.n_double, "Double periods in the demo")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  packet->add_option("--threshold-tol", packet_flags.threshold_tol,
                     "Accepted |tr + 2| after refinement")
      ->capture_default_str();
  packet->add_option("--window", packet_flags.window,
                     "Refinement window on the second amplitude")
      ->capture_default_str();

  struct LandauFlags {
    std::string profile;
    std::string word;
    double t_value = 1.0;
    double loop_tol = magloop::kDefaultGammaLoopTol;
    bool with_center = false;
  } landau_flags;
  auto* landau = app.add_subcommand("landau", "Pi-pulse sequences and idealized words");
  landau->fallthrough();
  landau->add_option("--profile", landau_flags.profile, "Pulse sequence literal landau:...");
  landau->add_option("--word", landau_flags.word, "Word literal word:...");
  landau->add_option("--t", landau_flags.t_value, "Value bound to t in word literals")
      ->capture_default_str();
  landau->add_option("--loop-tol", landau_flags.loop_tol, "Accepted |Gamma| for a loop")
      ->capture_default_str();
  landau->add_flag("--center", landau_flags.with_center,
                   "Cross-check kappa against the time-averaged center");

  scan->callback([&] {
    const auto family = parse_family(scan_flags.family);
    const auto [range1, range2] = parse_ranges(scan_flags.range);
    const auto [res1, res2] = parse_resolution(scan_flags.res);
    const double threshold_tol = common.tol_or(magloop::kDefaultThresholdTol);
    const auto map = magloop::scan_map(family, range1, range2, res1, res2,
                                       common.steps_per_unit, threshold_tol,
                                       common.workers);
    with_output(common.out, [&](std::ostream& out) { magloop::write_scan_csv(map, out); });
    if (scan_flags.loop_lines > 0) write_loop_lines(common.out, range1, scan_flags.loop_lines);
  });

  separatrix->callback([&] {
    const auto family = parse_family(sep_flags.family);
    const auto [box1, box2] = parse_ranges(sep_flags.box);
    const double refinement_tol = common.tol_or(1e-10);
    if (family == magloop::MapFamily::harmonic) {
      std::cerr << "note: harmonic windows are centered rather than symmetric;"
                   " kick and free-evolution values refer to the centered window\n";
    }
    const auto points = magloop::trace_separatrix(
        family, sep_flags.branch, box1, box2, sep_flags.grid_res, refinement_tol,
        common.steps_per_unit, sep_flags.zero_tol);
    note_stream(common.out) << "threshold points found: " << points.size() << "\n";
    with_output(common.out,
                [&](std::ostream& out) { magloop::write_separatrix_csv(points, out); });
  });

  loop->callback([&] {
    const auto profile = profile_from(loop_flags.profile);
    const auto geometry = parse_geometry(common.geometry);
    const double coarse_tol = common.tol_or(magloop::kDefaultClosureTol);
    std::vector<magloop::RefinedLoop> rows;
    const auto point = family_of(profile);
    if (loop_flags.refine && point) {
      rows.push_back(magloop::refine_loop(point->family, point->p1, point->p2,
                                          loop_flags.n_max, loop_flags.window,
                                          common.steps_per_unit, coarse_tol));
    } else {
      if (loop_flags.refine && !point) {
        std::cerr << "note: refinement applies to harmonic and biharmonic profiles only\n";
      }
      const auto detected = magloop::detect_loop(profile, geometry, loop_flags.n_max,
                                                 coarse_tol, common.steps_per_unit);
      if (!detected) {
        throw std::runtime_error("no loop within " + std::to_string(loop_flags.n_max) +
                                 " periods at tolerance " +
                                 magloop::format_double(coarse_tol));
      }
      const auto params = profile_parameters(profile);
      rows.push_back({params[0], params[1], detected->n, detected->residual});
    }
    note_stream(common.out) << "loop closes after " << rows.front().n
                            << " periods, residual "
                            << magloop::format_double(rows.front().residual) << "\n";
    with_output(common.out,
                [&](std::ostream& out) { magloop::write_loops_csv(rows, out); });
  });

  center->callback([&] {
    auto profile = profile_from(center_flags.profile);
    const auto geometry = parse_geometry(common.geometry);
    magloop::CenterReport report;
    if (center_flags.window_start_option->count() > 0) {
      const auto rows = magloop::floquet_point(profile, geometry,
                                               center_flags.window_start,
                                               common.steps_per_unit);
      report.cX = rows.first;
      report.cY = rows.second;
      report.kappa = magloop::commutator(report.cX, report.cY);
      report.vanishing = report.cX.norm() < center_flags.vanish_tol &&
                         report.cY.norm() < center_flags.vanish_tol;
    } else {
      int n_periods = center_flags.n_periods;
      const auto point = family_of(profile);
      if (center_flags.refine && point) {
        const auto refined = magloop::refine_loop(
            point->family, point->p1, point->p2,
            std::max(center_flags.n_max, n_periods), center_flags.window,
            common.steps_per_unit);
        profile = magloop::family_profile(point->family, refined.p1, refined.p2);
        if (center_flags.n_option->count() > 0 && n_periods != refined.n) {
          std::cerr << "note: refined loop closes after " << refined.n
                    << " periods, overriding --n " << n_periods << "\n";
        }
        n_periods = refined.n;
      }
      report = magloop::loop_center(profile, geometry, n_periods,
                                    common.steps_per_unit, center_flags.closure_tol,
                                    center_flags.vanish_tol);
    }
    auto& note = note_stream(common.out);
    note << "kappa = " << magloop::format_double(report.kappa) << "\n";
    note << "vanishing = " << (report.vanishing ? "true" : "false") << "\n";
    with_output(common.out,
                [&](std::ostream& out) { magloop::write_center_csv(report, out); });
  });

  drift->callback([&] {
    auto profile = profile_from(drift_flags.profile);
    const auto geometry = parse_geometry(common.geometry);
    const auto force = parse_force(drift_flags.force);
    int block_periods = drift_flags.block_periods;
    const auto point = family_of(profile);
    if (drift_flags.refine && point) {
      const auto refined =
          magloop::refine_loop(point->family, point->p1, point->p2, drift_flags.n_max,
                               drift_flags.window, common.steps_per_unit);
      profile = magloop::family_profile(point->family, refined.p1, refined.p2);
      if (block_periods == 0) block_periods = refined.n;
    }
    if (block_periods == 0) {
      const auto detected =
          magloop::detect_loop(profile, geometry, drift_flags.n_max,
                               drift_flags.closure_tol, common.steps_per_unit);
      if (!detected) {
        throw std::runtime_error("no loop within " + std::to_string(drift_flags.n_max) +
                                 " periods; pass --block-periods explicitly");
      }
      block_periods = detected->n;
    }
    const auto result = magloop::drift_experiment(
        profile, geometry, force, drift_flags.blocks, block_periods,
        common.steps_per_unit, drift_flags.closure_tol, drift_flags.sample_stride);
    auto& note = note_stream(common.out);
    note << "fitted velocity = " << format_vec2(result.fitted_velocity) << "\n";
    note << "predicted velocity = " << format_vec2(result.predicted_velocity) << "\n";
    note << "relative error = " << magloop::format_double(result.relative_error) << "\n";
    const double block = magloop::profile_period(profile) * block_periods;
    with_output(common.out, [&](std::ostream& out) {
      out << "block,t_mid,cx,cy\n";
      for (std::size_t k = 0; k < result.block_centers.size(); ++k) {
        out << k << ',' << magloop::format_double((static_cast<double>(k) + 0.5) * block)
            << ',' << magloop::format_double(result.block_centers[k](0)) << ','
            << magloop::format_double(result.block_centers[k](1)) << '\n';
      }
    });
    if (!drift_flags.trajectory_out.empty()) {
      const auto samples = magloop::evolve_affine(
          profile, geometry, force, magloop::Vec4::Zero(),
          block * drift_flags.blocks, common.steps_per_unit, drift_flags.sample_stride);
      with_output(drift_flags.trajectory_out, [&](std::ostream& out) {
        magloop::write_trajectory_csv(samples, out);
      });
    }
  });

  packet->callback([&] {
    magloop::GaussianPacket initial;
    initial.mean = parse_mean(packet_flags.mean);
    initial.cov = parse_covariance(packet_flags.cov);
    if (packet_flags.profile_option->count() > 0) {
      const auto profile = profile_from(packet_flags.profile);
      const auto geometry = parse_geometry(common.geometry);
      const auto force = parse_force(packet_flags.force);
      if (packet_flags.time <= 0.0) {
        throw ConfigError("--profile propagation needs --time > 0");
      }
      std::vector<double> times;
      std::vector<magloop::GaussianPacket> snapshots;
      for (int k = 0; k <= packet_flags.samples; ++k) {
        const double t = packet_flags.time * k / packet_flags.samples;
        times.push_back(t);
        snapshots.push_back(k == 0 ? initial
                                   : magloop::evolve_packet(profile, geometry, force,
                                                            initial, t,
                                                            common.steps_per_unit));
      }
      with_output(common.out, [&](std::ostream& out) {
        magloop::write_packet_csv(times, snapshots, out);
      });
      return;
    }
    const auto result = magloop::inversion_demo(
        packet_flags.beta1, packet_flags.beta2, packet_flags.n_double, initial,
        common.steps_per_unit, packet_flags.threshold_tol, packet_flags.window);
    auto& note = note_stream(common.out);
    note << "refined amplitudes = (" << magloop::format_double(result.point.p1) << ", "
         << magloop::format_double(result.point.p2) << ")\n";
    note << "distorted time tau = " << magloop::format_double(result.point.value) << "\n";
    std::vector<double> times{0.0};
    std::vector<magloop::GaussianPacket> snapshots{initial};
    for (std::size_t k = 0; k < result.snapshots.size(); ++k) {
      times.push_back(2.0 * (static_cast<double>(k) + 1));
      snapshots.push_back(result.snapshots[k]);
      note << "after " << times.back()
           << " periods: effective free time = "
           << magloop::format_double(result.effective_times[k]) << "\n";
    }
    with_output(common.out, [&](std::ostream& out) {
      magloop::write_packet_csv(times, snapshots, out);
    });
  });

  landau->callback([&] {
    if (landau_flags.profile.empty() && landau_flags.word.empty()) {
      throw ConfigError("landau needs --profile and/or --word");
    }
    auto& note = note_stream(common.out);
    if (!landau_flags.word.empty()) {
      magloop::KickFreeWord word;
      try {
        word = magloop::parse_word(landau_flags.word, landau_flags.t_value);
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
      const auto report = magloop::verify_word_loop(word);
      note << "word trace = " << magloop::format_double(report.tr) << "\n";
      note << "word loop = " << (report.is_loop ? "true" : "false");
      if (report.is_loop) note << " (order " << report.order << ")";
      note << "\n";
      if (report.threshold_nondiagonalizable) {
        note << "word sits on the threshold and is not diagonalizable\n";
      }
    }
    if (!landau_flags.profile.empty()) {
      std::optional<magloop::PulseSequence> parsed;
      try {
        parsed = magloop::parse_pulse_sequence(landau_flags.profile);
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
      const magloop::PulseSequence& seq = *parsed;
      const auto result = magloop::landau_sequence(seq, landau_flags.loop_tol);
      note << "Gamma = " << magloop::format_double(result.gamma_factor) << "\n";
      note << "loop = " << (result.is_loop ? "true" : "false") << "\n";
      note << "kappa (closed form) = "
           << magloop::format_double(magloop::landau_kappa_closed_form(seq)) << "\n";
      if (landau_flags.with_center) {
        const auto report = magloop::landau_center_commutator(seq, landau_flags.loop_tol);
        note << "kappa (time average) = " << magloop::format_double(report.kappa) << "\n";
        with_output(common.out,
                    [&](std::ostream& out) { magloop::write_center_csv(report, out); });
      }
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
