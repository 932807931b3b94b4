#include <cstdlib>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "magloop/csv.hpp"

using namespace magloop;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

TEST_CASE("format_double round-trips exactly") {
  for (double value : {0.0, 1.5, -2.5e17, 0.1, std::numbers::pi, -1.0 / 3.0,
                       1e-300, 9.97177488903483}) {
    const std::string text = format_double(value);
    CHECK(std::strtod(text.c_str(), nullptr) == value);
    CHECK(text.find(',') == std::string::npos);
  }
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.5) == "1.5");
}

TEST_CASE("scan CSV walks the grid with p1 fastest") {
  StabilityMap map;
  map.family = MapFamily::biharmonic;
  map.range1 = {0.0, 1.0};
  map.range2 = {2.0, 3.0};
  map.res1 = 2;
  map.res2 = 2;
  map.tr = {0.1, 0.2, 0.3, 0.4};
  map.cls = {StabilityClass::stable, StabilityClass::resonant_plus,
             StabilityClass::threshold_minus, StabilityClass::stable};
  map.gamma1 = {0.0, 0.0, 0.0, 0.0};

  std::ostringstream out;
  write_scan_csv(map, out);
  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "p1,p2,tr,class,gamma1");
  CHECK(lines[1] == "0,2,0.1,stable,0");
  CHECK(lines[2] == "1,2,0.2,resonant_plus,0");
  CHECK(lines[3] == "0,3,0.3,threshold_minus,0");
  CHECK(lines[4] == "1,3,0.4,stable,0");
}

TEST_CASE("separatrix CSV spells the branch sign") {
  SeparatrixPoint point;
  point.p1 = 2.4;
  point.p2 = 2.68;
  point.branch_sign = -1;
  point.kind = ThresholdKind::free_evolution;
  point.value = -0.369;
  point.b1 << -1.0, 0.369, 0.0, -1.0;

  std::ostringstream out;
  write_separatrix_csv({point}, out);
  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "p1,p2,branch,kind,value,b11,b12,b21,b22");
  const auto fields = fields_of(lines[1]);
  REQUIRE(fields.size() == 9);
  CHECK(fields[2] == "-");
  CHECK(fields[3] == "free_evolution");
  CHECK(fields[4] == "-0.369");

  point.branch_sign = 1;
  std::ostringstream plus;
  write_separatrix_csv({point}, plus);
  CHECK(fields_of(lines_of(plus.str())[1])[2] == "+");
}

TEST_CASE("loop CSV lists the refined amplitudes") {
  RefinedLoop loop;
  loop.p1 = 1.5707963267948966;
  loop.p2 = 9.97177488903483;
  loop.n = 6;
  loop.residual = 1.4e-13;

  std::ostringstream out;
  write_loops_csv({loop}, out);
  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "p1,p2,n,residual");
  const auto fields = fields_of(lines[1]);
  REQUIRE(fields.size() == 4);
  CHECK(std::strtod(fields[1].c_str(), nullptr) == loop.p2);
  CHECK(fields[2] == "6");
}

TEST_CASE("center CSV carries both rows and the vanishing verdict") {
  CenterReport report;
  report.cX << 0.5, 0.0, 0.0, 1.0;
  report.cY << 0.0, 0.5, -1.0, 0.0;
  report.kappa = -1.0;
  report.vanishing = false;

  std::ostringstream out;
  write_center_csv(report, out);
  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] ==
        "cX_x,cX_y,cX_px,cX_py,cY_x,cY_y,cY_px,cY_py,kappa,vanishing");
  const auto fields = fields_of(lines[1]);
  REQUIRE(fields.size() == 10);
  CHECK(fields[0] == "0.5");
  CHECK(fields[6] == "-1");
  CHECK(fields[9] == "false");

  report.vanishing = true;
  std::ostringstream vanishing;
  write_center_csv(report, vanishing);
  CHECK(fields_of(lines_of(vanishing.str())[1])[9] == "true");
}

TEST_CASE("packet CSV flattens the covariance upper triangle") {
  GaussianPacket packet;
  packet.mean << 1.0, 2.0, 3.0, 4.0;
  int entry = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      packet.cov(i, j) = packet.cov(j, i) = ++entry;
    }
  }

  std::ostringstream out;
  write_packet_csv({0.5}, {packet}, out);
  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] ==
        "t,mx,my,mpx,mpy,cxx,cxy,cxpx,cxpy,cyy,cypx,cypy,cpxpx,cpxpy,cpypy");
  const auto fields = fields_of(lines[1]);
  REQUIRE(fields.size() == 15);
  CHECK(fields[0] == "0.5");
  CHECK(fields[1] == "1");
  for (int k = 0; k < 10; ++k) {
    CHECK(std::strtod(fields[5 + k].c_str(), nullptr) == k + 1.0);
  }

  CHECK_THROWS_AS(write_packet_csv({0.5, 1.0}, {packet}, out),
                  std::invalid_argument);
}

TEST_CASE("trajectory CSV lists the four coordinates per node") {
  TrajectorySample sample;
  sample.t = 0.25;
  sample.q << 1.0, -2.0, 0.5, 0.25;

  std::ostringstream out;
  write_trajectory_csv({sample}, out);
  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "t,x,y,px,py");
  CHECK(lines[1] == "0.25,1,-2,0.5,0.25");
}
