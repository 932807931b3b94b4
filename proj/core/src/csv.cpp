#include "magloop/csv.hpp"

#include <array>
#include <charconv>
#include <ostream>
#include <stdexcept>
#include <system_error>

namespace magloop {

std::string format_double(double value) {
  std::array<char, 32> buffer;
  auto [end, ec] =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("double formatting failed");
  return std::string(buffer.data(), end);
}

namespace {

void put_row(std::ostream& out, const double* values, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    if (i != 0) out << ',';
    out << format_double(values[i]);
  }
}

}  // namespace

void write_scan_csv(const StabilityMap& map, std::ostream& out) {
  out << "p1,p2,tr,class,gamma1\n";
  for (int i2 = 0; i2 < map.res2; ++i2) {
    for (int i1 = 0; i1 < map.res1; ++i1) {
      const std::size_t idx = map.index(i1, i2);
      out << format_double(map.p1_at(i1)) << ',' << format_double(map.p2_at(i2)) << ','
          << format_double(map.tr[idx]) << ',' << stability_name(map.cls[idx]) << ','
          << format_double(map.gamma1[idx]) << '\n';
    }
  }
}

void write_separatrix_csv(const std::vector<SeparatrixPoint>& points, std::ostream& out) {
  out << "p1,p2,branch,kind,value,b11,b12,b21,b22\n";
  for (const auto& point : points) {
    out << format_double(point.p1) << ',' << format_double(point.p2) << ','
        << (point.branch_sign > 0 ? '+' : '-') << ',' << threshold_kind_name(point.kind)
        << ',' << format_double(point.value) << ',' << format_double(point.b1(0, 0)) << ','
        << format_double(point.b1(0, 1)) << ',' << format_double(point.b1(1, 0)) << ','
        << format_double(point.b1(1, 1)) << '\n';
  }
}

void write_loops_csv(const std::vector<RefinedLoop>& loops, std::ostream& out) {
  out << "p1,p2,n,residual\n";
  for (const auto& loop : loops) {
    out << format_double(loop.p1) << ',' << format_double(loop.p2) << ',' << loop.n << ','
        << format_double(loop.residual) << '\n';
  }
}

void write_center_csv(const CenterReport& report, std::ostream& out) {
  out << "cX_x,cX_y,cX_px,cX_py,cY_x,cY_y,cY_px,cY_py,kappa,vanishing\n";
  std::array<double, 8> rows;
  for (int j = 0; j < 4; ++j) rows[static_cast<std::size_t>(j)] = report.cX(j);
  for (int j = 0; j < 4; ++j) rows[static_cast<std::size_t>(4 + j)] = report.cY(j);
  put_row(out, rows.data(), rows.size());
  out << ',' << format_double(report.kappa) << ',' << (report.vanishing ? "true" : "false")
      << '\n';
}

void write_packet_csv(const std::vector<double>& times,
                      const std::vector<GaussianPacket>& packets, std::ostream& out) {
  if (times.size() != packets.size()) {
    throw std::invalid_argument("packet CSV needs one time per packet");
  }
  out << "t,mx,my,mpx,mpy,cxx,cxy,cxpx,cxpy,cyy,cypx,cypy,cpxpx,cpxpy,cpypy\n";
  for (std::size_t k = 0; k < packets.size(); ++k) {
    const auto& packet = packets[k];
    out << format_double(times[k]);
    for (int j = 0; j < 4; ++j) out << ',' << format_double(packet.mean(j));
    for (int i = 0; i < 4; ++i) {
      for (int j = i; j < 4; ++j) out << ',' << format_double(packet.cov(i, j));
    }
    out << '\n';
  }
}

void write_trajectory_csv(const std::vector<TrajectorySample>& samples, std::ostream& out) {
  out << "t,x,y,px,py\n";
  for (const auto& sample : samples) {
    out << format_double(sample.t);
    for (int j = 0; j < 4; ++j) out << ',' << format_double(sample.q(j));
    out << '\n';
  }
}

}  // namespace magloop
