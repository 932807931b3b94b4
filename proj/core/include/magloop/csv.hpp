#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "magloop/center.hpp"
#include "magloop/evolution.hpp"
#include "magloop/floquet.hpp"
#include "magloop/packet.hpp"

namespace magloop {

// Shortest locale-independent decimal that round-trips the double.
std::string format_double(double value);

// Header: p1,p2,tr,class,gamma1. Rows in map storage order, p1 fastest.
void write_scan_csv(const StabilityMap& map, std::ostream& out);

// Header: p1,p2,branch,kind,value,b11,b12,b21,b22. Branch prints as + or -.
void write_separatrix_csv(const std::vector<SeparatrixPoint>& points, std::ostream& out);

// Header: p1,p2,n,residual.
void write_loops_csv(const std::vector<RefinedLoop>& loops, std::ostream& out);

// Header: cX_x,cX_y,cX_px,cX_py,cY_x,cY_y,cY_px,cY_py,kappa,vanishing.
void write_center_csv(const CenterReport& report, std::ostream& out);

// Header: t,mx,my,mpx,mpy,cxx,cxy,cxpx,cxpy,cyy,cypx,cypy,cpxpx,cpxpy,cpypy.
// Covariance columns walk the upper triangle row by row.
void write_packet_csv(const std::vector<double>& times,
                      const std::vector<GaussianPacket>& packets, std::ostream& out);

// Header: t,x,y,px,py.
void write_trajectory_csv(const std::vector<TrajectorySample>& samples, std::ostream& out);

}  // namespace magloop
