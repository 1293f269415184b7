#pragma once
// Plain-text artifacts: Wigner grids, Choi matrices, bound curves.

#include <iosfwd>
#include <string>
#include <vector>

#include "bosonic/capacity.hpp"
#include "bosonic/choi.hpp"

namespace bosonic {

// Shortest decimal text that parses back to the same double; "inf"/"-inf"/"nan" otherwise.
std::string format_double(double x);

Eigen::VectorXd symmetric_grid(double range, int n);

// Columns q,p,W; q-major order.
void write_wigner_csv(std::ostream& os, const Eigen::VectorXd& q, const Eigen::VectorXd& p, const Eigen::MatrixXd& W);

inline constexpr const char* kBoundsHeader = "eta,lower_ci,hw,dp,idp,odp,gkp_rate";
void write_bounds_csv(std::ostream& os, const std::vector<BoundPoint>& rows);

// Header comment names the dimensions and the composite index; body row,col,re,im.
void write_choi_csv(std::ostream& os, const ChoiMatrix& X);
ChoiMatrix read_choi_csv(std::istream& is);

}  // namespace bosonic
