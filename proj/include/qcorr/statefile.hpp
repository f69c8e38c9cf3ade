#pragma once

#include <iosfwd>
#include <string>

#include "qcorr/qstate.hpp"

namespace qcorr {

// Text format for density matrices:
//   dims: 2 2 2
//   <row 0: dim complex entries "a+bj" separated by whitespace>
//   ...
// Blank lines and lines starting with '#' are skipped. Parties are labeled
// A, B, C, ... in order.
DensityMatrix read_state(std::istream& in);
DensityMatrix read_state_file(const std::string& path);

void write_state(std::ostream& out, const DensityMatrix& rho);
void write_state_file(const std::string& path, const DensityMatrix& rho);

}  // namespace qcorr
