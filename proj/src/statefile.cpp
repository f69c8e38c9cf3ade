#include "qcorr/statefile.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace qcorr {

namespace {

bool skippable(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// One complex token: a real part, optionally followed (with no space) by a
// signed imaginary part ending in 'j' or 'i'. "1", "-0.5+0.5j", "2j" all work.
Complex parse_complex(const std::string& tok) {
  const char* s = tok.c_str();
  char* end = nullptr;
  double first = std::strtod(s, &end);
  if (end == s) throw ValidationError("bad matrix entry '" + tok + "'");
  if (*end == '\0') return Complex(first, 0.0);
  if (*end == 'j' || *end == 'i') {
    if (end[1] != '\0') throw ValidationError("bad matrix entry '" + tok + "'");
    return Complex(0.0, first);
  }
  const char* s2 = end;
  double second = std::strtod(s2, &end);
  if (end == s2 || (*end != 'j' && *end != 'i') || end[1] != '\0')
    throw ValidationError("bad matrix entry '" + tok + "'");
  return Complex(first, second);
}

std::string next_content_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (!skippable(line)) return line;
  }
  throw ValidationError("state file ended early");
}

}  // namespace

DensityMatrix read_state(std::istream& in) {
  std::istringstream header(next_content_line(in));
  std::string tag;
  header >> tag;
  if (tag != "dims:") throw ValidationError("state file must start with a 'dims:' line");
  std::vector<int> dims;
  int d;
  while (header >> d) dims.push_back(d);
  if (!header.eof()) throw ValidationError("bad value on the 'dims:' line");
  if (dims.empty()) throw ValidationError("the 'dims:' line lists no parties");
  long D = 1;
  for (int x : dims) {
    if (x < 2) throw ValidationError("party dimensions must be >= 2");
    D *= x;
  }

  Matrix m(D, D);
  for (long r = 0; r < D; ++r) {
    std::istringstream row(next_content_line(in));
    std::string tok;
    for (long c = 0; c < D; ++c) {
      if (!(row >> tok))
        throw ValidationError("row " + std::to_string(r) + " has too few entries");
      m(r, c) = parse_complex(tok);
    }
    if (row >> tok)
      throw ValidationError("row " + std::to_string(r) + " has too many entries");
  }

  std::vector<std::string> labels;
  for (std::size_t i = 0; i < dims.size(); ++i) labels.push_back(std::string(1, char('A' + i)));
  return DensityMatrix(std::move(m), std::move(dims), std::move(labels));
}

DensityMatrix read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open state file '" + path + "'");
  try {
    return read_state(in);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void write_state(std::ostream& out, const DensityMatrix& rho) {
  out << "dims:";
  for (int d : rho.dims()) out << ' ' << d;
  out << '\n';
  char buf[96];
  for (long r = 0; r < rho.dim(); ++r) {
    for (long c = 0; c < rho.dim(); ++c) {
      const Complex v = rho.data()(r, c);
      std::snprintf(buf, sizeof buf, "%.17g%+.17gj", v.real(), v.imag());
      out << (c ? " " : "") << buf;
    }
    out << '\n';
  }
}

void write_state_file(const std::string& path, const DensityMatrix& rho) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_state(out, rho);
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace qcorr
