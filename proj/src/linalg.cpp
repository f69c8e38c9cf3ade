#include "qcorr/linalg.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

namespace qcorr {

namespace {

std::vector<long> strides_of(const std::vector<int>& dims) {
  std::vector<long> s(dims.size());
  long acc = 1;
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    s[i] = acc;
    acc *= dims[i];
  }
  return s;
}

long total_dim(const std::vector<int>& dims) {
  long d = 1;
  for (int x : dims) d *= x;
  return d;
}

// Flat offsets of every sub-index combination of the factors in `set`.
std::vector<long> offsets_of(const std::vector<int>& dims, const std::vector<long>& stride,
                             const std::vector<int>& set) {
  long count = 1;
  for (int p : set) count *= dims[p];
  std::vector<long> off(count);
  for (long i = 0; i < count; ++i) {
    long r = i, o = 0;
    for (int k = static_cast<int>(set.size()) - 1; k >= 0; --k) {
      const int d = dims[set[k]];
      o += (r % d) * stride[set[k]];
      r /= d;
    }
    off[i] = o;
  }
  return off;
}

void check_square(const Matrix& m, const std::vector<int>& dims) {
  for (int d : dims)
    if (d < 1) throw ValidationError("factor dimensions must be positive");
  const long D = total_dim(dims);
  if (m.rows() != D || m.cols() != D)
    throw ValidationError("matrix size does not match the factor dimension list");
}

std::vector<int> complement_of(const std::vector<int>& set, int n) {
  std::vector<char> in(n, 0);
  for (int p : set) {
    if (p < 0 || p >= n) throw ValidationError("factor position out of range");
    if (in[p]) throw ValidationError("duplicate factor position");
    in[p] = 1;
  }
  std::vector<int> rest;
  for (int i = 0; i < n; ++i)
    if (!in[i]) rest.push_back(i);
  return rest;
}

}  // namespace

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double hermiticity_gap(const Matrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("hermiticity check needs a square matrix");
  if (m.rows() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Matrix partial_trace_raw(const Matrix& m, const std::vector<int>& dims,
                         const std::vector<int>& keep) {
  check_square(m, dims);
  std::vector<int> kp = keep;
  std::sort(kp.begin(), kp.end());
  const int n = static_cast<int>(dims.size());
  const std::vector<int> drop = complement_of(kp, n);
  const auto stride = strides_of(dims);
  const auto koff = offsets_of(dims, stride, kp);
  const auto doff = offsets_of(dims, stride, drop);
  const long dk = static_cast<long>(koff.size());
  Matrix out = Matrix::Zero(dk, dk);
  for (long i = 0; i < dk; ++i)
    for (long j = 0; j < dk; ++j) {
      Complex acc = 0.0;
      for (long t : doff) acc += m(koff[i] + t, koff[j] + t);
      out(i, j) = acc;
    }
  return out;
}

Matrix condition_on_factor(const Matrix& m, const std::vector<int>& dims, int pos,
                           const CVector& v) {
  check_square(m, dims);
  const int n = static_cast<int>(dims.size());
  if (pos < 0 || pos >= n) throw ValidationError("factor position out of range");
  if (v.size() != dims[pos]) throw ValidationError("vector does not match the factor dimension");
  const auto stride = strides_of(dims);
  const std::vector<int> keep = complement_of({pos}, n);
  const auto koff = offsets_of(dims, stride, keep);
  const long dk = static_cast<long>(koff.size());
  const long st = stride[pos];
  const int d = dims[pos];
  Matrix out(dk, dk);
  for (long i = 0; i < dk; ++i)
    for (long j = 0; j < dk; ++j) {
      Complex acc = 0.0;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          acc += std::conj(v(a)) * m(koff[i] + a * st, koff[j] + b * st) * v(b);
      out(i, j) = acc;
    }
  return out;
}

Matrix embed_operator(const Matrix& op, const std::vector<int>& dims,
                      const std::vector<int>& positions) {
  std::vector<int> pos = positions;
  std::sort(pos.begin(), pos.end());
  const int n = static_cast<int>(dims.size());
  const auto stride = strides_of(dims);
  const auto poff = offsets_of(dims, stride, pos);
  const auto roff = offsets_of(dims, stride, complement_of(pos, n));
  const long dop = static_cast<long>(poff.size());
  if (op.rows() != dop || op.cols() != dop)
    throw ValidationError("operator size does not match the selected factors");
  const long D = total_dim(dims);
  Matrix out = Matrix::Zero(D, D);
  for (long si = 0; si < dop; ++si)
    for (long sj = 0; sj < dop; ++sj) {
      const Complex val = op(si, sj);
      if (val == Complex(0.0)) continue;
      for (long r : roff) out(poff[si] + r, poff[sj] + r) = val;
    }
  return out;
}

namespace {

std::vector<long> permutation_map(const std::vector<int>& dims, const std::vector<int>& perm) {
  const int n = static_cast<int>(dims.size());
  if (static_cast<int>(perm.size()) != n) throw ValidationError("permutation size mismatch");
  std::vector<char> seen(n, 0);
  std::vector<int> newdims(n);
  for (int k = 0; k < n; ++k) {
    if (perm[k] < 0 || perm[k] >= n || seen[perm[k]])
      throw ValidationError("invalid factor permutation");
    seen[perm[k]] = 1;
    newdims[k] = dims[perm[k]];
  }
  const auto stride = strides_of(dims);
  const auto newstride = strides_of(newdims);
  const long D = total_dim(dims);
  std::vector<long> map(D);
  for (long idx = 0; idx < D; ++idx) {
    long r = idx;
    std::vector<long> sub(n);
    for (int i = n - 1; i >= 0; --i) {
      sub[i] = r % dims[i];
      r /= dims[i];
    }
    long out = 0;
    for (int k = 0; k < n; ++k) out += sub[perm[k]] * newstride[k];
    map[idx] = out;
  }
  return map;
}

}  // namespace

Matrix permute_factors(const Matrix& m, const std::vector<int>& dims,
                       const std::vector<int>& perm) {
  check_square(m, dims);
  const auto map = permutation_map(dims, perm);
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(map[i], map[j]) = m(i, j);
  return out;
}

CVector permute_factors(const CVector& v, const std::vector<int>& dims,
                        const std::vector<int>& perm) {
  if (v.size() != total_dim(dims))
    throw ValidationError("vector size does not match the factor dimension list");
  const auto map = permutation_map(dims, perm);
  CVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(map[i]) = v(i);
  return out;
}

double entropy_bits(const Eigen::VectorXd& eigenvalues) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double lam = eigenvalues(i);
    if (lam > 0.0) s -= lam * std::log2(lam);
  }
  return s;
}

double entropy_of(const Matrix& rho) {
  if (rho.rows() == 1) return 0.0;
  if (rho.rows() == 2) {
    const double t = rho.trace().real();
    const double det = (rho(0, 0).real() * rho(1, 1).real()) - std::norm(rho(0, 1));
    const double disc = std::sqrt(std::max(0.0, 0.25 * t * t - det));
    Eigen::Vector2d lam(0.5 * t + disc, 0.5 * t - disc);
    return entropy_bits(lam);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  return entropy_bits(es.eigenvalues());
}

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

std::vector<double> hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out[i] = es.eigenvalues()(i);
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view tag, const Matrix& state) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix_byte = [&h](unsigned char b) {
    h ^= b;
    h *= 1099511628211ull;
  };
  auto mix_u64 = [&](std::uint64_t x) {
    for (int i = 0; i < 8; ++i) mix_byte(static_cast<unsigned char>((x >> (8 * i)) & 0xff));
  };
  mix_u64(global_seed);
  for (char c : tag) mix_byte(static_cast<unsigned char>(c));
  for (Eigen::Index j = 0; j < state.cols(); ++j)
    for (Eigen::Index i = 0; i < state.rows(); ++i) {
      mix_u64(std::bit_cast<std::uint64_t>(state(i, j).real()));
      mix_u64(std::bit_cast<std::uint64_t>(state(i, j).imag()));
    }
  return h;
}

const Eigen::Matrix2cd& pauli_matrix(int i) {
  static const std::array<Eigen::Matrix2cd, 4> sigma = [] {
    std::array<Eigen::Matrix2cd, 4> s;
    const Complex im(0, 1);
    s[0] << 1, 0, 0, 1;
    s[1] << 0, 1, 1, 0;
    s[2] << 0, -im, im, 0;
    s[3] << 1, 0, 0, -1;
    return s;
  }();
  if (i < 0 || i > 3) throw ValidationError("Pauli index out of range");
  return sigma[i];
}

std::string join_labels(const std::vector<std::string>& labels, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += sep;
    out += labels[i];
  }
  return out;
}

}  // namespace qcorr
