#include "qcorr/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace qcorr {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

void check_labels(const std::vector<int>& dims, const std::vector<std::string>& labels) {
  if (dims.empty()) throw ValidationError("a state needs at least one party");
  if (labels.size() != dims.size())
    throw ValidationError("labels and dims must have the same length");
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty()) throw ValidationError("party labels must be nonempty");
    if (!seen.insert(l).second) throw ValidationError("duplicate party label '" + l + "'");
  }
}

long product(const std::vector<int>& dims) {
  long d = 1;
  for (int x : dims) d *= x;
  return d;
}

int index_of(const std::vector<std::string>& labels, const std::string& label) {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<int>(i);
  throw ValidationError("unknown party label '" + label + "'");
}

// Positions of the keep-set, ascending; must be a nonempty proper subset.
std::vector<int> keep_positions(const std::vector<std::string>& labels,
                                const std::vector<std::string>& keep) {
  if (keep.empty()) throw ValidationError("keep-set must be nonempty");
  std::set<int> pos;
  for (const auto& l : keep) {
    if (!pos.insert(index_of(labels, l)).second)
      throw ValidationError("duplicate party label '" + l + "' in keep-set");
  }
  if (pos.size() == labels.size())
    throw ValidationError("keep-set must be a proper subset of the parties");
  return {pos.begin(), pos.end()};
}

Matrix pauli(int i) { return pauli_matrix(i); }

}  // namespace

DensityMatrix::DensityMatrix(Matrix data, std::vector<int> dims, std::vector<std::string> labels)
    : data_(std::move(data)), dims_(std::move(dims)), labels_(std::move(labels)) {
  check_labels(dims_, labels_);
  for (int d : dims_)
    if (d < 2) throw ValidationError("party dimensions must be >= 2");
  const long D = product(dims_);
  if (data_.rows() != D || data_.cols() != D)
    throw ValidationError("matrix size does not match the party dimensions");
  const double gap = hermiticity_gap(data_);
  if (gap > kHermitianTol)
    throw ValidationError("density matrix is not Hermitian (deviation " + fmt(gap) + ")");
  const Complex tr = data_.trace();
  if (std::abs(tr.imag()) > kTraceTol || std::abs(tr.real() - 1.0) > kTraceTol)
    throw ValidationError("density matrix trace is not 1 (got " + fmt(tr.real()) + ")");
  Eigen::SelfAdjointEigenSolver<Matrix> es(data_);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin < -kEigClipTol)
    throw ValidationError("density matrix has negative eigenvalue " + fmt(lmin));
  if (lmin < 0.0) {
    const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    data_ = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
    data_ /= data_.trace().real();
    data_ = (0.5 * (data_ + data_.adjoint())).eval();
  }
}

int DensityMatrix::party_index(const std::string& label) const {
  return index_of(labels_, label);
}

PureState::PureState(CVector amplitudes, std::vector<int> dims, std::vector<std::string> labels)
    : amps_(std::move(amplitudes)), dims_(std::move(dims)), labels_(std::move(labels)) {
  check_labels(dims_, labels_);
  for (int d : dims_)
    if (d < 1) throw ValidationError("party dimensions must be >= 1");
  if (amps_.size() != product(dims_))
    throw ValidationError("amplitude count does not match the party dimensions");
  const double norm = amps_.norm();
  if (std::abs(norm - 1.0) > kTraceTol)
    throw ValidationError("state vector is not normalized (norm " + fmt(norm) + ")");
}

int PureState::party_index(const std::string& label) const {
  return index_of(labels_, label);
}

DensityMatrix PureState::to_density() const {
  return DensityMatrix(amps_ * amps_.adjoint(), dims_, labels_);
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  std::vector<std::string> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  return DensityMatrix(kron(a.data(), b.data()), std::move(dims), std::move(labels));
}

PureState tensor(const PureState& a, const PureState& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  std::vector<std::string> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  const Matrix amp = kron(Matrix(a.amplitudes()), Matrix(b.amplitudes()));
  return PureState(amp.col(0), std::move(dims), std::move(labels));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep) {
  const auto pos = keep_positions(rho.labels(), keep);
  std::vector<int> dims;
  std::vector<std::string> labels;
  for (int p : pos) {
    dims.push_back(rho.dims()[p]);
    labels.push_back(rho.labels()[p]);
  }
  return DensityMatrix(partial_trace_raw(rho.data(), rho.dims(), pos), std::move(dims),
                       std::move(labels));
}

DensityMatrix partial_trace(const PureState& psi, const std::vector<std::string>& keep) {
  const auto pos = keep_positions(psi.labels(), keep);
  const int n = psi.party_count();
  std::vector<char> kept(n, 0);
  for (int p : pos) kept[p] = 1;
  std::vector<int> drop;
  for (int i = 0; i < n; ++i)
    if (!kept[i]) drop.push_back(i);

  // rho_keep(i,j) = sum_rest psi(i,rest) conj(psi(j,rest))
  std::vector<long> stride(n);
  long acc = 1;
  for (int i = n - 1; i >= 0; --i) {
    stride[i] = acc;
    acc *= psi.dims()[i];
  }
  auto offsets = [&](const std::vector<int>& set) {
    long count = 1;
    for (int p : set) count *= psi.dims()[p];
    std::vector<long> off(count);
    for (long i = 0; i < count; ++i) {
      long r = i, o = 0;
      for (int k = static_cast<int>(set.size()) - 1; k >= 0; --k) {
        o += (r % psi.dims()[set[k]]) * stride[set[k]];
        r /= psi.dims()[set[k]];
      }
      off[i] = o;
    }
    return off;
  };
  const auto koff = offsets(pos);
  const auto doff = offsets(drop);
  const long dk = static_cast<long>(koff.size());
  Matrix out = Matrix::Zero(dk, dk);
  for (long i = 0; i < dk; ++i)
    for (long j = 0; j < dk; ++j) {
      Complex v = 0.0;
      for (long t : doff) v += psi.amplitudes()(koff[i] + t) * std::conj(psi.amplitudes()(koff[j] + t));
      out(i, j) = v;
    }

  std::vector<int> dims;
  std::vector<std::string> labels;
  for (int p : pos) {
    dims.push_back(psi.dims()[p]);
    labels.push_back(psi.labels()[p]);
  }
  return DensityMatrix(std::move(out), std::move(dims), std::move(labels));
}

SpectralDecomposition eig_hermitian(const Matrix& m) {
  const double gap = hermiticity_gap(m);
  if (gap > kHermitianTol)
    throw ValidationError("matrix is not Hermitian (deviation " + fmt(gap) + ")");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  SpectralDecomposition out;
  out.eigenvalues = es.eigenvalues().reverse();
  out.eigenvectors = es.eigenvectors().rowwise().reverse();
  out.rank = 0;
  for (Eigen::Index i = 0; i < out.eigenvalues.size(); ++i)
    if (out.eigenvalues(i) > kRankCutoff) ++out.rank;
  return out;
}

double von_neumann_entropy(const DensityMatrix& rho) { return entropy_of(rho.data()); }

double conditional_entropy(const DensityMatrix& rho, const std::string& target,
                           const std::string& condition) {
  if (target == condition)
    throw ValidationError("conditional entropy needs two distinct parties");
  const int ti = rho.party_index(target);
  const int ci = rho.party_index(condition);
  Matrix pair_m;
  std::vector<int> pair_dims;
  if (rho.party_count() == 2) {
    pair_m = rho.data();
    pair_dims = rho.dims();
  } else {
    std::vector<int> pos = {std::min(ti, ci), std::max(ti, ci)};
    pair_m = partial_trace_raw(rho.data(), rho.dims(), pos);
    pair_dims = {rho.dims()[pos[0]], rho.dims()[pos[1]]};
  }
  const int cond_slot = (ci < ti) ? 0 : 1;
  const Matrix cond_m = partial_trace_raw(pair_m, pair_dims, {cond_slot});
  return entropy_of(pair_m) - entropy_of(cond_m);
}

PureState purify(const DensityMatrix& rho, int min_env_dim) {
  if (min_env_dim < 1) throw ValidationError("environment dimension must be >= 1");
  for (const auto& l : rho.labels())
    if (l == "E") throw ValidationError("party label 'E' is reserved for the purification");
  const SpectralDecomposition sd = eig_hermitian(rho.data());
  const int r = std::max(sd.rank, 1);
  const int env = std::max(r, min_env_dim);
  const long D = rho.dim();
  CVector amps = CVector::Zero(D * env);
  for (int i = 0; i < r; ++i) {
    const double w = std::sqrt(std::max(0.0, sd.eigenvalues(i)));
    for (long x = 0; x < D; ++x) amps(x * env + i) = w * sd.eigenvectors(x, i);
  }
  amps /= amps.norm();
  std::vector<int> dims = rho.dims();
  dims.push_back(env);
  std::vector<std::string> labels = rho.labels();
  labels.push_back("E");
  return PureState(std::move(amps), std::move(dims), std::move(labels));
}

BlochForm bloch_decompose(const DensityMatrix& rho) {
  if (rho.dims() != std::vector<int>{2, 2})
    throw ValidationError("Bloch decomposition needs a two-qubit state");
  BlochForm b;
  for (int i = 0; i < 3; ++i) {
    b.x(i) = (rho.data() * kron(pauli(i + 1), pauli(0))).trace().real();
    b.y(i) = (rho.data() * kron(pauli(0), pauli(i + 1))).trace().real();
    for (int j = 0; j < 3; ++j)
      b.t(i, j) = (rho.data() * kron(pauli(i + 1), pauli(j + 1))).trace().real();
  }
  b.k = b.x * b.x.transpose() + b.t * b.t.transpose();
  const double bound = 1.0 + kHermitianTol;
  if (b.x.cwiseAbs().maxCoeff() > bound || b.y.cwiseAbs().maxCoeff() > bound ||
      b.t.cwiseAbs().maxCoeff() > bound)
    throw ValidationError("Bloch components out of range");
  return b;
}

DensityMatrix bloch_reconstruct(const BlochForm& b, std::vector<std::string> labels) {
  Matrix m = kron(pauli(0), pauli(0));
  for (int i = 0; i < 3; ++i) {
    m += b.x(i) * kron(pauli(i + 1), pauli(0));
    m += b.y(i) * kron(pauli(0), pauli(i + 1));
    for (int j = 0; j < 3; ++j) m += b.t(i, j) * kron(pauli(i + 1), pauli(j + 1));
  }
  return DensityMatrix(0.25 * m, {2, 2}, std::move(labels));
}

namespace {

std::vector<int> order_to_perm(const std::vector<std::string>& labels,
                               const std::vector<std::string>& order) {
  if (order.size() != labels.size())
    throw ValidationError("party order must list every party exactly once");
  std::vector<int> perm;
  std::set<int> seen;
  for (const auto& l : order) {
    const int p = index_of(labels, l);
    if (!seen.insert(p).second) throw ValidationError("duplicate party label '" + l + "'");
    perm.push_back(p);
  }
  return perm;
}

}  // namespace

DensityMatrix permute_parties(const DensityMatrix& rho, const std::vector<std::string>& order) {
  const auto perm = order_to_perm(rho.labels(), order);
  std::vector<int> dims;
  for (int p : perm) dims.push_back(rho.dims()[p]);
  return DensityMatrix(permute_factors(rho.data(), rho.dims(), perm), std::move(dims),
                       std::vector<std::string>(order));
}

PureState permute_parties(const PureState& psi, const std::vector<std::string>& order) {
  const auto perm = order_to_perm(psi.labels(), order);
  std::vector<int> dims;
  for (int p : perm) dims.push_back(psi.dims()[p]);
  return PureState(permute_factors(psi.amplitudes(), psi.dims(), perm), std::move(dims),
                   std::vector<std::string>(order));
}

PureState ghz_state() {
  CVector v = CVector::Zero(8);
  v(0) = v(7) = 1.0 / std::sqrt(2.0);
  return PureState(std::move(v), {2, 2, 2}, {"A", "B", "C"});
}

PureState w_state() {
  CVector v = CVector::Zero(8);
  v(1) = v(2) = v(4) = 1.0 / std::sqrt(3.0);
  return PureState(std::move(v), {2, 2, 2}, {"A", "B", "C"});
}

}  // namespace qcorr
