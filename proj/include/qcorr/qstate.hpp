#pragma once

#include "qcorr/linalg.hpp"

namespace qcorr {

// Density operator over an ordered list of labeled parties. Construction
// validates hermiticity, unit trace and positivity; eigenvalues in
// [-1e-10, 0) are clipped to zero and the matrix renormalized, anything more
// negative is rejected.
class DensityMatrix {
 public:
  DensityMatrix(Matrix data, std::vector<int> dims, std::vector<std::string> labels);

  const Matrix& data() const { return data_; }
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<std::string>& labels() const { return labels_; }
  long dim() const { return data_.rows(); }
  int party_count() const { return static_cast<int>(dims_.size()); }
  int party_index(const std::string& label) const;
  int party_dim(const std::string& label) const { return dims_[party_index(label)]; }
  double purity() const { return data_.squaredNorm(); }

 private:
  Matrix data_;
  std::vector<int> dims_;
  std::vector<std::string> labels_;
};

// Normalized state vector over labeled parties. Purification environments may
// carry dimension 1, so dims here only need to be >= 1.
class PureState {
 public:
  PureState(CVector amplitudes, std::vector<int> dims, std::vector<std::string> labels);

  const CVector& amplitudes() const { return amps_; }
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<std::string>& labels() const { return labels_; }
  long dim() const { return amps_.size(); }
  int party_count() const { return static_cast<int>(dims_.size()); }
  int party_index(const std::string& label) const;

  DensityMatrix to_density() const;

 private:
  CVector amps_;
  std::vector<int> dims_;
  std::vector<std::string> labels_;
};

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;  // descending
  Matrix eigenvectors;          // columns, matching order
  int rank = 0;                 // eigenvalues above 1e-10
};

// Two-qubit Bloch data: x for the first listed party, y for the second,
// t the correlation matrix, k = x x^T + t t^T.
struct BlochForm {
  Eigen::Vector3d x;
  Eigen::Vector3d y;
  Eigen::Matrix3d t;
  Eigen::Matrix3d k;
};

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
PureState tensor(const PureState& a, const PureState& b);

// Keep the listed parties (a nonempty proper subset); kept parties preserve
// their original order regardless of the order given here.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep);
DensityMatrix partial_trace(const PureState& psi, const std::vector<std::string>& keep);

SpectralDecomposition eig_hermitian(const Matrix& m);

double von_neumann_entropy(const DensityMatrix& rho);

// S(rho_{target,condition}) - S(rho_condition); may be negative.
double conditional_entropy(const DensityMatrix& rho, const std::string& target,
                           const std::string& condition);

// Spectral purification with ancilla label "E" appended last. The environment
// dimension is the state's rank, or min_env_dim if that is larger.
PureState purify(const DensityMatrix& rho, int min_env_dim = 1);

BlochForm bloch_decompose(const DensityMatrix& rho);
DensityMatrix bloch_reconstruct(const BlochForm& b,
                                std::vector<std::string> labels = {"A", "B"});

// Reorder parties to the given full label order (labels stay attached to
// their parties).
DensityMatrix permute_parties(const DensityMatrix& rho, const std::vector<std::string>& order);
PureState permute_parties(const PureState& psi, const std::vector<std::string>& order);

// (|000> + |111>)/sqrt(2) and (|100> + |010> + |001>)/sqrt(3) on A,B,C.
PureState ghz_state();
PureState w_state();

}  // namespace qcorr
