#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qcorr/qstate.hpp"

namespace qcorr {

// Orthonormal rank-1 projective basis on a measured factor of dimension 2 or 4.
class MeasurementBasis {
 public:
  // |b0> = cos(t/2)|0> + e^{i f} sin(t/2)|1>, |b1> orthogonal.
  static MeasurementBasis qubit(double theta, double phi);
  // Columns of exp(iH), H = sum_j c_j G_j over the 15 traceless two-qubit
  // Pauli products.
  static MeasurementBasis two_qubit(const Eigen::VectorXd& c);
  static MeasurementBasis from_params(const Eigen::VectorXd& params, int dim);

  int dim() const { return static_cast<int>(vectors_.size()); }
  const CVector& vector(int k) const { return vectors_[k]; }
  Matrix projector(int k) const { return vectors_[k] * vectors_[k].adjoint(); }
  const Eigen::VectorXd& params() const { return params_; }

  // max deviation from orthonormality / completeness
  double defect() const;

 private:
  std::vector<CVector> vectors_;
  Eigen::VectorXd params_;
};

int basis_param_count(int dim);

struct OptimizerReport {
  int starts = 0;
  long evaluations = 0;
  double best_objective = 0.0;
  bool converged = true;
};

enum class OptimizeMode { Maximize, Minimize };

struct BasisOptimum {
  double value = 0.0;  // objective at the optimum, in the caller's direction
  MeasurementBasis basis;
  OptimizerReport report;
};

// Deterministic multi-start derivative-free search over the basis manifold.
// starts = 0 picks the default (24 for dim 2, 64 for dim 4). Convergence means
// a refinement step improved the objective by less than 1e-10.
BasisOptimum optimize_over_bases(const std::function<double(const MeasurementBasis&)>& objective,
                                 int measured_dim, OptimizeMode mode, std::uint64_t seed,
                                 int starts = 0);

enum class MeasureKind { Eof, Discord, Gqd };

struct CorrelationValue {
  MeasureKind kind = MeasureKind::Discord;
  std::vector<std::string> unmeasured;
  std::vector<std::string> measured;
  double value = 0.0;       // clipped / normalized, see each measure
  double raw = 0.0;         // pre-clip value (QD) or un-normalized distance (GQD)
  bool normalized = true;   // false for GQD with a dim-4 measured side
  OptimizerReport opt;
};

// Two-qubit entanglement via the spin-flipped spectrum.
double concurrence(const DensityMatrix& rho);
double eof_from_concurrence(double c);
double eof_two_qubit(const DensityMatrix& rho);

// Entanglement across a cut of a pure state: entropy of either reduction.
double eof_pure_cut(const PureState& psi, const std::vector<std::string>& side);

// I = S_side + S_rest - S_total for the bipartition (side, rest).
double mutual_information(const DensityMatrix& rho, const std::vector<std::string>& side);

struct ClassicalCorrelation {
  double value = 0.0;
  MeasurementBasis basis;
  OptimizerReport opt;
};

// J<- = max over projective bases on the measured qubit of
// S(unmeasured) - sum_k p_k S(unmeasured|k). Outcomes with p_k < 1e-12 drop.
ClassicalCorrelation classical_correlation(const DensityMatrix& rho, const std::string& measured,
                                           std::uint64_t seed);

// delta<- = I - J<-; small negatives (>= -1e-6) clip to 0, raw kept.
CorrelationValue quantum_discord(const DensityMatrix& rho, const std::string& measured,
                                 std::uint64_t seed);

// Two-qubit geometric discord, measured side = first listed party:
// D = (|x|^2 + |T|^2 - lmax(x x^t + T T^t))/4, reported as 2D.
CorrelationValue gqd_closed_form(const DensityMatrix& rho);

// min over projective bases on the measured side of |rho - Pi(rho)|^2 where
// Pi is the post-measurement dephasing. Reported as 2D for a qubit measured
// side, raw D (normalized = false) for a dim-4 measured side.
CorrelationValue gqd_variational(const DensityMatrix& rho, const std::vector<std::string>& measured,
                                 std::uint64_t seed);

}  // namespace qcorr
