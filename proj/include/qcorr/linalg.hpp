#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qcorr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Invalid input: a broken invariant, a malformed argument, an unknown label.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// State rank outside what the requested method supports.
struct RankError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File and stream failures.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kEigClipTol = 1e-10;
inline constexpr double kRankCutoff = 1e-10;
inline constexpr double kOutcomeCutoff = 1e-12;
inline constexpr double kValueClipTol = 1e-6;

Matrix kron(const Matrix& a, const Matrix& b);

// max-norm of m - m†
double hermiticity_gap(const Matrix& m);

// Composite indices are row-major over the factor list `dims`.
// Trace out every factor not listed in `keep`; kept factors stay in their
// original relative order. `keep` holds factor positions, ascending.
Matrix partial_trace_raw(const Matrix& m, const std::vector<int>& dims,
                         const std::vector<int>& keep);

// <v| m |v> taken on the factor at `pos` only: returns the (unnormalized)
// operator left on the remaining factors.
Matrix condition_on_factor(const Matrix& m, const std::vector<int>& dims, int pos,
                           const CVector& v);

// op acting on the factors at `positions` (ascending), identity elsewhere.
Matrix embed_operator(const Matrix& op, const std::vector<int>& dims,
                      const std::vector<int>& positions);

// Reorder tensor factors; perm[k] is the old position of the factor that lands
// at slot k.
Matrix permute_factors(const Matrix& m, const std::vector<int>& dims,
                       const std::vector<int>& perm);
CVector permute_factors(const CVector& v, const std::vector<int>& dims,
                        const std::vector<int>& perm);

// -sum lambda log2 lambda, skipping non-positive entries.
double entropy_bits(const Eigen::VectorXd& eigenvalues);
// Entropy of a Hermitian PSD matrix (2x2 handled in closed form).
double entropy_of(const Matrix& rho);
double binary_entropy(double x);

// Descending.
std::vector<double> hermitian_eigenvalues(const Matrix& m);

// FNV-1a over (global seed, tag, matrix bytes). Stable for a given platform,
// so repeated runs with one seed take identical optimizer paths.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view tag,
                          const Matrix& state);

std::string join_labels(const std::vector<std::string>& labels,
                        const std::string& sep = "");

// 0..3: identity, x, y, z
const Eigen::Matrix2cd& pauli_matrix(int i);

}  // namespace qcorr
