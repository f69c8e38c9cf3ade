#include "qcorr/bicorr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <set>

namespace qcorr {

namespace {

constexpr double kNmFtol = 1e-13;
constexpr double kRefineTol = 1e-10;

double clip_slack(double v) { return (v < 0.0 && v >= -kValueClipTol) ? 0.0 : v; }

// Bipartite view with the measured parties merged into the last factor.
struct Grouped {
  Matrix m;
  int d_u = 1;
  int d_m = 1;
  std::vector<std::string> unmeasured;
};

Grouped group_measured_last(const DensityMatrix& rho, const std::vector<std::string>& measured) {
  if (measured.empty()) throw ValidationError("measured side must be nonempty");
  std::set<int> mset;
  std::vector<int> mpos;
  for (const auto& l : measured) {
    const int p = rho.party_index(l);
    if (!mset.insert(p).second)
      throw ValidationError("duplicate party label '" + l + "' in measured set");
    mpos.push_back(p);
  }
  if (static_cast<int>(mset.size()) == rho.party_count())
    throw ValidationError("at least one party must stay unmeasured");
  Grouped g;
  std::vector<int> perm;
  for (int i = 0; i < rho.party_count(); ++i) {
    if (mset.count(i)) continue;
    perm.push_back(i);
    g.unmeasured.push_back(rho.labels()[i]);
    g.d_u *= rho.dims()[i];
  }
  for (int p : mpos) {
    perm.push_back(p);
    g.d_m *= rho.dims()[p];
  }
  g.m = permute_factors(rho.data(), rho.dims(), perm);
  return g;
}

struct NmResult {
  Eigen::VectorXd x;
  double value = std::numeric_limits<double>::infinity();
  long evaluations = 0;
};

NmResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                     const Eigen::VectorXd& x0, double step, int max_iter) {
  const int n = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> xs;
  std::vector<double> fs;
  xs.reserve(n + 1);
  fs.reserve(n + 1);
  long evals = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++evals;
    return f(x);
  };
  xs.push_back(x0);
  fs.push_back(eval(x0));
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x = x0;
    x(i) += step;
    xs.push_back(x);
    fs.push_back(eval(x));
  }
  auto order = [&] {
    for (int i = 1; i <= n; ++i) {
      Eigen::VectorXd xv = xs[i];
      const double fv = fs[i];
      int j = i - 1;
      while (j >= 0 && fs[j] > fv) {
        xs[j + 1] = xs[j];
        fs[j + 1] = fs[j];
        --j;
      }
      xs[j + 1] = std::move(xv);
      fs[j + 1] = fv;
    }
  };
  order();
  for (int it = 0; it < max_iter; ++it) {
    if (fs[n] - fs[0] <= kNmFtol) break;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) c += xs[i];
    c /= n;
    const Eigen::VectorXd xr = c + (c - xs[n]);
    const double fr = eval(xr);
    if (fr < fs[0]) {
      const Eigen::VectorXd xe = c + 2.0 * (c - xs[n]);
      const double fe = eval(xe);
      if (fe < fr) {
        xs[n] = xe;
        fs[n] = fe;
      } else {
        xs[n] = xr;
        fs[n] = fr;
      }
    } else if (fr < fs[n - 1]) {
      xs[n] = xr;
      fs[n] = fr;
    } else {
      bool shrink = false;
      if (fr < fs[n]) {
        const Eigen::VectorXd xc = c + 0.5 * (xr - c);
        const double fc = eval(xc);
        if (fc <= fr) {
          xs[n] = xc;
          fs[n] = fc;
        } else {
          shrink = true;
        }
      } else {
        const Eigen::VectorXd xc = c - 0.5 * (c - xs[n]);
        const double fc = eval(xc);
        if (fc < fs[n]) {
          xs[n] = xc;
          fs[n] = fc;
        } else {
          shrink = true;
        }
      }
      if (shrink) {
        for (int i = 1; i <= n; ++i) {
          xs[i] = xs[0] + 0.5 * (xs[i] - xs[0]);
          fs[i] = eval(xs[i]);
        }
      }
    }
    order();
  }
  return {xs[0], fs[0], evals};
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<Eigen::VectorXd> start_points(int measured_dim, int starts, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Eigen::VectorXd> out;
  out.reserve(starts);
  const double pi = std::acos(-1.0);
  if (measured_dim == 2) {
    const std::array<std::array<double, 2>, 4> fixed = {
        {{0.0, 0.0}, {0.5 * pi, 0.0}, {0.5 * pi, 0.5 * pi}, {0.25 * pi, 0.25 * pi}}};
    for (const auto& s : fixed) {
      if (static_cast<int>(out.size()) == starts) break;
      out.push_back(Eigen::Vector2d(s[0], s[1]));
    }
    while (static_cast<int>(out.size()) < starts) {
      const double theta = std::acos(1.0 - 2.0 * unit_uniform(rng));
      const double phi = 2.0 * pi * unit_uniform(rng);
      out.push_back(Eigen::Vector2d(theta, phi));
    }
  } else {
    out.push_back(Eigen::VectorXd::Zero(15));
    while (static_cast<int>(out.size()) < starts) {
      Eigen::VectorXd c(15);
      for (int i = 0; i < 15; ++i) c(i) = 2.4 * unit_uniform(rng) - 1.2;
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace

int basis_param_count(int dim) {
  if (dim == 2) return 2;
  if (dim == 4) return 15;
  throw ValidationError("measured side dimension must be 2 or 4");
}

MeasurementBasis MeasurementBasis::qubit(double theta, double phi) {
  MeasurementBasis b;
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  const Complex ph = std::polar(1.0, phi);
  CVector b0(2), b1(2);
  b0 << c, ph * s;
  b1 << s, -ph * c;
  b.vectors_ = {std::move(b0), std::move(b1)};
  b.params_ = Eigen::Vector2d(theta, phi);
  return b;
}

MeasurementBasis MeasurementBasis::two_qubit(const Eigen::VectorXd& c) {
  if (c.size() != 15) throw ValidationError("a two-qubit basis takes 15 parameters");
  Matrix h = Matrix::Zero(4, 4);
  int j = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if (a == 0 && b == 0) continue;
      if (c(j) != 0.0) h += c(j) * kron(pauli_matrix(a), pauli_matrix(b));
      ++j;
    }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  CVector phase(4);
  for (int k = 0; k < 4; ++k) phase(k) = std::polar(1.0, es.eigenvalues()(k));
  const Matrix u = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
  MeasurementBasis out;
  for (int k = 0; k < 4; ++k) out.vectors_.push_back(u.col(k));
  out.params_ = c;
  return out;
}

MeasurementBasis MeasurementBasis::from_params(const Eigen::VectorXd& params, int dim) {
  if (params.size() != basis_param_count(dim))
    throw ValidationError("parameter count does not match the basis dimension");
  return dim == 2 ? qubit(params(0), params(1)) : two_qubit(params);
}

double MeasurementBasis::defect() const {
  const int d = dim();
  if (d == 0) return 0.0;
  Matrix gram(d, d);
  Matrix sum = Matrix::Zero(vectors_[0].size(), vectors_[0].size());
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) gram(k, l) = vectors_[k].dot(vectors_[l]);
    sum += vectors_[k] * vectors_[k].adjoint();
  }
  gram -= Matrix::Identity(d, d);
  sum -= Matrix::Identity(sum.rows(), sum.cols());
  return std::max(gram.cwiseAbs().maxCoeff(), sum.cwiseAbs().maxCoeff());
}

BasisOptimum optimize_over_bases(const std::function<double(const MeasurementBasis&)>& objective,
                                 int measured_dim, OptimizeMode mode, std::uint64_t seed,
                                 int starts) {
  const int n = basis_param_count(measured_dim);
  if (starts <= 0) starts = (measured_dim == 2) ? 24 : 64;
  const double sign = (mode == OptimizeMode::Maximize) ? -1.0 : 1.0;
  auto f = [&](const Eigen::VectorXd& p) {
    return sign * objective(MeasurementBasis::from_params(p, measured_dim));
  };
  const double step0 = (measured_dim == 2) ? 0.4 : 0.3;
  const int max_iter = 220 * n + 200;

  NmResult best;
  long evals = 0;
  for (const auto& x0 : start_points(measured_dim, starts, seed)) {
    NmResult r = nelder_mead(f, x0, step0, max_iter);
    evals += r.evaluations;
    if (r.value < best.value) best = std::move(r);
  }
  bool converged = false;
  double step = step0;
  for (int round = 0; round < 4; ++round) {
    step *= 0.2;
    const double before = best.value;
    NmResult r = nelder_mead(f, best.x, step, max_iter);
    evals += r.evaluations;
    if (r.value < best.value) best = std::move(r);
    if (before - best.value < kRefineTol) {
      converged = true;
      break;
    }
  }

  BasisOptimum out;
  out.basis = MeasurementBasis::from_params(best.x, measured_dim);
  out.value = sign * best.value;
  out.report.starts = starts;
  out.report.evaluations = evals;
  out.report.best_objective = out.value;
  out.report.converged = converged;
  return out;
}

double concurrence(const DensityMatrix& rho) {
  if (rho.dims() != std::vector<int>{2, 2})
    throw ValidationError("concurrence needs a two-qubit state");
  const Matrix yy = kron(pauli_matrix(2), pauli_matrix(2));
  const Matrix r = rho.data() * (yy * rho.data().conjugate() * yy);
  Eigen::ComplexEigenSolver<Matrix> es(r, false);
  std::array<double, 4> mu;
  for (int i = 0; i < 4; ++i) mu[i] = std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
  std::sort(mu.begin(), mu.end(), std::greater<double>());
  return std::max(0.0, mu[0] - mu[1] - mu[2] - mu[3]);
}

double eof_from_concurrence(double c) {
  return binary_entropy(0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))));
}

double eof_two_qubit(const DensityMatrix& rho) { return eof_from_concurrence(concurrence(rho)); }

double eof_pure_cut(const PureState& psi, const std::vector<std::string>& side) {
  return von_neumann_entropy(partial_trace(psi, side));
}

double mutual_information(const DensityMatrix& rho, const std::vector<std::string>& side) {
  const DensityMatrix a = partial_trace(rho, side);
  std::set<std::string> in(side.begin(), side.end());
  std::vector<std::string> rest;
  for (const auto& l : rho.labels())
    if (!in.count(l)) rest.push_back(l);
  const DensityMatrix b = partial_trace(rho, rest);
  return von_neumann_entropy(a) + von_neumann_entropy(b) - von_neumann_entropy(rho);
}

ClassicalCorrelation classical_correlation(const DensityMatrix& rho, const std::string& measured,
                                           std::uint64_t seed) {
  const Grouped g = group_measured_last(rho, {measured});
  if (g.d_m != 2) throw ValidationError("measured side must be a qubit");
  if (g.d_u > 4) throw ValidationError("unmeasured side dimension must be <= 4");
  const std::vector<int> dims = {g.d_u, g.d_m};
  const double s_u = entropy_of(partial_trace_raw(g.m, dims, {0}));
  auto objective = [&](const MeasurementBasis& b) {
    double avg = 0.0;
    for (int k = 0; k < 2; ++k) {
      const Matrix mk = condition_on_factor(g.m, dims, 1, b.vector(k));
      const double p = mk.trace().real();
      if (p < kOutcomeCutoff) continue;
      avg += p * entropy_of(Matrix(mk / p));
    }
    return s_u - avg;
  };
  const auto opt = optimize_over_bases(objective, 2, OptimizeMode::Maximize,
                                       derive_seed(seed, "cc:" + measured, g.m));
  return {opt.value, opt.basis, opt.report};
}

CorrelationValue quantum_discord(const DensityMatrix& rho, const std::string& measured,
                                 std::uint64_t seed) {
  const ClassicalCorrelation cc = classical_correlation(rho, measured, seed);
  std::vector<std::string> unmeasured;
  for (const auto& l : rho.labels())
    if (l != measured) unmeasured.push_back(l);
  CorrelationValue v;
  v.kind = MeasureKind::Discord;
  v.unmeasured = unmeasured;
  v.measured = {measured};
  v.raw = mutual_information(rho, unmeasured) - cc.value;
  v.value = clip_slack(v.raw);
  v.opt = cc.opt;
  return v;
}

CorrelationValue gqd_closed_form(const DensityMatrix& rho) {
  const BlochForm b = bloch_decompose(rho);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(b.k, Eigen::EigenvaluesOnly);
  const double d = 0.25 * (b.x.squaredNorm() + b.t.squaredNorm() - es.eigenvalues().maxCoeff());
  CorrelationValue v;
  v.kind = MeasureKind::Gqd;
  v.measured = {rho.labels()[0]};
  v.unmeasured = {rho.labels()[1]};
  v.raw = d;
  v.value = clip_slack(2.0 * d);
  v.normalized = true;
  return v;
}

CorrelationValue gqd_variational(const DensityMatrix& rho, const std::vector<std::string>& measured,
                                 std::uint64_t seed) {
  const Grouped g = group_measured_last(rho, measured);
  if (g.d_m != 2 && g.d_m != 4)
    throw ValidationError("measured side dimension must be 2 or 4");
  if (static_cast<long>(g.d_u) * g.d_m > 16)
    throw ValidationError("total dimension must be <= 16");
  const std::vector<int> dims = {g.d_u, g.d_m};
  const double purity = g.m.squaredNorm();
  auto objective = [&](const MeasurementBasis& b) {
    double kept = 0.0;
    for (int k = 0; k < g.d_m; ++k)
      kept += condition_on_factor(g.m, dims, 1, b.vector(k)).squaredNorm();
    return purity - kept;
  };
  const auto opt =
      optimize_over_bases(objective, g.d_m, OptimizeMode::Minimize,
                          derive_seed(seed, "gqd:" + join_labels(measured), g.m));
  CorrelationValue v;
  v.kind = MeasureKind::Gqd;
  v.unmeasured = g.unmeasured;
  v.measured = measured;
  v.raw = opt.value;
  if (g.d_m == 2) {
    v.value = clip_slack(2.0 * opt.value);
    v.normalized = true;
  } else {
    v.value = clip_slack(opt.value);
    v.normalized = false;
  }
  v.opt = opt.report;
  return v;
}

}  // namespace qcorr
