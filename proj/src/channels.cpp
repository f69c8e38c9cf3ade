#include "qcorr/channels.hpp"

#include <algorithm>
#include <cmath>

namespace qcorr {

namespace {

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("damping probability must lie in [0,1]");
}

KrausChannel finish(ChannelKind kind, double p, std::vector<Matrix> ops) {
  const double gap = completeness_gap(ops);
  if (gap > kHermitianTol)
    throw ValidationError("Kraus set is not trace-preserving (gap " + std::to_string(gap) + ")");
  return {kind, p, std::move(ops)};
}

}  // namespace

double completeness_gap(const std::vector<Matrix>& operators) {
  if (operators.empty()) throw ValidationError("a channel needs at least one Kraus operator");
  Matrix sum = Matrix::Zero(operators[0].cols(), operators[0].cols());
  for (const auto& e : operators) {
    if (e.cols() != sum.cols()) throw ValidationError("Kraus operators must act on one space");
    sum += e.adjoint() * e;
  }
  return (sum - Matrix::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff();
}

KrausChannel amplitude_damping(double p) {
  check_probability(p);
  Matrix e0 = Matrix::Zero(2, 2), e1 = Matrix::Zero(2, 2);
  e0(0, 1) = std::sqrt(p);
  e1(0, 0) = 1.0;
  e1(1, 1) = std::sqrt(1.0 - p);
  return finish(ChannelKind::AmplitudeDamping, p, {std::move(e0), std::move(e1)});
}

KrausChannel phase_damping(double p) {
  check_probability(p);
  Matrix e0 = Matrix::Zero(2, 2), e1 = Matrix::Zero(2, 2);
  e0(0, 0) = 1.0;
  e0(1, 1) = std::sqrt(1.0 - p);
  e1(1, 1) = std::sqrt(p);
  return finish(ChannelKind::PhaseDamping, p, {std::move(e0), std::move(e1)});
}

KrausChannel identity_channel() {
  return finish(ChannelKind::Identity, 0.0, {Matrix::Identity(2, 2)});
}

KrausChannel make_channel(ChannelKind kind, double p) {
  switch (kind) {
    case ChannelKind::AmplitudeDamping:
      return amplitude_damping(p);
    case ChannelKind::PhaseDamping:
      return phase_damping(p);
    case ChannelKind::Identity:
      return identity_channel();
  }
  throw ValidationError("unknown channel kind");
}

SweepGrid SweepGrid::uniform(int n) {
  if (n < 1) throw ValidationError("a grid needs at least one point");
  SweepGrid g;
  g.points.reserve(n);
  if (n == 1) {
    g.points.push_back(0.0);
  } else {
    for (int i = 0; i < n; ++i) g.points.push_back(static_cast<double>(i) / (n - 1));
  }
  return g;
}

SweepGrid SweepGrid::from_points(std::vector<double> p) {
  if (p.empty()) throw ValidationError("a grid needs at least one point");
  if (!std::is_sorted(p.begin(), p.end()))
    throw ValidationError("grid points must be sorted ascending");
  for (double x : p) check_probability(x);
  SweepGrid g;
  g.points = std::move(p);
  return g;
}

double SweepGrid::time_for(double p) const {
  if (gamma <= 0.0) throw ValidationError("no decay rate set for this grid");
  check_probability(p);
  return -std::log1p(-p) / gamma;
}

DensityMatrix evolve(const DensityMatrix& rho, const std::vector<KrausChannel>& per_party) {
  const int n = rho.party_count();
  if (static_cast<int>(per_party.size()) != n)
    throw ValidationError("need exactly one channel per party");
  for (int i = 0; i < n; ++i)
    for (const auto& e : per_party[i].operators)
      if (e.rows() != rho.dims()[i] || e.cols() != rho.dims()[i])
        throw ValidationError("Kraus operator size does not match its party");

  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  std::vector<std::size_t> choice(n, 0);
  while (true) {
    Matrix op = per_party[0].operators[choice[0]];
    for (int i = 1; i < n; ++i) op = kron(op, per_party[i].operators[choice[i]]);
    out += op * rho.data() * op.adjoint();
    int i = n - 1;
    while (i >= 0 && ++choice[i] == per_party[i].operators.size()) choice[i--] = 0;
    if (i < 0) break;
  }
  return DensityMatrix(std::move(out), rho.dims(), rho.labels());
}

std::vector<std::pair<double, DensityMatrix>> sweep(const DensityMatrix& rho0, ChannelKind kind,
                                                    const SweepGrid& grid) {
  if (grid.points.empty()) throw ValidationError("a grid needs at least one point");
  std::vector<std::pair<double, DensityMatrix>> out;
  out.reserve(grid.points.size());
  for (double p : grid.points) {
    std::vector<KrausChannel> chans(rho0.party_count(), make_channel(kind, p));
    out.emplace_back(p, evolve(rho0, chans));
  }
  return out;
}

}  // namespace qcorr
