#pragma once

#include <utility>
#include <vector>

#include "qcorr/qstate.hpp"

namespace qcorr {

enum class ChannelKind { AmplitudeDamping, PhaseDamping, Identity };

// One-qubit Kraus set; completeness sum E†E = I is checked on construction.
struct KrausChannel {
  ChannelKind kind = ChannelKind::Identity;
  double p = 0.0;
  std::vector<Matrix> operators;
};

// E0 = sqrt(p)|0><1|, E1 = diag(1, sqrt(1-p)): excitation decays with rate p.
KrausChannel amplitude_damping(double p);
// E0 = diag(1, sqrt(1-p)), E1 = diag(0, sqrt(p)): populations fixed, the
// coherence scales by sqrt(1-p).
KrausChannel phase_damping(double p);
KrausChannel identity_channel();
KrausChannel make_channel(ChannelKind kind, double p);

// max-norm of sum E†E - I
double completeness_gap(const std::vector<Matrix>& operators);

// Damping-probability grid, optionally tied to a decay rate via p = 1-e^{-Gt}.
struct SweepGrid {
  double gamma = 0.0;  // 0 means no time axis
  std::vector<double> points;

  static SweepGrid uniform(int n);
  static SweepGrid from_points(std::vector<double> p);
  // t = -ln(1-p)/gamma; requires gamma > 0
  double time_for(double p) const;
};

// rho -> sum (E_a x E_b x ...) rho (...)† with one channel per party.
DensityMatrix evolve(const DensityMatrix& rho, const std::vector<KrausChannel>& per_party);

// The same channel family on every party, one output state per grid point.
std::vector<std::pair<double, DensityMatrix>> sweep(const DensityMatrix& rho0, ChannelKind kind,
                                                    const SweepGrid& grid);

}  // namespace qcorr
