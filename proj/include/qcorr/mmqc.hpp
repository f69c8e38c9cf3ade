#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qcorr/bicorr.hpp"

namespace qcorr {

// Ordered pair of disjoint nonempty party subsets; `measured` is the side a
// discord-type measure conditions on.
struct BipartitionTerm {
  std::vector<std::string> unmeasured;
  std::vector<std::string> measured;
};

// All ordered pairs of disjoint nonempty subsets of `parties`, smallest joint
// size first; each unordered pair appears as (small side, large side) followed
// by its flip. N parties give 3^N - 2^(N+1) + 1 terms (12 for N = 3).
std::vector<BipartitionTerm> enumerate_terms(const std::vector<std::string>& parties);

enum class MmqcMethod { PureAnalytic, Rank2Monogamy, Direct };

struct MmqcReport {
  MeasureKind kind = MeasureKind::Eof;
  MmqcMethod method = MmqcMethod::Direct;
  double total = 0.0;
  std::vector<CorrelationValue> terms;
  bool all_converged() const;
};

// Which terms a GQD report covers: the six qubit-measured pairwise terms only,
// or additionally the six one-vs-two cut terms (where a dim-4 measured side is
// reported un-normalized).
enum class GqdTermSet { TwoQubitOnly, Full };

// Pure 3-qubit path: one-vs-two terms are reduction entropies in both
// directions; pairwise terms use the concurrence closed form (EOF) or
// measurement optimization (QD).
MmqcReport mmqc_pure(const PureState& psi, MeasureKind kind, std::uint64_t seed);

// (sum of the six pairwise EOF terms, sum of the six pairwise QD terms) for a
// pure 3-party state; the two agree for pure states up to optimizer slack.
std::pair<double, double> pairwise_sum_identity_check(const PureState& psi, std::uint64_t seed);

// Rank <= 2 mixed path via a qubit purification E: EOF cut terms are
// discord-with-E plus a conditional entropy; QD cut terms split into the
// concurrence route (pair measured) and direct optimization (qubit measured).
MmqcReport mmqc_rank2(const DensityMatrix& rho, MeasureKind kind, std::uint64_t seed);

// Geometric measure, any rank.
MmqcReport mmqc_gqd(const DensityMatrix& rho, GqdTermSet term_set, std::uint64_t seed);

// Dispatch: GQD always direct; otherwise purity >= 1 - 1e-9 takes the pure
// path, rank <= 2 the monogamy path, anything else is a RankError.
MmqcReport compute_mmqc(const DensityMatrix& rho, MeasureKind kind, std::uint64_t seed,
                        GqdTermSet term_set = GqdTermSet::Full);

std::string measure_kind_name(MeasureKind kind);
std::string mmqc_method_name(MmqcMethod method);

nlohmann::json report_json(const MmqcReport& report);

}  // namespace qcorr
