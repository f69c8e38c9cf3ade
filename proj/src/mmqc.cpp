#include "qcorr/mmqc.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace qcorr {

namespace {

std::vector<std::string> sorted_labels(const std::vector<std::string>& labels) {
  std::vector<std::string> out = labels;
  std::sort(out.begin(), out.end());
  return out;
}

void require_three_qubits(const std::vector<int>& dims) {
  if (dims != std::vector<int>{2, 2, 2})
    throw ValidationError("this measure is defined for three qubits");
}

CorrelationValue plain_term(MeasureKind kind, std::vector<std::string> unmeasured,
                            std::vector<std::string> measured, double value) {
  CorrelationValue v;
  v.kind = kind;
  v.unmeasured = std::move(unmeasured);
  v.measured = std::move(measured);
  v.value = (value < 0.0 && value >= -kValueClipTol) ? 0.0 : value;
  v.raw = value;
  return v;
}

MmqcReport assemble(MeasureKind kind, MmqcMethod method, std::vector<CorrelationValue> terms) {
  MmqcReport r;
  r.kind = kind;
  r.method = method;
  r.terms = std::move(terms);
  r.total = 0.0;
  for (const auto& t : r.terms) r.total += t.value;
  return r;
}

}  // namespace

std::vector<BipartitionTerm> enumerate_terms(const std::vector<std::string>& parties) {
  const int n = static_cast<int>(parties.size());
  if (n < 2) throw ValidationError("need at least two parties");
  if (std::set<std::string>(parties.begin(), parties.end()).size() != parties.size())
    throw ValidationError("party labels must be unique");

  auto members = [&](unsigned mask) {
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) out.push_back(i);
    return out;
  };
  struct Pair {
    std::vector<int> rep, other;
  };
  std::vector<Pair> pairs;
  for (unsigned s = 1; s < (1u << n); ++s)
    for (unsigned t = s + 1; t < (1u << n); ++t) {
      if (s & t) continue;
      std::vector<int> a = members(s), b = members(t);
      if (b.size() < a.size() || (b.size() == a.size() && b < a)) std::swap(a, b);
      pairs.push_back({std::move(a), std::move(b)});
    }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& l, const Pair& r) {
    const std::size_t ls = l.rep.size() + l.other.size();
    const std::size_t rs = r.rep.size() + r.other.size();
    if (ls != rs) return ls < rs;
    if (l.rep != r.rep) return l.rep < r.rep;
    return l.other < r.other;
  });

  auto names = [&](const std::vector<int>& idx) {
    std::vector<std::string> out;
    for (int i : idx) out.push_back(parties[i]);
    return out;
  };
  std::vector<BipartitionTerm> terms;
  for (const auto& p : pairs) {
    terms.push_back({names(p.rep), names(p.other)});
    terms.push_back({names(p.other), names(p.rep)});
  }
  return terms;
}

bool MmqcReport::all_converged() const {
  for (const auto& t : terms)
    if (!t.opt.converged) return false;
  return true;
}

MmqcReport mmqc_pure(const PureState& psi, MeasureKind kind, std::uint64_t seed) {
  require_three_qubits(psi.dims());
  if (kind == MeasureKind::Gqd)
    throw ValidationError("use the geometric path for the geometric measure");
  const std::vector<std::string> order = sorted_labels(psi.labels());
  const PureState ps = permute_parties(psi, order);

  std::map<std::string, double> cut_entropy;
  for (const auto& l : order)
    cut_entropy[l] = von_neumann_entropy(partial_trace(ps, {l}));

  std::vector<CorrelationValue> terms;
  for (const auto& term : enumerate_terms(order)) {
    if (term.unmeasured.size() == 1 && term.measured.size() == 1) {
      const DensityMatrix pair =
          partial_trace(ps, {std::min(term.unmeasured[0], term.measured[0]),
                             std::max(term.unmeasured[0], term.measured[0])});
      if (kind == MeasureKind::Eof) {
        terms.push_back(
            plain_term(kind, term.unmeasured, term.measured, eof_two_qubit(pair)));
      } else {
        CorrelationValue v = quantum_discord(pair, term.measured[0], seed);
        v.unmeasured = term.unmeasured;
        terms.push_back(std::move(v));
      }
    } else {
      const std::string& single =
          term.unmeasured.size() == 1 ? term.unmeasured[0] : term.measured[0];
      terms.push_back(plain_term(kind, term.unmeasured, term.measured, cut_entropy[single]));
    }
  }
  return assemble(kind, MmqcMethod::PureAnalytic, std::move(terms));
}

std::pair<double, double> pairwise_sum_identity_check(const PureState& psi, std::uint64_t seed) {
  if (psi.party_count() != 3) throw ValidationError("needs a three-party pure state");
  const std::vector<std::string> order = sorted_labels(psi.labels());
  const PureState ps = permute_parties(psi, order);
  double eof_sum = 0.0, qd_sum = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      const DensityMatrix pair =
          partial_trace(ps, {order[std::min(i, j)], order[std::max(i, j)]});
      eof_sum += eof_two_qubit(pair);
      qd_sum += quantum_discord(pair, order[j], seed).value;
    }
  return {eof_sum, qd_sum};
}

MmqcReport mmqc_rank2(const DensityMatrix& rho, MeasureKind kind, std::uint64_t seed) {
  require_three_qubits(rho.dims());
  if (kind == MeasureKind::Gqd)
    throw ValidationError("use the geometric path for the geometric measure");
  const SpectralDecomposition sd = eig_hermitian(rho.data());
  if (sd.rank > 2)
    throw RankError("state rank " + std::to_string(sd.rank) +
                    " exceeds 2; the purification ancilla would not be a qubit");
  const std::vector<std::string> order = sorted_labels(rho.labels());
  const DensityMatrix rc = permute_parties(rho, order);
  const PureState purified = purify(rc, 2);

  struct CutData {
    DensityMatrix xe;
    double cond_entropy;  // S_{X|E}
  };
  std::map<std::string, CutData> cut;
  for (const auto& l : order) {
    DensityMatrix xe = partial_trace(purified, {l, "E"});
    const double s_xe = von_neumann_entropy(xe);
    const double s_e = von_neumann_entropy(partial_trace(xe, {"E"}));
    cut.emplace(l, CutData{std::move(xe), s_xe - s_e});
  }

  std::vector<CorrelationValue> terms;
  for (const auto& term : enumerate_terms(order)) {
    if (term.unmeasured.size() == 1 && term.measured.size() == 1) {
      const DensityMatrix pair =
          partial_trace(rc, {std::min(term.unmeasured[0], term.measured[0]),
                             std::max(term.unmeasured[0], term.measured[0])});
      if (kind == MeasureKind::Eof) {
        terms.push_back(
            plain_term(kind, term.unmeasured, term.measured, eof_two_qubit(pair)));
      } else {
        CorrelationValue v = quantum_discord(pair, term.measured[0], seed);
        v.unmeasured = term.unmeasured;
        terms.push_back(std::move(v));
      }
      continue;
    }
    const bool single_unmeasured = term.unmeasured.size() == 1;
    const std::string& single = single_unmeasured ? term.unmeasured[0] : term.measured[0];
    const CutData& cd = cut.at(single);
    if (kind == MeasureKind::Eof) {
      // entanglement across the cut from discord with the purifying qubit
      CorrelationValue v = quantum_discord(cd.xe, "E", seed);
      v.kind = MeasureKind::Eof;
      v.unmeasured = term.unmeasured;
      v.measured = term.measured;
      v.raw = v.value + cd.cond_entropy;
      v.value = (v.raw < 0.0 && v.raw >= -kValueClipTol) ? 0.0 : v.raw;
      terms.push_back(std::move(v));
    } else if (single_unmeasured) {
      // discord with the pair measured, via concurrence with the ancilla
      CorrelationValue v =
          plain_term(kind, term.unmeasured, term.measured, eof_two_qubit(cd.xe) + cd.cond_entropy);
      terms.push_back(std::move(v));
    } else {
      // qubit measured: optimize directly on the full state
      CorrelationValue v = quantum_discord(rc, single, seed);
      v.unmeasured = term.unmeasured;
      terms.push_back(std::move(v));
    }
  }
  return assemble(kind, MmqcMethod::Rank2Monogamy, std::move(terms));
}

MmqcReport mmqc_gqd(const DensityMatrix& rho, GqdTermSet term_set, std::uint64_t seed) {
  require_three_qubits(rho.dims());
  const std::vector<std::string> order = sorted_labels(rho.labels());
  const DensityMatrix rc = permute_parties(rho, order);

  std::vector<CorrelationValue> terms;
  for (const auto& term : enumerate_terms(order)) {
    if (term.unmeasured.size() == 1 && term.measured.size() == 1) {
      const DensityMatrix pair =
          partial_trace(rc, {std::min(term.unmeasured[0], term.measured[0]),
                             std::max(term.unmeasured[0], term.measured[0])});
      CorrelationValue v = gqd_variational(pair, term.measured, seed);
      v.unmeasured = term.unmeasured;
      terms.push_back(std::move(v));
      continue;
    }
    if (term_set == GqdTermSet::TwoQubitOnly) continue;
    CorrelationValue v = gqd_variational(rc, term.measured, seed);
    v.unmeasured = term.unmeasured;
    terms.push_back(std::move(v));
  }
  return assemble(MeasureKind::Gqd, MmqcMethod::Direct, std::move(terms));
}

MmqcReport compute_mmqc(const DensityMatrix& rho, MeasureKind kind, std::uint64_t seed,
                        GqdTermSet term_set) {
  if (kind == MeasureKind::Gqd) return mmqc_gqd(rho, term_set, seed);
  if (rho.purity() >= 1.0 - 1e-9) {
    const SpectralDecomposition sd = eig_hermitian(rho.data());
    const PureState psi(sd.eigenvectors.col(0), rho.dims(), rho.labels());
    return mmqc_pure(psi, kind, seed);
  }
  return mmqc_rank2(rho, kind, seed);
}

std::string measure_kind_name(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::Eof:
      return "EOF";
    case MeasureKind::Discord:
      return "QD";
    case MeasureKind::Gqd:
      return "GQD";
  }
  return "?";
}

std::string mmqc_method_name(MmqcMethod method) {
  switch (method) {
    case MmqcMethod::PureAnalytic:
      return "pure-analytic";
    case MmqcMethod::Rank2Monogamy:
      return "rank2-monogamy";
    case MmqcMethod::Direct:
      return "direct";
  }
  return "?";
}

nlohmann::json report_json(const MmqcReport& report) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : report.terms) {
    terms.push_back({{"unmeasured", t.unmeasured},
                     {"measured", t.measured},
                     {"value", t.value},
                     {"raw_value", t.raw},
                     {"converged", t.opt.converged},
                     {"normalized", t.normalized}});
  }
  return {{"kind", measure_kind_name(report.kind)},
          {"method", mmqc_method_name(report.method)},
          {"total", report.total},
          {"terms", std::move(terms)}};
}

}  // namespace qcorr
