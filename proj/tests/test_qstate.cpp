#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "qcorr/qstate.hpp"
#include "qcorr/statefile.hpp"
#include "test_support.hpp"

using namespace qcorr;
using testsup::bell_phi_plus;
using testsup::haar_pure;
using testsup::random_density;

namespace {

DensityMatrix qubit_diag(double a, const std::string& label = "A") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = 1.0 - a;
  return DensityMatrix(std::move(m), {2}, {label});
}

DensityMatrix dephased_ghz(double p) {
  const double c = 0.5 * std::pow(1.0 - p, 1.5);
  Matrix m = Matrix::Zero(8, 8);
  m(0, 0) = m(7, 7) = 0.5;
  m(0, 7) = m(7, 0) = c;
  return DensityMatrix(std::move(m), {2, 2, 2}, {"A", "B", "C"});
}

}  // namespace

TEST_CASE("density matrix construction validates invariants") {
  Matrix ok = Matrix::Zero(2, 2);
  ok(0, 0) = 1.0;
  CHECK_NOTHROW(DensityMatrix(ok, {2}, {"A"}));

  Matrix skew = ok;
  skew(0, 1) = Complex(0.0, 1e-3);
  CHECK_THROWS_AS(DensityMatrix(skew, {2}, {"A"}), ValidationError);

  Matrix off_trace = ok * 1.01;
  CHECK_THROWS_AS(DensityMatrix(off_trace, {2}, {"A"}), ValidationError);

  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.001;
  neg(1, 1) = -0.001;
  CHECK_THROWS_AS(DensityMatrix(neg, {2}, {"A"}), ValidationError);

  CHECK_THROWS_AS(DensityMatrix(ok, {2}, {""}), ValidationError);
  CHECK_THROWS_AS(DensityMatrix(Matrix::Identity(4, 4) * 0.25, {2, 2}, {"A", "A"}),
                  ValidationError);
  CHECK_THROWS_AS(DensityMatrix(ok, {2, 2}, {"A", "B"}), ValidationError);
  CHECK_THROWS_AS(DensityMatrix(Matrix::Identity(1, 1), {1}, {"A"}), ValidationError);
}

TEST_CASE("eigenvalues just below zero are clipped and the state renormalized") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0 + 5e-11;
  m(1, 1) = -5e-11;
  const DensityMatrix rho(m, {2}, {"A"});
  CHECK(std::abs(rho.data()(1, 1)) < 1e-14);
  CHECK(std::abs(rho.data().trace() - Complex(1.0)) < 1e-14);
  CHECK(hermitian_eigenvalues(rho.data()).back() >= 0.0);
}

TEST_CASE("pure state construction validates norm and dims") {
  CVector v(2);
  v << 1.0, 0.0;
  CHECK_NOTHROW(PureState(v, {2}, {"A"}));
  CHECK_NOTHROW(PureState(v, {2, 1}, {"A", "E"}));  // trivial factor allowed
  CVector bad = v * 1.01;
  CHECK_THROWS_AS(PureState(bad, {2}, {"A"}), ValidationError);
  CHECK_THROWS_AS(PureState(v, {2}, {"A", "B"}), ValidationError);
}

TEST_CASE("tensor products") {
  const DensityMatrix zero = qubit_diag(1.0, "A");
  const DensityMatrix prod = tensor(zero, qubit_diag(1.0, "B"));
  CHECK(prod.dim() == 4);
  CHECK(prod.data()(0, 0).real() == doctest::Approx(1.0));
  CHECK(prod.data().cwiseAbs().sum() == doctest::Approx(1.0));
  CHECK(prod.labels() == std::vector<std::string>{"A", "B"});

  const DensityMatrix mm = tensor(qubit_diag(0.5, "A"), qubit_diag(0.5, "B"));
  CHECK((mm.data() - Matrix::Identity(4, 4) * 0.25).cwiseAbs().maxCoeff() < 1e-15);

  CVector one(2), plus(2);
  one << 0.0, 1.0;
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const PureState pp = tensor(PureState(one, {2}, {"A"}), PureState(plus, {2}, {"B"}));
  const Matrix r = pp.to_density().data();
  for (int i : {2, 3})
    for (int j : {2, 3}) CHECK(r(i, j).real() == doctest::Approx(0.5));
  CHECK(r.topLeftCorner(2, 4).cwiseAbs().maxCoeff() < 1e-15);

  CHECK_THROWS_AS(tensor(zero, qubit_diag(1.0, "A")), ValidationError);
}

TEST_CASE("partial trace on named parties") {
  const DensityMatrix bell = bell_phi_plus();
  const DensityMatrix ra = partial_trace(bell, {"A"});
  CHECK((ra.data() - Matrix::Identity(2, 2) * 0.5).cwiseAbs().maxCoeff() < 1e-14);

  const DensityMatrix gab = partial_trace(ghz_state(), {"A", "B"});
  Matrix want = Matrix::Zero(4, 4);
  want(0, 0) = want(3, 3) = 0.5;
  CHECK((gab.data() - want).cwiseAbs().maxCoeff() < 1e-14);

  const DensityMatrix wa = partial_trace(w_state(), {"A"});
  CHECK(wa.data()(0, 0).real() == doctest::Approx(2.0 / 3.0));
  CHECK(wa.data()(1, 1).real() == doctest::Approx(1.0 / 3.0));
  CHECK(std::abs(wa.data()(0, 1)) < 1e-14);

  // kept parties stay in canonical order no matter how the keep-set is given
  std::mt19937_64 g(11);
  const PureState psi = haar_pure({2, 2, 2}, {"A", "B", "C"}, g);
  const DensityMatrix k1 = partial_trace(psi, {"A", "C"});
  const DensityMatrix k2 = partial_trace(psi, {"C", "A"});
  CHECK((k1.data() - k2.data()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(k1.labels() == std::vector<std::string>{"A", "C"});

  // agreement between the vector and matrix routes
  const DensityMatrix viaDm = partial_trace(psi.to_density(), {"A", "C"});
  CHECK((k1.data() - viaDm.data()).cwiseAbs().maxCoeff() < 1e-14);

  CHECK_THROWS_AS(partial_trace(bell, {"A", "B"}), ValidationError);
  CHECK_THROWS_AS(partial_trace(bell, std::vector<std::string>{}), ValidationError);
  CHECK_THROWS_AS(partial_trace(bell, {"X"}), ValidationError);
}

TEST_CASE("spectral decomposition") {
  const SpectralDecomposition sd = eig_hermitian(qubit_diag(2.0 / 3.0).data());
  CHECK(sd.eigenvalues(0) == doctest::Approx(2.0 / 3.0));
  CHECK(sd.eigenvalues(1) == doctest::Approx(1.0 / 3.0));
  CHECK(sd.rank == 2);

  CHECK(eig_hermitian(bell_phi_plus().data()).rank == 1);

  std::mt19937_64 g(5);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho = random_density({2, 2}, {"A", "B"}, 3, g);
    const SpectralDecomposition d = eig_hermitian(rho.data());
    CHECK(d.eigenvalues.sum() == doctest::Approx(1.0).epsilon(1e-9));
    for (int i = 1; i < d.eigenvalues.size(); ++i) CHECK(d.eigenvalues(i - 1) >= d.eigenvalues(i));
    Matrix rebuilt = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i)
      rebuilt += d.eigenvalues(i) * d.eigenvectors.col(i) * d.eigenvectors.col(i).adjoint();
    CHECK((rebuilt - rho.data()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(d.rank == 3);
  }

  Matrix nh = Matrix::Zero(2, 2);
  nh(0, 1) = 1.0;
  CHECK_THROWS_AS(eig_hermitian(nh), ValidationError);
}

TEST_CASE("entropies") {
  CHECK(von_neumann_entropy(bell_phi_plus()) < 1e-12);
  CHECK(von_neumann_entropy(qubit_diag(0.5)) == doctest::Approx(1.0));
  CHECK(von_neumann_entropy(qubit_diag(2.0 / 3.0)) ==
        doctest::Approx(0.9182958340544894).epsilon(1e-12));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0));

  std::mt19937_64 g(7);
  for (int trial = 0; trial < 30; ++trial) {
    const DensityMatrix rho = random_density({2, 2}, {"A", "B"}, 4, g);
    const double s = von_neumann_entropy(rho);
    CHECK(s >= -1e-12);
    CHECK(s <= 2.0 + 1e-12);
    // subadditivity
    const double sa = von_neumann_entropy(partial_trace(rho, {"A"}));
    const double sb = von_neumann_entropy(partial_trace(rho, {"B"}));
    CHECK(s <= sa + sb + 1e-9);
  }
}

TEST_CASE("conditional entropy") {
  CHECK(conditional_entropy(bell_phi_plus(), "A", "B") == doctest::Approx(-1.0));
  CHECK(conditional_entropy(tensor(qubit_diag(0.5, "A"), qubit_diag(0.5, "B")), "A", "B") ==
        doctest::Approx(1.0));
  // GHZ reduced over C is classically correlated: knowing B fixes A
  CHECK(std::abs(conditional_entropy(ghz_state().to_density(), "A", "B")) < 1e-12);
  CHECK_THROWS_AS(conditional_entropy(bell_phi_plus(), "A", "A"), ValidationError);
  CHECK_THROWS_AS(conditional_entropy(bell_phi_plus(), "A", "X"), ValidationError);
}

TEST_CASE("purification round trips") {
  std::mt19937_64 g(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int rank = 1 + (trial % 2);
    const DensityMatrix rho = random_density({2, 2, 2}, {"A", "B", "C"}, rank, g);
    const PureState psi = purify(rho, 2);
    CHECK(psi.labels().back() == "E");
    CHECK(psi.dims().back() == 2);
    const DensityMatrix back = partial_trace(psi, {"A", "B", "C"});
    CHECK((back.data() - rho.data()).cwiseAbs().maxCoeff() < 1e-9);
  }

  // rank-1 states admit a trivial environment
  const PureState triv = purify(bell_phi_plus());
  CHECK(triv.dims().back() == 1);
  CHECK((partial_trace(triv, {"A", "B"}).data() - bell_phi_plus().data()).cwiseAbs().maxCoeff() <
        1e-12);

  const DensityMatrix deph = dephased_ghz(0.5);
  const PureState psi = purify(deph, 2);
  const DensityMatrix env = partial_trace(psi, {"E"});
  const SpectralDecomposition sd = eig_hermitian(env.data());
  CHECK(sd.eigenvalues(0) == doctest::Approx(0.676776695296637).epsilon(1e-10));
  CHECK(sd.eigenvalues(1) == doctest::Approx(0.323223304703363).epsilon(1e-10));

  CHECK_THROWS_AS(purify(DensityMatrix(Matrix::Identity(2, 2) * 0.5, {2}, {"E"})),
                  ValidationError);
  CHECK_THROWS_AS(purify(bell_phi_plus(), 0), ValidationError);
}

TEST_CASE("bloch form") {
  const BlochForm bell = bloch_decompose(bell_phi_plus());
  CHECK(bell.x.norm() < 1e-12);
  CHECK(bell.y.norm() < 1e-12);
  CHECK(bell.t(0, 0) == doctest::Approx(1.0));
  CHECK(bell.t(1, 1) == doctest::Approx(-1.0));
  CHECK(bell.t(2, 2) == doctest::Approx(1.0));
  CHECK(std::abs(bell.t(0, 1)) + std::abs(bell.t(1, 2)) + std::abs(bell.t(0, 2)) < 1e-12);

  Matrix cc = Matrix::Zero(4, 4);
  cc(0, 0) = cc(3, 3) = 0.5;
  const BlochForm classical = bloch_decompose(DensityMatrix(cc, {2, 2}, {"A", "B"}));
  CHECK(classical.t(2, 2) == doctest::Approx(1.0));
  CHECK(std::abs(classical.t(0, 0)) < 1e-12);

  std::mt19937_64 g(17);
  for (int trial = 0; trial < 100; ++trial) {
    const DensityMatrix rho = random_density({2, 2}, {"A", "B"}, 1 + trial % 4, g);
    const DensityMatrix back = bloch_reconstruct(bloch_decompose(rho), rho.labels());
    CHECK((back.data() - rho.data()).cwiseAbs().maxCoeff() < 1e-10);
  }

  CHECK_THROWS_AS(bloch_decompose(ghz_state().to_density()), ValidationError);
}

TEST_CASE("party permutations") {
  std::mt19937_64 g(19);
  const PureState psi = haar_pure({2, 2, 2}, {"A", "B", "C"}, g);
  const DensityMatrix rho = psi.to_density();
  const DensityMatrix perm = permute_parties(rho, {"C", "A", "B"});
  CHECK(perm.labels() == std::vector<std::string>{"C", "A", "B"});
  for (const std::string& x : {"A", "B", "C"}) {
    const Matrix d = partial_trace(perm, {x}).data() - partial_trace(rho, {x}).data();
    CHECK(d.cwiseAbs().maxCoeff() < 1e-13);
  }
  const DensityMatrix round = permute_parties(perm, {"A", "B", "C"});
  CHECK((round.data() - rho.data()).cwiseAbs().maxCoeff() < 1e-13);

  const PureState pperm = permute_parties(psi, {"B", "C", "A"});
  CHECK((pperm.to_density().data() - permute_parties(rho, {"B", "C", "A"}).data())
            .cwiseAbs()
            .maxCoeff() < 1e-13);

  // symmetric states are permutation invariant
  const Matrix gd = permute_parties(ghz_state(), {"B", "C", "A"}).amplitudes() -
                    ghz_state().amplitudes();
  CHECK(gd.cwiseAbs().maxCoeff() < 1e-15);
  const Matrix wd =
      permute_parties(w_state(), {"C", "B", "A"}).amplitudes() - w_state().amplitudes();
  CHECK(wd.cwiseAbs().maxCoeff() < 1e-15);

  CHECK_THROWS_AS(permute_parties(rho, {"A", "B"}), ValidationError);
  CHECK_THROWS_AS(permute_parties(rho, {"A", "B", "B"}), ValidationError);
}

TEST_CASE("named preparation states") {
  const CVector g = ghz_state().amplitudes();
  CHECK(g(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(g(7).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(g.cwiseAbs().sum() == doctest::Approx(std::sqrt(2.0)));

  const CVector w = w_state().amplitudes();
  for (int i : {1, 2, 4}) CHECK(w(i).real() == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(w.cwiseAbs().sum() == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("state files round trip") {
  std::mt19937_64 g(23);
  const DensityMatrix rho = random_density({2, 2}, {"A", "B"}, 3, g);
  std::stringstream buf;
  write_state(buf, rho);
  const DensityMatrix back = read_state(buf);
  CHECK(back.dims() == rho.dims());
  CHECK(back.labels() == rho.labels());
  CHECK((back.data() - rho.data()).cwiseAbs().maxCoeff() < 1e-14);

  std::stringstream commented;
  commented << "# comment\n\ndims: 2\n# rows\n1 0\n0 0\n";
  const DensityMatrix ground = read_state(commented);
  CHECK(ground.data()(0, 0).real() == doctest::Approx(1.0));

  std::stringstream no_dims("1 0\n0 0\n");
  CHECK_THROWS_AS(read_state(no_dims), ValidationError);
  std::stringstream bad_token("dims: 2\n1 q\n0 0\n");
  CHECK_THROWS_AS(read_state(bad_token), ValidationError);
  std::stringstream short_row("dims: 2\n1\n0 0\n");
  CHECK_THROWS_AS(read_state(short_row), ValidationError);
  std::stringstream not_state("dims: 2\n1 0\n0 1\n");
  CHECK_THROWS_AS(read_state(not_state), ValidationError);

  CHECK_THROWS_AS(read_state_file("/nonexistent/state.txt"), IoError);
}
