#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "fuzzy_casimir/errors.hpp"
#include "fuzzy_casimir/fock_engine.hpp"

using namespace fuzzy_casimir;
using namespace fuzzy_casimir::fock;
using std::numbers::pi;

namespace {

// Column of an operator applied to a basis ket.
Eigen::VectorXcd apply_to_ket(const SparseMatrix& op, const FockSpace& s, Occupation ket) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(s.dim());
  v(s.index(ket)) = 1.0;
  return op * v;
}

Eigen::VectorXcd ket(const FockSpace& s, Occupation k, Complex amp = 1.0) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(s.dim());
  v(s.index(k)) = amp;
  return v;
}

}  // namespace

TEST_CASE("build_space dimension and basis order") {
  CHECK(build_space(1).dim() == 3);
  CHECK(build_space(2).dim() == 6);

  // Enumeration oracle for n_max = 10.
  int count = 0;
  for (int n1 = 0; n1 <= 10; ++n1) {
    for (int n2 = 0; n1 + n2 <= 10; ++n2) ++count;
  }
  CHECK(count == 66);
  CHECK(build_space(10).dim() == 66);

  const FockSpace s(1);
  CHECK(s.state(0) == Occupation{0, 0});
  CHECK(s.state(1) == Occupation{0, 1});
  CHECK(s.state(2) == Occupation{1, 0});
}

TEST_CASE("index map is a bijection onto 0..dim-1 in graded lexicographic order") {
  for (int n_max : {0, 1, 3, 12, 30}) {
    const FockSpace s(n_max);
    std::set<Index> seen;
    int prev_total = -1;
    int prev_n1 = -1;
    for (Index i = 0; i < s.dim(); ++i) {
      const auto st = s.state(i);
      CHECK(st.n1 >= 0);
      CHECK(st.n2 >= 0);
      CHECK(st.total() <= n_max);
      CHECK(s.index(st) == i);
      if (st.total() == prev_total) {
        CHECK(st.n1 == prev_n1 + 1);
      } else {
        CHECK(st.total() == prev_total + 1);
        CHECK(st.n1 == 0);
      }
      prev_total = st.total();
      prev_n1 = st.n1;
      seen.insert(i);
    }
    CHECK(static_cast<Index>(seen.size()) == s.dim());
  }
}

TEST_CASE("build_space rejects spaces without the requested interior") {
  CHECK_THROWS_AS(build_space(-1), ConfigError);
  CHECK_NOTHROW(build_space(0));
  CHECK_THROWS_AS(build_space(0, 1), ConfigError);
  CHECK_THROWS_AS(build_space(1, 2), ConfigError);
  CHECK_NOTHROW(build_space(2, 2));
  CHECK_THROWS_AS(FockSpace(3).index({2, 2}), std::out_of_range);
  CHECK(FockSpace(4).interior(1).size() == 10);
  CHECK(FockSpace(4).interior(2).size() == 6);
}

TEST_CASE("ladder operators act as sqrt(n) lowering and raising") {
  const FockSpace s(3);
  const auto ops = ladder_matrices(s);

  CHECK((apply_to_ket(ops.a[0], s, {1, 0}) - ket(s, {0, 0})).norm() == 0.0);
  CHECK(apply_to_ket(ops.a[0], s, {0, 0}).norm() == 0.0);
  CHECK(apply_to_ket(ops.a[1], s, {0, 0}).norm() == 0.0);

  for (Index j = 0; j < s.dim(); ++j) {
    const auto st = s.state(j);
    if (st.n1 > 0) {
      const auto v = apply_to_ket(ops.a[0], s, st);
      CHECK(v(s.index({st.n1 - 1, st.n2})) == Complex(std::sqrt(double(st.n1)), 0.0));
      CHECK(v.norm() == doctest::Approx(std::sqrt(double(st.n1))));
    }
    if (st.n2 > 0) {
      const auto v = apply_to_ket(ops.a[1], s, st);
      CHECK(v(s.index({st.n1, st.n2 - 1})) == Complex(std::sqrt(double(st.n2)), 0.0));
    }
  }
  // a^+ leaving the truncated space is dropped.
  CHECK(apply_to_ket(ops.adag[0], s, {3, 0}).norm() == 0.0);
  CHECK(apply_to_ket(ops.adag[1], s, {1, 2}).norm() == 0.0);

  for (int al = 0; al < 2; ++al) {
    CHECK((DenseMatrix(ops.adag[al]) - DenseMatrix(ops.a[al]).adjoint()).norm() == 0.0);
  }
}

TEST_CASE("canonical commutators hold on the interior block for n_max 2..30") {
  for (int n = 2; n <= 30; ++n) {
    CAPTURE(n);
    CHECK(check_ladder_algebra(FockSpace(n)) <= 1e-14);
  }
  // The top shell is where truncation shows: [a1, a1^+] there is -n_max.
  const FockSpace s(6);
  const auto ops = ladder_matrices(s);
  const DenseMatrix comm = DenseMatrix(ops.a[0] * ops.adag[0]) - DenseMatrix(ops.adag[0] * ops.a[0]);
  CHECK(comm(s.index({6, 0}), s.index({6, 0})).real() == doctest::Approx(-6.0));
}

TEST_CASE("coordinate matrices") {
  const double lam = 0.75;
  const FockSpace s(1);
  const auto c = coordinates(s, lam);

  CHECK((apply_to_ket(c.x[2], s, {1, 0}) - ket(s, {1, 0}, lam)).norm() <= 1e-15);
  CHECK((apply_to_ket(c.x[2], s, {0, 1}) - ket(s, {0, 1}, -lam)).norm() <= 1e-15);

  // x_j = λ σ^j_{αβ} a_α^+ a_β conserves n1 + n2, so the vacuum is annihilated
  // and the one-quantum shell carries λσ^j in the (|1,0>, |0,1>) ordering.
  for (int j = 1; j <= 3; ++j) {
    CHECK(apply_to_ket(c.x[j - 1], s, {0, 0}).norm() == 0.0);
    const auto& sig = pauli(j);
    const auto col10 = apply_to_ket(c.x[j - 1], s, {1, 0});
    const auto col01 = apply_to_ket(c.x[j - 1], s, {0, 1});
    CHECK(std::abs(col10(s.index({1, 0})) - lam * sig(0, 0)) <= 1e-15);
    CHECK(std::abs(col10(s.index({0, 1})) - lam * sig(1, 0)) <= 1e-15);
    CHECK(std::abs(col01(s.index({1, 0})) - lam * sig(0, 1)) <= 1e-15);
    CHECK(std::abs(col01(s.index({0, 1})) - lam * sig(1, 1)) <= 1e-15);
  }

  const FockSpace big(7);
  const auto cb = coordinates(big, 1.3);
  for (Index i = 0; i < big.dim(); ++i) {
    const auto st = big.state(i);
    CHECK(cb.x[2].coeff(i, i).real() == doctest::Approx(1.3 * (st.n1 - st.n2)));
  }
  const auto block = big.interior(1);
  for (int j = 0; j < 3; ++j) {
    const DenseMatrix x(cb.x[j]);
    CHECK(max_abs_on_block(x - x.adjoint(), block) == 0.0);
  }
  CHECK_THROWS_AS(coordinates(big, 0.0), ConfigError);
}

TEST_CASE("coordinate algebra [x_i, x_j] = 2i lambda eps_ijk x_k") {
  CHECK(check_commutators(FockSpace(2), 1.0) <= 1e-14);
  CHECK(check_commutators(FockSpace(2), 0.5) <= 1e-14);
  for (double lam : {0.1, 0.5, 1.0, 2.0}) {
    for (int n : {2, 5, 10, 20}) {
      CAPTURE(lam);
      CAPTURE(n);
      CHECK(check_commutators(FockSpace(n), lam) <= 1e-12);
    }
  }
  const auto c = coordinates(FockSpace(5), 1.0);
  for (int i = 0; i < 3; ++i) {
    const DenseMatrix x(c.x[i]);
    CHECK((x * x - x * x).norm() == 0.0);
  }
}

TEST_CASE("superoperators on the identity state") {
  const double lam = 0.8;
  const FockSpace s(12);
  const NcModel m(s, lam);
  const auto id = WaveOp::identity(s, lam);
  const auto block = s.interior(1);

  const DenseMatrix v4 = m.apply_V4(id).matrix();
  CHECK(max_abs_on_block(v4 - DenseMatrix::Identity(s.dim(), s.dim()) / lam, block) <= 1e-14);
  CHECK(max_abs_on_block(m.apply_H0(id).matrix(), block) <= 1e-14);
  CHECK(max_abs_on_block(m.apply_V(3, id).matrix(), block) <= 1e-15);
  CHECK(max_abs_on_block(m.apply_X(3, id).matrix() - DenseMatrix(m.coords().x[2]), block) == 0.0);

  CHECK_THROWS_AS(m.V(5), ConfigError);
  CHECK_THROWS_AS(m.X(0), ConfigError);
  const auto other = WaveOp::identity(FockSpace(5), lam);
  CHECK_THROWS_AS(m.apply_V4(other), DimensionError);
}

TEST_CASE("plane_wave entries") {
  const FockSpace s(6);
  const auto p0 = plane_wave(s, 0.0, 1.0);
  CHECK((p0.matrix() - DenseMatrix::Identity(s.dim(), s.dim())).norm() == 0.0);

  const auto p = plane_wave(s, pi, 1.0);
  const auto i10 = s.index({1, 0});
  CHECK(std::abs(p.matrix()(i10, i10) - Complex(-1.0, 0.0)) <= 1e-15);

  const auto pq = plane_wave(s, 2.7, 0.4);
  for (Index i = 0; i < s.dim(); ++i) {
    CHECK(std::abs(pq.matrix()(i, i)) == doctest::Approx(1.0).epsilon(1e-15));
    const auto st = s.state(i);
    CHECK(std::arg(pq.matrix()(i, i)) ==
          doctest::Approx(std::remainder(0.4 * 2.7 * (st.n1 - st.n2), 2.0 * pi)).epsilon(1e-12));
  }
}

TEST_CASE("plane waves are eigenstates of V3 and V4") {
  {
    const FockSpace s(10);
    const NcModel m(s, 1.0);
    const auto psi = plane_wave(s, pi / 2.0, 1.0);
    CHECK(std::sin(pi / 2.0) == 1.0);
    CHECK(eigen_residual(m.V(3), psi, 1.0) <= 1e-13);
    CHECK(eigen_residual(m.V(3), plane_wave(s, 0.0, 1.0), 0.0) <= 1e-15);
  }
  {
    const FockSpace s(10);
    const NcModel m(s, 0.1);
    const double nu = std::cos(0.1) / 0.1;
    CHECK(nu == doctest::Approx(9.95004165278).epsilon(1e-11));
    CHECK(eigen_residual(m.V4(), plane_wave(s, 1.0, 0.1), nu) <= 1e-12);
    // A wrong eigenvalue is detected.
    CHECK(eigen_residual(m.V4(), plane_wave(s, 1.0, 0.1), 1.0 / 0.1) > 1e-3);
  }
  for (double lam : {0.1, 1.0, 2.0}) {
    const FockSpace s(8);
    const NcModel m(s, lam);
    for (int k = 1; k <= 50; ++k) {
      const double q = k * pi / (51.0 * lam);
      const auto psi = plane_wave(s, q, lam);
      CAPTURE(lam);
      CAPTURE(q);
      CHECK(eigen_residual(m.V(3), psi, std::sin(lam * q) / lam) <= 1e-12);
      CHECK(eigen_residual(m.V4(), psi, std::cos(lam * q) / lam) <= 1e-12);
      CHECK(eigen_residual(m.V(1), psi, 0.0) <= 1e-12);
      CHECK(eigen_residual(m.V(2), psi, 0.0) <= 1e-12);
    }
  }
}

TEST_CASE("truncation only enters outside the interior block") {
  const FockSpace s(6);
  const NcModel m(s, 1.0);
  const auto psi = plane_wave(s, 0.9, 1.0);
  const DenseMatrix r = m.apply_V(3, psi).matrix() - (std::sin(0.9) * psi.matrix());
  std::vector<Index> all(static_cast<std::size_t>(s.dim()));
  for (Index i = 0; i < s.dim(); ++i) all[static_cast<std::size_t>(i)] = i;
  CHECK(max_abs_on_block(r, all) > 0.1);
  CHECK(max_abs_on_block(r, s.interior(1)) <= 1e-14);
}

TEST_CASE("interior-block residuals stay at round-off as n_max grows") {
  const double lam = 0.7;
  const double q = 1.9;
  double prev = -1.0;
  for (int n : {4, 8, 16}) {
    const FockSpace s(n);
    const NcModel m(s, lam);
    const auto psi = plane_wave(s, q, lam);
    const double r = std::max(eigen_residual(m.V(3), psi, std::sin(lam * q) / lam),
                              check_cutoff_identity(m, psi));
    CAPTURE(n);
    CHECK(r <= 1e-12);
    if (prev >= 0.0) CHECK(r <= prev + 64.0 * 2.2e-16 / (lam * lam));
    prev = r;
  }
}

TEST_CASE("cut-off identity V^2 + V4^2 = 1/lambda^2") {
  for (double lam : {0.3, 1.0}) {
    const FockSpace s(8);
    const NcModel m(s, lam);
    CHECK(check_cutoff_identity(m, WaveOp::identity(s, lam)) <= 1e-12);
    for (double q : {0.2, 1.0, 2.5}) CHECK(check_cutoff_identity(m, plane_wave(s, q / lam, lam)) <= 1e-12);
  }
  const FockSpace s(8);
  const NcModel m(s, 1.0);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto psi = random_wave_op(s, 1.0, seed);
    CHECK((psi.matrix() - psi.matrix().adjoint()).norm() == 0.0);
    CHECK(check_cutoff_identity(m, psi) <= 1e-11);
  }
  // Outside the sector commuting with N the identity does not hold, whatever
  // the ordering of r.
  CHECK(check_cutoff_identity(m, random_dense_wave_op(s, 1.0, 3)) > 1e-2);
}

TEST_CASE("velocity and V4 relations to H0 on the physical sector") {
  for (double lam : {0.5, 1.0, 2.0}) {
    const FockSpace s(7);
    const NcModel m(s, lam);
    for (std::uint64_t seed = 11; seed <= 13; ++seed) {
      const auto psi = random_wave_op(s, lam, seed);
      CHECK(check_velocity_commutator(m, psi) <= 1e-11);
      CHECK(check_v4_hamiltonian(m, psi) <= 1e-11);
    }
  }
}

TEST_CASE("superoperators are linear") {
  const double lam = 1.0;
  const FockSpace s(6);
  const NcModel m(s, lam);
  const Complex alpha{0.3, 1.1};
  const Complex beta{-2.0, 0.5};
  for (std::uint64_t seed = 100; seed < 104; ++seed) {
    const auto p1 = random_dense_wave_op(s, lam, seed);
    const auto p2 = random_dense_wave_op(s, lam, seed + 50);
    std::vector<const SuperOp*> ops = {&m.X(1), &m.X(2), &m.X(3), &m.H0(), &m.V(1), &m.V(2), &m.V(3), &m.V4()};
    for (const auto* op : ops) {
      const DenseMatrix d = (*op)(alpha * p1 + beta * p2).matrix() - alpha * (*op)(p1).matrix() -
                            beta * (*op)(p2).matrix();
      CHECK(d.cwiseAbs().maxCoeff() <= 1e-13);
    }
  }
}

TEST_CASE("SuperOp algebra: sums, scalars and composition") {
  const FockSpace s(5);
  const NcModel m(s, 1.0);
  const auto psi = random_wave_op(s, 1.0, 7);

  const SuperOp v3sq = compose(m.V(3), m.V(3));
  CHECK(v3sq.depth() == 2);
  CHECK((v3sq(psi).matrix() - m.V(3)(m.V(3)(psi)).matrix()).cwiseAbs().maxCoeff() <= 1e-14);

  const SuperOp sum = m.V(1) + m.V(2) * Complex{2.0, 0.0};
  CHECK(sum.depth() == 1);
  CHECK((sum(psi).matrix() - m.V(1)(psi).matrix() - 2.0 * m.V(2)(psi).matrix()).cwiseAbs().maxCoeff() <=
        1e-14);
  CHECK((SuperOp::identity(s)(psi).matrix() - psi.matrix()).norm() == 0.0);
  CHECK(((m.V4() - m.V4())(psi).matrix()).cwiseAbs().maxCoeff() <= 1e-15);

  const auto x3 = m.coords().x[2];
  CHECK((SuperOp::left_multiply(x3)(psi).matrix() - DenseMatrix(x3) * psi.matrix()).norm() <= 1e-14);
  CHECK((SuperOp::right_multiply(x3)(psi).matrix() - psi.matrix() * DenseMatrix(x3)).norm() <= 1e-14);

  const NcModel other(FockSpace(4), 1.0);
  CHECK_THROWS_AS(m.V(1) + other.V(1), DimensionError);
  CHECK_THROWS_AS(compose(m.V(1), other.V(1)), DimensionError);
  CHECK_THROWS_AS(WaveOp(s, 1.0, DenseMatrix::Zero(3, 3)), DimensionError);
}

TEST_CASE("trace norm") {
  const FockSpace s(4);
  CHECK(trace_norm(WaveOp::zero(s, 1.0)) == 0.0);

  DenseMatrix e00 = DenseMatrix::Zero(s.dim(), s.dim());
  e00(0, 0) = 1.0;
  CHECK(trace_norm(WaveOp(s, 1.0, e00)) == doctest::Approx(4.0 * pi).epsilon(1e-15));

  // Weight (n+1) on the row index: E_{(1,0),(0,0)} gives 4πλ³·2.
  DenseMatrix e10 = DenseMatrix::Zero(s.dim(), s.dim());
  e10(s.index({1, 0}), 0) = 1.0;
  CHECK(trace_norm(WaveOp(s, 0.5, e10)) == doctest::Approx(4.0 * pi * 0.125 * 2.0).epsilon(1e-15));

  const auto psi = random_dense_wave_op(s, 0.7, 9);
  const Complex alpha{1.5, -0.5};
  CHECK(trace_norm(alpha * psi) == doctest::Approx(std::norm(alpha) * trace_norm(psi)).epsilon(1e-14));
  CHECK(trace_norm(psi) > 0.0);
}

TEST_CASE("NC dispersion approaches the commutative one as lambda -> 0") {
  for (double q : {0.5, 1.0, 3.0}) {
    for (double lam : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const double omega = std::sin(lam * q) / lam;
      CHECK(std::abs(omega - q) <= q * q * q * lam * lam / 6.0 + 1e-14);
    }
  }
}

TEST_CASE("operator matrices dump as JSON triplets") {
  const FockSpace s(1);
  const auto ops = ladder_matrices(s);
  // a1 |1,0> = |0,0>: row 0, column index(1,0) = 2.
  CHECK(dump_triplets_json(ops.a[0]) == "[[0,2,1.0,0.0]]");
  CHECK(dump_triplets_json(ops.a[1]) == "[[0,1,1.0,0.0]]");
}
