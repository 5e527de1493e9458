#include "fuzzy_casimir/fock_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include <json.hpp>

#include "fuzzy_casimir/errors.hpp"

namespace fuzzy_casimir::fock {

namespace {

using Triplet = Eigen::Triplet<Complex>;

constexpr Complex kI{0.0, 1.0};

SparseMatrix sparse_identity(Index dim) {
  SparseMatrix id(dim, dim);
  id.setIdentity();
  return id;
}

SparseMatrix diagonal(const FockSpace& space, auto&& entry) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(space.dim()));
  for (Index i = 0; i < space.dim(); ++i) t.emplace_back(i, i, entry(space.state(i)));
  SparseMatrix m(space.dim(), space.dim());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("lambda must be positive and finite, got " + std::to_string(lambda));
  }
}

void require_axis(int i, int hi) {
  if (i < 1 || i > hi) throw ConfigError("axis index out of range: " + std::to_string(i));
}

// Levi-Civita symbol on 0-based indices.
int levi_civita(int i, int j, int k) {
  return (i - j) * (j - k) * (k - i) / 2;
}

}  // namespace

// ---------------------------------------------------------------------------
// FockSpace

FockSpace::FockSpace(int n_max)
    : n_max_(n_max), dim_(static_cast<Index>(n_max + 1) * (n_max + 2) / 2) {
  if (n_max < 0) throw ConfigError("n_max must be non-negative");
}

Index FockSpace::index(Occupation s) const {
  if (!contains(s)) {
    throw std::out_of_range("state (" + std::to_string(s.n1) + "," + std::to_string(s.n2) +
                            ") outside truncated space");
  }
  const Index t = s.total();
  return t * (t + 1) / 2 + s.n1;
}

Occupation FockSpace::state(Index i) const {
  if (i < 0 || i >= dim_) throw std::out_of_range("basis index out of range");
  // Largest t with t(t+1)/2 <= i; the float guess is corrected exactly.
  auto t = static_cast<Index>((std::sqrt(8.0 * static_cast<double>(i) + 1.0) - 1.0) / 2.0);
  while (t * (t + 1) / 2 > i) --t;
  while ((t + 1) * (t + 2) / 2 <= i) ++t;
  const auto n1 = static_cast<int>(i - t * (t + 1) / 2);
  return {n1, static_cast<int>(t) - n1};
}

std::vector<Index> FockSpace::interior(int depth) const {
  if (depth < 0 || depth > n_max_) {
    throw ConfigError("interior block of depth " + std::to_string(depth) +
                      " is empty for n_max = " + std::to_string(n_max_));
  }
  const int top = n_max_ - depth;
  const auto count = static_cast<Index>(top + 1) * (top + 2) / 2;
  std::vector<Index> idx(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) idx[static_cast<std::size_t>(i)] = i;
  return idx;
}

FockSpace build_space(int n_max, int interior_depth) {
  if (n_max < 0) throw ConfigError("n_max must be non-negative");
  if (interior_depth > 0 && n_max < std::max(1, interior_depth)) {
    throw ConfigError("n_max = " + std::to_string(n_max) + " has no interior block of depth " +
                      std::to_string(interior_depth));
  }
  return FockSpace(n_max);
}

// ---------------------------------------------------------------------------
// Ladder and coordinate matrices

LadderOps ladder_matrices(const FockSpace& space) {
  LadderOps ops;
  for (int alpha = 0; alpha < 2; ++alpha) {
    std::vector<Triplet> t;
    for (Index j = 0; j < space.dim(); ++j) {
      Occupation s = space.state(j);
      int& n = alpha == 0 ? s.n1 : s.n2;
      if (n == 0) continue;
      const double amp = std::sqrt(static_cast<double>(n));
      --n;
      t.emplace_back(space.index(s), j, Complex{amp, 0.0});
    }
    SparseMatrix a(space.dim(), space.dim());
    a.setFromTriplets(t.begin(), t.end());
    ops.adag[alpha] = a.adjoint();
    ops.a[alpha] = std::move(a);
  }
  return ops;
}

const Eigen::Matrix2cd& pauli(int j) {
  static const std::array<Eigen::Matrix2cd, 3> sigma = [] {
    std::array<Eigen::Matrix2cd, 3> s;
    s[0] << 0.0, 1.0, 1.0, 0.0;
    s[1] << 0.0, -kI, kI, 0.0;
    s[2] << 1.0, 0.0, 0.0, -1.0;
    return s;
  }();
  require_axis(j, 3);
  return sigma[static_cast<std::size_t>(j - 1)];
}

CoordinateOps coordinates(const FockSpace& space, double lambda) {
  require_lambda(lambda);
  const LadderOps ops = ladder_matrices(space);
  CoordinateOps c;
  c.lambda = lambda;
  for (int j = 1; j <= 3; ++j) {
    SparseMatrix x(space.dim(), space.dim());
    const auto& s = pauli(j);
    for (int alpha = 0; alpha < 2; ++alpha) {
      for (int beta = 0; beta < 2; ++beta) {
        if (s(alpha, beta) == 0.0) continue;
        x += SparseMatrix(ops.adag[alpha] * ops.a[beta]) * (lambda * s(alpha, beta));
      }
    }
    x.prune(Complex{0.0, 0.0});
    c.x[static_cast<std::size_t>(j - 1)] = std::move(x);
  }
  return c;
}

SparseMatrix number_operator(const FockSpace& space) {
  return diagonal(space, [](Occupation s) { return Complex(s.total(), 0.0); });
}

// ---------------------------------------------------------------------------
// WaveOp

WaveOp::WaveOp(FockSpace space, double lambda, DenseMatrix psi)
    : space_(space), lambda_(lambda), psi_(std::move(psi)) {
  require_lambda(lambda);
  if (psi_.rows() != space_.dim() || psi_.cols() != space_.dim()) {
    throw DimensionError("WaveOp matrix is " + std::to_string(psi_.rows()) + "x" +
                         std::to_string(psi_.cols()) + ", Fock space has dim " +
                         std::to_string(space_.dim()));
  }
}

WaveOp WaveOp::zero(const FockSpace& space, double lambda) {
  return {space, lambda, DenseMatrix::Zero(space.dim(), space.dim())};
}

WaveOp WaveOp::identity(const FockSpace& space, double lambda) {
  return {space, lambda, DenseMatrix::Identity(space.dim(), space.dim())};
}

WaveOp WaveOp::operator+(const WaveOp& other) const {
  if (!(space_ == other.space_)) throw DimensionError("WaveOps live on different Fock spaces");
  return {space_, lambda_, psi_ + other.psi_};
}

WaveOp WaveOp::operator-(const WaveOp& other) const {
  if (!(space_ == other.space_)) throw DimensionError("WaveOps live on different Fock spaces");
  return {space_, lambda_, psi_ - other.psi_};
}

WaveOp WaveOp::operator*(Complex s) const { return {space_, lambda_, psi_ * s}; }

double trace_norm(const WaveOp& psi) {
  // Tr[Ψ^+ (N+1) Ψ] = Σ_ij (n_i + 1) |Ψ_ij|^2
  const auto& m = psi.matrix();
  double acc = 0.0;
  for (Index i = 0; i < m.rows(); ++i) {
    acc += (psi.space().state(i).total() + 1) * m.row(i).squaredNorm();
  }
  const double lam = psi.lambda();
  return 4.0 * std::numbers::pi * lam * lam * lam * acc;
}

// ---------------------------------------------------------------------------
// SuperOp

SuperOp::SuperOp(FockSpace space, std::vector<Term> terms, int depth)
    : space_(space), terms_(std::move(terms)), depth_(depth) {
  for (const auto& t : terms_) {
    if (t.left.rows() != space_.dim() || t.left.cols() != space_.dim() ||
        t.right.rows() != space_.dim() || t.right.cols() != space_.dim()) {
      throw DimensionError("SuperOp term does not match the Fock space dimension");
    }
  }
}

SuperOp SuperOp::identity(const FockSpace& space) {
  const auto id = sparse_identity(space.dim());
  return SuperOp(space, {{Complex{1.0, 0.0}, id, id}}, 0);
}

SuperOp SuperOp::left_multiply(const SparseMatrix& m, int depth) {
  const Index dim = m.rows();
  const auto n_max = static_cast<int>((std::sqrt(8.0 * static_cast<double>(dim) + 1.0) - 3.0) / 2.0 + 0.5);
  FockSpace space(n_max);
  if (space.dim() != dim || m.cols() != dim) throw DimensionError("matrix is not a Fock-space operator");
  return SuperOp(space, {{Complex{1.0, 0.0}, m, sparse_identity(dim)}}, depth);
}

SuperOp SuperOp::right_multiply(const SparseMatrix& m, int depth) {
  const Index dim = m.rows();
  const auto n_max = static_cast<int>((std::sqrt(8.0 * static_cast<double>(dim) + 1.0) - 3.0) / 2.0 + 0.5);
  FockSpace space(n_max);
  if (space.dim() != dim || m.cols() != dim) throw DimensionError("matrix is not a Fock-space operator");
  return SuperOp(space, {{Complex{1.0, 0.0}, sparse_identity(dim), m}}, depth);
}

WaveOp SuperOp::operator()(const WaveOp& psi) const {
  if (!(psi.space() == space_)) {
    throw DimensionError("WaveOp of dim " + std::to_string(psi.space().dim()) +
                         " applied to SuperOp of dim " + std::to_string(space_.dim()));
  }
  DenseMatrix out = DenseMatrix::Zero(space_.dim(), space_.dim());
  for (const auto& t : terms_) {
    DenseMatrix lp = t.left * psi.matrix();
    out.noalias() += t.coeff * (lp * t.right);
  }
  return {space_, psi.lambda(), std::move(out)};
}

SuperOp SuperOp::operator+(const SuperOp& other) const {
  if (!(space_ == other.space_)) throw DimensionError("SuperOps live on different Fock spaces");
  std::vector<Term> terms = terms_;
  terms.insert(terms.end(), other.terms_.begin(), other.terms_.end());
  return SuperOp(space_, std::move(terms), std::max(depth_, other.depth_));
}

SuperOp SuperOp::operator-(const SuperOp& other) const {
  return *this + other * Complex{-1.0, 0.0};
}

SuperOp SuperOp::operator*(Complex s) const {
  std::vector<Term> terms = terms_;
  for (auto& t : terms) t.coeff *= s;
  return SuperOp(space_, std::move(terms), depth_);
}

SuperOp operator*(Complex s, const SuperOp& op) { return op * s; }

SuperOp compose(const SuperOp& outer, const SuperOp& inner) {
  if (!(outer.space_ == inner.space_)) throw DimensionError("SuperOps live on different Fock spaces");
  std::vector<SuperOp::Term> terms;
  terms.reserve(outer.terms_.size() * inner.terms_.size());
  for (const auto& o : outer.terms_) {
    for (const auto& i : inner.terms_) {
      SparseMatrix left = o.left * i.left;
      SparseMatrix right = i.right * o.right;
      left.prune(Complex{0.0, 0.0});
      right.prune(Complex{0.0, 0.0});
      if (left.nonZeros() == 0 || right.nonZeros() == 0) continue;
      terms.push_back({o.coeff * i.coeff, std::move(left), std::move(right)});
    }
  }
  return SuperOp(outer.space_, std::move(terms), outer.depth_ + inner.depth_);
}

// ---------------------------------------------------------------------------
// NcModel

namespace {

std::array<SuperOp, 3> make_coordinate_superops(const FockSpace& space, const CoordinateOps& c) {
  const auto id = sparse_identity(space.dim());
  auto make = [&](int j) {
    const auto& x = c.x[static_cast<std::size_t>(j)];
    return SuperOp(space, {{Complex{0.5, 0.0}, x, id}, {Complex{0.5, 0.0}, id, x}}, 1);
  };
  return {make(0), make(1), make(2)};
}

SuperOp make_hamiltonian(const FockSpace& space, const LadderOps& ops, double lambda) {
  // [a^+, [a, Ψ]] = a^+ a Ψ - a^+ Ψ a - a Ψ a^+ + Ψ a a^+
  const auto id = sparse_identity(space.dim());
  const SparseMatrix pre = diagonal(
      space, [lambda](Occupation s) { return Complex(1.0 / (2.0 * lambda * lambda * (s.total() + 1)), 0.0); });
  std::vector<SuperOp::Term> terms;
  for (int al = 0; al < 2; ++al) {
    const auto& a = ops.a[al];
    const auto& ad = ops.adag[al];
    terms.push_back({1.0, pre * ad * a, id});
    terms.push_back({-1.0, pre * ad, a});
    terms.push_back({-1.0, pre * a, ad});
    terms.push_back({1.0, pre, a * ad});
  }
  return SuperOp(space, std::move(terms), 1);
}

std::array<SuperOp, 4> make_velocities(const FockSpace& space, const LadderOps& ops, double lambda) {
  const SparseMatrix pre = diagonal(
      space, [lambda](Occupation s) { return Complex(1.0 / (2.0 * lambda * (s.total() + 1)), 0.0); });

  auto velocity = [&](int i) {
    const auto& s = pauli(i);
    std::vector<SuperOp::Term> terms;
    for (int al = 0; al < 2; ++al) {
      for (int be = 0; be < 2; ++be) {
        const Complex c = s(al, be);
        if (c == 0.0) continue;
        terms.push_back({kI * c, pre * ops.adag[al], ops.a[be]});
        terms.push_back({-kI * c, pre * ops.a[be], ops.adag[al]});
      }
    }
    return SuperOp(space, std::move(terms), 1);
  };

  std::vector<SuperOp::Term> v4;
  for (int al = 0; al < 2; ++al) {
    v4.push_back({1.0, pre * ops.adag[al], ops.a[al]});
    v4.push_back({1.0, pre * ops.a[al], ops.adag[al]});
  }
  return {velocity(1), velocity(2), velocity(3), SuperOp(space, std::move(v4), 1)};
}

}  // namespace

NcModel::NcModel(FockSpace space, double lambda)
    : space_(space),
      lambda_(lambda),
      ladders_(ladder_matrices(space)),
      coords_(coordinates(space, lambda)),
      x_(make_coordinate_superops(space, coords_)),
      h0_(make_hamiltonian(space, ladders_, lambda)),
      v_(make_velocities(space, ladders_, lambda)) {}

const SuperOp& NcModel::X(int i) const {
  require_axis(i, 3);
  return x_[static_cast<std::size_t>(i - 1)];
}

const SuperOp& NcModel::V(int i) const {
  require_axis(i, 4);
  return v_[static_cast<std::size_t>(i - 1)];
}

// ---------------------------------------------------------------------------
// Identity checks

double max_abs_on_block(const DenseMatrix& m, const std::vector<Index>& block) {
  double worst = 0.0;
  for (Index c : block) {
    for (Index r : block) worst = std::max(worst, std::abs(m(r, c)));
  }
  return worst;
}

double check_ladder_algebra(const FockSpace& space) {
  const auto ops = ladder_matrices(space);
  const auto block = space.interior(1);
  const DenseMatrix id = DenseMatrix::Identity(space.dim(), space.dim());
  double worst = 0.0;
  for (int al = 0; al < 2; ++al) {
    for (int be = 0; be < 2; ++be) {
      DenseMatrix comm = DenseMatrix(ops.a[al] * ops.adag[be]) - DenseMatrix(ops.adag[be] * ops.a[al]);
      if (al == be) comm -= id;
      worst = std::max(worst, max_abs_on_block(comm, block));
    }
  }
  return worst;
}

double check_commutators(const FockSpace& space, double lambda) {
  const auto c = coordinates(space, lambda);
  const auto block = space.interior(1);
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const DenseMatrix xi(c.x[i]);
      const DenseMatrix xj(c.x[j]);
      DenseMatrix r = xi * xj - xj * xi;
      for (int k = 0; k < 3; ++k) {
        const int eps = levi_civita(i, j, k);
        if (eps != 0) r -= (2.0 * lambda * eps) * kI * DenseMatrix(c.x[k]);
      }
      worst = std::max(worst, max_abs_on_block(r, block));
    }
  }
  return worst;
}

WaveOp plane_wave(const FockSpace& space, double q, double lambda) {
  require_lambda(lambda);
  DenseMatrix psi = DenseMatrix::Zero(space.dim(), space.dim());
  for (Index i = 0; i < space.dim(); ++i) {
    const auto s = space.state(i);
    psi(i, i) = std::polar(1.0, lambda * q * (s.n1 - s.n2));
  }
  return {space, lambda, std::move(psi)};
}

double eigen_residual(const SuperOp& op, const WaveOp& psi, Complex nu) {
  const WaveOp image = op(psi);
  const DenseMatrix r = image.matrix() - nu * psi.matrix();
  return max_abs_on_block(r, psi.space().interior(op.depth()));
}

double check_cutoff_identity(const NcModel& model, const WaveOp& psi) {
  DenseMatrix acc = DenseMatrix::Zero(psi.space().dim(), psi.space().dim());
  for (int i = 1; i <= 4; ++i) {
    const auto& v = model.V(i);
    acc += v(v(psi)).matrix();
  }
  const double lam = model.lambda();
  acc -= psi.matrix() / (lam * lam);
  return max_abs_on_block(acc, psi.space().interior(2));
}

double check_velocity_commutator(const NcModel& model, const WaveOp& psi) {
  double worst = 0.0;
  for (int i = 1; i <= 3; ++i) {
    const auto& x = model.X(i);
    const auto& h = model.H0();
    const DenseMatrix comm = x(h(psi)).matrix() - h(x(psi)).matrix();
    const DenseMatrix r = -kI * comm - model.V(i)(psi).matrix();
    worst = std::max(worst, max_abs_on_block(r, psi.space().interior(2)));
  }
  return worst;
}

double check_v4_hamiltonian(const NcModel& model, const WaveOp& psi) {
  const double lam = model.lambda();
  const DenseMatrix r =
      model.V4()(psi).matrix() - (psi.matrix() / lam - lam * model.H0()(psi).matrix());
  return max_abs_on_block(r, psi.space().interior(1));
}

namespace {

DenseMatrix hermitian_gaussian(const FockSpace& space, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix g(space.dim(), space.dim());
  for (Index c = 0; c < g.cols(); ++c) {
    for (Index r = 0; r < g.rows(); ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex{re, im};
    }
  }
  return 0.5 * (g + g.adjoint());
}

}  // namespace

WaveOp random_wave_op(const FockSpace& space, double lambda, std::uint64_t seed) {
  DenseMatrix h = hermitian_gaussian(space, seed);
  for (Index c = 0; c < h.cols(); ++c) {
    const int tc = space.state(c).total();
    for (Index r = 0; r < h.rows(); ++r) {
      if (space.state(r).total() != tc) h(r, c) = 0.0;
    }
  }
  return {space, lambda, std::move(h)};
}

WaveOp random_dense_wave_op(const FockSpace& space, double lambda, std::uint64_t seed) {
  return {space, lambda, hermitian_gaussian(space, seed)};
}

std::string dump_triplets_json(const SparseMatrix& m) {
  auto out = nlohmann::json::array();
  for (Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      out.push_back({it.row(), it.col(), it.value().real(), it.value().imag()});
    }
  }
  return out.dump();
}

}  // namespace fuzzy_casimir::fock
