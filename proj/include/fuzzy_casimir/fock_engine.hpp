#pragma once

// Truncated two-mode Fock space and the operator algebra of quantum mechanics
// on the noncommutative space R^3_λ, where [x_i, x_j] = 2iλ ε_ijk x_k.
//
// States Ψ are operators on the auxiliary Fock space and are stored as dense
// matrices over the truncated basis |n1, n2>, n1 + n2 <= n_max. Ladder and
// coordinate operators are sparse. Creation-operator elements that would leave
// the retained space are dropped, so every identity is exact only on an
// "interior block": rows and columns with total occupation <= n_max - depth,
// where depth counts the composed ladder applications.

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace fuzzy_casimir::fock {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Index = Eigen::Index;

struct Occupation {
  int n1 = 0;
  int n2 = 0;

  int total() const noexcept { return n1 + n2; }
  bool operator==(const Occupation&) const = default;
};

/// Basis |n1,n2> with n1 + n2 <= n_max in graded lexicographic order:
/// ascending total occupation, then ascending n1. The index map is closed
/// form, index(n1, n2) = t(t+1)/2 + n1 with t = n1 + n2.
class FockSpace {
 public:
  explicit FockSpace(int n_max);

  int n_max() const noexcept { return n_max_; }
  Index dim() const noexcept { return dim_; }

  bool contains(Occupation s) const noexcept {
    return s.n1 >= 0 && s.n2 >= 0 && s.total() <= n_max_;
  }
  Index index(Occupation s) const;
  Occupation state(Index i) const;

  /// Indices whose total occupation is <= n_max - depth, in basis order.
  std::vector<Index> interior(int depth) const;

  bool operator==(const FockSpace&) const = default;

 private:
  int n_max_;
  Index dim_;
};

/// Builds the truncated space. When interior_depth > 0 the caller intends to
/// run identity checks of that depth, which needs n_max >= interior_depth.
FockSpace build_space(int n_max, int interior_depth = 0);

/// a_α and a_α^+ for α = 1, 2 (stored at array positions 0 and 1).
struct LadderOps {
  std::array<SparseMatrix, 2> a;
  std::array<SparseMatrix, 2> adag;
};

LadderOps ladder_matrices(const FockSpace& space);

/// x_j = λ σ^j_{αβ} a_α^+ a_β for j = 1, 2, 3 (array positions 0..2).
struct CoordinateOps {
  std::array<SparseMatrix, 3> x;
  double lambda = 1.0;
};

CoordinateOps coordinates(const FockSpace& space, double lambda);

/// Pauli matrix σ^j for j = 1, 2, 3.
const Eigen::Matrix2cd& pauli(int j);

/// Diagonal N = a_1^+ a_1 + a_2^+ a_2.
SparseMatrix number_operator(const FockSpace& space);

/// A state Ψ of the NC Hilbert space: an operator on the auxiliary Fock space.
class WaveOp {
 public:
  WaveOp(FockSpace space, double lambda, DenseMatrix psi);

  static WaveOp zero(const FockSpace& space, double lambda);
  static WaveOp identity(const FockSpace& space, double lambda);

  const FockSpace& space() const noexcept { return space_; }
  double lambda() const noexcept { return lambda_; }
  const DenseMatrix& matrix() const noexcept { return psi_; }

  WaveOp operator+(const WaveOp& other) const;
  WaveOp operator-(const WaveOp& other) const;
  WaveOp operator*(Complex s) const;

 private:
  FockSpace space_;
  double lambda_;
  DenseMatrix psi_;
};

inline WaveOp operator*(Complex s, const WaveOp& psi) { return psi * s; }

/// ||Ψ||^2 = 4πλ^3 Tr[Ψ^+ (N+1) Ψ] over the truncated space.
double trace_norm(const WaveOp& psi);

/// Linear map on WaveOps: S(Ψ) = Σ_k c_k L_k Ψ R_k.
///
/// Composition of two such maps is again of this form, so products like V̂_i²
/// are represented exactly. depth() is the number of ladder applications the
/// map composes; it selects the interior block on which identities are exact.
class SuperOp {
 public:
  struct Term {
    Complex coeff;
    SparseMatrix left;
    SparseMatrix right;
  };

  SuperOp(FockSpace space, std::vector<Term> terms, int depth);

  static SuperOp identity(const FockSpace& space);
  static SuperOp left_multiply(const SparseMatrix& m, int depth = 1);
  static SuperOp right_multiply(const SparseMatrix& m, int depth = 1);

  WaveOp operator()(const WaveOp& psi) const;

  SuperOp operator+(const SuperOp& other) const;
  SuperOp operator-(const SuperOp& other) const;
  SuperOp operator*(Complex s) const;
  /// (outer ∘ inner)(Ψ) = outer(inner(Ψ)).
  friend SuperOp compose(const SuperOp& outer, const SuperOp& inner);

  const FockSpace& space() const noexcept { return space_; }
  int depth() const noexcept { return depth_; }
  std::size_t term_count() const noexcept { return terms_.size(); }

 private:
  FockSpace space_;
  std::vector<Term> terms_;
  int depth_;
};

SuperOp operator*(Complex s, const SuperOp& op);

/// Coordinate, free Hamiltonian and velocity superoperators for one (n_max, λ).
///
/// The prefactors 1/(2r) and 1/(2λr) are realized as left multiplication by
/// the diagonal (2λ(N+1))^-1 and (2λ²(N+1))^-1, i.e. r = λ(N+1).
class NcModel {
 public:
  NcModel(FockSpace space, double lambda);

  const FockSpace& space() const noexcept { return space_; }
  double lambda() const noexcept { return lambda_; }
  const LadderOps& ladders() const noexcept { return ladders_; }
  const CoordinateOps& coords() const noexcept { return coords_; }

  /// X̂_i Ψ = (x_i Ψ + Ψ x_i) / 2, i = 1, 2, 3.
  const SuperOp& X(int i) const;
  /// Ĥ_0 Ψ = (1/2λr) [a_α^+, [a_α, Ψ]].
  const SuperOp& H0() const { return h0_; }
  /// V̂_i Ψ = (i/2r) σ^i_{αβ} (a_α^+ Ψ a_β - a_β Ψ a_α^+), i = 1, 2, 3.
  /// V̂_4 Ψ = (1/2r) (a_α^+ Ψ a_α + a_α Ψ a_α^+) is V(4).
  const SuperOp& V(int i) const;
  const SuperOp& V4() const { return v_[3]; }

  WaveOp apply_X(int i, const WaveOp& psi) const { return X(i)(psi); }
  WaveOp apply_H0(const WaveOp& psi) const { return h0_(psi); }
  WaveOp apply_V(int i, const WaveOp& psi) const { return V(i)(psi); }
  WaveOp apply_V4(const WaveOp& psi) const { return V4()(psi); }

 private:
  FockSpace space_;
  double lambda_;
  LadderOps ladders_;
  CoordinateOps coords_;
  std::array<SuperOp, 3> x_;
  SuperOp h0_;
  std::array<SuperOp, 4> v_;
};

/// Largest |entry| of m restricted to rows and columns of the interior block.
double max_abs_on_block(const DenseMatrix& m, const std::vector<Index>& block);

/// max_{α,β} of |[a_α, a_β^+] - δ_αβ I| on the depth-1 interior block.
double check_ladder_algebra(const FockSpace& space);

/// max_{i,j} of |[x_i, x_j] - 2iλ ε_ijk x_k| on the depth-1 interior block.
double check_commutators(const FockSpace& space, double lambda);

/// Diagonal WaveOp exp(iq x_3), entry exp(iλq(n1 - n2)) on |n1,n2>.
WaveOp plane_wave(const FockSpace& space, double q, double lambda);

/// max |op(Ψ) - ν Ψ| on the interior block of depth op.depth().
double eigen_residual(const SuperOp& op, const WaveOp& psi, Complex nu);

/// max |Σ_i V̂_i²Ψ + V̂_4²Ψ - λ^-2 Ψ| on the depth-2 interior block.
double check_cutoff_identity(const NcModel& model, const WaveOp& psi);

/// max_i |(-i[X̂_i, Ĥ_0] - V̂_i) Ψ| on the depth-2 interior block.
double check_velocity_commutator(const NcModel& model, const WaveOp& psi);

/// max |V̂_4 Ψ - (Ψ/λ - λ Ĥ_0 Ψ)| on the depth-1 interior block.
double check_v4_hamiltonian(const NcModel& model, const WaveOp& psi);

/// Random Hermitian WaveOp with complex Gaussian entries, restricted to the
/// sector commuting with N (equal numbers of a^+ and a). The cut-off identity
/// holds on that sector only.
WaveOp random_wave_op(const FockSpace& space, double lambda, std::uint64_t seed);

/// Same generator without the sector restriction.
WaveOp random_dense_wave_op(const FockSpace& space, double lambda,
                            std::uint64_t seed);

/// Nonzero entries of m as "row,col,re,im" quadruples in column-major order,
/// serialized as a JSON array of arrays.
std::string dump_triplets_json(const SparseMatrix& m);

}  // namespace fuzzy_casimir::fock
