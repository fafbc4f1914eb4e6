#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ghzkey/noise.hpp"

/// Dense density-operator simulation of the memory-network distribution
/// pipeline for small N. Used only to cross-check the closed-form QBERs.
namespace ghzkey::oracle {

using Matrix = Eigen::MatrixXcd;

inline constexpr int kMaxParties = 4;

/// Density operator on q qubits. Qubit 0 is the most significant bit of the
/// computational-basis index.
class DensityOperator {
 public:
  /// |0...0><0...0| on `qubits` qubits.
  explicit DensityOperator(int qubits);
  DensityOperator(int qubits, Matrix m);

  static DensityOperator from_pure(const Eigen::VectorXcd& psi);

  int qubits() const { return qubits_; }
  Eigen::Index dimension() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }

  /// rho -> K rho K^dagger for an operator K acting on `targets` (in order).
  void conjugate(const Matrix& op, std::span<const int> targets);
  DensityOperator tensor(const DensityOperator& other) const;
  DensityOperator partial_trace(std::span<const int> traced) const;

  double trace() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;
  void normalize();

 private:
  int qubits_;
  Matrix matrix_;
};

/// Full 2^n x 2^n operator acting as `op` on `targets` and identity elsewhere.
Matrix embed(const Matrix& op, std::span<const int> targets, int qubits);

DensityOperator apply_depolarizing(const DensityOperator& rho, int qubit, Probability f_D);
/// Gamma(rho) = (1 - lambda) rho + lambda Z rho Z, lambda in [0, 1/2].
DensityOperator apply_dephasing(const DensityOperator& rho, int qubit, double lambda);

/// Hub state on (A, C_1, ..., C_{N-1}) after Alice's qubit crossed a
/// depolarizing channel, was fanned out, measured and corrected.
DensityOperator build_hub_state(int n_parties, Probability f_D);

/// Stored pair on (C~, B): Phi+ with B depolarized and both halves dephased,
/// exp_X = 1 - 2 lambda_X.
DensityOperator noisy_bell_pair(double exp_B, double exp_C, Probability f_D);

/// Weights of a two-qubit state on Phi+, Phi-, Psi+, Psi-.
std::array<double, 4> bell_weights(const DensityOperator& two_qubits);

struct GhzDecomposition {
  int n_parties = 0;
  std::vector<double> plus;   // weight of psi_j^+, j indexes the Bobs' bit string
  std::vector<double> minus;  // weight of psi_j^-
  double off_diagonal_residual = 0.0;
  double swap_probability = 0.0;
  Matrix state;  // final (A, B_1..B_{N-1}) state

  double a() const { return plus.front(); }
  double b() const { return minus.front(); }
};

/// Projects every (C_i, C~_i) onto Phi+ and expands the remaining
/// (A, B_1..B_{N-1}) state in the GHZ basis.
GhzDecomposition swap_and_decompose(const DensityOperator& hub,
                                    std::span<const DensityOperator> pairs);

struct OracleQbers {
  QberPair from_weights;         // (1 - a + b)/2 and 1 - a - b
  double q_x_direct = 0.0;       // odd parity of all X outcomes
  double q_z_any_direct = 0.0;   // some Bob's Z outcome differs from Alice's
  std::vector<double> q_z_per_bob;
};

OracleQbers extract_qbers(const GhzDecomposition& dec);

/// Brute-force even/odd subset sums over all 2^n subsets of the pairs.
AlphaBeta alpha_beta_subset_sum(std::span<const PairCoefficients> pairs);

struct OracleCase {
  int n_parties = 0;
  double f_D = 0.0;
  std::vector<std::pair<double, double>> exponents;  // (exp_B, exp_C) per pair
  double q_x_oracle = 0.0;
  double q_z_oracle = 0.0;
  double q_x_analytic = 0.0;
  double q_z_analytic = 0.0;
  double residual = 0.0;
  bool pass = false;

  std::string describe() const;
};

using AnalyticChain =
    std::function<QberPair(std::span<const PairCoefficients> pairs, Probability f_D)>;

struct OracleGrid {
  std::vector<int> parties{2, 3};
  std::vector<double> f_D{0.0, 0.01, 0.05, 0.2};
  std::vector<double> exponents{1.0, 0.9, 0.5};
  double tolerance = 1e-10;
};

/// Default chain: pair_coefficients -> alpha_beta_closed_form -> ghz_prefactors
/// -> memory_qbers.
QberPair analytic_chain(std::span<const PairCoefficients> pairs, Probability f_D);

/// Runs the oracle over every grid point; each pair gets every (exp_B, exp_C)
/// combination independently.
std::vector<OracleCase> run_oracle_grid(const OracleGrid& grid,
                                        const AnalyticChain& chain = analytic_chain);

}  // namespace ghzkey::oracle
