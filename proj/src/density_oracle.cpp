#include "ghzkey/density_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace ghzkey::oracle {

namespace {

using cd = std::complex<double>;

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, cd(0, -1), cd(0, 1), 0;
  return m;
}
Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Eigen::VectorXcd bell_vector(int which) {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  switch (which) {
    case 0: v(0) = s; v(3) = s; break;    // Phi+
    case 1: v(0) = s; v(3) = -s; break;   // Phi-
    case 2: v(1) = s; v(2) = s; break;    // Psi+
    case 3: v(1) = s; v(2) = -s; break;   // Psi-
  }
  return v;
}

// Controlled-X with the control in the |+>/|-> basis:
// |+><+| (x) 1 + |-><-| (x) X, control first.
Matrix hadamard_basis_cx() {
  Matrix plus(2, 2), minus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  minus << 0.5, -0.5, -0.5, 0.5;
  Matrix id = Matrix::Identity(2, 2);
  Matrix out = Matrix::Zero(4, 4);
  out += Eigen::kroneckerProduct(plus, id);
  out += Eigen::kroneckerProduct(minus, pauli_x());
  return out;
}

int bit_of(Eigen::Index index, int qubit, int qubits) {
  return static_cast<int>((index >> (qubits - 1 - qubit)) & 1);
}

void check_qubit(int qubit, int qubits) {
  if (qubit < 0 || qubit >= qubits) {
    throw std::out_of_range("qubit index " + std::to_string(qubit) + " out of range");
  }
}

}  // namespace

DensityOperator::DensityOperator(int qubits) : qubits_(qubits) {
  if (qubits < 1 || qubits > 12) throw std::invalid_argument("unsupported qubit count");
  const Eigen::Index d = Eigen::Index{1} << qubits;
  matrix_ = Matrix::Zero(d, d);
  matrix_(0, 0) = 1.0;
}

DensityOperator::DensityOperator(int qubits, Matrix m) : qubits_(qubits), matrix_(std::move(m)) {
  const Eigen::Index d = Eigen::Index{1} << qubits;
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw std::invalid_argument("matrix dimension does not match qubit count");
  }
}

DensityOperator DensityOperator::from_pure(const Eigen::VectorXcd& psi) {
  int q = 0;
  while ((Eigen::Index{1} << q) < psi.size()) ++q;
  if ((Eigen::Index{1} << q) != psi.size()) throw std::invalid_argument("state size not 2^q");
  return DensityOperator(q, psi * psi.adjoint());
}

Matrix embed(const Matrix& op, std::span<const int> targets, int qubits) {
  const int k = static_cast<int>(targets.size());
  if (op.rows() != (Eigen::Index{1} << k) || op.cols() != op.rows()) {
    throw std::invalid_argument("operator size does not match target count");
  }
  Eigen::Index mask = 0;
  for (int t : targets) {
    check_qubit(t, qubits);
    mask |= Eigen::Index{1} << (qubits - 1 - t);
  }
  auto sub_index = [&](Eigen::Index full) {
    Eigen::Index s = 0;
    for (int t : targets) s = (s << 1) | bit_of(full, t, qubits);
    return s;
  };
  const Eigen::Index d = Eigen::Index{1} << qubits;
  Matrix full = Matrix::Zero(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const Eigen::Index sr = sub_index(r);
    for (Eigen::Index c = 0; c < d; ++c) {
      if ((r & ~mask) != (c & ~mask)) continue;
      full(r, c) = op(sr, sub_index(c));
    }
  }
  return full;
}

void DensityOperator::conjugate(const Matrix& op, std::span<const int> targets) {
  const Matrix full = embed(op, targets, qubits_);
  matrix_ = full * matrix_ * full.adjoint();
}

DensityOperator DensityOperator::tensor(const DensityOperator& other) const {
  return DensityOperator(qubits_ + other.qubits_,
                         Eigen::kroneckerProduct(matrix_, other.matrix_).eval());
}

DensityOperator DensityOperator::partial_trace(std::span<const int> traced) const {
  std::vector<int> kept;
  for (int q = 0; q < qubits_; ++q) {
    if (std::find(traced.begin(), traced.end(), q) == traced.end()) kept.push_back(q);
  }
  for (int t : traced) check_qubit(t, qubits_);
  if (kept.empty()) throw std::invalid_argument("cannot trace out every qubit");
  const int nk = static_cast<int>(kept.size());
  const int nt = static_cast<int>(traced.size());
  auto merge = [&](Eigen::Index kept_bits, Eigen::Index traced_bits) {
    Eigen::Index full = 0;
    for (int i = 0; i < nk; ++i) {
      if ((kept_bits >> (nk - 1 - i)) & 1) full |= Eigen::Index{1} << (qubits_ - 1 - kept[i]);
    }
    for (int i = 0; i < nt; ++i) {
      if ((traced_bits >> (nt - 1 - i)) & 1) {
        full |= Eigen::Index{1} << (qubits_ - 1 - traced[static_cast<std::size_t>(i)]);
      }
    }
    return full;
  };
  const Eigen::Index dk = Eigen::Index{1} << nk;
  const Eigen::Index dt = Eigen::Index{1} << nt;
  Matrix out = Matrix::Zero(dk, dk);
  for (Eigen::Index r = 0; r < dk; ++r) {
    for (Eigen::Index c = 0; c < dk; ++c) {
      cd acc = 0.0;
      for (Eigen::Index t = 0; t < dt; ++t) acc += matrix_(merge(r, t), merge(c, t));
      out(r, c) = acc;
    }
  }
  return DensityOperator(nk, std::move(out));
}

double DensityOperator::trace() const { return matrix_.trace().real(); }

double DensityOperator::hermiticity_error() const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityOperator::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (matrix_ + matrix_.adjoint()));
  return es.eigenvalues().minCoeff();
}

void DensityOperator::normalize() {
  const double t = trace();
  if (!(t > 0.0)) throw std::domain_error("cannot normalize a zero-trace operator");
  matrix_ /= t;
}

DensityOperator apply_depolarizing(const DensityOperator& rho, int qubit, Probability f_D) {
  check_qubit(qubit, rho.qubits());
  const double f = f_D;
  const int target[] = {qubit};
  const Matrix& m = rho.matrix();
  Matrix out = (1.0 - 0.75 * f) * m;
  for (const Matrix& p : {pauli_x(), pauli_y(), pauli_z()}) {
    const Matrix full = embed(p, target, rho.qubits());
    out += 0.25 * f * (full * m * full.adjoint());
  }
  return DensityOperator(rho.qubits(), std::move(out));
}

DensityOperator apply_dephasing(const DensityOperator& rho, int qubit, double lambda) {
  check_qubit(qubit, rho.qubits());
  if (!(lambda >= 0.0 && lambda <= 0.5)) throw std::invalid_argument("lambda must lie in [0, 1/2]");
  const int target[] = {qubit};
  const Matrix z = embed(pauli_z(), target, rho.qubits());
  Matrix out = (1.0 - lambda) * rho.matrix() + lambda * (z * rho.matrix() * z);
  return DensityOperator(rho.qubits(), std::move(out));
}

DensityOperator build_hub_state(int n_parties, Probability f_D) {
  if (n_parties < 2 || n_parties > kMaxParties) {
    throw std::invalid_argument("oracle supports N ≤ " + std::to_string(kMaxParties) +
                                " (got N = " + std::to_string(n_parties) + ")");
  }
  // Qubits: 0 = C (travelling), 1 = A, 2.. = C_1..C_{N-1}.
  const int qubits = n_parties + 1;
  DensityOperator rho(qubits);
  const Matrix cx = hadamard_basis_cx();
  {
    const int t[] = {0, 1};
    rho.conjugate(cx, t);
  }
  rho = apply_depolarizing(rho, 0, f_D);
  for (int i = 2; i < qubits; ++i) {
    const int t[] = {0, i};
    rho.conjugate(cx, t);
  }

  // Z measurement of C; outcome 1 is corrected by Z on C_1.
  Matrix p0(2, 2), p1(2, 2);
  p0 << 1, 0, 0, 0;
  p1 << 0, 0, 0, 1;
  const int c_only[] = {0};
  DensityOperator branch0 = rho;
  branch0.conjugate(p0, c_only);
  DensityOperator branch1 = rho;
  branch1.conjugate(p1, c_only);
  const int first_copy[] = {2};
  branch1.conjugate(pauli_z(), first_copy);

  DensityOperator merged(qubits, branch0.matrix() + branch1.matrix());
  return merged.partial_trace(c_only);
}

DensityOperator noisy_bell_pair(double exp_B, double exp_C, Probability f_D) {
  if (!(exp_B >= 0.0 && exp_B <= 1.0) || !(exp_C >= 0.0 && exp_C <= 1.0)) {
    throw std::invalid_argument("dephasing exponentials must lie in [0,1]");
  }
  // Qubits: 0 = C~ (hub memory), 1 = B (travelled to Bob).
  DensityOperator rho = DensityOperator::from_pure(bell_vector(0));
  rho = apply_depolarizing(rho, 1, f_D);
  rho = apply_dephasing(rho, 0, 0.5 * (1.0 - exp_C));
  rho = apply_dephasing(rho, 1, 0.5 * (1.0 - exp_B));
  return rho;
}

std::array<double, 4> bell_weights(const DensityOperator& two_qubits) {
  if (two_qubits.qubits() != 2) throw std::invalid_argument("Bell weights need two qubits");
  std::array<double, 4> w{};
  for (int i = 0; i < 4; ++i) {
    const auto v = bell_vector(i);
    w[static_cast<std::size_t>(i)] = (v.adjoint() * two_qubits.matrix() * v)(0, 0).real();
  }
  return w;
}

GhzDecomposition swap_and_decompose(const DensityOperator& hub,
                                    std::span<const DensityOperator> pairs) {
  const int n_bobs = hub.qubits() - 1;
  if (n_bobs < 1 || static_cast<int>(pairs.size()) != n_bobs) {
    throw std::invalid_argument("need one Bell pair per hub copy qubit");
  }
  // Labels: 0 = A, 1..n = C_i, 100 + i = C~_i, 200 + i = B_i.
  std::vector<int> labels{0};
  for (int i = 1; i <= n_bobs; ++i) labels.push_back(i);

  const Matrix phi_plus = [] {
    const auto v = bell_vector(0);
    return Matrix(v * v.adjoint());
  }();

  DensityOperator state = hub;
  double success = 1.0;
  for (int i = 1; i <= n_bobs; ++i) {
    const auto& pair = pairs[static_cast<std::size_t>(i - 1)];
    if (pair.qubits() != 2) throw std::invalid_argument("Bell pair must have two qubits");
    state = state.tensor(pair);
    labels.push_back(100 + i);
    labels.push_back(200 + i);
    const auto pos = [&](int label) {
      return static_cast<int>(std::find(labels.begin(), labels.end(), label) - labels.begin());
    };
    const int targets[] = {pos(i), pos(100 + i)};
    state.conjugate(phi_plus, targets);
    const double p = state.trace();
    if (!(p > 1e-300)) throw std::domain_error("Bell projection has zero probability");
    success *= p;
    state.normalize();
    state = state.partial_trace(targets);
    labels.erase(std::remove_if(labels.begin(), labels.end(),
                                [&](int l) { return l == i || l == 100 + i; }),
                 labels.end());
  }

  GhzDecomposition dec;
  dec.n_parties = n_bobs + 1;
  dec.swap_probability = success;
  dec.state = state.matrix();

  const Eigen::Index bobs_dim = Eigen::Index{1} << n_bobs;
  const Eigen::Index all_ones = bobs_dim - 1;
  dec.plus.assign(static_cast<std::size_t>(bobs_dim), 0.0);
  dec.minus.assign(static_cast<std::size_t>(bobs_dim), 0.0);
  Matrix rebuilt = Matrix::Zero(state.dimension(), state.dimension());
  const Matrix& rho = state.matrix();
  for (Eigen::Index j = 0; j < bobs_dim; ++j) {
    const Eigen::Index x = j;                            // |0>|j>
    const Eigen::Index y = bobs_dim + (~j & all_ones);   // |1>|j-bar>
    const double diag = 0.5 * (rho(x, x).real() + rho(y, y).real());
    const double cross = rho(x, y).real();
    dec.plus[static_cast<std::size_t>(j)] = diag + cross;
    dec.minus[static_cast<std::size_t>(j)] = diag - cross;
    for (int sign : {1, -1}) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(state.dimension());
      v(x) = 1.0 / std::sqrt(2.0);
      v(y) = sign / std::sqrt(2.0);
      const double w = sign > 0 ? dec.plus[static_cast<std::size_t>(j)]
                                : dec.minus[static_cast<std::size_t>(j)];
      rebuilt += w * (v * v.adjoint());
    }
  }
  dec.off_diagonal_residual = (rho - rebuilt).norm();
  return dec;
}

OracleQbers extract_qbers(const GhzDecomposition& dec) {
  const double a = dec.a();
  const double b = dec.b();
  auto clamp01 = [](double v) { return std::min(1.0, std::max(0.0, v)); };
  OracleQbers out;
  out.from_weights = {Probability(clamp01(0.5 * (1.0 - a + b))), Probability(clamp01(1.0 - a - b))};

  const Matrix& rho = dec.state;
  const Eigen::Index d = rho.rows();
  const int qubits = dec.n_parties;
  double x_parity = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) x_parity += rho(i, i ^ (d - 1)).real();
  out.q_x_direct = 0.5 * (1.0 - x_parity);

  out.q_z_per_bob.assign(static_cast<std::size_t>(qubits - 1), 0.0);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double p = rho(i, i).real();
    const int alice = bit_of(i, 0, qubits);
    bool any = false;
    for (int bob = 1; bob < qubits; ++bob) {
      if (bit_of(i, bob, qubits) != alice) {
        out.q_z_per_bob[static_cast<std::size_t>(bob - 1)] += p;
        any = true;
      }
    }
    if (any) out.q_z_any_direct += p;
  }
  return out;
}

AlphaBeta alpha_beta_subset_sum(std::span<const PairCoefficients> pairs) {
  if (pairs.empty()) throw std::invalid_argument("need at least one Bell pair");
  if (pairs.size() > 24) throw std::invalid_argument("subset enumeration limited to 24 pairs");
  const std::size_t n = pairs.size();
  AlphaBeta out{0.0, 0.0};
  for (std::uint32_t subset = 0; subset < (1u << n); ++subset) {
    double term = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      term *= (subset >> i) & 1u ? pairs[i].phi : pairs[i].theta;
    }
    if (std::popcount(subset) % 2 == 0) {
      out.alpha += term;
    } else {
      out.beta += term;
    }
  }
  return out;
}

QberPair analytic_chain(std::span<const PairCoefficients> pairs, Probability f_D) {
  return memory_qbers_for_pairs(pairs, f_D, CorrectionTerm::derived);
}

std::string OracleCase::describe() const {
  std::ostringstream os;
  os.precision(12);
  os << "N=" << n_parties << " f_D=" << f_D << " exps=[";
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (i) os << ",";
    os << "(" << exponents[i].first << "," << exponents[i].second << ")";
  }
  os << "] oracle(Qx,Qz)=(" << q_x_oracle << "," << q_z_oracle << ") analytic=(" << q_x_analytic
     << "," << q_z_analytic << ")";
  return os.str();
}

std::vector<OracleCase> run_oracle_grid(const OracleGrid& grid, const AnalyticChain& chain) {
  std::vector<OracleCase> cases;
  const std::size_t ne = grid.exponents.size();
  for (int n : grid.parties) {
    if (n < 2 || n > kMaxParties) {
      throw std::invalid_argument("oracle supports N ≤ " + std::to_string(kMaxParties) +
                                  " (got N = " + std::to_string(n) + ")");
    }
    const int n_bobs = n - 1;
    // Every pair picks (exp_B, exp_C) from exponents^2 independently.
    std::size_t combos = 1;
    for (int i = 0; i < 2 * n_bobs; ++i) combos *= ne;
    for (double f : grid.f_D) {
      const Probability fd(f);
      const auto hub = build_hub_state(n, fd);
      for (std::size_t code = 0; code < combos; ++code) {
        OracleCase c;
        c.n_parties = n;
        c.f_D = f;
        std::vector<DensityOperator> pair_states;
        std::vector<PairCoefficients> coeffs;
        std::size_t rest = code;
        for (int i = 0; i < n_bobs; ++i) {
          const double eB = grid.exponents[rest % ne];
          rest /= ne;
          const double eC = grid.exponents[rest % ne];
          rest /= ne;
          c.exponents.emplace_back(eB, eC);
          pair_states.push_back(noisy_bell_pair(eB, eC, fd));
          coeffs.push_back(pair_coefficients(eB, eC, fd));
        }
        const auto dec = swap_and_decompose(hub, pair_states);
        const auto oq = extract_qbers(dec);
        const auto aq = chain(coeffs, fd);
        c.q_x_oracle = oq.q_x_direct;
        c.q_z_oracle = oq.q_z_any_direct;
        c.q_x_analytic = aq.q_x;
        c.q_z_analytic = aq.q_z;
        c.residual = dec.off_diagonal_residual;
        c.pass = std::abs(c.q_x_oracle - c.q_x_analytic) <= grid.tolerance &&
                 std::abs(c.q_z_oracle - c.q_z_analytic) <= grid.tolerance &&
                 std::abs(oq.from_weights.q_x - oq.q_x_direct) <= grid.tolerance &&
                 std::abs(oq.from_weights.q_z - oq.q_z_any_direct) <= grid.tolerance;
        cases.push_back(std::move(c));
      }
    }
  }
  return cases;
}

}  // namespace ghzkey::oracle
