#include "qcland/model_zoo.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qcland/rng.hpp"

namespace qcland {
namespace {

using cd = std::complex<double>;

Eigen::MatrixXcd real_diag(std::initializer_list<double> entries) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(entries.size()),
                                              static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (const double e : entries) m(i, i) = cd(e, 0.0), ++i;
  return m;
}

Eigen::VectorXcd basis_state(int n, int index) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
  v(index) = cd(1.0, 0.0);
  return v;
}

Preset make_fourlevel() {
  Eigen::MatrixXcd h0 = real_diag({-2.25, -0.75, 0.25, 2.75});
  Eigen::MatrixXcd mu(4, 4);
  mu << 0.0, 1.0, 0.5, 0.25,
        1.0, 0.0, 1.0, 0.5,
        0.5, 1.0, 0.0, 1.0,
        0.25, 0.5, 1.0, 0.0;

  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(4, 4);
  w(0, 0) = w(1, 1) = cd(1.0, 0.0);
  w(2, 3) = w(3, 2) = cd(1.0, 0.0);
  w *= std::exp(cd(0.0, -std::numbers::pi / 4.0));

  InitialFieldSpec spec;
  spec.freq_lo = 0.5;
  spec.freq_hi = 5.5;

  return Preset{"fourlevel",
                QuantumSystem(std::move(h0), {std::move(mu)}),
                Objective::state_transfer(basis_state(4, 0), basis_state(4, 3)),
                Objective::observable(real_diag({0.5, 0.5, 0.0, 0.0}),
                                      real_diag({0.0, 0.0, 1.0, 1.0})),
                Objective::unitary_gate(std::move(w)),
                50.0,
                500,
                spec};
}

Preset make_fivelevel(std::uint64_t variant_seed) {
  Eigen::MatrixXcd h0 = real_diag({-8.0, -6.0, -2.0, 4.0, 12.0});

  // Nearest-neighbor dipole with seeded symmetric signs.
  auto engine = make_engine(derive_seed(variant_seed, 0x5151));
  std::bernoulli_distribution coin(0.5);
  Eigen::MatrixXcd mu = Eigen::MatrixXcd::Zero(5, 5);
  for (int i = 0; i < 4; ++i) {
    const double sign = coin(engine) ? 1.0 : -1.0;
    mu(i, i + 1) = cd(sign, 0.0);
    mu(i + 1, i) = cd(sign, 0.0);
  }

  const Eigen::MatrixXcd g = random_traceless_hermitian(5, derive_seed(variant_seed, 0x6262));

  InitialFieldSpec spec;
  spec.freq_lo = 1.0;
  spec.freq_hi = 9.0;

  return Preset{"fivelevel",
                QuantumSystem(std::move(h0), {std::move(mu)}),
                Objective::state_transfer(basis_state(5, 0), basis_state(5, 4)),
                Objective::observable(real_diag({0.5, 0.5, 0.0, 0.0, 0.0}),
                                      real_diag({0.0, 0.0, 0.0, 1.0, 1.0})),
                Objective::unitary_gate(unitary_from_hermitian_generator(g)),
                50.0,
                500,
                spec};
}

Preset make_two_spin() {
  Eigen::Matrix2cd sx, sy, sz, id;
  sx << cd(0, 0), cd(1, 0), cd(1, 0), cd(0, 0);
  sy << cd(0, 0), cd(0, -1), cd(0, 1), cd(0, 0);
  sz << cd(1, 0), cd(0, 0), cd(0, 0), cd(-1, 0);
  id.setIdentity();

  auto kron = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::MatrixXcd out(4, 4);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    }
    return out;
  };

  const Eigen::MatrixXcd ix = kron(0.5 * sx, id), iy = kron(0.5 * sy, id);
  const Eigen::MatrixXcd sx_s = kron(id, 0.5 * sx), sy_s = kron(id, 0.5 * sy);
  const Eigen::MatrixXcd iz_sz = kron(0.5 * sz, id) * kron(id, 0.5 * sz);

  constexpr double j_is = 1.0;
  Eigen::MatrixXcd h0 = 2.0 * std::numbers::pi * j_is * iz_sz;

  // The physical Hamiltonian adds + u_c(t) O_c per channel; the propagator
  // convention couples as - mu_c E_c, so the control operators enter negated.
  std::vector<Eigen::MatrixXcd> dipoles = {-ix, -iy, -sx_s, -sy_s};

  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(4, 4);
  w(0, 0) = w(1, 1) = cd(1.0, 0.0);
  w(2, 3) = w(3, 2) = cd(1.0, 0.0);
  w *= std::exp(cd(0.0, -std::numbers::pi / 4.0));

  InitialFieldSpec spec;
  spec.freq_lo = 2.5;
  spec.freq_hi = 3.5;

  return Preset{"two_spin",
                QuantumSystem(std::move(h0), std::move(dipoles)),
                Objective::state_transfer(basis_state(4, 0), basis_state(4, 3)),
                Objective::observable(real_diag({0.5, 0.5, 0.0, 0.0}),
                                      real_diag({0.0, 0.0, 1.0, 1.0})),
                Objective::unitary_gate(std::move(w)),
                20.0,
                500,
                spec};
}

}  // namespace

const Objective& Preset::objective(Objective::Kind kind) const {
  switch (kind) {
    case Objective::Kind::StateTransfer: return stl;
    case Objective::Kind::Observable: return ocl;
    case Objective::Kind::UnitaryGate: return utl;
  }
  throw std::logic_error("unreachable");
}

const Objective& Preset::objective_by_name(const std::string& landscape) const {
  if (landscape == "stl") return stl;
  if (landscape == "ocl") return ocl;
  if (landscape == "utl") return utl;
  throw std::invalid_argument("unknown landscape name: " + landscape);
}

Preset load_preset(const std::string& name, std::uint64_t variant_seed) {
  if (name == "fourlevel") return make_fourlevel();
  if (name == "fivelevel") return make_fivelevel(variant_seed);
  if (name == "two_spin") return make_two_spin();
  throw std::invalid_argument("unknown preset: " + name);
}

Eigen::MatrixXcd random_traceless_hermitian(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_traceless_hermitian: n must be >= 2");
  auto engine = make_engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd x(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) x(i, j) = cd(normal(engine), normal(engine));
  }
  Eigen::MatrixXcd h = 0.5 * (x + x.adjoint());
  h -= (h.trace() / static_cast<double>(n)) * Eigen::MatrixXcd::Identity(n, n);
  return h;
}

Eigen::MatrixXcd unitary_from_hermitian_generator(const Eigen::MatrixXcd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
  Eigen::VectorXcd phases(g.rows());
  for (Eigen::Index j = 0; j < g.rows(); ++j) {
    phases(j) = std::exp(cd(0.0, es.eigenvalues()(j)));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace qcland
