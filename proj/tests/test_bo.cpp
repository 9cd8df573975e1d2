#include <doctest.h>

#include <cmath>

#include "cmqb/bo.hpp"

using namespace cmqb;

namespace {

// Fully decoupled synthetic fits: diagonal CSF Hamiltonian with constant,
// well-separated surfaces, so the Born-Huang problem reduces to three
// independent displaced oscillators.
TaylorFitSet decoupled_fits() {
  TaylorFitSet f;
  f["h_aa"] = {-2.5, 0.0, 0};
  f["h_bb"] = {-2.4, 0.0, 0};
  f["h_ab"] = {0.0, 0.0, 0};
  f["v_aaaa"] = {0.2, 0.0, 0};
  f["v_bbbb"] = {0.21, 0.0, 0};
  f["v_abab"] = {0.16, 0.0, 0};
  f["v_aaab"] = {0.0, 0.0, 0};
  f["v_abbb"] = {0.0, 0.0, 0};
  f["v_aabb"] = {0.0, 0.0, 0};
  return f;
}

// Smoothly coupled fits with a broad avoided crossing, where central
// differences of the eigenvectors are accurate enough to cross-check the
// analytic derivative couplings.
TaylorFitSet coupled_fits() {
  TaylorFitSet f;
  f["h_aa"] = {-2.5, 0.2, 0};
  f["h_bb"] = {-2.5, -0.2, 0};
  f["h_ab"] = {-0.05, 0.0, 0};
  f["v_aaaa"] = {0.2, 0.0, 0};
  f["v_bbbb"] = {0.2, 0.0, 0};
  f["v_abab"] = {0.16, 0.0, 0};
  f["v_aaab"] = {0.0, 0.0, 0};
  f["v_abbb"] = {0.0, 0.0, 0};
  f["v_aabb"] = {0.01, 0.0, 0};
  return f;
}

}  // namespace

TEST_CASE("CSF Hamiltonian: symmetry, diagonal limit, guards") {
  const Eigen::Matrix3d h = build_csf_hamiltonian(coupled_fits(), 0.13);
  CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::Matrix3d hd = build_csf_hamiltonian(decoupled_fits(), 0.4);
  CHECK(std::abs(hd(0, 1)) == 0.0);
  CHECK(std::abs(hd(0, 2)) == 0.0);
  CHECK(hd(0, 0) == doctest::Approx(2.0 * -2.5 + 0.2));
  CHECK(hd(2, 2) == doctest::Approx(-2.5 - 2.4 + 0.16));
  TaylorFitSet broken = coupled_fits();
  broken.erase("h_ab");
  CHECK_THROWS(build_csf_hamiltonian(broken, 0.0));
}

TEST_CASE("CSF Fock vectors are orthonormal two-electron singlet kets") {
  const auto v = csf_fock_vectors();
  REQUIRE(v.size() == 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs(v[i].dot(v[j]) - cplx(i == j ? 1.0 : 0.0, 0)) < 1e-14);
}

TEST_CASE("BO surfaces: ascending energies, continuous eigenvector signs") {
  SpatialGrid rg{-0.8, 0.8, 161};
  BOSurfaceSet set = diagonalize_bo(coupled_fits(), rg);
  for (int j = 0; j < rg.n; ++j) {
    CHECK(set.energies(0, j) <= set.energies(1, j));
    CHECK(set.energies(1, j) <= set.energies(2, j));
    if (j > 0)
      for (int c = 0; c < 3; ++c)
        CHECK(set.u[j].col(c).dot(set.u[j - 1].col(c)) > 0.0);
  }
}

TEST_CASE("analytic derivative couplings match finite differences") {
  SpatialGrid rg{-0.8, 0.8, 321};
  BOSurfaceSet set = diagonalize_bo(coupled_fits(), rg);
  compute_nacs(set, coupled_fits());
  CHECK_FALSE(set.nac_undersampled);
  const double dr = rg.spacing();
  double peak = 0.0, maxdev = 0.0;
  for (int j = 1; j + 1 < rg.n; ++j) {
    // antisymmetry is exact in the Hellmann-Feynman form
    CHECK((set.d[j] + set.d[j].transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((set.dprime[j] + set.dprime[j].transpose()).cwiseAbs().maxCoeff() <
          1e-12);
    const Eigen::Matrix3d fd =
        (set.u[j].transpose() * (set.u[j + 1] - set.u[j - 1]) / (2.0 * dr));
    peak = std::max(peak, set.d[j].cwiseAbs().maxCoeff());
    maxdev = std::max(maxdev, (set.d[j] - fd).cwiseAbs().maxCoeff());
  }
  CHECK(peak > 0.1);  // the crossing actually couples the surfaces
  CHECK(maxdev < 1e-3 * std::max(peak, 1.0));
  // dD/dR cross-check against the finite difference of D itself
  double dpdev = 0.0;
  for (int j = 1; j + 1 < rg.n; ++j) {
    const Eigen::Matrix3d fd = (set.d[j + 1] - set.d[j - 1]) / (2.0 * dr);
    dpdev = std::max(dpdev, (set.dprime[j] - fd).cwiseAbs().maxCoeff());
  }
  CHECK(dpdev < 1e-2);
}

TEST_CASE("decoupled Born-Huang spectrum is the harmonic ladder") {
  ModelParams params;
  SpatialGrid rg{-1.0, 1.0, 301};
  BOSurfaceSet set = diagonalize_bo(decoupled_fits(), rg);
  compute_nacs(set, decoupled_fits());
  for (const auto& d : set.d) CHECK(d.cwiseAbs().maxCoeff() < 1e-12);
  const BHHamiltonian bh = build_bh_hamiltonian(set, params, {1});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(bh.h);
  const double omega = params.omega();
  const double e1 = set.energies(0, 0);
  for (int n = 0; n < 6; ++n)
    CHECK(es.eigenvalues()(n) ==
          doctest::Approx(e1 + omega * (n + 0.5)).epsilon(1e-8));
}

TEST_CASE("BH propagation: unitary, stationary ground state") {
  ModelParams params;
  SpatialGrid rg{-1.0, 1.0, 301};
  BOSurfaceSet set = diagonalize_bo(decoupled_fits(), rg);
  compute_nacs(set, decoupled_fits());
  const BHHamiltonian bh = build_bh_hamiltonian(set, params, {1});
  const DVRState st0 =
      initial_state_bo(0.0, set, {1}, params.omega(), params.M);
  CHECK(st0.discarded_weight < 1e-12);
  const auto prop = propagate_bh(st0, bh, {10.0, 200.0});
  for (const auto& st : prop.states) {
    CHECK(st.norm() == doctest::Approx(1.0));
    // R0 = 0 coherent state on a flat surface is the exact ground state:
    // density is time independent
    const Eigen::VectorXd fon = bo_occupation_numbers(st, set);
    CHECK(fon(0) == doctest::Approx(1.0));
    CHECK(fon(2) == doctest::Approx(0.0).epsilon(1e-12));
  }
  CHECK(std::norm(st0.amplitudes.dot(prop.states[0].amplitudes)) ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("BH construction and initial-state guards") {
  ModelParams params;
  SpatialGrid rg{-0.8, 0.8, 101};
  BOSurfaceSet set = diagonalize_bo(decoupled_fits(), rg);
  CHECK_THROWS(build_bh_hamiltonian(set, params, {1}));  // NACs missing
  compute_nacs(set, decoupled_fits());
  CHECK_THROWS(build_bh_hamiltonian(set, params, {}));
  CHECK_THROWS(build_bh_hamiltonian(set, params, {0}));
  CHECK_THROWS(build_bh_hamiltonian(set, params, {4}));
  // the decoupled CSF-1 packet has no weight on states {2, 3}
  CHECK_THROWS(initial_state_bo(0.0, set, {2, 3}, params.omega(), params.M));
}

TEST_CASE("Weyl dimension formula: closed form and enumeration agree") {
  CHECK(weyl_count(0.0, 4, 2) == 3);
  CHECK(weyl_count(1.0, 4, 2) == 1);  // one open-shell triplet
  CHECK(weyl_count(0.5, 4, 1) == 2);
  for (int n_o = 2; n_o <= 12; n_o += 2)
    for (double s : {0.0, 0.5, 1.0})
      for (int n_e = 0; n_e <= n_o; ++n_e) {
        const long s2 = std::lround(2.0 * s);
        if ((n_e - s2) % 2 != 0 || n_e < s2) continue;
        CHECK_MESSAGE(weyl_count(s, n_o, n_e) ==
                          csf_count_enumeration(s, n_o, n_e),
                      "S=" << s << " N_o=" << n_o << " N_e=" << n_e);
      }
}

TEST_CASE("Weyl count input validation") {
  CHECK_THROWS(weyl_count(0.0, 3, 2));    // odd orbital count
  CHECK_THROWS(weyl_count(0.0, 4, 5));    // too many electrons
  CHECK_THROWS(weyl_count(0.5, 4, 2));    // spin/parity mismatch
  CHECK_THROWS(weyl_count(-0.5, 4, 1));   // negative spin
  CHECK_THROWS(weyl_count(0.25, 4, 2));   // not a half-integer
}
