#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "gqm/errors.hpp"
#include "gqm/hilbert.hpp"
#include "support/oracles.hpp"

using namespace gqm;

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kTol = 1e-12;

CVector vec2(Complex a, Complex b) {
  CVector v(2);
  v << a, b;
  return v;
}

void expect_vec_near(const CVector& got, const CVector& want, double tol = kTol) {
  ASSERT_EQ(got.size(), want.size());
  for (Index k = 0; k < got.size(); ++k) {
    EXPECT_NEAR(got[k].real(), want[k].real(), tol) << "component " << k;
    EXPECT_NEAR(got[k].imag(), want[k].imag(), tol) << "component " << k;
  }
}

}  // namespace

TEST(StateVector, RejectsNonUnitAndTinyVectors) {
  EXPECT_THROW(StateVector(vec2(1.0, 1.0)), NormalizationError);
  EXPECT_THROW(StateVector(CVector::Ones(1)), DimensionError);
  EXPECT_THROW(StateVector::normalized(CVector::Zero(3)), NormalizationError);
  EXPECT_NO_THROW(StateVector(vec2(1.0, 0.0)));
  EXPECT_NEAR(StateVector::normalized(vec2(3.0, 4.0 * kI)).vec().norm(), 1.0, kTol);
}

TEST(HermitianOperator, RejectsNonHermitian) {
  CMatrix m(2, 2);
  m << 1.0, kI, kI, 0.0;
  EXPECT_THROW(HermitianOperator{m}, SelfAdjointnessError);
  EXPECT_THROW(HermitianOperator{CMatrix::Zero(2, 3)}, DimensionError);
}

TEST(HermitianInner, Examples) {
  EXPECT_NEAR(std::abs(hermitian_inner(vec2(1.0, 0.0), vec2(0.0, 1.0))), 0.0, kTol);
  EXPECT_NEAR(hermitian_inner(vec2(1.0, 0.0), vec2(1.0, 0.0)).real(), 1.0, kTol);
  const CVector v = vec2(1.0, kI) / std::sqrt(2.0);
  const CVector w = vec2(1.0, -kI) / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(hermitian_inner(v, w)), 0.0, kTol);
  EXPECT_NEAR(std::abs(oracle::inner_loop(v, w)), 0.0, kTol);
  EXPECT_THROW(hermitian_inner(vec2(1.0, 0.0), CVector::Zero(3)), DimensionError);
}

TEST(HermitianInner, ConjugateLinearInFirstSlotAgainstLoop) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const CVector v = random_state(5, 2 * s).vec();
    const CVector w = random_state(5, 2 * s + 1).vec();
    const Complex want = oracle::inner_loop(v, w);
    EXPECT_NEAR(std::abs(hermitian_inner(v, w) - want), 0.0, kTol);
    EXPECT_NEAR(std::abs(hermitian_inner(kI * v, w) - (-kI) * want), 0.0, kTol);
  }
}

TEST(Expectation, Examples) {
  EXPECT_NEAR(expectation(pauli::z(), StateVector::basis(2, 0)), 1.0, kTol);
  EXPECT_NEAR(expectation(HermitianOperator::identity(4), random_state(4, 3)), 1.0, kTol);
  const StateVector plus = StateVector::normalized(vec2(1.0, 1.0));
  EXPECT_NEAR(expectation(pauli::z(), plus), 0.0, kTol);
}

TEST(Expectation, RealAndPhaseInvariantOverRandomDraws) {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const Index dim = 2 + static_cast<Index>(s % 8);
    const HermitianOperator a = random_hermitian(dim, derive_seed(s, 0));
    const StateVector psi = random_state(dim, derive_seed(s, 1));
    const Complex raw = psi.vec().dot(a.matrix() * psi.vec());
    EXPECT_LE(std::abs(raw.imag()), 1e-10);
    const double e = expectation(a, psi);
    EXPECT_NEAR(e, raw.real(), 1e-12);
    EXPECT_NEAR(expectation(a, psi.with_phase(0.1 + 0.37 * static_cast<double>(s))), e, 1e-10);
  }
}

TEST(Commutator, Examples) {
  const HermitianOperator a = random_hermitian(3, 11);
  EXPECT_LE(commutator(a, a).cwiseAbs().maxCoeff(), kTol);
  EXPECT_LE(commutator(HermitianOperator::identity(3), a).cwiseAbs().maxCoeff(), kTol);
  const CMatrix want = 2.0 * kI * pauli::z().matrix();
  EXPECT_LE((commutator(pauli::x(), pauli::y()) - want).cwiseAbs().maxCoeff(), kTol);
  EXPECT_LE((oracle::commutator_loop(pauli::x().matrix(), pauli::y().matrix()) - want)
                .cwiseAbs()
                .maxCoeff(),
            kTol);
}

TEST(Commutator, MatchesLoopOracle) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const HermitianOperator a = random_hermitian(4, derive_seed(s, 0));
    const HermitianOperator b = random_hermitian(4, derive_seed(s, 1));
    const CMatrix c = commutator(a, b);
    EXPECT_LE((c - oracle::commutator_loop(a.matrix(), b.matrix())).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((c + c.adjoint()).cwiseAbs().maxCoeff(), 1e-12);  // anti-Hermitian
  }
}

TEST(HamiltonianField, Examples) {
  const StateVector up = StateVector::basis(2, 0);
  const StateVector down = StateVector::basis(2, 1);
  expect_vec_near(hamiltonian_field(HermitianOperator::identity(2), up), vec2(-kI, 0.0));
  expect_vec_near(hamiltonian_field(pauli::x(), up), vec2(0.0, -kI));
  expect_vec_near(hamiltonian_field(pauli::z(), down, Config{.hbar = 2.0}), vec2(0.0, 0.5 * kI));
}

TEST(HorizontalProjection, Examples) {
  const StateVector psi = random_state(3, 5);
  EXPECT_LE(horizontal_projection(psi.vec(), psi).vec().norm(), kTol);
  CVector perp(3);
  perp << 0.0, 1.0, 0.0;
  const StateVector e0 = StateVector::basis(3, 0);
  expect_vec_near(horizontal_projection(perp, e0).vec(), perp);
  const StateVector up = StateVector::basis(2, 0);
  expect_vec_near(horizontal_projection(pauli::x().matrix() * up.vec(), up).vec(), vec2(0.0, 1.0));
  EXPECT_THROW(horizontal_projection(CVector::Zero(4), up), DimensionError);
}

TEST(HorizontalProjection, IdempotentAndOrthogonal) {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const Index dim = 2 + static_cast<Index>(s % 6);
    const StateVector psi = random_state(dim, derive_seed(s, 0));
    const CVector v = random_state(dim, derive_seed(s, 1)).vec() * 3.0;
    const HorizontalTangent h = horizontal_projection(v, psi);
    EXPECT_LE(std::abs(oracle::inner_loop(psi.vec(), h.vec())), 1e-12);
    EXPECT_LE((horizontal_projection(h.vec(), psi).vec() - h.vec()).norm(), 1e-10);
  }
}

TEST(HorizontalTangent, RejectsVerticalComponent) {
  const StateVector up = StateVector::basis(2, 0);
  EXPECT_THROW(HorizontalTangent(up, vec2(0.5, 1.0)), NormalizationError);
  EXPECT_THROW(HorizontalTangent(up, CVector::Zero(3)), DimensionError);
}

TEST(FieldDecompose, Examples) {
  const StateVector up = StateVector::basis(2, 0);
  const StateVector psi = random_state(3, 2);
  const FieldDecomposition id = field_decompose(HermitianOperator::identity(3), psi);
  expect_vec_near(id.vertical, -kI * psi.vec());
  EXPECT_LE(id.horizontal.vec().norm(), kTol);

  const FieldDecomposition x = field_decompose(pauli::x(), up);
  expect_vec_near(x.vertical, vec2(0.0, 0.0));
  expect_vec_near(x.horizontal.vec(), vec2(0.0, -kI));

  const FieldDecomposition z = field_decompose(pauli::z(), up);
  expect_vec_near(z.vertical, vec2(-kI, 0.0));
  EXPECT_LE(z.horizontal.vec().norm(), kTol);
}

TEST(FieldDecompose, ReconstructsFieldAndHorizontalNormIsUncertainty) {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const Index dim = 2 + static_cast<Index>(s % 8);
    const Config cfg{.hbar = (s % 2 == 0) ? 1.0 : 0.5};
    const HermitianOperator a = random_hermitian(dim, derive_seed(s, 0));
    const StateVector psi = random_state(dim, derive_seed(s, 1));
    const FieldDecomposition d = field_decompose(a, psi, cfg);
    const CVector x = hamiltonian_field(a, psi, cfg);
    EXPECT_LE((d.vertical + d.horizontal.vec() - x).cwiseAbs().maxCoeff(), 1e-10);
    // |(A - <A>) psi| = Delta A, and the field carries a 1/hbar.
    const double delta = std::sqrt(oracle::spectral_variance(a.matrix(), psi.vec()));
    EXPECT_NEAR(d.horizontal.norm() * cfg.hbar, delta, 1e-10);
  }
}

TEST(SchrodingerFlow, Examples) {
  const StateVector psi = random_state(4, 9);
  const HermitianOperator h = random_hermitian(4, 10);
  expect_vec_near(schrodinger_flow(h, psi, 0.0).vec(), psi.vec());

  const StateVector up = StateVector::basis(2, 0);
  const StateVector out = schrodinger_flow(pauli::z(), up, std::numbers::pi);
  expect_vec_near(out.vec(), vec2(std::exp(-kI * std::numbers::pi), 0.0));
  EXPECT_NEAR(std::abs(oracle::inner_loop(out.vec(), up.vec())), 1.0, kTol);
}

TEST(SchrodingerFlow, UnitaryComposesAndMatchesOracle) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Index dim = 2 + static_cast<Index>(s % 6);
    const Config cfg{.hbar = 0.7};
    const HermitianOperator h = random_hermitian(dim, derive_seed(s, 0));
    const StateVector psi = random_state(dim, derive_seed(s, 1));
    const double t1 = 0.3 + 0.01 * static_cast<double>(s);
    const double t2 = -1.1;
    const StateVector once = schrodinger_flow(h, psi, t1 + t2, cfg);
    const StateVector twice = schrodinger_flow(h, schrodinger_flow(h, psi, t1, cfg), t2, cfg);
    EXPECT_NEAR(once.vec().norm(), 1.0, 1e-12);
    EXPECT_LE((once.vec() - twice.vec()).cwiseAbs().maxCoeff(), 1e-10);
    const CVector want = oracle::unitary_flow(h.matrix() / cfg.hbar, psi.vec(), t1 + t2);
    EXPECT_LE((once.vec() - want).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(RandomDraws, DeterministicHermitianWithRealSpectrum) {
  const HermitianOperator a = random_hermitian(5, 42);
  const HermitianOperator b = random_hermitian(5, 42);
  EXPECT_EQ(a.matrix(), b.matrix());
  EXPECT_NE(a.matrix(), random_hermitian(5, 43).matrix());
  EXPECT_NO_THROW(HermitianOperator{a.matrix()});
  EXPECT_EQ(random_state(3, 8).vec(), random_state(3, 8).vec());

  const CMatrix m = random_hermitian(2, 7).matrix();
  const Eigen::ComplexEigenSolver<CMatrix> es(m);
  for (Index k = 0; k < 2; ++k) EXPECT_LE(std::abs(es.eigenvalues()[k].imag()), 1e-12);
}

TEST(RandomDraws, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(9, 4), derive_seed(9, 4));
}

TEST(OperatorEdits, ShiftAndScale) {
  const HermitianOperator a = random_hermitian(3, 1);
  EXPECT_LE((a.shifted(2.5).matrix() - a.matrix() - 2.5 * CMatrix::Identity(3, 3))
                .cwiseAbs()
                .maxCoeff(),
            kTol);
  EXPECT_LE((a.scaled(-3.0).matrix() + 3.0 * a.matrix()).cwiseAbs().maxCoeff(), kTol);
}

TEST(Config, Validate) {
  EXPECT_NO_THROW(Config{}.validate());
  EXPECT_THROW((Config{.hbar = 0.0}).validate(), ArgumentError);
  EXPECT_THROW((Config{.tol_eq = -1.0}).validate(), ArgumentError);
  EXPECT_THROW((Config{.tol_psd = NAN}).validate(), ArgumentError);
}
