#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "collider/operator.hpp"
#include "collider/random_ops.hpp"
#include "oracles.hpp"

using namespace collider;

TEST(HilbertDims, RejectsBadFactors) {
  EXPECT_THROW(HilbertDims({2, 1}), DimensionError);
  EXPECT_THROW(HilbertDims({2, 0, 3}), DimensionError);
  EXPECT_EQ(HilbertDims({2, 3, 4}).total(), 24u);
  EXPECT_EQ(HilbertDims().total(), 1u);
}

TEST(HilbertDims, CapacityLimit) {
  std::vector<int> many(15, 2);
  EXPECT_THROW(Operator::identity(HilbertDims(many)), CapacityError);
}

TEST(Operator, RejectsNonSquareAndMismatchedDims) {
  EXPECT_THROW(Operator(HilbertDims{2}, Matrix::Zero(2, 3)), DimensionError);
  EXPECT_THROW(Operator(HilbertDims{2, 2}, Matrix::Zero(3, 3)), DimensionError);
  EXPECT_THROW(pauli::x() * Operator::identity(HilbertDims{3}), DimensionError);
}

TEST(Operator, PauliConventions) {
  const Operator g = pauli::ground();
  EXPECT_NEAR((pauli::plus() * g * pauli::minus() - pauli::excited()).norm(), 0.0, 1e-15);
  EXPECT_NEAR((pauli::minus() * pauli::excited() * pauli::plus() - g).norm(), 0.0, 1e-15);
  EXPECT_NEAR((commutator(pauli::x(), pauli::y()) - cplx(0, 2) * pauli::z()).norm(), 0.0, 1e-15);
}

TEST(Operator, KronMatchesLoops) {
  Rng rng(1);
  const Operator a(HilbertDims{2}, random_complex(2, 2, rng));
  const Operator b(HilbertDims{3}, random_complex(3, 3, rng));
  const Operator ab = kron(a, b);
  EXPECT_EQ(ab.dims(), (HilbertDims{2, 3}));
  EXPECT_NEAR((ab.data() - oracle::kron(a.data(), b.data())).norm(), 0.0, 1e-14);
}

TEST(Operator, PartialTraceMatchesLoops) {
  Rng rng(2);
  const HilbertDims dims{2, 3, 2};
  const Operator rho = random_density(dims, rng);
  const std::vector<std::vector<int>> keeps = {{0}, {1}, {2}, {0, 2}, {1, 2}, {0, 1, 2}};
  for (const auto& keep : keeps) {
    const Operator red = partial_trace(rho, keep);
    EXPECT_NEAR((red.data() - oracle::partial_trace(rho.data(), dims.values(), keep)).norm(), 0.0, 1e-13);
  }
  EXPECT_NEAR(std::abs(partial_trace(rho, {})(0, 0) - 1.0), 0.0, 1e-13);
}

TEST(Operator, PartialTraceOfProductIsFactor) {
  Rng rng(3);
  const Operator a = random_density(HilbertDims{3}, rng);
  const Operator b = random_density(HilbertDims{2}, rng);
  EXPECT_NEAR((partial_trace(kron(a, b), {0}) - a).norm(), 0.0, 1e-14);
  EXPECT_NEAR((partial_trace(kron(a, b), {1}) - b).norm(), 0.0, 1e-14);
}

TEST(Operator, ExpmMatchesTaylor) {
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix m = 0.7 * random_complex(4, 4, rng);
    EXPECT_NEAR((expm(m) - oracle::expm(m)).norm() / oracle::expm(m).norm(), 0.0, 1e-12);
    const Operator h = random_hermitian(HilbertDims{2, 2}, rng);
    EXPECT_NEAR((expm(h, cplx(0, -0.9)).data() - oracle::expm(cplx(0, -0.9) * h.data())).norm(), 0.0, 1e-12);
  }
}

TEST(Operator, ExpmOfHermitianGeneratorIsUnitary) {
  Rng rng(5);
  const Operator h = random_hermitian(HilbertDims{3, 2}, rng);
  EXPECT_TRUE(expm(h, cplx(0, -2.5)).is_unitary(1e-12));
}

TEST(Operator, EmbedMatchesLoops) {
  Rng rng(6);
  const HilbertDims dims{2, 3, 2};
  const Operator op(HilbertDims{2, 2}, random_complex(4, 4, rng));
  for (const std::vector<int>& sites : {std::vector<int>{0, 2}, std::vector<int>{2, 0}}) {
    EXPECT_NEAR((embed(op, sites, dims).data() - oracle::embed(op.data(), sites, dims.values())).norm(), 0.0, 1e-14);
  }
  const Operator one(HilbertDims{3}, random_complex(3, 3, rng));
  EXPECT_NEAR((embed_local(one, 1, dims).data() - oracle::embed(one.data(), {1}, dims.values())).norm(), 0.0, 1e-14);
  EXPECT_THROW(embed(op, std::vector<int>{0, 0}, dims), DimensionError);
  EXPECT_THROW(embed(op, std::vector<int>{0, 1}, dims), DimensionError);
}

TEST(Operator, ApplyLocalMatchesEmbeddedProduct) {
  Rng rng(7);
  const HilbertDims dims{2, 3, 2};
  const Matrix op = random_complex(4, 4, rng);
  Matrix states = random_complex(12, 5, rng);
  const std::vector<int> sites{2, 0};
  const Matrix expected = oracle::embed(op, sites, dims.values()) * states;
  apply_local(states, op, sites, dims);
  EXPECT_NEAR((states - expected).norm(), 0.0, 1e-13);
}

TEST(Operator, JsonRoundTrip) {
  Rng rng(8);
  const Operator op(HilbertDims{2, 3}, random_complex(6, 6, rng));
  const nlohmann::json j = op;
  EXPECT_EQ(j.at("dims"), nlohmann::json({2, 3}));
  const Operator back = nlohmann::json::parse(j.dump()).get<Operator>();
  EXPECT_EQ(back.dims(), op.dims());
  EXPECT_EQ((back.data() - op.data()).norm(), 0.0);
}

TEST(Operator, DensityChecks) {
  Rng rng(9);
  EXPECT_TRUE(random_density(HilbertDims{2, 2}, rng).is_density_matrix());
  EXPECT_TRUE(random_pure(HilbertDims{3}, rng).is_density_matrix());
  EXPECT_FALSE(pauli::z().is_density_matrix());
  EXPECT_FALSE((2.0 * pauli::ground()).is_density_matrix());
}
