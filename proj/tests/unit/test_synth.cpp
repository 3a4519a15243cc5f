#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rtpca/synth.hpp"
#include "rtpca/tlinalg.hpp"

using namespace rtpca;

TEST(GenLowRank, FullSizeInstanceHasRankAndKappa) {
  SynthSpec spec;  // 100 x 100 x 50, R = 5, kappa = 5
  const LowRankInstance li = gen_lowrank(spec);
  EXPECT_EQ(tubal_rank(li.x_star), 5u);
  EXPECT_NEAR(condition_number(li.x_star), 5.0, 1e-6);
  EXPECT_NEAR(sigma_max(li.x_star), 1.0, 1e-9);
}

TEST(GenLowRank, FourierSpectrumFollowsRecipe) {
  SynthSpec spec;
  spec.dims = {20, 15, 7};
  spec.rank = 4;
  spec.kappa = 3.0;
  const LowRankInstance li = gen_lowrank(spec);
  const Eigen::MatrixXd fs = fourier_singular_values(li.x_star);
  for (std::size_t k = 0; k < half_spectrum_count(7); ++k) {
    const double top = std::max(std::pow(0.5, double(k)), 1.0 / 3.0);
    for (std::size_t i = 0; i < 4; ++i) {
      const double want = top + (1.0 / 3.0 - top) * double(i) / 3.0;
      EXPECT_NEAR(fs(i, k), want, 1e-10) << "slice " << k << " index " << i;
    }
    EXPECT_LT(fs(4, k), 1e-10);
  }
}

TEST(GenLowRank, KappaOneSingleSlice) {
  SynthSpec spec;
  spec.dims = {6, 5, 1};
  spec.rank = 3;
  spec.kappa = 1.0;
  const LowRankInstance li = gen_lowrank(spec);
  EXPECT_NEAR(condition_number(li.x_star), 1.0, 1e-10);
}

TEST(GenLowRank, DeterministicPerSeed) {
  SynthSpec spec;
  spec.dims = {10, 9, 4};
  spec.rank = 2;
  EXPECT_EQ(gen_lowrank(spec).x_star, gen_lowrank(spec).x_star);
  SynthSpec other = spec;
  other.seed = 2;
  EXPECT_NE(gen_lowrank(spec).x_star, gen_lowrank(other).x_star);
}

TEST(GenLowRank, PostconditionsOverRandomSpecs) {
  Rng rng(301);
  for (int t = 0; t < 50; ++t) {
    SynthSpec spec;
    spec.dims = {oracle::pick(rng, 3, 12), oracle::pick(rng, 3, 12), oracle::pick(rng, 1, 6)};
    spec.rank = oracle::pick(rng, 1, std::min(spec.dims.n1, spec.dims.n2));
    spec.kappa = rng.uniform(1.0, 20.0);
    spec.alpha = rng.uniform(0.0, 0.5);
    spec.seed = rng.next_u64();
    const SynthInstance inst = make_instance(spec);
    EXPECT_EQ(tubal_rank(inst.low_rank.x_star), spec.rank);
    // with one component per slice the 1/kappa endpoint is never sampled
    const double h = double(half_spectrum_count(spec.dims.n3));
    const double kappa = spec.rank >= 2 ? spec.kappa
                                        : 1.0 / std::max(std::pow(0.5, h - 1.0), 1.0 / spec.kappa);
    EXPECT_NEAR(condition_number(inst.low_rank.x_star), kappa, 1e-6 * kappa);
    EXPECT_EQ(count_nonzeros(inst.s_star),
              static_cast<std::size_t>(std::floor(spec.alpha * double(spec.dims.size()))));
    EXPECT_EQ(inst.y, inst.low_rank.x_star + inst.s_star);
  }
}

TEST(GenLowRank, RejectsBadSpecs) {
  SynthSpec spec;
  spec.dims = {5, 4, 2};
  spec.rank = 5;
  EXPECT_THROW(gen_lowrank(spec), std::invalid_argument);
  spec.rank = 2;
  spec.kappa = 0.5;
  EXPECT_THROW(gen_lowrank(spec), std::invalid_argument);
  spec.kappa = 2.0;
  spec.alpha = 1.0;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(GenSparse, CountsAndRange) {
  SynthSpec spec;
  const LowRankInstance li = gen_lowrank(spec);
  const Tensor3 s = gen_sparse(li.x_star, 0.1, 77);
  EXPECT_EQ(count_nonzeros(s), 50000u);
  double sum = 0.0;
  for (double v : li.x_star.data()) sum += std::abs(v);
  const double theta = sum / double(li.x_star.size());
  EXPECT_NEAR(mean_abs_entry(li.x_star), theta, 1e-12);
  EXPECT_LE(inf_norm(s), theta);
  EXPECT_EQ(count_nonzeros(gen_sparse(li.x_star, 0.0, 77)), 0u);
  EXPECT_EQ(gen_sparse(li.x_star, 0.1, 77), s);
}

TEST(GenSparse, SliceSparsityNormBounds) {
  Rng rng(302);
  for (int t = 0; t < 20; ++t) {
    const Dims d{oracle::pick(rng, 2, 10), oracle::pick(rng, 2, 10), oracle::pick(rng, 1, 5)};
    const Tensor3 x = Tensor3::random_normal(d, rng);
    const Tensor3 s = gen_sparse(x, rng.uniform(0.0, 0.6), rng.next_u64());
    const double a = sparsity_alpha_t(s);
    const double m = inf_norm(s);
    const double slack = 1e-9;
    EXPECT_LE(spectral_norm(s), a * double(d.n3) * std::sqrt(double(d.n1 * d.n2)) * m + slack);
    EXPECT_LE(l2inf_norm(s), std::sqrt(a * double(d.n2 * d.n3)) * m + slack);
    EXPECT_LE(l1inf_norm(s), a * double(d.n2 * d.n3) * m + slack);
  }
}

TEST(Incoherence, SpikedAndRandomBases) {
  const std::size_t n = 10, r = 2, n3 = 3;
  Tensor3 u(n, r, n3), v(n, r, n3);
  for (std::size_t i = 0; i < r; ++i) u(i, i, 0) = v(i, i, 0) = 1.0;
  EXPECT_NEAR(incoherence_mu(u, v, r), double(n) / double(r), 1e-12);

  SynthSpec spec;
  spec.dims = {100, 100, 50};
  const LowRankInstance li = gen_lowrank(spec);
  const double mu = incoherence_mu(li.u, li.v, spec.rank);
  EXPECT_GE(mu, 1.0);
  EXPECT_LT(mu, 10.0);
}

TEST(SparsityAlphaT, Examples) {
  EXPECT_EQ(sparsity_alpha_t(Tensor3(5, 5, 5)), 0.0);
  Tensor3 fiber(5, 5, 5);
  for (std::size_t i = 0; i < 5; ++i) fiber(i, 2, 3) = 1.0;
  EXPECT_DOUBLE_EQ(sparsity_alpha_t(fiber), 0.2);
  Tensor3 dense(3, 3, 3);
  for (double& v : dense.data()) v = 1.0;
  EXPECT_DOUBLE_EQ(sparsity_alpha_t(dense), 1.0);
}

TEST(Metrics, RseAndPsnr) {
  Rng rng(303);
  const Tensor3 x = Tensor3::random_normal({4, 4, 2}, rng);
  EXPECT_EQ(rse(x, x), 0.0);
  EXPECT_EQ(psnr(x, x), kPsnrCap);
  EXPECT_DOUBLE_EQ(rse(Tensor3(x.dims()), x), 1.0);
  EXPECT_NEAR(rse(1.01 * x, x), 0.01, 1e-12);

  Tensor3 a(2, 2, 1), b(2, 2, 1);
  for (double& v : b.data()) v = 0.1;
  EXPECT_NEAR(psnr(a, b), 20.0, 1e-9);  // MSE 0.01 at peak 1
}
