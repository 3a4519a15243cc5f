#pragma once

// Independent reference computations shared by the unit and acceptance tests.
// Nothing here calls into the FFT path of the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rtpca/random.hpp"
#include "rtpca/tensor3.hpp"
#include "rtpca/tlinalg.hpp"

namespace oracle {

using rtpca::Dims;
using rtpca::Rng;
using rtpca::Tensor3;

inline Tensor3 randn(Dims d, Rng& rng) { return Tensor3::random_normal(d, rng); }

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

/// Direct O(I3^2) DFT along mode 3.
inline std::vector<Eigen::MatrixXcd> dft(const Tensor3& a) {
  const std::size_t n3 = a.n3();
  std::vector<Eigen::MatrixXcd> out(n3, Eigen::MatrixXcd::Zero(a.n1(), a.n2()));
  for (std::size_t k = 0; k < n3; ++k) {
    for (std::size_t t = 0; t < n3; ++t) {
      const double ang = -2.0 * std::numbers::pi * double(k * t % n3) / double(n3);
      out[k] += std::complex<double>(std::cos(ang), std::sin(ang)) *
                a.slice(t).cast<std::complex<double>>();
    }
  }
  return out;
}

/// All singular values of all DFT slices (zeros included).
inline std::vector<double> all_singular_values(const Tensor3& a) {
  std::vector<double> out;
  for (const auto& s : dft(a)) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s);
    const auto& v = svd.singularValues();
    out.insert(out.end(), v.data(), v.data() + v.size());
  }
  return out;
}

inline double smax(const Tensor3& a) {
  const auto v = all_singular_values(a);
  return *std::max_element(v.begin(), v.end());
}

inline double smin(const Tensor3& a) {
  const auto v = all_singular_values(a);
  return *std::min_element(v.begin(), v.end());
}

inline double fro(const Tensor3& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

inline double max_abs(const Tensor3& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

inline double row_l2_max(const Tensor3& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.n1(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.n3(); ++k)
      for (std::size_t j = 0; j < a.n2(); ++j) s += a(i, j, k) * a(i, j, k);
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

inline double row_l1_max(const Tensor3& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.n1(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.n3(); ++k)
      for (std::size_t j = 0; j < a.n2(); ++j) s += std::abs(a(i, j, k));
    best = std::max(best, s);
  }
  return best;
}

/// (1/I3) * sum of nuclear norms of all DFT slices.
inline double tnn(const Tensor3& a) {
  const auto v = all_singular_values(a);
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(a.n3());
}

/// Sum of the first frontal slice's diagonal.
inline double trace(const Tensor3& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(a.n1(), a.n2()); ++i) s += a(i, i, 0);
  return s;
}

/// Transpose by definition: slice 0 transposed, slices 1..I3-1 transposed
/// and reversed.
inline Tensor3 transpose(const Tensor3& a) {
  Tensor3 t(a.n2(), a.n1(), a.n3());
  for (std::size_t k = 0; k < a.n3(); ++k) {
    const std::size_t src = k == 0 ? 0 : a.n3() - k;
    for (std::size_t i = 0; i < a.n1(); ++i)
      for (std::size_t j = 0; j < a.n2(); ++j) t(j, i, k) = a(i, j, src);
  }
  return t;
}

/// Recovers a tensor from the first block column of a block circulant matrix.
inline Tensor3 unbcirc(const Eigen::MatrixXd& m, std::size_t n1, std::size_t n2,
                       std::size_t n3) {
  Tensor3 t(n1, n2, n3);
  for (std::size_t k = 0; k < n3; ++k) t.set_slice(k, m.block(k * n1, 0, n1, n2));
  return t;
}

// ---------------------------------------------------------------------------
// Norm and trace inequalities from the tensor-operation property list.

struct PropertyCheck {
  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double worst_excess = 0.0;  // largest (lhs - rhs) / scale seen
};

/// lhs <= rhs up to `slack` relative to max(1, |lhs|, |rhs|).
inline bool holds(PropertyCheck& c, double lhs, double rhs, double slack = 1e-9) {
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  const double excess = (lhs - rhs) / scale;
  ++c.trials;
  c.worst_excess = std::max(c.worst_excess, excess);
  if (excess > slack) {
    ++c.failures;
    return false;
  }
  return true;
}

inline Tensor3 orthogonal(std::size_t n, std::size_t n3, Rng& rng) {
  return rtpca::tsvd(randn({n, n, n3}, rng)).u;
}

/// Runs every inequality `trials` times on fresh random inputs. Shapes are
/// drawn so that the lower bounds apply (B square or wide where sigma_min(B)
/// is used, A square or tall for the sigma_min(A) bound).
inline std::vector<PropertyCheck> run_property_suite(Rng& rng, std::size_t trials) {
  using rtpca::conj_transpose;
  using rtpca::tprod;
  std::vector<PropertyCheck> checks;
  auto add = [&](const std::string& name, const std::function<void(PropertyCheck&)>& f) {
    PropertyCheck c;
    c.name = name;
    for (std::size_t t = 0; t < trials; ++t) f(c);
    checks.push_back(c);
  };

  auto dims_chain = [&](std::size_t& m, std::size_t& n, std::size_t& p, std::size_t& n3) {
    m = pick(rng, 1, 6);
    n = pick(rng, 1, 5);
    p = pick(rng, n, 6);  // p >= n: B is square or wide
    n3 = pick(rng, 1, 6);
  };

  add("||A*B||_F >= ||A||_F smin(B)", [&](PropertyCheck& c) {
    std::size_t m, n, p, n3;
    dims_chain(m, n, p, n3);
    const Tensor3 a = randn({m, n, n3}, rng), b = randn({n, p, n3}, rng);
    holds(c, fro(a) * smin(b), fro(tprod(a, b)));
  });
  add("||A*B||_2 >= ||A||_2 smin(B)", [&](PropertyCheck& c) {
    std::size_t m, n, p, n3;
    dims_chain(m, n, p, n3);
    const Tensor3 a = randn({m, n, n3}, rng), b = randn({n, p, n3}, rng);
    holds(c, smax(a) * smin(b), smax(tprod(a, b)));
  });
  add("||A*B||_2inf >= ||A||_2inf smin(B)", [&](PropertyCheck& c) {
    std::size_t m, n, p, n3;
    dims_chain(m, n, p, n3);
    const Tensor3 a = randn({m, n, n3}, rng), b = randn({n, p, n3}, rng);
    holds(c, row_l2_max(a) * smin(b), row_l2_max(tprod(a, b)));
  });
  add("||A||_2 <= sqrt(I3) ||A||_F", [&](PropertyCheck& c) {
    const std::size_t n3 = pick(rng, 1, 6);
    const Tensor3 a = randn({pick(rng, 1, 6), pick(rng, 1, 6), n3}, rng);
    holds(c, smax(a), std::sqrt(double(n3)) * fro(a));
  });
  add("|smin(A) - smin(B)| <= ||A - B||_2", [&](PropertyCheck& c) {
    const Dims d{pick(rng, 1, 6), pick(rng, 1, 6), pick(rng, 1, 6)};
    const Tensor3 a = randn(d, rng);
    const Tensor3 b = a + rng.uniform(0.0, 1.0) * randn(d, rng);
    holds(c, std::abs(smin(a) - smin(b)), smax(a - b));
  });
  add("|smax(A) - smax(B)| <= ||A - B||_2", [&](PropertyCheck& c) {
    const Dims d{pick(rng, 1, 6), pick(rng, 1, 6), pick(rng, 1, 6)};
    const Tensor3 a = randn(d, rng);
    const Tensor3 b = a + rng.uniform(0.0, 1.0) * randn(d, rng);
    holds(c, std::abs(smax(a) - smax(b)), smax(a - b));
  });
  add("smin(A) s1(B) <= s1(A*B)", [&](PropertyCheck& c) {
    const std::size_t n = pick(rng, 1, 5), n3 = pick(rng, 1, 6);
    const Tensor3 a = randn({pick(rng, n, 6), n, n3}, rng);  // square or tall
    const Tensor3 b = randn({n, pick(rng, 1, 6), n3}, rng);
    holds(c, smin(a) * smax(b), smax(tprod(a, b)));
  });
  add("||A+B||_2 <= ||A||_2 + ||B||_2", [&](PropertyCheck& c) {
    const Dims d{pick(rng, 1, 6), pick(rng, 1, 6), pick(rng, 1, 6)};
    const Tensor3 a = randn(d, rng), b = randn(d, rng);
    holds(c, smax(a + b), smax(a) + smax(b));
  });
  add("tr(A*B) <= ||A||_2 tr(B), B = C*C^T", [&](PropertyCheck& c) {
    const std::size_t n = pick(rng, 1, 6), n3 = pick(rng, 1, 6);
    const Tensor3 a = randn({n, n, n3}, rng);
    const Tensor3 cc = randn({n, pick(rng, 1, 6), n3}, rng);
    const Tensor3 b = tprod(cc, transpose(cc));
    holds(c, trace(tprod(a, b)), smax(a) * trace(b));
  });
  add("||A*B||_2 <= ||A||_2 ||B||_2", [&](PropertyCheck& c) {
    std::size_t m, n, p, n3;
    dims_chain(m, n, p, n3);
    const Tensor3 a = randn({m, n, n3}, rng), b = randn({n, pick(rng, 1, 6), n3}, rng);
    holds(c, smax(tprod(a, b)), smax(a) * smax(b));
  });
  add("tr(A*B) <= ||A||_2 ||B||_*", [&](PropertyCheck& c) {
    const std::size_t n = pick(rng, 1, 6), p = pick(rng, 1, 6), n3 = pick(rng, 1, 6);
    const Tensor3 a = randn({n, p, n3}, rng), b = randn({p, n, n3}, rng);
    holds(c, trace(tprod(a, b)), smax(a) * tnn(b));
  });
  auto rank_r = [&](std::size_t& r) {
    r = pick(rng, 1, 4);
    const std::size_t n3 = pick(rng, 1, 6);
    return tprod(randn({pick(rng, r, 7), r, n3}, rng), randn({r, pick(rng, r, 7), n3}, rng));
  };
  add("||A||_* <= sqrt(R) ||A||_F for tubal rank R", [&](PropertyCheck& c) {
    std::size_t r;
    const Tensor3 a = rank_r(r);
    holds(c, tnn(a), std::sqrt(double(r)) * fro(a));
  });
  add("||A||_F^2 <= R ||A||_2^2 for tubal rank R", [&](PropertyCheck& c) {
    std::size_t r;
    const Tensor3 a = rank_r(r);
    holds(c, fro(a) * fro(a), double(r) * smax(a) * smax(a));
  });
  add("||A*B||_F <= ||A||_2 ||B||_F", [&](PropertyCheck& c) {
    std::size_t m, n, p, n3;
    dims_chain(m, n, p, n3);
    const Tensor3 a = randn({m, n, n3}, rng), b = randn({n, pick(rng, 1, 6), n3}, rng);
    holds(c, fro(tprod(a, b)), smax(a) * fro(b));
  });
  add("||A*B||_2inf <= ||A||_2inf ||B||_2", [&](PropertyCheck& c) {
    std::size_t m, n, p, n3;
    dims_chain(m, n, p, n3);
    const Tensor3 a = randn({m, n, n3}, rng), b = randn({n, pick(rng, 1, 6), n3}, rng);
    holds(c, row_l2_max(tprod(a, b)), row_l2_max(a) * smax(b));
  });
  add("||A*B^T||_inf <= ||A||_2inf ||B||_2inf", [&](PropertyCheck& c) {
    const std::size_t r = pick(rng, 1, 5), n3 = pick(rng, 1, 6);
    const Tensor3 a = randn({pick(rng, 1, 6), r, n3}, rng);
    const Tensor3 b = randn({pick(rng, 1, 6), r, n3}, rng);
    holds(c, max_abs(tprod(a, conj_transpose(b))), row_l2_max(a) * row_l2_max(b));
  });
  add("||A*B||_2inf <= ||A||_1inf ||B||_2inf", [&](PropertyCheck& c) {
    std::size_t m, n, p, n3;
    dims_chain(m, n, p, n3);
    const Tensor3 a = randn({m, n, n3}, rng), b = randn({n, pick(rng, 1, 6), n3}, rng);
    holds(c, row_l2_max(tprod(a, b)), row_l1_max(a) * row_l2_max(b));
  });
  return checks;
}

/// Identities from the same list, checked to a relative tolerance.
inline std::vector<PropertyCheck> run_identity_suite(Rng& rng, std::size_t trials,
                                                     double tol = 1e-8) {
  using rtpca::tprod;
  std::vector<PropertyCheck> checks;
  auto rel = [](double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
  };
  auto add = [&](const std::string& name, const std::function<double()>& gap) {
    PropertyCheck c;
    c.name = name;
    for (std::size_t t = 0; t < trials; ++t) holds(c, gap(), 0.0, tol);
    checks.push_back(c);
  };
  add("||A||_F = ||Ahat||_F / sqrt(I3)", [&] {
    const Tensor3 a = randn({pick(rng, 1, 6), pick(rng, 1, 6), pick(rng, 1, 6)}, rng);
    double s = 0.0;
    for (const auto& m : dft(a)) s += m.squaredNorm();
    return rel(fro(a), std::sqrt(s / double(a.n3())));
  });
  add("||A||_2 = ||bcirc(A)||_2", [&] {
    const Tensor3 a = randn({pick(rng, 1, 5), pick(rng, 1, 5), pick(rng, 1, 5)}, rng);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rtpca::bcirc(a));
    return rel(smax(a), svd.singularValues()(0));
  });
  add("orthogonal Q preserves Frobenius and spectral norms", [&] {
    const std::size_t n = pick(rng, 1, 5), n3 = pick(rng, 1, 6);
    const Tensor3 q = orthogonal(n, n3, rng);
    const Tensor3 a = randn({pick(rng, 1, 5), n, n3}, rng);
    const Tensor3 b = randn({n, pick(rng, 1, 5), n3}, rng);
    return std::max({rel(fro(a), fro(tprod(a, q))), rel(smax(a), smax(tprod(a, q))),
                     rel(fro(b), fro(tprod(q, b))), rel(smax(b), smax(tprod(q, b)))});
  });
  add("s1(A) = 1 / smin(A^-T)", [&] {
    const std::size_t n = pick(rng, 1, 5);
    const Tensor3 a = randn({n, n, pick(rng, 1, 6)}, rng);
    return rel(smax(a), 1.0 / smin(transpose(rtpca::tinv(a))));
  });
  add("tr(A*B) = tr(B*A)", [&] {
    const std::size_t n = pick(rng, 1, 5), p = pick(rng, 1, 5), n3 = pick(rng, 1, 6);
    const Tensor3 a = randn({n, p, n3}, rng), b = randn({p, n, n3}, rng);
    return rel(trace(tprod(a, b)), trace(tprod(b, a)));
  });
  return checks;
}

}  // namespace oracle
