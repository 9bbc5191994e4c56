#include <doctest.h>

#include <numbers>

#include "gfrht/context.hpp"
#include "oracles.hpp"

using namespace gfrht;
using oracle::cd;
using oracle::J;

namespace {

constexpr double pi = std::numbers::pi;

Vector<double> social_signal() {
  Vector<double> x(5);
  x << 0.8, 0.3, 0.5, 0.2, 0.6;
  return x;
}

double cond2(const SpectralContext<double>& ctx) { return ctx.frft->cond() * ctx.frft->cond(); }

EigenSystem<double> classes_only(std::initializer_list<cd> values) {
  EigenSystem<double> e;
  e.eigenvalues.resize(static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (cd v : values) e.eigenvalues(k++) = v;
  e.im_tol = 1e-9;
  return e;
}

// x restricted to the spectral components with non-real eigenvalues, in the
// alpha-th fractional domain.
CVector<double> restrict_to_complex(const SpectralContext<double>& ctx, double alpha, const CVector<double>& x) {
  CVector<double> xa = ctx.frft->apply(alpha, x);
  for (Eigen::Index k = 0; k < xa.size(); ++k) {
    if (classify(ctx.eig->eigenvalues(k), ctx.eig->im_tol) == SpectralClass::Zero) xa(k) = 0;
  }
  return ctx.frft->apply(-alpha, xa);
}

}  // namespace

TEST_CASE("transfer_diag examples") {
  const auto e = classes_only({cd(0.3, 0.8), cd(-0.5, 0), cd(0.3, -0.8)});
  const auto t = transfer_diag(e, pi / 2);
  CHECK(t.entries(0) == cd(0, -1));
  CHECK(t.entries(1) == cd(0, 0));
  CHECK(t.entries(2) == cd(0, 1));
  CHECK(t.classes[0] == SpectralClass::PosIm);
  CHECK(t.classes[1] == SpectralClass::Zero);
  CHECK(t.classes[2] == SpectralClass::NegIm);

  const auto id = transfer_diag(e, 0.0);
  for (Eigen::Index k = 0; k < 3; ++k) CHECK(id.entries(k) == cd(1, 0));

  // Off the quarter turns beta is held to 2^-40 turns.
  const auto third = transfer_diag(e, pi / 3);
  CHECK(std::abs(third.entries(1) - cd(0.5, 0)) < 1e-11);
  CHECK(std::abs(third.entries(0) - std::exp(-J * (pi / 3))) < 1e-11);
  CHECK(std::abs(third.entries(2) - std::exp(J * (pi / 3))) < 1e-11);
}

TEST_CASE("transfer_diag magnitudes and reduction") {
  const auto e = classes_only({cd(0.1, 0.2), cd(0.4, 0), cd(0.1, -0.2)});
  for (double beta : {-7.0, -1.0, 0.3, 2.0, 6.0, 13.0}) {
    const auto t = transfer_diag(e, beta);
    CHECK(std::abs(std::abs(t.entries(0)) - 1.0) < 1e-15);
    CHECK(std::abs(std::abs(t.entries(2)) - 1.0) < 1e-15);
    CHECK(std::abs(std::abs(t.entries(1)) - std::abs(std::cos(beta))) < 1e-11);
    CHECK(t.beta >= 0.0);
    CHECK(t.beta < 2 * pi);
    CHECK(t.entries == transfer_diag(e, beta + 2 * pi).entries);
  }
}

TEST_CASE("ght annihilates the real-eigenvalue span") {
  const auto ctx = make_context(generate_graph(Social5{}, 0));
  CVector<double> spectrum = CVector<double>::Zero(5);
  for (Eigen::Index k = 0; k < 5; ++k) {
    if (ctx.eig->eigenvalues(k).imag() == 0.0) spectrum(k) = cd(1.0 + static_cast<double>(k), 0);
  }
  const CVector<double> x = ctx.gft.inverse() * spectrum;
  CHECK(oracle::max_abs(ght(ctx.gft, *ctx.eig, x)) < 1e-12);

  Matrix<double> sym(3, 3);
  sym << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  const auto s = make_context(build_graph(sym, "sym"));
  CHECK(oracle::max_abs(ght(s.gft, *s.eig, Vector<double>::Ones(3))) == 0.0);
}

TEST_CASE("ght matches the dense oracle") {
  const Vector<double> x = social_signal();
  const auto g = generate_graph(Social5{}, 0);
  const auto ctx = make_context(g);
  const CVector<double> ref = oracle::ght(g.adjacency(), x);
  CHECK(oracle::max_abs(CVector<double>(ght(ctx.gft, *ctx.eig, x) - ref)) < 1e-10);

  // C4 with a unit impulse; U diag(0, -j, 0, j) U^-1 in the oracle basis.
  const auto c4 = generate_graph(DirectedCycle{4}, 0);
  const auto c = make_context(c4);
  Vector<double> delta = Vector<double>::Zero(4);
  delta(0) = 1;
  const CVector<double> out = ght(c.gft, *c.eig, delta);
  CHECK(oracle::max_abs(CVector<double>(out - oracle::ght(c4.adjacency(), delta))) < 1e-12);
  // Closed form: the Hilbert kernel of the 4-point DFT, (0, 1/2, 0, -1/2) up to orientation.
  CHECK(std::abs(out(0)) < 1e-12);
  CHECK(std::abs(out(2)) < 1e-12);
  CHECK(std::abs(std::abs(out(1)) - 0.5) < 1e-12);
  CHECK(std::abs(out(1) + out(3)) < 1e-12);
}

TEST_CASE("gfrht examples") {
  const auto g = generate_graph(Social5{}, 0);
  const auto ctx = make_context(g);
  const Vector<double> x = social_signal();
  for (double alpha : {-1.3, 0.0, 0.4, 1.0, 2.0}) {
    CHECK(oracle::max_abs(CVector<double>(gfrht::gfrht(ctx.hilbert(alpha, 0.0), x) - x.cast<cd>())) < 1e-9);
  }
  CHECK(oracle::max_abs(CVector<double>(gfrht::gfrht(ctx.hilbert(1.0, pi / 2), x) - ght(ctx.gft, *ctx.eig, x))) < 1e-9);

  // alpha = 0: the mask acts directly on the vertex values.
  const CVector<double> direct = transfer_diag(*ctx.eig, pi / 2).entries.cwiseProduct(x.cast<cd>());
  CHECK(oracle::max_abs(CVector<double>(gfrht::gfrht(ctx.hilbert(0.0, pi / 2), x) - direct)) < 1e-15);

  // Dense evaluation with Schur-Pade powers.
  for (auto [alpha, beta] : {std::pair{0.5, pi / 4}, std::pair{1.4, 0.3}, std::pair{-0.6, 2.0}}) {
    const CMatrix<double> h =
        oracle::gfrht_matrix(ctx.eig->vectors, ctx.eig->eigenvalues, ctx.eig->im_tol, alpha, beta);
    CHECK(oracle::max_abs(CVector<double>(gfrht::gfrht(ctx.hilbert(alpha, beta), x) - h * x.cast<cd>())) < 1e-9);
  }
}

TEST_CASE("HilbertConfig reduces beta and validates alpha") {
  const auto ctx = make_context(generate_graph(Social5{}, 0));
  CHECK(ctx.hilbert(0.5, 2 * pi + 0.25).beta() == doctest::Approx(0.25).epsilon(1e-11));
  CHECK(ctx.hilbert(0.5, -pi / 2).beta() == doctest::Approx(1.5 * pi));
  CHECK(ctx.hilbert(0.5, pi / 2).with(0.7, pi).alpha() == 0.7);
  try {
    ctx.hilbert(9.0, 0.1);
    FAIL("expected AlphaOutOfRange");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AlphaOutOfRange);
  }
}

TEST_CASE("fractional_kernel") {
  const auto ctx = make_context(generate_graph(Social5{}, 0));
  const auto cfg = ctx.hilbert(0.6, 0.0);
  CHECK(oracle::max_abs(CVector<double>(fractional_kernel(cfg) - ctx.frft->apply(-0.6, CVector<double>::Ones(5)))) ==
        0.0);

  const auto c4 = make_context(generate_graph(DirectedCycle{4}, 0));
  const CVector<double> k = fractional_kernel(c4.hilbert(1.0, pi / 2));
  CVector<double> mask(4);
  mask << cd(0, 1), cd(0, 0), cd(0, -1), cd(0, 0);  // eigenvalues -j, 1, j, -1
  CHECK(oracle::max_abs(CVector<double>(k - c4.eig->vectors * mask)) < 1e-12);

  Rng rng(3);
  for (const auto& g : oracle::random_graphs(5, 81, 6, 6)) {
    const auto c = make_context(g);
    const auto h = c.hilbert(0.7, pi / 5);
    const Vector<double> x = oracle::random_signal(rng, 6);
    const CVector<double> lhs = c.frft->apply(0.7, gfrht::gfrht(h, x));
    const CVector<double> rhs = c.frft->apply(0.7, x.cast<cd>()).cwiseProduct(h.transfer().entries);
    CHECK(oracle::max_abs(CVector<double>(lhs - rhs)) < 1e-9);
  }
}

TEST_CASE("poly_filter_coeffs examples") {
  Matrix<double> s(2, 2);
  s << 0, 1, 1, 0;
  const auto e2 = eigendecompose(build_graph(s, "s"));
  const CVector<double> h2 = poly_filter_coeffs(e2, pi / 4);
  REQUIRE(h2.size() == 2);
  CHECK(std::abs(h2(0) - cd(std::cos(pi / 4), 0)) < 1e-12);
  CHECK(std::abs(h2(1)) < 1e-12);

  const auto c4 = eigendecompose(generate_graph(DirectedCycle{4}, 0));
  const CVector<double> h4 = poly_filter_coeffs(c4, pi / 2);
  REQUIRE(h4.size() == 4);
  // Oracle: solve the 4x4 Vandermonde at (1, j, -1, -j) for (0, -j, 0, j).
  CMatrix<double> v(4, 4);
  const cd nodes[] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
  CVector<double> rhs(4);
  rhs << cd(0, 0), cd(0, -1), cd(0, 0), cd(0, 1);
  for (int i = 0; i < 4; ++i)
    for (int l = 0; l < 4; ++l) v(i, l) = std::pow(nodes[i], l);
  const CVector<double> ref = v.fullPivLu().solve(rhs);
  CHECK(oracle::max_abs(CVector<double>(h4 - ref)) < 1e-12);

  for (const auto& g : oracle::random_graphs(5, 91, 6, 6)) {
    const auto e = eigendecompose(g);
    const CVector<double> h = poly_filter_coeffs(e, pi / 5);
    const auto t = transfer_diag(e, pi / 5);
    for (Eigen::Index k = 0; k < e.n(); ++k) {
      cd sum(0), p(1);
      for (Eigen::Index l = 0; l < h.size(); ++l) {
        sum += h(l) * p;
        p *= e.eigenvalues(k);
      }
      CHECK(std::abs(sum - t.entries(k)) < 1e-8);
    }
  }
}

TEST_CASE("poly_filter_coeffs: duplicates collapse, ill-conditioned systems are rejected") {
  const auto grid = eigendecompose(generate_graph(Grid2D{3}, 0));
  const CVector<double> h = poly_filter_coeffs(grid, pi / 3);
  CHECK(h.size() == 3);  // eigenvalues are the cube roots of unity, each 3 times

  const auto big = eigendecompose(generate_graph(Community{10, 6, 0.01}, 42));
  try {
    poly_filter_coeffs(big, pi / 3);
    FAIL("expected IllConditionedVandermonde");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IllConditionedVandermonde);
  }
}

TEST_CASE("poly_filter_apply examples") {
  const auto ctx = make_context(generate_graph(Social5{}, 0));
  const Vector<double> x = social_signal();
  CVector<double> one(1);
  one << cd(1, 0);
  CHECK(poly_filter_apply(ctx.hilbert(0.3, 0.2), one, x) == x.cast<cd>());

  const auto c4 = make_context(generate_graph(DirectedCycle{4}, 0));
  Vector<double> delta = Vector<double>::Zero(4);
  delta(0) = 1;
  const auto cfg4 = c4.hilbert(1.0, pi / 2);
  const CVector<double> p4 = poly_filter_apply(cfg4, poly_filter_coeffs(*c4.eig, pi / 2), delta);
  CHECK(oracle::max_abs(CVector<double>(p4 - ght(c4.gft, *c4.eig, delta))) < 1e-8);

  const auto cfg = ctx.hilbert(0.5, pi / 4);
  const CVector<double> p = poly_filter_apply(cfg, poly_filter_coeffs(*ctx.eig, pi / 4), x);
  CHECK(oracle::max_abs(CVector<double>(p - gfrht::gfrht(cfg, x))) < 1e-6);
}

TEST_CASE("periodicity in beta is exact") {
  Rng rng(12);
  for (const auto& g : oracle::random_graphs(20, 101)) {
    const auto ctx = make_context(g);
    const Vector<double> x = oracle::random_signal(rng, g.n());
    for (double beta : {0.3, pi / 2, 2.9, -1.1}) {
      CHECK(gfrht::gfrht(ctx.hilbert(0.7, beta), x) == gfrht::gfrht(ctx.hilbert(0.7, beta + 2 * pi), x));
    }
  }
}

TEST_CASE("linearity") {
  Rng rng(13);
  for (const auto& g : oracle::random_graphs(20, 111)) {
    const auto ctx = make_context(g);
    const Eigen::Index n = g.n();
    const CVector<double> x = oracle::random_complex(rng, n);
    const CVector<double> y = oracle::random_complex(rng, n);
    const cd a(1.5, -0.2), b(-0.7, 0.9);
    const auto cfg = ctx.hilbert(1.3, 0.9);
    const CVector<double> lhs = gfrht::gfrht(cfg, CVector<double>(a * x + b * y));
    const CVector<double> rhs = a * gfrht::gfrht(cfg, x) + b * gfrht::gfrht(cfg, y);
    CHECK((lhs - rhs).norm() <= 1e-10 * std::max(1.0, rhs.norm()));
  }
}

TEST_CASE("commutes with the fractional shift") {
  Rng rng(14);
  for (const auto& g : oracle::random_graphs(20, 121)) {
    const auto ctx = make_context(g);
    const Vector<double> x = oracle::random_signal(rng, g.n());
    for (double alpha : {0.4, 1.0, 1.6}) {
      const auto cfg = ctx.hilbert(alpha, 1.1);
      const CMatrix<double> shift = fractional_shift(*ctx.frft, *ctx.eig, alpha);
      const CVector<double> lhs = gfrht::gfrht(cfg, CVector<double>(shift * x.cast<cd>()));
      const CVector<double> rhs = shift * gfrht::gfrht(cfg, x);
      CHECK((lhs - rhs).norm() <= 1e-7 * cond2(ctx) * std::max(1.0, x.norm()));
    }
  }
}

TEST_CASE("angle addition and invertibility on the non-real subspace") {
  Rng rng(15);
  for (const auto& g : oracle::random_graphs(20, 131)) {
    const auto ctx = make_context(g);
    for (double alpha : {0.5, 1.2}) {
      const CVector<double> x = restrict_to_complex(ctx, alpha, oracle::random_complex(rng, g.n()));
      const double b1 = 0.7, b2 = 1.9;
      const CVector<double> twice = gfrht::gfrht(ctx.hilbert(alpha, b2), gfrht::gfrht(ctx.hilbert(alpha, b1), x));
      CHECK(oracle::max_abs(CVector<double>(gfrht::gfrht(ctx.hilbert(alpha, b1 + b2), x) - twice)) < 1e-8);
      const CVector<double> back = gfrht::gfrht(ctx.hilbert(alpha, -b1), gfrht::gfrht(ctx.hilbert(alpha, b1), x));
      CHECK(oracle::max_abs(CVector<double>(back - x)) < 1e-8);
    }
  }
}

TEST_CASE("polynomial filter equals gfrht on distinct spectra") {
  Rng rng(16);
  std::vector<Graph<double>> graphs = oracle::random_graphs(20, 141);
  graphs.push_back(generate_graph(Social5{}, 0));
  graphs.push_back(generate_graph(DirectedCycle{5}, 0));
  for (const auto& g : graphs) {
    const auto ctx = make_context(g);
    const Vector<double> x = oracle::random_signal(rng, g.n());
    for (auto [alpha, beta] : {std::pair{1.0, pi / 2}, std::pair{0.5, pi / 4}, std::pair{1.7, 2.5}}) {
      const auto cfg = ctx.hilbert(alpha, beta);
      const CVector<double> p = poly_filter_apply(cfg, poly_filter_coeffs(*ctx.eig, beta), x);
      const double bound = 1e-6 * cond2(ctx) * ctx.eig->cond * ctx.eig->cond;
      CHECK(oracle::max_abs(CVector<double>(p - gfrht::gfrht(cfg, x))) < bound);
    }
  }
}
