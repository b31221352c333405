#include <doctest.h>

#include <cmath>
#include <vector>

#include "cfmimo/conic/solver.hpp"
#include "cfmimo/rng.hpp"

using namespace cfmimo;
using conic::ConeLayout;
using conic::ConicProgram;
using conic::ConicSolution;
using conic::SolveStatus;
using conic::SparseMatrix;
using conic::Triplet;

namespace {

ConicProgram make_program(int n, const std::vector<double>& c,
                          const std::vector<Triplet>& at, const std::vector<double>& b,
                          const std::vector<Triplet>& gt, const std::vector<double>& h,
                          ConeLayout cones) {
  ConicProgram prog;
  prog.n = n;
  prog.c = c;
  prog.A = SparseMatrix(static_cast<int>(b.size()), n, at);
  prog.b = b;
  prog.G = SparseMatrix(static_cast<int>(h.size()), n, gt);
  prog.h = h;
  prog.cones = std::move(cones);
  return prog;
}

}  // namespace

TEST_SUITE("conic") {

TEST_CASE("bounded LP") {
  // min -x  s.t. x <= 1, x >= 0
  auto prog = make_program(1, {-1.0}, {}, {}, {{0, 0, 1.0}, {1, 0, -1.0}}, {1.0, 0.0},
                           ConeLayout{2, {}});
  const ConicSolution sol = conic::solve(prog);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.x[0] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(sol.primal_obj == doctest::Approx(-1.0).epsilon(1e-7));
}

TEST_CASE("LP with equality") {
  // min x + y  s.t. x + y + z = 2, x,y,z >= 0 -> optimum 0 at x=y=0.
  auto prog = make_program(
      3, {1.0, 1.0, 0.0}, {{0, 0, 1.0}, {0, 1, 1.0}, {0, 2, 1.0}}, {2.0},
      {{0, 0, -1.0}, {1, 1, -1.0}, {2, 2, -1.0}}, {0.0, 0.0, 0.0}, ConeLayout{3, {}});
  const ConicSolution sol = conic::solve(prog);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(std::abs(sol.primal_obj) < 1e-7);
  CHECK(sol.x[2] == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("SOC projection toy") {
  // min t  s.t. ||(x1 - 3, x2 - 4)|| <= t  (t, x free) -> t* = 0 with x = (3,4).
  // Encoded as s = (t, 3 - x1, 4 - x2) in Q^3.
  auto prog = make_program(3, {1.0, 0.0, 0.0}, {}, {},
                           {{0, 0, -1.0}, {1, 1, 1.0}, {2, 2, 1.0}}, {0.0, 3.0, 4.0},
                           ConeLayout{0, {3}});
  const ConicSolution sol = conic::solve(prog);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(std::abs(sol.primal_obj) < 1e-6);
  CHECK(sol.x[1] == doctest::Approx(3.0).epsilon(1e-5));
  CHECK(sol.x[2] == doctest::Approx(4.0).epsilon(1e-5));
}

TEST_CASE("SOC with equality has the analytic optimum") {
  // min t s.t. ||(x1, x2)|| <= t, x1 + x2 = 2 -> t* = sqrt(2), x1 = x2 = 1.
  auto prog = make_program(3, {1.0, 0.0, 0.0}, {{0, 1, 1.0}, {0, 2, 1.0}}, {2.0},
                           {{0, 0, -1.0}, {1, 1, -1.0}, {2, 2, -1.0}}, {0.0, 0.0, 0.0},
                           ConeLayout{0, {3}});
  const ConicSolution sol = conic::solve(prog);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.primal_obj == doctest::Approx(std::sqrt(2.0)).epsilon(1e-7));
  CHECK(sol.x[1] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sol.x[2] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("infeasible LP is certified") {
  // x >= 1 and x <= 0.
  auto prog = make_program(1, {0.0}, {}, {}, {{0, 0, -1.0}, {1, 0, 1.0}}, {-1.0, 0.0},
                           ConeLayout{2, {}});
  const ConicSolution sol = conic::solve(prog);
  CHECK(sol.status == SolveStatus::primal_infeasible);
  CHECK(!sol.message.empty());
}

TEST_CASE("unbounded LP is certified") {
  // min -x s.t. x >= 0.
  auto prog = make_program(1, {-1.0}, {}, {}, {{0, 0, -1.0}}, {0.0}, ConeLayout{1, {}});
  const ConicSolution sol = conic::solve(prog);
  CHECK(sol.status == SolveStatus::dual_infeasible);
}

TEST_CASE("badly scaled LP still converges") {
  // min -x s.t. 1e-6 x <= 1e-6, x >= 0 (optimum x = 1).
  auto prog = make_program(1, {-1.0}, {}, {}, {{0, 0, 1e-6}, {1, 0, -1.0}}, {1e-6, 0.0},
                           ConeLayout{2, {}});
  const ConicSolution sol = conic::solve(prog);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.x[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("random feasible SOCPs solve with small residuals") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    // min c'x over ||x - x0|| <= r with random data: optimum x0 - r c/||c||.
    const int dim = 2 + trial % 4;
    std::vector<double> c(dim + 1, 0.0);
    std::vector<double> x0(dim);
    double cnorm2 = 0.0;
    for (int i = 0; i < dim; ++i) {
      c[1 + i] = rng.uniform(-1.0, 1.0);
      cnorm2 += c[1 + i] * c[1 + i];
      x0[i] = rng.uniform(-2.0, 2.0);
    }
    const double r = 0.5 + rng.uniform01();
    std::vector<Triplet> gt;
    std::vector<double> h;
    gt.push_back({0, 0, -1.0});
    h.push_back(0.0);
    for (int i = 0; i < dim; ++i) {
      gt.push_back({1 + i, 1 + i, 1.0});
      h.push_back(x0[i]);
    }
    // t fixed to r through an equality.
    auto prog = make_program(dim + 1, c, {{0, 0, 1.0}}, {r}, gt, h, ConeLayout{0, {dim + 1}});
    const ConicSolution sol = conic::solve(prog);
    REQUIRE(sol.status == SolveStatus::optimal);
    double expected = 0.0;
    const double cnorm = std::sqrt(cnorm2);
    for (int i = 0; i < dim; ++i) expected += c[1 + i] * (x0[i] - r * c[1 + i] / cnorm);
    CHECK(sol.primal_obj == doctest::Approx(expected).epsilon(1e-6));
    CHECK(sol.pres < 1e-7);
    CHECK(sol.dres < 1e-7);
  }
}

TEST_CASE("mixed row scales are equilibrated away") {
  // min t s.t. ||(x1, x2)|| <= t with the x-rows scaled by 1e6 and an
  // equality in 1e-6 units: optimum unchanged at t = sqrt(2) after the
  // variable substitution x' = 1e6 x, i.e. t* = sqrt(2) * 1e6 * 1e-6... the
  // constraint reads ||1e6 (x1, x2)|| <= t, 1e-6 (x1 + x2) = 2e-6.
  auto prog = make_program(3, {1.0, 0.0, 0.0}, {{0, 1, 1e-6}, {0, 2, 1e-6}}, {2e-6},
                           {{0, 0, -1.0}, {1, 1, -1e6}, {2, 2, -1e6}}, {0.0, 0.0, 0.0},
                           ConeLayout{0, {3}});
  const ConicSolution sol = conic::solve(prog);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.primal_obj == doctest::Approx(std::sqrt(2.0) * 1e6).epsilon(1e-6));
  CHECK(sol.x[1] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("iteration limit is reported, never disguised as optimal") {
  auto prog = make_program(3, {1.0, 0.0, 0.0}, {{0, 1, 1.0}, {0, 2, 1.0}}, {2.0},
                           {{0, 0, -1.0}, {1, 1, -1.0}, {2, 2, -1.0}}, {0.0, 0.0, 0.0},
                           ConeLayout{0, {3}});
  conic::SolverSettings settings;
  settings.max_iters = 1;
  const ConicSolution sol = conic::solve(prog, settings);
  CHECK(sol.status != SolveStatus::optimal);
  CHECK(!sol.message.empty());
}

TEST_CASE("program validation rejects inconsistent data") {
  ConicProgram prog;
  prog.n = 2;
  prog.c = {1.0};
  CHECK_THROWS(prog.validate());
}

TEST_CASE("dump reports dimensions and cones") {
  auto prog = make_program(3, {1.0, 0.0, 0.0}, {{0, 1, 1.0}}, {1.0},
                           {{0, 0, -1.0}, {1, 1, -1.0}, {2, 2, -1.0}}, {0.0, 0.0, 0.0},
                           ConeLayout{0, {3}});
  prog.name = "toy";
  const std::string text = prog.dump();
  CHECK(text.find("variables:      3") != std::string::npos);
  CHECK(text.find("soc cones:      1") != std::string::npos);
}

}  // TEST_SUITE
