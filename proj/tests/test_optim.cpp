#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest/doctest.h>

#include <cmath>
#include <limits>

#include "drlcox/errors.hpp"
#include "drlcox/optim.hpp"
#include "drlcox/rng.hpp"

using namespace drlcox;

namespace {

Eigen::VectorXd random_vec(SplitMix64& rng, int d, double scale = 1.0) {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = scale * rng.normal();
    return v;
}

// slow reference projection onto the l1 ball: bisect the shrink threshold
Eigen::VectorXd l1_project_reference(const Eigen::VectorXd& v, double r) {
    if (v.lpNorm<1>() <= r) return v;
    double lo = 0.0, hi = v.cwiseAbs().maxCoeff();
    for (int it = 0; it < 200; ++it) {
        double theta = 0.5 * (lo + hi);
        double mass = (v.cwiseAbs().array() - theta).max(0.0).sum();
        (mass > r ? lo : hi) = theta;
    }
    double theta = 0.5 * (lo + hi);
    return v.array().sign() * (v.cwiseAbs().array() - theta).max(0.0);
}

double dual_norm(const Eigen::VectorXd& v, NormOrder q) {
    switch (q) {
        case NormOrder::l1: return v.lpNorm<Eigen::Infinity>();
        case NormOrder::l2: return v.norm();
        case NormOrder::linf: return v.lpNorm<1>();
    }
    return 0.0;
}

}  // namespace

TEST_CASE("1-d quadratic lands on the minimizer") {
    auto f = [](const Eigen::VectorXd& x) {
        SmoothEval e;
        e.value = (x[0] - 3.0) * (x[0] - 3.0);
        e.gradient = Eigen::VectorXd::Constant(1, 2.0 * (x[0] - 3.0));
        return e;
    };
    auto res = minimize_smooth(f, Eigen::VectorXd::Zero(1), {});
    CHECK(res.report.converged);
    CHECK(res.report.iterations <= 50);
    CHECK(res.x[0] == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("ill-conditioned quadratic reaches the analytic solution") {
    const int d = 10;
    Eigen::VectorXd diag(d);
    for (int i = 0; i < d; ++i) {
        diag[i] = std::pow(1e4, i / (d - 1.0));  // condition number 1e4
    }
    SplitMix64 rng(99);
    Eigen::VectorXd b = random_vec(rng, d);
    auto f = [&](const Eigen::VectorXd& x) {
        SmoothEval e;
        e.gradient = diag.asDiagonal() * x - b;
        e.value = 0.5 * x.dot(diag.asDiagonal() * x) - b.dot(x);
        return e;
    };
    SolveOptions opts;
    opts.tol = 1e-7;
    opts.max_iter = 500;
    auto res = minimize_smooth(f, Eigen::VectorXd::Zero(d), opts);
    Eigen::VectorXd expected = b.array() / diag.array();
    CHECK(res.report.converged);
    CHECK((diag.asDiagonal() * res.x - b).norm() < 1e-6);
    CHECK((res.x - expected).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("non-finite start fails loudly") {
    auto f = [](const Eigen::VectorXd& x) {
        SmoothEval e;
        e.value = std::numeric_limits<double>::quiet_NaN();
        e.gradient = x;
        return e;
    };
    CHECK_THROWS_AS(minimize_smooth(f, Eigen::VectorXd::Zero(2), {}),
                    ComputeError);
}

TEST_CASE("prox operators: closed-form identities") {
    Eigen::VectorXd v(3);
    v << 3.0, -0.5, 1.0;

    SUBCASE("l1 soft threshold") {
        Eigen::VectorXd p = prox_norm(v, NormOrder::l1, 1.0);
        CHECK(p[0] == doctest::Approx(2.0));
        CHECK(p[1] == doctest::Approx(0.0));
        CHECK(p[2] == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("l2 block shrinkage") {
        double r = v.norm();
        Eigen::VectorXd p = prox_norm(v, NormOrder::l2, 1.0);
        CHECK((p - v * (r - 1.0) / r).norm() < 1e-12);
        Eigen::VectorXd small = prox_norm(0.1 * v / r, NormOrder::l2, 1.0);
        CHECK(small.norm() == 0.0);
    }
    SUBCASE("weight zero is the identity") {
        CHECK((prox_norm(v, NormOrder::linf, 0.0) - v).norm() == 0.0);
    }
}

TEST_CASE("prox operators satisfy the dual-norm optimality bound") {
    SplitMix64 rng(17);
    for (NormOrder q : {NormOrder::l1, NormOrder::l2, NormOrder::linf}) {
        for (int trial = 0; trial < 100; ++trial) {
            int d = 1 + static_cast<int>(rng.below(6));
            double eps = 0.05 + 2.0 * rng.uniform();
            Eigen::VectorXd v = random_vec(rng, d, 2.0);
            Eigen::VectorXd p = prox_norm(v, q, eps);
            double residual = dual_norm(v - p, q);
            CHECK(residual <= eps + 1e-10);
            if (p.lpNorm<Eigen::Infinity>() > 1e-12) {
                // off the kernel the multiplier is tight
                CHECK(residual >= eps - 1e-9);
            }
        }
    }
}

TEST_CASE("l1 ball projection agrees with a bisection reference") {
    SplitMix64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        int d = 1 + static_cast<int>(rng.below(8));
        double r = 0.1 + 3.0 * rng.uniform();
        Eigen::VectorXd v = random_vec(rng, d, 2.0);
        Eigen::VectorXd got = project_l1_ball(v, r);
        Eigen::VectorXd want = l1_project_reference(v, r);
        CHECK(got.lpNorm<1>() <= r + 1e-10);
        CHECK((got - want).lpNorm<Eigen::Infinity>() < 1e-7);
    }
    Eigen::VectorXd inside(2);
    inside << 0.25, -0.25;
    CHECK((project_l1_ball(inside, 1.0) - inside).norm() == 0.0);
}

TEST_CASE("composite solver: full soft threshold sends x to zero") {
    Eigen::VectorXd c(3);
    c << 0.4, -0.7, 0.2;
    auto f = [&](const Eigen::VectorXd& x) {
        SmoothEval e;
        e.value = 0.5 * (x - c).squaredNorm();
        e.gradient = x - c;
        return e;
    };
    auto res = minimize_composite(f, Eigen::VectorXd::Ones(3), NormOrder::l1,
                                  0.8, {});
    CHECK(res.report.converged);
    CHECK(res.x.lpNorm<Eigen::Infinity>() < 1e-10);
    // and the reported value includes the (vanishing) norm term
    CHECK(res.report.final_value == doctest::Approx(0.5 * c.squaredNorm()));
}

TEST_CASE("composite solver with zero weight matches the smooth solver") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        int d = 3;
        Eigen::VectorXd c = random_vec(rng, d);
        Eigen::MatrixXd m = Eigen::MatrixXd::Identity(d, d);
        m(0, 0) = 4.0;
        auto f = [&](const Eigen::VectorXd& x) {
            SmoothEval e;
            e.gradient = m * (x - c);
            e.value = 0.5 * (x - c).dot(e.gradient);
            return e;
        };
        auto a = minimize_smooth(f, Eigen::VectorXd::Zero(d), {});
        auto b = minimize_composite(f, Eigen::VectorXd::Zero(d), NormOrder::l1,
                                    0.0, {});
        CHECK((a.x - b.x).lpNorm<Eigen::Infinity>() < 1e-8);
    }
}

TEST_CASE("composite solver solves a lasso instance to optimality") {
    // 0.5||x - c||^2 + eps ||x||_1 has the exact solution soft(c, eps)
    SplitMix64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        int d = 1 + static_cast<int>(rng.below(6));
        double eps = 0.3 * rng.uniform();
        Eigen::VectorXd c = random_vec(rng, d);
        auto f = [&](const Eigen::VectorXd& x) {
            SmoothEval e;
            e.value = 0.5 * (x - c).squaredNorm();
            e.gradient = x - c;
            return e;
        };
        auto res = minimize_composite(f, random_vec(rng, d), NormOrder::l1,
                                      eps, {});
        Eigen::VectorXd want = prox_norm(c, NormOrder::l1, eps);
        CHECK(res.report.converged);
        CHECK((res.x - want).lpNorm<Eigen::Infinity>() < 1e-7);
        CHECK(res.report.final_value <=
              0.5 * (want - c).squaredNorm() + eps * want.lpNorm<1>() + 1e-10);
    }
}
