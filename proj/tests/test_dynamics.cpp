#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "wadapt/baselines.hpp"
#include "wadapt/dynamics.hpp"
#include "wadapt/error.hpp"
#include "wadapt/graph.hpp"

using namespace wadapt;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> x(n);
    for (auto& v : x)
        v = u(rng);
    return x;
}

Eigen::MatrixXd dense(const SquareMatrix& m)
{
    Eigen::MatrixXd d(m.size(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            d(i, j) = m(i, j);
    return d;
}

std::vector<Eigen::MatrixXd> dense_stack(const Network& net, const WeightSchedule& sched)
{
    std::vector<Eigen::MatrixXd> w{dense(net.w0())};
    for (const auto& b : sched.blocks())
        w.push_back(dense(b));
    return w;
}

EpidemicParams setup(int n, int substeps = kDefaultSubsteps)
{
    return EpidemicParams::uniform(n, 0.4, 0.3, 0.153, 10, substeps);
}

} // namespace

TEST_CASE("decision dimension")
{
    CHECK(decision_dimension(20, 10) == 3420);
    CHECK(decision_dimension(4, 2) == 12);
    CHECK(decision_dimension(2, 3) == 4);
    CHECK_THROWS_AS(decision_dimension(1, 3), Error);
}

TEST_CASE("decode layout")
{
    SUBCASE("all zeros")
    {
        const auto s = decode_candidate(std::vector<double>(decision_dimension(4, 5), 0.0), 4, 5);
        CHECK(s.block_count() == 4);
        for (const auto& b : s.blocks())
            CHECK(b == SquareMatrix(4));
    }
    SUBCASE("all ones, n = 3, T = 2")
    {
        const auto s = decode_candidate(std::vector<double>(6, 1.0), 3, 2);
        REQUIRE(s.block_count() == 1);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(s.block(0)(i, j) == (i == j ? 0.0 : 1.0));
    }
    SUBCASE("time-major then row-major skipping the diagonal")
    {
        std::vector<double> x(decision_dimension(3, 3));
        for (std::size_t k = 0; k < x.size(); ++k)
            x[k] = static_cast<double>(k) / 100.0;
        const auto s = decode_candidate(x, 3, 3);
        const int order[6][2] = {{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}};
        for (int b = 0; b < 2; ++b)
            for (int k = 0; k < 6; ++k)
                CHECK(s.block(b)(order[k][0], order[k][1]) == x[b * 6 + k]);
    }
    CHECK_THROWS_AS(decode_candidate(std::vector<double>(5, 0.0), 3, 2), Error);
}

TEST_CASE("encode inverts decode")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + trial % 5;
        const int T = 2 + trial % 4;
        const auto x = random_vector(decision_dimension(n, T), rng);
        CHECK(encode_schedule(decode_candidate(x, n, T)) == x);
    }
}

TEST_CASE("pure decay without infection")
{
    const Network net = generate_ba(20, 5, 5, 3);
    auto params = EpidemicParams::uniform(20, 0.0, 0.3, 0.5, 10, 50);
    const auto traj = integrate(net, params, no_adaptation_schedule(net, 10));
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.samples(); ++k)
        for (double p : traj.row(k))
            worst = std::max(worst, std::abs(p - 0.5 * std::exp(-0.3 * traj.times[k])));
    CHECK(worst < 1e-6);
    CHECK(infected_level(traj, 1.0) == doctest::Approx(0.370409).epsilon(1e-6));
}

TEST_CASE("isolated node decays even with infection rate")
{
    const Network net(1, {});
    const auto params = EpidemicParams::uniform(1, 0.4, 0.3, 0.5, 3, 50);
    const auto traj = integrate(net, params, WeightSchedule(1, 3));
    for (std::size_t k = 0; k < traj.samples(); ++k)
        CHECK(std::abs(traj.row(k)[0] - 0.5 * std::exp(-0.3 * traj.times[k])) < 1e-6);
}

TEST_CASE("two-node trajectory matches fine-step reference")
{
    const Network net(2, {{0, 1}});
    const auto params = setup(2);
    const auto sched = no_adaptation_schedule(net, 10);
    const auto traj = integrate(net, params, sched);
    const auto ref = oracle::nimfa(dense_stack(net, sched), Eigen::Vector2d(0.4, 0.4), Eigen::Vector2d(0.3, 0.3),
                                   Eigen::Vector2d(0.153, 0.153), kDefaultSubsteps, 100);
    REQUIRE(ref.p.size() == traj.samples());
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.samples(); ++k) {
        CHECK(traj.times[k] == doctest::Approx(ref.times[k]));
        for (int i = 0; i < 2; ++i)
            worst = std::max(worst, std::abs(traj.row(k)[i] - ref.p[k](i)));
    }
    CHECK(worst < 1e-5);
    // Symmetric pair: logistic law p' = (0.4 - 0.3) p - 0.4 p^2, frozen from the reference.
    CHECK(traj.row(traj.samples() - 1)[0] == doctest::Approx(ref.p.back()(0)).epsilon(1e-9));
}

TEST_CASE("heterogeneous rates and a time-varying schedule match the reference")
{
    std::mt19937_64 rng(5);
    const Network net = generate_ba(8, 3, 2, 5);
    EpidemicParams params = EpidemicParams::uniform(8, 0.0, 0.0, 0.0, 4);
    params.beta = random_vector(8, rng);
    params.gamma = random_vector(8, rng);
    params.p0 = random_vector(8, rng);
    const auto sched = decode_candidate(random_vector(decision_dimension(8, 4), rng), 8, 4);
    const auto traj = integrate(net, params, sched);
    Eigen::VectorXd b(8), g(8), p0(8);
    for (int i = 0; i < 8; ++i) {
        b(i) = params.beta[i];
        g(i) = params.gamma[i];
        p0(i) = params.p0[i];
    }
    const auto ref = oracle::nimfa(dense_stack(net, sched), b, g, p0, kDefaultSubsteps, 100);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.samples(); ++k)
        for (int i = 0; i < 8; ++i)
            worst = std::max(worst, std::abs(traj.row(k)[i] - ref.p[k](i)));
    CHECK(worst < 1e-5);
}

TEST_CASE("trajectory stays in the unit box")
{
    std::mt19937_64 rng(8);
    const Network net = generate_ba(20, 5, 5, 8);
    for (int trial = 0; trial < 20; ++trial) {
        EpidemicParams params = EpidemicParams::uniform(20, 0.0, 0.0, 0.0, 10, 2);
        params.beta = random_vector(20, rng);
        for (auto& v : params.beta)
            v *= 5.0;
        params.gamma = random_vector(20, rng);
        params.p0 = random_vector(20, rng);
        const auto traj = integrate(net, params, decode_candidate(random_vector(3420, rng), 20, 10));
        CHECK(traj.row(0)[0] == params.p0[0]);
        CHECK(*std::min_element(traj.p.begin(), traj.p.end()) >= 0.0);
        CHECK(*std::max_element(traj.p.begin(), traj.p.end()) <= 1.0);
    }
}

TEST_CASE("objective quadrature")
{
    Trajectory traj;
    traj.n = 20;
    for (int k = 0; k <= 200; ++k)
        traj.times.push_back(k / 20.0);
    traj.p.assign(201 * 20, 0.25);
    CHECK(objective_value(traj) == doctest::Approx(100.0).epsilon(1e-12));
    std::fill(traj.p.begin(), traj.p.end(), 0.0);
    CHECK(objective_value(traj) == 0.0);
    CHECK(infected_level(traj, 3.0) == 0.0);
    std::fill(traj.p.begin(), traj.p.end(), 0.6);
    CHECK(infected_level(traj, 2.5) == doctest::Approx(0.6));
    CHECK_THROWS_AS(infected_level(traj, 0.01), Error);
}

TEST_CASE("no-adaptation objective agrees with a Simpson reference")
{
    const Network net = generate_ba(20, 5, 5, 1);
    const auto sched = no_adaptation_schedule(net, 10);
    const double f = objective_value(integrate(net, setup(20), sched));
    const double ref = oracle::nimfa_objective(dense_stack(net, sched), 0.4, 0.3, 0.153, 400);
    CHECK(std::abs(f - ref) / ref < 1e-4);
}

TEST_CASE("step halving barely moves the objective")
{
    std::mt19937_64 rng(21);
    const Network net = generate_ba(20, 5, 5, 2);
    for (int trial = 0; trial < 3; ++trial) {
        const auto sched = trial == 0 ? no_adaptation_schedule(net, 10)
                                      : decode_candidate(random_vector(3420, rng), 20, 10);
        const double coarse = objective_value(integrate(net, setup(20, 20), sched));
        const double fine = objective_value(integrate(net, setup(20, 40), sched));
        CHECK(std::abs(coarse - fine) / fine < 1e-4);
    }
}

TEST_CASE("scaling weights down never raises the objective")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Network net = generate_ba(20, 5, 5, 4);
    const auto params = setup(20);
    for (int trial = 0; trial < 100; ++trial) {
        auto sched = decode_candidate(random_vector(3420, rng), 20, 10);
        const double before = schedule_objective(net, params, sched);
        const double c = u(rng);
        for (std::size_t b = 0; b < sched.block_count(); ++b)
            for (double& w : sched.block(b).data())
                w *= c;
        CHECK(schedule_objective(net, params, sched) <= before);
    }
}

TEST_CASE("constraint value")
{
    const Network net = generate_ba(20, 5, 5, 6);
    const auto none = no_adaptation_schedule(net, 10);
    CHECK(constraint_value(none, net, 700.0) == -700.0);

    // (1 - c)^2 * 9 * 170 = 700
    const double c = 1.0 - std::sqrt(700.0 / (9.0 * 170.0));
    WeightSchedule scaled = none;
    for (std::size_t b = 0; b < scaled.block_count(); ++b)
        for (double& w : scaled.block(b).data())
            w *= c;
    CHECK(std::abs(constraint_value(scaled, net, 700.0)) < 1e-9);

    WeightSchedule zero(20, 10);
    CHECK(constraint_value(zero, net, 0.0) > 0.0);
    CHECK(constraint_value(zero, net, 700.0) == doctest::Approx(830.0));

    std::mt19937_64 rng(3);
    auto blocks = decode_candidate(random_vector(3420, rng), 20, 10).blocks();
    const double g = constraint_value(WeightSchedule(blocks), net, 700.0);
    std::shuffle(blocks.begin(), blocks.end(), rng);
    CHECK(constraint_value(WeightSchedule(blocks), net, 700.0) == doctest::Approx(g).epsilon(1e-13));
}

TEST_CASE("evaluate_candidate agrees with the explicit pipeline")
{
    const Network net = generate_ba(20, 5, 5, 1);
    const auto params = setup(20);
    const auto none = no_adaptation_schedule(net, 10);

    const Evaluation base = evaluate_candidate(encode_schedule(none), net, params, 700.0);
    CHECK(base.f == objective_value(integrate(net, params, none)));
    CHECK(base.violation == 0.0);
    CHECK(base.g == -700.0);

    const Evaluation zero = evaluate_candidate(std::vector<double>(3420, 0.0), net, params, 700.0);
    CHECK(zero.violation == doctest::Approx(830.0));
    CHECK(zero.f > 0.0);

    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        const auto x = random_vector(3420, rng);
        const auto sched = decode_candidate(x, 20, 10);
        const Evaluation e = evaluate_candidate(x, net, params, 700.0);
        CHECK(e.f == doctest::Approx(objective_value(integrate(net, params, sched))).epsilon(1e-12));
        CHECK(e.g == doctest::Approx(constraint_value(sched, net, 700.0)).epsilon(1e-12));
        CHECK(e.violation == std::max(0.0, e.g));
        CHECK(e == evaluate_candidate(x, net, params, 700.0));
    }
    CHECK_THROWS_AS(evaluate_candidate(std::vector<double>(10, 0.0), net, params, 700.0), Error);
}

TEST_CASE("infected level and total weights")
{
    const Network net = generate_ba(20, 5, 5, 1);
    const auto params = setup(20);
    const auto none = no_adaptation_schedule(net, 10);
    const auto traj = integrate(net, params, none);
    CHECK(infected_level(traj, 0.0) == doctest::Approx(0.153));
    for (double t : {0.0, 0.5, 1.0, 4.25, 9.99})
        CHECK(total_weights(none, net, t) == 170.0);

    const double c = constant_adaptation_ratio(net, 10, 700.0);
    const auto constant = constant_adaptation_schedule(net, 10, 700.0);
    CHECK(total_weights(constant, net, 0.5) == 170.0);
    for (double t : {1.0, 3.5, 9.0})
        CHECK(total_weights(constant, net, t) == doctest::Approx(170.0 * c));
    CHECK(total_weights(WeightSchedule(20, 10), net, 2.0) == 0.0);
    CHECK_THROWS_AS(total_weights(none, net, 10.0), Error);
    CHECK_THROWS_AS(total_weights(none, net, -0.1), Error);
}

TEST_CASE("shape mismatches are reported")
{
    const Network net = generate_ba(20, 5, 5, 1);
    CHECK_THROWS_AS(integrate(net, setup(19), WeightSchedule(20, 10)), Error);
    CHECK_THROWS_AS(integrate(net, setup(20), WeightSchedule(20, 9)), Error);
    auto bad = setup(20);
    bad.p0[3] = 1.5;
    CHECK_THROWS_AS(integrate(net, bad, WeightSchedule(20, 10)), Error);
}

TEST_CASE("non-finite state aborts integration")
{
    const Network net(2, {{0, 1}});
    auto params = EpidemicParams::uniform(2, 0.4, 0.3, 0.2, 3);
    params.beta[0] = 1e308;
    try {
        (void)integrate(net, params, no_adaptation_schedule(net, 3));
        FAIL("expected integration failure");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::integration_failure);
    }
}

TEST_CASE("CSV formats")
{
    const Network net = generate_ba(6, 3, 2, 1);
    const auto params = EpidemicParams::uniform(6, 0.4, 0.3, 0.153, 3, 2);
    std::mt19937_64 rng(4);
    const auto sched = decode_candidate(random_vector(decision_dimension(6, 3), rng), 6, 3);
    const auto traj = integrate(net, params, sched);

    std::stringstream tr;
    write_trajectory_csv(traj, tr);
    std::string line;
    std::getline(tr, line);
    CHECK(line == "t,p_0,p_1,p_2,p_3,p_4,p_5");

    std::stringstream trace;
    write_trace_csv(traj, sched, net, trace);
    std::getline(trace, line);
    CHECK(line == "t,I,W");
    int rows = 0;
    while (std::getline(trace, line))
        ++rows;
    CHECK(rows == 7);

    std::stringstream sc;
    write_schedule_csv(sched, sc);
    const auto back = read_schedule_csv(sc, 6, 3);
    CHECK(back.blocks() == sched.blocks());

    std::stringstream partial("t,i,j,w\n1,0,1,0.5\n");
    CHECK_THROWS_AS(read_schedule_csv(partial, 6, 3), Error);
}
