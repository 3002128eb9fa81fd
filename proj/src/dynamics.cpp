#include "wadapt/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "wadapt/csv.hpp"
#include "wadapt/error.hpp"

namespace wadapt {

EpidemicParams EpidemicParams::uniform(int n, double beta, double gamma, double p0, int horizon, int substeps)
{
    if (n < 1)
        throw Error(Errc::invalid_parameter, "node count must be positive");
    EpidemicParams p;
    p.beta.assign(n, beta);
    p.gamma.assign(n, gamma);
    p.p0.assign(n, p0);
    p.horizon = horizon;
    p.substeps = substeps;
    p.validate();
    return p;
}

void EpidemicParams::validate() const
{
    if (beta.size() != p0.size() || gamma.size() != p0.size())
        throw Error(Errc::invalid_parameter, "beta/gamma/p0 sizes differ");
    for (std::size_t i = 0; i < p0.size(); ++i) {
        if (!std::isfinite(beta[i]) || beta[i] < 0.0 || !std::isfinite(gamma[i]) || gamma[i] < 0.0)
            throw Error(Errc::invalid_parameter, "rates must be finite and nonnegative");
        if (!(p0[i] >= 0.0 && p0[i] <= 1.0))
            throw Error(Errc::invalid_parameter, "initial probabilities must lie in [0,1]");
    }
    if (horizon < 2)
        throw Error(Errc::invalid_parameter, "horizon must be >= 2");
    if (substeps < 1)
        throw Error(Errc::invalid_parameter, "substeps must be >= 1");
}

WeightSchedule::WeightSchedule(int n, int horizon)
    : n_(n)
{
    if (n < 1 || horizon < 2)
        throw Error(Errc::invalid_parameter, "schedule needs n >= 1 and horizon >= 2");
    blocks_.assign(static_cast<std::size_t>(horizon - 1), SquareMatrix(static_cast<std::size_t>(n)));
}

WeightSchedule::WeightSchedule(std::vector<SquareMatrix> blocks)
    : blocks_(std::move(blocks))
{
    if (blocks_.empty())
        throw Error(Errc::invalid_parameter, "schedule needs at least one block");
    n_ = static_cast<int>(blocks_.front().size());
    for (const auto& b : blocks_)
        if (static_cast<int>(b.size()) != n_)
            throw Error(Errc::dimension_mismatch, "schedule blocks differ in size");
}

void WeightSchedule::validate() const
{
    for (const auto& b : blocks_) {
        for (int i = 0; i < n_; ++i) {
            if (b(i, i) != 0.0)
                throw Error(Errc::invalid_parameter, "schedule block has nonzero diagonal");
            for (int j = 0; j < n_; ++j)
                if (!(b(i, j) >= 0.0 && b(i, j) <= 1.0))
                    throw Error(Errc::invalid_parameter, "schedule weight outside [0,1]");
        }
    }
}

std::size_t decision_dimension(int n, int horizon)
{
    if (n < 2 || horizon < 2)
        throw Error(Errc::invalid_parameter, "decision dimension needs n >= 2 and horizon >= 2");
    return static_cast<std::size_t>(n) * (n - 1) * (horizon - 1);
}

WeightSchedule decode_candidate(std::span<const double> x, int n, int horizon)
{
    if (x.size() != decision_dimension(n, horizon))
        throw Error(Errc::dimension_mismatch, "candidate length " + std::to_string(x.size()) + " != " +
                                                  std::to_string(decision_dimension(n, horizon)));
    WeightSchedule sched(n, horizon);
    std::size_t k = 0;
    for (std::size_t b = 0; b < sched.block_count(); ++b) {
        auto& block = sched.block(b);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j)
                    block(i, j) = x[k++];
    }
    return sched;
}

std::vector<double> encode_schedule(const WeightSchedule& sched)
{
    const int n = sched.n();
    std::vector<double> x;
    x.reserve(decision_dimension(n, sched.horizon()));
    for (const auto& block : sched.blocks())
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j)
                    x.push_back(block(i, j));
    return x;
}

namespace {

/// Fixed-step RK4 for dp = (1 - p) .* (W (beta .* p)) - gamma .* p.
class NimfaStepper {
public:
    NimfaStepper(const EpidemicParams& params)
        : n_(static_cast<std::size_t>(params.n())), beta_(params.beta), gamma_(params.gamma),
          k1_(n_), k2_(n_), k3_(n_), k4_(n_), tmp_(n_), s_(n_)
    {
    }

    void step(const double* wt, std::vector<double>& p, double h)
    {
        rhs(wt, p.data(), k1_.data());
        for (std::size_t i = 0; i < n_; ++i)
            tmp_[i] = p[i] + 0.5 * h * k1_[i];
        rhs(wt, tmp_.data(), k2_.data());
        for (std::size_t i = 0; i < n_; ++i)
            tmp_[i] = p[i] + 0.5 * h * k2_[i];
        rhs(wt, tmp_.data(), k3_.data());
        for (std::size_t i = 0; i < n_; ++i)
            tmp_[i] = p[i] + h * k3_[i];
        rhs(wt, tmp_.data(), k4_.data());
        for (std::size_t i = 0; i < n_; ++i) {
            double next = p[i] + (h / 6.0) * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
            if (!std::isfinite(next))
                throw Error(Errc::integration_failure, "non-finite state at node " + std::to_string(i));
            p[i] = std::clamp(next, 0.0, 1.0);
        }
    }

private:
    // wt is the weight matrix in column-major order, wt[j * n + i] = w_ij, so
    // the inner loop runs over contiguous memory. Each s_i still accumulates
    // j = 0..n-1 in order.
    void rhs(const double* __restrict wt, const double* __restrict p, double* __restrict dp)
    {
        const std::size_t n = n_;
        double* __restrict s = s_.data();
        const double* __restrict beta = beta_.data();
        const double* __restrict gamma = gamma_.data();
        for (std::size_t i = 0; i < n; ++i)
            s[i] = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double qj = beta[j] * p[j];
            const double* __restrict col = wt + j * n;
            for (std::size_t i = 0; i < n; ++i)
                s[i] += col[i] * qj;
        }
        for (std::size_t i = 0; i < n; ++i)
            dp[i] = (1.0 - p[i]) * s[i] - gamma[i] * p[i];
    }

    std::size_t n_;
    const std::vector<double>& beta_;
    const std::vector<double>& gamma_;
    std::vector<double> k1_, k2_, k3_, k4_, tmp_, s_;
};

/// Weight matrices for every unit interval [u, u+1), u = 0..T-1, stored
/// transposed and back to back.
using WeightStack = std::vector<double>;

WeightStack stack_schedule(const Network& net, const WeightSchedule& sched)
{
    const std::size_t n = static_cast<std::size_t>(net.n());
    const std::size_t nn = n * n;
    WeightStack stack(nn * (sched.block_count() + 1));
    auto put = [&](std::size_t u, const SquareMatrix& w) {
        double* dst = stack.data() + u * nn;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                dst[j * n + i] = w(i, j);
    };
    put(0, net.w0());
    for (std::size_t b = 0; b < sched.block_count(); ++b)
        put(b + 1, sched.block(b));
    return stack;
}

/// Runs the model over [0, T]. `visit(k, t, p)` sees every grid sample,
/// k = 0..T*K.
template <typename Visit>
void march(const EpidemicParams& params, const WeightStack& stack, Visit&& visit)
{
    const int K = params.substeps;
    const double h = 1.0 / K;
    const std::size_t nn = params.p0.size() * params.p0.size();
    NimfaStepper stepper(params);
    std::vector<double> p = params.p0;
    visit(0, 0.0, p);
    int k = 0;
    for (int u = 0; u < params.horizon; ++u) {
        const double* wt = stack.data() + static_cast<std::size_t>(u) * nn;
        for (int s = 0; s < K; ++s) {
            stepper.step(wt, p, h);
            ++k;
            visit(k, static_cast<double>(k) / K, p);
        }
    }
}

void check_shapes(const Network& net, const EpidemicParams& params, const WeightSchedule& sched)
{
    params.validate();
    if (params.n() != net.n() || sched.n() != net.n())
        throw Error(Errc::dimension_mismatch, "network, parameters and schedule disagree on node count");
    if (sched.horizon() != params.horizon)
        throw Error(Errc::dimension_mismatch, "schedule horizon differs from parameter horizon");
}

double sqrt_sum(std::span<const double> p)
{
    double s = 0.0;
    for (double v : p)
        s += std::sqrt(v);
    return s;
}

} // namespace

Trajectory integrate(const Network& net, const EpidemicParams& params, const WeightSchedule& sched)
{
    check_shapes(net, params, sched);
    Trajectory traj;
    traj.n = net.n();
    const std::size_t samples = static_cast<std::size_t>(params.horizon) * params.substeps + 1;
    traj.times.reserve(samples);
    traj.p.reserve(samples * traj.n);
    march(params, stack_schedule(net, sched), [&](int, double t, const std::vector<double>& p) {
            traj.times.push_back(t);
        traj.p.insert(traj.p.end(), p.begin(), p.end());
    });
    return traj;
}

double objective_value(const Trajectory& traj)
{
    double total = 0.0;
    if (traj.samples() == 0)
        return total;
    double prev = sqrt_sum(traj.row(0));
    for (std::size_t k = 1; k < traj.samples(); ++k) {
        double cur = sqrt_sum(traj.row(k));
        total += 0.5 * (traj.times[k] - traj.times[k - 1]) * (prev + cur);
        prev = cur;
    }
    return total;
}

double constraint_value(const WeightSchedule& sched, const Network& net, double budget)
{
    if (sched.n() != net.n())
        throw Error(Errc::dimension_mismatch, "schedule and network disagree on node count");
    const int n = net.n();
    double cost = 0.0;
    for (const auto& block : sched.blocks())
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double d = block(i, j) - net.w0()(i, j);
                cost += d * d;
            }
    return cost - budget;
}

namespace {

double objective_with(const EpidemicParams& params, const WeightStack& stack)
{
    double total = 0.0;
    double prev = 0.0;
    double t_prev = 0.0;
    march(params, stack, [&](int k, double t, const std::vector<double>& p) {
        double cur = sqrt_sum(p);
        if (k > 0)
            total += 0.5 * (t - t_prev) * (prev + cur);
        prev = cur;
        t_prev = t;
    });
    return total;
}

} // namespace

Evaluation evaluate_candidate(std::span<const double> x, const Network& net, const EpidemicParams& params,
                              double budget)
{
    const int n = net.n();
    const int T = params.horizon;
    params.validate();
    if (params.n() != n)
        throw Error(Errc::dimension_mismatch, "parameters and network disagree on node count");
    if (x.size() != decision_dimension(n, T))
        throw Error(Errc::dimension_mismatch, "candidate length does not match decision dimension");

    const std::size_t nn = static_cast<std::size_t>(n) * n;
    WeightStack stack(nn * T, 0.0);
    const auto w0 = net.w0().data();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            stack[static_cast<std::size_t>(j) * n + i] = w0[static_cast<std::size_t>(i) * n + j];
    double cost = 0.0;
    std::size_t k = 0;
    for (int b = 0; b < T - 1; ++b) {
        double* block = stack.data() + (b + 1) * nn;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double w = i == j ? 0.0 : x[k++];
                block[static_cast<std::size_t>(j) * n + i] = w;
                const double d = w - w0[static_cast<std::size_t>(i) * n + j];
                cost += d * d;
            }
    }

    const double f = objective_with(params, stack);
    return Evaluation::from(f, cost - budget);
}

double schedule_objective(const Network& net, const EpidemicParams& params, const WeightSchedule& sched)
{
    check_shapes(net, params, sched);
    return objective_with(params, stack_schedule(net, sched));
}

double infected_level(const Trajectory& traj, double t)
{
    auto it = std::lower_bound(traj.times.begin(), traj.times.end(), t - 1e-9);
    if (it == traj.times.end() || std::abs(*it - t) > 1e-9)
        throw Error(Errc::off_grid, "t = " + csv::fmt(t) + " is not a trajectory sample");
    auto row = traj.row(static_cast<std::size_t>(it - traj.times.begin()));
    double s = 0.0;
    for (double v : row)
        s += v;
    return s / traj.n;
}

double total_weights(const WeightSchedule& sched, const Network& net, double t)
{
    if (!(t >= 0.0 && t < sched.horizon()))
        throw Error(Errc::invalid_parameter, "t outside [0, T)");
    const int u = static_cast<int>(std::floor(t));
    const SquareMatrix& w = u == 0 ? net.w0() : sched.block(u - 1);
    double s = 0.0;
    const int n = static_cast<int>(w.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j)
                s += w(i, j);
    return s;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out)
{
    out << 't';
    for (int i = 0; i < traj.n; ++i)
        out << ",p_" << i;
    out << '\n';
    for (std::size_t k = 0; k < traj.samples(); ++k) {
        out << csv::fmt(traj.times[k]);
        for (double v : traj.row(k))
            out << ',' << csv::fmt(v);
        out << '\n';
    }
}

void write_trace_csv(const Trajectory& traj, const WeightSchedule& sched, const Network& net, std::ostream& out)
{
    out << "t,I,W\n";
    const double last = static_cast<double>(sched.horizon());
    for (std::size_t k = 0; k < traj.samples(); ++k) {
        const double t = traj.times[k];
        const double w = t < last ? total_weights(sched, net, t) : total_weights(sched, net, last - 1.0);
        out << csv::fmt(t) << ',' << csv::fmt(infected_level(traj, t)) << ',' << csv::fmt(w) << '\n';
    }
}

void write_schedule_csv(const WeightSchedule& sched, std::ostream& out)
{
    out << "t,i,j,w\n";
    const int n = sched.n();
    for (std::size_t b = 0; b < sched.block_count(); ++b)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j)
                    out << b + 1 << ',' << i << ',' << j << ',' << csv::fmt(sched.block(b)(i, j)) << '\n';
}

WeightSchedule read_schedule_csv(std::istream& in, int n, int horizon)
{
    std::string line;
    if (!std::getline(in, line) || csv::split(line) != std::vector<std::string>{"t", "i", "j", "w"})
        throw Error(Errc::io, "schedule CSV must start with header 't,i,j,w'");
    WeightSchedule sched(n, horizon);
    std::vector<char> seen(decision_dimension(n, horizon), 0);
    std::size_t count = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r")
            continue;
        auto f = csv::split(line);
        if (f.size() != 4)
            throw Error(Errc::io, "schedule CSV row needs 4 fields: " + line);
        const long long t = csv::parse_int(f[0]);
        const long long i = csv::parse_int(f[1]);
        const long long j = csv::parse_int(f[2]);
        const double w = csv::parse_double(f[3]);
        if (t < 1 || t >= horizon || i < 0 || j < 0 || i >= n || j >= n || i == j)
            throw Error(Errc::io, "schedule CSV row out of range: " + line);
        const std::size_t idx = static_cast<std::size_t>(t - 1) * n * (n - 1) + i * (n - 1) + (j < i ? j : j - 1);
        if (seen[idx]++)
            throw Error(Errc::io, "duplicate schedule entry: " + line);
        sched.block(t - 1)(i, j) = w;
        ++count;
    }
    if (count != seen.size())
        throw Error(Errc::io, "schedule CSV must list every off-diagonal entry of every block");
    try {
        sched.validate();
    } catch (const Error& e) {
        throw Error(Errc::io, std::string("invalid schedule file: ") + e.what());
    }
    return sched;
}

WeightSchedule load_schedule(const std::filesystem::path& path, int n, int horizon)
{
    auto in = csv::open_in(path);
    return read_schedule_csv(in, n, horizon);
}

} // namespace wadapt
