#pragma once

#include <functional>
#include <span>
#include <vector>

#include "wadapt/evaluation.hpp"

namespace wadapt {

/// Objective + constraint of a decision vector. Must be safe to call
/// concurrently from several threads.
using EvalFn = std::function<Evaluation(std::span<const double>)>;

/// Evaluates every vector in `xs`, distributing the work over OpenMP threads.
/// Results are written by index, so the output does not depend on the thread
/// count. If evaluations throw, one of the exceptions is rethrown after the
/// loop finishes.
std::vector<Evaluation> evaluate_batch(const EvalFn& fn, std::span<const std::vector<double>> xs);

/// Serial reference for evaluate_batch; kept for tests and benchmarks.
std::vector<Evaluation> evaluate_batch_serial(const EvalFn& fn, std::span<const std::vector<double>> xs);

/// Number of OpenMP worker threads evaluate_batch will use.
int worker_threads();
void set_worker_threads(int n);

} // namespace wadapt
