#include "wadapt/kernels.hpp"

#include <exception>

#include <omp.h>

namespace wadapt {

std::vector<Evaluation> evaluate_batch(const EvalFn& fn, std::span<const std::vector<double>> xs)
{
    const auto count = static_cast<long>(xs.size());
    std::vector<Evaluation> out(xs.size());
    std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < count; ++i) {
        try {
            out[i] = fn(xs[i]);
        } catch (...) {
#pragma omp critical(wadapt_batch_failure)
            if (!failure)
                failure = std::current_exception();
        }
    }

    if (failure)
        std::rethrow_exception(failure);
    return out;
}

std::vector<Evaluation> evaluate_batch_serial(const EvalFn& fn, std::span<const std::vector<double>> xs)
{
    std::vector<Evaluation> out;
    out.reserve(xs.size());
    for (const auto& x : xs)
        out.push_back(fn(x));
    return out;
}

int worker_threads()
{
    return omp_get_max_threads();
}

void set_worker_threads(int n)
{
    if (n > 0)
        omp_set_num_threads(n);
}

} // namespace wadapt
