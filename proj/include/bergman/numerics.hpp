#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace bergman {

// Gauss-Legendre nodes and weights on [-1, 1] (Golub-Welsch).
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

// Smallest power of two >= x (at least 1).
std::size_t pow2_ceil(double x);

// Runs fn(i) for i in [0, n) on up to `threads` workers; results must be written by index.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

// Process-wide default worker count used by sweeps (set by the CLI's --threads).
int default_threads();
void set_default_threads(int n);

}  // namespace bergman
