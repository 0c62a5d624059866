#pragma once

#include "asmsearch/errors.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace asmsearch {

// Row-major n x d embedding batch with one id per row. Values are 64-bit
// in-kernel; the on-disk AEMB format stores 32-bit floats (see aemb.hpp).
struct EmbeddingMatrix {
    std::vector<std::string> ids;
    std::vector<double> values; // n * d, row-major
    std::size_t n = 0;
    std::size_t d = 0;

    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * d, d};
    }
    std::span<double> row(std::size_t i) { return {values.data() + i * d, d}; }
};

struct LossReport {
    double l1;          // text-to-assembly contrast loss
    double l2;          // assembly-to-text contrast loss
    double total;       // l1 + l2
    double temperature;
};

struct NonPositiveTemperature : std::invalid_argument {
    NonPositiveTemperature()
        : std::invalid_argument("temperature must be > 0") {}
};

// In-batch InfoNCE over raw dot-product similarities s_ij = t_i . a_j:
//   L1 = -(1/n) sum_i log( exp(s_ii/T) / sum_j exp(s_ij/T) )
//   L2 = the same with the roles of the two matrices swapped.
// Computed with max-subtracted log-sum-exp; T defaults to 0.07.
// `normalize` switches to cosine similarity (rows scaled to unit length).
LossReport infonce_loss(const EmbeddingMatrix& texts,
                        const EmbeddingMatrix& asms, double temperature = 0.07,
                        bool normalize = false);

struct InfonceGradients {
    std::vector<double> grad_texts; // n * d, gradients of total loss
    std::vector<double> grad_asms;
};

// Analytic gradients of L1 + L2 with respect to both matrices. Row softmax
// P_ij of s_ij/T gives d L1 / d t_i = (1/(nT)) sum_j (P_ij - delta_ij) a_j,
// and symmetrically for the remaining three blocks.
InfonceGradients infonce_grad(const EmbeddingMatrix& texts,
                              const EmbeddingMatrix& asms,
                              double temperature = 0.07);

// Fixed-order pairwise tree summation; keeps reductions bit-stable when rows
// are computed in parallel.
double pairwise_sum(std::span<const double> values);

} // namespace asmsearch
