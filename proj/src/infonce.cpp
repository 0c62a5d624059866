#include "asmsearch/infonce.hpp"

#include <algorithm>
#include <cmath>

namespace asmsearch {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        s += a[k] * b[k];
    return s;
}

void check_shapes(const EmbeddingMatrix& texts, const EmbeddingMatrix& asms) {
    if (texts.n != asms.n || texts.d != asms.d)
        throw ShapeMismatch("embedding batches disagree: " +
                            std::to_string(texts.n) + "x" +
                            std::to_string(texts.d) + " vs " +
                            std::to_string(asms.n) + "x" +
                            std::to_string(asms.d));
    if (texts.n == 0 || texts.d == 0)
        throw ShapeMismatch("empty embedding batch");
}

EmbeddingMatrix normalized_rows(const EmbeddingMatrix& m) {
    EmbeddingMatrix out = m;
    for (std::size_t i = 0; i < out.n; ++i) {
        auto r = out.row(i);
        double norm = std::sqrt(dot(r, r));
        if (norm > 0.0)
            for (double& v : r)
                v /= norm;
    }
    return out;
}

// One InfoNCE direction: mean over rows of X of
//   -log( exp(x_i.y_i/T) / sum_j exp(x_i.y_j/T) ).
// The max term contributes exactly exp(0)=1 to the softmax denominator, so
// each row reduces to log1p(sum of the others) and keeps full precision even
// when the diagonal dominates.
double directional_loss(const EmbeddingMatrix& x, const EmbeddingMatrix& y,
                        double temperature) {
    const std::size_t n = x.n;
    std::vector<double> row_losses(n);
    std::vector<double> sims(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            sims[j] = dot(x.row(i), y.row(j));
        std::size_t j_max = 0;
        for (std::size_t j = 1; j < n; ++j)
            if (sims[j] > sims[j_max])
                j_max = j;
        double rest = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != j_max)
                rest += std::exp((sims[j] - sims[j_max]) / temperature);
        row_losses[i] =
            std::log1p(rest) + (sims[j_max] - sims[i]) / temperature;
    }
    return pairwise_sum(row_losses) / static_cast<double>(n);
}

// Adds the gradient blocks of one direction into gx/gy.
void directional_grad(const EmbeddingMatrix& x, const EmbeddingMatrix& y,
                      double temperature, std::vector<double>& gx,
                      std::vector<double>& gy) {
    const std::size_t n = x.n, d = x.d;
    const double inv_nt = 1.0 / (static_cast<double>(n) * temperature);
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto xi = x.row(i);
        double max_sim = -HUGE_VAL;
        for (std::size_t j = 0; j < n; ++j) {
            p[j] = dot(xi, y.row(j));
            max_sim = std::max(max_sim, p[j]);
        }
        double denom = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            p[j] = std::exp((p[j] - max_sim) / temperature);
            denom += p[j];
        }
        for (std::size_t j = 0; j < n; ++j)
            p[j] /= denom;
        for (std::size_t j = 0; j < n; ++j) {
            double w = inv_nt * (p[j] - (i == j ? 1.0 : 0.0));
            auto yj = y.row(j);
            for (std::size_t k = 0; k < d; ++k) {
                gx[i * d + k] += w * yj[k];
                gy[j * d + k] += w * xi[k];
            }
        }
    }
}

} // namespace

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values)
            s += v;
        return s;
    }
    std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

LossReport infonce_loss(const EmbeddingMatrix& texts,
                        const EmbeddingMatrix& asms, double temperature,
                        bool normalize) {
    check_shapes(texts, asms);
    if (!(temperature > 0.0))
        throw NonPositiveTemperature();
    const EmbeddingMatrix* t = &texts;
    const EmbeddingMatrix* a = &asms;
    EmbeddingMatrix tn, an;
    if (normalize) {
        tn = normalized_rows(texts);
        an = normalized_rows(asms);
        t = &tn;
        a = &an;
    }
    LossReport report;
    report.temperature = temperature;
    report.l1 = directional_loss(*t, *a, temperature);
    report.l2 = directional_loss(*a, *t, temperature);
    report.total = report.l1 + report.l2;
    return report;
}

InfonceGradients infonce_grad(const EmbeddingMatrix& texts,
                              const EmbeddingMatrix& asms, double temperature) {
    check_shapes(texts, asms);
    if (!(temperature > 0.0))
        throw NonPositiveTemperature();
    InfonceGradients g;
    g.grad_texts.assign(texts.n * texts.d, 0.0);
    g.grad_asms.assign(asms.n * asms.d, 0.0);
    directional_grad(texts, asms, temperature, g.grad_texts, g.grad_asms);
    directional_grad(asms, texts, temperature, g.grad_asms, g.grad_texts);
    return g;
}

} // namespace asmsearch
