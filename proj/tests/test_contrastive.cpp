#include "asmsearch/aemb.hpp"
#include "asmsearch/infonce.hpp"
#include "asmsearch/prf.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace asmsearch;

namespace {

EmbeddingMatrix make_matrix(std::size_t n, std::size_t d, SplitMix& rng) {
    EmbeddingMatrix m;
    m.n = n;
    m.d = d;
    m.values.resize(n * d);
    for (double& v : m.values)
        v = 2.0 * rng.next_double() - 1.0;
    for (std::size_t i = 0; i < n; ++i)
        m.ids.push_back("row" + std::to_string(i));
    return m;
}

EmbeddingMatrix one_hots(std::size_t n, double scale = 1.0) {
    EmbeddingMatrix m;
    m.n = n;
    m.d = n;
    m.values.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        m.values[i * n + i] = scale;
        m.ids.push_back("e" + std::to_string(i));
    }
    return m;
}

// central finite differences of the total loss
double fd_component(EmbeddingMatrix& which, const EmbeddingMatrix& texts,
                    const EmbeddingMatrix& asms, std::size_t flat, double h,
                    double temperature) {
    double saved = which.values[flat];
    which.values[flat] = saved + h;
    double up = infonce_loss(texts, asms, temperature).total;
    which.values[flat] = saved - h;
    double down = infonce_loss(texts, asms, temperature).total;
    which.values[flat] = saved;
    return (up - down) / (2.0 * h);
}

} // namespace

TEST_CASE("single pair batch has zero loss and gradient") {
    SplitMix rng(3);
    EmbeddingMatrix t = make_matrix(1, 8, rng);
    EmbeddingMatrix a = make_matrix(1, 8, rng);
    LossReport report = infonce_loss(t, a);
    CHECK(report.l1 == 0.0);
    CHECK(report.l2 == 0.0);
    CHECK(report.total == 0.0);

    InfonceGradients g = infonce_grad(t, a);
    for (double v : g.grad_texts)
        CHECK(v == 0.0);
    for (double v : g.grad_asms)
        CHECK(v == 0.0);
}

TEST_CASE("orthonormal n=2 closed form to 12 significant digits") {
    EmbeddingMatrix e = one_hots(2);
    LossReport report = infonce_loss(e, e, 0.07);
    // log(1 + exp(-1/T)) at T = double(0.07), evaluated in 40-digit arithmetic
    const double expected = 6.2487475571203902864e-7;
    CHECK(std::abs(report.l1 - expected) <= 1e-12 * expected);
    CHECK(std::abs(report.l2 - expected) <= 1e-12 * expected);
    CHECK(report.total == report.l1 + report.l2);
}

TEST_CASE("diagonal dominance drives loss to zero") {
    EmbeddingMatrix e = one_hots(4, 10.0);
    LossReport report = infonce_loss(e, e, 0.07);
    CHECK(report.total >= 0.0);
    CHECK(report.total < 1e-30);
}

TEST_CASE("batch permutation leaves losses unchanged and permutes gradients") {
    SplitMix rng(17);
    EmbeddingMatrix t = make_matrix(6, 5, rng);
    EmbeddingMatrix a = make_matrix(6, 5, rng);
    LossReport base = infonce_loss(t, a);
    InfonceGradients g = infonce_grad(t, a);

    // rotate rows by 2
    auto rotate = [](const EmbeddingMatrix& m, std::size_t by) {
        EmbeddingMatrix out = m;
        for (std::size_t i = 0; i < m.n; ++i) {
            std::size_t j = (i + by) % m.n;
            for (std::size_t k = 0; k < m.d; ++k)
                out.values[j * m.d + k] = m.values[i * m.d + k];
            out.ids[j] = m.ids[i];
        }
        return out;
    };
    EmbeddingMatrix t2 = rotate(t, 2);
    EmbeddingMatrix a2 = rotate(a, 2);
    LossReport permuted = infonce_loss(t2, a2);
    CHECK(permuted.l1 == doctest::Approx(base.l1).epsilon(1e-14));
    CHECK(permuted.l2 == doctest::Approx(base.l2).epsilon(1e-14));

    InfonceGradients g2 = infonce_grad(t2, a2);
    for (std::size_t i = 0; i < t.n; ++i) {
        std::size_t j = (i + 2) % t.n;
        for (std::size_t k = 0; k < t.d; ++k) {
            CHECK(g2.grad_texts[j * t.d + k] ==
                  doctest::Approx(g.grad_texts[i * t.d + k]).epsilon(1e-12));
            CHECK(g2.grad_asms[j * t.d + k] ==
                  doctest::Approx(g.grad_asms[i * t.d + k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("exchange symmetry is exact") {
    SplitMix rng(23);
    EmbeddingMatrix t = make_matrix(5, 7, rng);
    EmbeddingMatrix a = make_matrix(5, 7, rng);
    LossReport ab = infonce_loss(t, a);
    LossReport ba = infonce_loss(a, t);
    CHECK(ab.l1 == ba.l2); // bitwise: same code path, same order
    CHECK(ab.l2 == ba.l1);
}

TEST_CASE("analytic gradient matches finite differences") {
    SplitMix rng(29);
    EmbeddingMatrix t = make_matrix(8, 16, rng);
    EmbeddingMatrix a = make_matrix(8, 16, rng);
    InfonceGradients g = infonce_grad(t, a, 0.07);

    double max_abs = 0.0;
    for (double v : g.grad_texts)
        max_abs = std::max(max_abs, std::abs(v));
    for (double v : g.grad_asms)
        max_abs = std::max(max_abs, std::abs(v));
    REQUIRE(max_abs > 0.0);

    const double h = 1e-5;
    double worst = 0.0;
    for (std::size_t flat = 0; flat < t.values.size(); ++flat) {
        double fd_t = fd_component(t, t, a, flat, h, 0.07);
        double fd_a = fd_component(a, t, a, flat, h, 0.07);
        worst = std::max(worst, std::abs(g.grad_texts[flat] - fd_t) / max_abs);
        worst = std::max(worst, std::abs(g.grad_asms[flat] - fd_a) / max_abs);
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("gradient row sums match the analytic identity") {
    // sum_i dL1/da_i = (1/(nT)) sum_i (sum_j p_ji t_j - t_i), checked against
    // finite differences of l1 under a uniform shift of all assembly rows.
    SplitMix rng(31);
    const std::size_t n = 6, d = 4;
    EmbeddingMatrix t = make_matrix(n, d, rng);
    EmbeddingMatrix a = make_matrix(n, d, rng);
    const double T = 0.07;

    // softmax matrix computed independently of the kernel
    std::vector<double> p(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        double mx = -HUGE_VAL;
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k)
                s += t.values[i * d + k] * a.values[j * d + k];
            p[i * n + j] = s / T;
            mx = std::max(mx, p[i * n + j]);
        }
        double denom = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            p[i * n + j] = std::exp(p[i * n + j] - mx);
            denom += p[i * n + j];
        }
        for (std::size_t j = 0; j < n; ++j)
            p[i * n + j] /= denom;
    }
    std::vector<double> expected(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < d; ++k) {
            double acc = -t.values[i * d + k];
            for (std::size_t j = 0; j < n; ++j)
                acc += p[j * n + i] * t.values[j * d + k];
            expected[k] += acc / (static_cast<double>(n) * T);
        }

    const double h = 1e-6;
    for (std::size_t k = 0; k < d; ++k) {
        EmbeddingMatrix up = a, down = a;
        for (std::size_t i = 0; i < n; ++i) {
            up.values[i * d + k] += h;
            down.values[i * d + k] -= h;
        }
        double fd = (infonce_loss(t, up, T).l1 - infonce_loss(t, down, T).l1) /
                    (2.0 * h);
        CHECK(fd == doctest::Approx(expected[k]).epsilon(1e-5));
    }
}

TEST_CASE("high temperature limit approaches uniform softmax") {
    SplitMix rng(37);
    const std::size_t n = 5, d = 3;
    EmbeddingMatrix t = make_matrix(n, d, rng);
    EmbeddingMatrix a = make_matrix(n, d, rng);
    const double T = 1e6;
    InfonceGradients g = infonce_grad(t, a, T);
    const double inv_nt = 1.0 / (static_cast<double>(n) * T);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < d; ++k) {
            // dL1/dt_i + dL2/dt_i with p == q == 1/n
            double expect = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                double delta = i == j ? 1.0 : 0.0;
                expect += inv_nt * (1.0 / n - delta) * a.values[j * d + k] * 2.0;
            }
            CHECK(g.grad_texts[i * d + k] ==
                  doctest::Approx(expect).epsilon(1e-3));
        }
}

TEST_CASE("shape and temperature validation") {
    SplitMix rng(41);
    EmbeddingMatrix t = make_matrix(3, 4, rng);
    EmbeddingMatrix a = make_matrix(4, 4, rng);
    CHECK_THROWS_AS(infonce_loss(t, a), ShapeMismatch);
    EmbeddingMatrix b = make_matrix(3, 4, rng);
    CHECK_THROWS_AS(infonce_loss(t, b, 0.0), NonPositiveTemperature);
    CHECK_THROWS_AS(infonce_loss(t, b, -1.0), NonPositiveTemperature);
    CHECK_THROWS_AS(infonce_grad(t, a), ShapeMismatch);
}

TEST_CASE("aemb round trip") {
    SplitMix rng(43);
    EmbeddingMatrix m = make_matrix(5, 3, rng);
    // make the doubles f32-representable so the round trip is exact
    for (double& v : m.values)
        v = static_cast<double>(static_cast<float>(v));
    std::stringstream buffer;
    write_aemb(buffer, m);
    EmbeddingMatrix back = read_aemb(buffer);
    CHECK(back.n == m.n);
    CHECK(back.d == m.d);
    CHECK(back.ids == m.ids);
    CHECK(back.values == m.values);

    // byte determinism: writing the reread matrix reproduces the bytes
    std::stringstream second;
    write_aemb(second, back);
    CHECK(second.str() == buffer.str());
}

TEST_CASE("aemb rejects malformed input") {
    std::stringstream bad_magic("XXXX");
    CHECK_THROWS_AS(read_aemb(bad_magic), AembFormatError);

    SplitMix rng(47);
    EmbeddingMatrix m = make_matrix(2, 2, rng);
    std::stringstream buffer;
    write_aemb(buffer, m);
    std::string bytes = buffer.str();
    std::stringstream truncated(bytes.substr(0, 16));
    CHECK_THROWS_AS(read_aemb(truncated), AembFormatError);
}
