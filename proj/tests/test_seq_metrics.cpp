#include "asmsearch/seq_metrics.hpp"
#include "asmsearch/prf.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

using namespace asmsearch;

namespace {

TokenList toks(std::initializer_list<const char*> list) {
    TokenList out;
    for (const char* t : list)
        out.emplace_back(t);
    return out;
}

// Independent LCS oracle: memoized top-down recursion.
std::size_t lcs_recursive(const TokenList& a, const TokenList& b, std::size_t i,
                          std::size_t j,
                          std::map<std::pair<std::size_t, std::size_t>,
                                   std::size_t>& memo) {
    if (i == 0 || j == 0)
        return 0;
    auto key = std::make_pair(i, j);
    auto it = memo.find(key);
    if (it != memo.end())
        return it->second;
    std::size_t result;
    if (a[i - 1] == b[j - 1])
        result = lcs_recursive(a, b, i - 1, j - 1, memo) + 1;
    else
        result = std::max(lcs_recursive(a, b, i - 1, j, memo),
                          lcs_recursive(a, b, i, j - 1, memo));
    memo[key] = result;
    return result;
}

std::size_t lcs_oracle(const TokenList& a, const TokenList& b) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
    return lcs_recursive(a, b, a.size(), b.size(), memo);
}

} // namespace

TEST_CASE("bleu identity and golden values") {
    TokenList cand = toks({"mov", "rax", ",", "5"});
    CHECK(bleu(cand, cand).value == 1.0);

    // p1=3/4, p2=1/3, p3 smoothed 1/3, p4 smoothed 1/2 -> (1/24)^(1/4)
    TokenList ref = toks({"mov", "rbx", ",", "5"});
    double expected = 0.45180100180492242; // (1/24)^(1/4)
    CHECK(bleu(cand, ref).value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("bleu zero-overlap smoothing floor") {
    TokenList cand, ref;
    for (int i = 0; i < 10; ++i) {
        cand.push_back("a" + std::to_string(i));
        ref.push_back("b" + std::to_string(i));
    }
    // all precisions smoothed: (1/11 * 1/10 * 1/9 * 1/8)^(1/4)
    double expected = 0.10600313379512593;
    CHECK(bleu(cand, ref).value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("bleu brevity penalty punishes short candidates") {
    TokenList ref = toks({"a", "b", "c", "d", "e", "f", "g", "h"});
    TokenList cand = toks({"a", "b", "c", "d"});
    double full = bleu(ref, ref).value;
    double clipped = bleu(cand, ref).value;
    CHECK(clipped < full);
    // candidate longer than reference has brevity penalty 1:
    // precisions 8/9 * 7/8 * 6/7 * 5/6 = 5/9
    TokenList longer = ref;
    longer.push_back("i");
    CHECK(bleu(longer, ref).value ==
          doctest::Approx(std::pow(5.0 / 9.0, 0.25)).epsilon(1e-12));
}

TEST_CASE("bleu errors") {
    CHECK_THROWS_AS(bleu({}, toks({"a"})), EmptyInput);
    CHECK_THROWS_AS(bleu(toks({"a"}), {}), EmptyInput);
}

TEST_CASE("rouge_l golden values") {
    CHECK(rouge_l(toks({"a", "c", "d"}), toks({"a", "b", "c", "d"})).value ==
          doctest::Approx(6.0 / 7.0).epsilon(1e-15));
    TokenList same = toks({"x", "y", "z"});
    CHECK(rouge_l(same, same).value == 1.0);
    CHECK(rouge_l(toks({"a", "b"}), toks({"c", "d"})).value == 0.0);
    CHECK_THROWS_AS(rouge_l({}, same), EmptyInput);
}

TEST_CASE("lcs dual route agreement, exhaustive over 3-symbol alphabet") {
    const char* alphabet[] = {"x", "y", "z"};
    // all pairs with |a| + |b| <= 12
    for (std::size_t la = 0; la <= 6; ++la) {
        std::size_t a_count = 1;
        for (std::size_t i = 0; i < la; ++i)
            a_count *= 3;
        for (std::size_t lb = 0; lb + la <= 12 && lb <= 6; ++lb) {
            std::size_t b_count = 1;
            for (std::size_t i = 0; i < lb; ++i)
                b_count *= 3;
            for (std::size_t ai = 0; ai < a_count; ++ai) {
                TokenList a;
                for (std::size_t i = 0, v = ai; i < la; ++i, v /= 3)
                    a.emplace_back(alphabet[v % 3]);
                for (std::size_t bi = 0; bi < b_count; ++bi) {
                    TokenList b;
                    for (std::size_t i = 0, v = bi; i < lb; ++i, v /= 3)
                        b.emplace_back(alphabet[v % 3]);
                    REQUIRE(lcs_length(a, b) == lcs_oracle(a, b));
                }
            }
        }
    }
}

TEST_CASE("meteor golden values") {
    TokenList same = toks({"a", "b", "c", "d"});
    // m=4 chunks=1: penalty = 0.5*(1/4)^3, score = 1 - 0.0078125
    CHECK(meteor(same, same).value == 0.9921875);

    CHECK(meteor(toks({"a", "b"}), toks({"c", "d"})).value == 0.0);

    // reversed distinct tokens: m=n, chunks=n, penalty=0.5 -> Fmean/2
    TokenList fwd = toks({"a", "b", "c", "d", "e"});
    TokenList rev(fwd.rbegin(), fwd.rend());
    CHECK(meteor(rev, fwd).value == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(meteor({}, fwd), EmptyInput);
}

TEST_CASE("metric bounds and identity across random pairs") {
    SplitMix rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        TokenList cand, ref;
        std::size_t nc = 1 + rng.bounded(12), nr = 1 + rng.bounded(12);
        for (std::size_t i = 0; i < nc; ++i)
            cand.push_back("t" + std::to_string(rng.bounded(6)));
        for (std::size_t i = 0; i < nr; ++i)
            ref.push_back("t" + std::to_string(rng.bounded(6)));
        for (auto& metric : {bleu(cand, ref, 4), rouge_l(cand, ref), meteor(cand, ref)}) {
            CHECK(metric.value >= 0.0);
            CHECK(metric.value <= 1.0);
        }
    }
}

TEST_CASE("metrics invariant under bijective token renaming") {
    SplitMix rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        TokenList cand, ref;
        std::size_t nc = 4 + rng.bounded(8), nr = 4 + rng.bounded(8);
        for (std::size_t i = 0; i < nc; ++i)
            cand.push_back("t" + std::to_string(rng.bounded(5)));
        for (std::size_t i = 0; i < nr; ++i)
            ref.push_back("t" + std::to_string(rng.bounded(5)));
        auto rename = [](const TokenList& in) {
            TokenList out;
            for (const auto& t : in)
                out.push_back("renamed_" + t); // injective map
            return out;
        };
        CHECK(bleu(cand, ref).value == bleu(rename(cand), rename(ref)).value);
        CHECK(rouge_l(cand, ref).value ==
              rouge_l(rename(cand), rename(ref)).value);
        CHECK(meteor(cand, ref).value ==
              meteor(rename(cand), rename(ref)).value);
    }
}

TEST_CASE("identical inputs score 1 or near 1") {
    SplitMix rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        TokenList seq;
        std::size_t n = 4 + rng.bounded(20);
        for (std::size_t i = 0; i < n; ++i)
            seq.push_back("t" + std::to_string(rng.bounded(9)));
        CHECK(bleu(seq, seq).value == 1.0);
        CHECK(rouge_l(seq, seq).value == 1.0);
        double met = meteor(seq, seq).value;
        CHECK(met > 0.99);
        CHECK(met < 1.0);
        // closed form: 1 - 0.5/m^3 for an identical length-m sequence
        double m = static_cast<double>(n);
        CHECK(met == doctest::Approx(1.0 - 0.5 / (m * m * m)).epsilon(1e-15));
    }
}
