#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace asmsearch {

enum class MetricName { bleu, rouge_l, meteor };

struct MetricScore {
    MetricName name;
    double value; // in [0, 1]
};

struct EmptyInput : std::runtime_error {
    EmptyInput() : std::runtime_error("empty token sequence") {}
};

using TokenList = std::vector<std::string>;

// Sentence-level BLEU: geometric mean of modified n-gram precisions for
// n = 1..max_n with uniform weights, times the brevity penalty
// exp(min(0, 1 - |ref|/|cand|)). Add-one smoothing on any n-gram precision
// whose match count is zero.
MetricScore bleu(const TokenList& candidate, const TokenList& reference,
                 int max_n = 4);

// ROUGE-L with balanced F: P = LCS/|cand|, R = LCS/|ref|, 2PR/(P+R).
MetricScore rouge_l(const TokenList& candidate, const TokenList& reference);

// Exact-match METEOR (no stemming or synonymy): with m unigram matches under
// a leftmost greedy alignment, P = m/|cand|, R = m/|ref|,
// Fmean = 10PR/(R+9P), penalty = 0.5 * (chunks/m)^3, score = Fmean*(1-penalty).
MetricScore meteor(const TokenList& candidate, const TokenList& reference);

// Longest common subsequence length (the core of ROUGE-L), exposed so tests
// can cross-check it against an independent implementation.
std::size_t lcs_length(const TokenList& a, const TokenList& b);

} // namespace asmsearch
