#include "asmsearch/seq_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace asmsearch {

namespace {

// n-gram key: tokens joined with an unlikely separator byte
std::unordered_map<std::string, std::size_t> ngram_counts(const TokenList& seq,
                                                          int n) {
    std::unordered_map<std::string, std::size_t> counts;
    if (static_cast<std::size_t>(n) > seq.size())
        return counts;
    for (std::size_t i = 0; i + n <= seq.size(); ++i) {
        std::string key = seq[i];
        for (int j = 1; j < n; ++j) {
            key += '\x1f';
            key += seq[i + j];
        }
        ++counts[key];
    }
    return counts;
}

} // namespace

MetricScore bleu(const TokenList& candidate, const TokenList& reference,
                 int max_n) {
    if (candidate.empty() || reference.empty())
        throw EmptyInput();
    if (max_n < 1)
        throw std::invalid_argument("bleu: max_n must be >= 1");

    double log_precision_sum = 0.0;
    for (int n = 1; n <= max_n; ++n) {
        auto cand_counts = ngram_counts(candidate, n);
        auto ref_counts = ngram_counts(reference, n);
        std::size_t total = 0, matched = 0;
        for (const auto& [key, count] : cand_counts) {
            total += count;
            auto it = ref_counts.find(key);
            if (it != ref_counts.end())
                matched += std::min(count, it->second);
        }
        double p = matched > 0
                       ? static_cast<double>(matched) / static_cast<double>(total)
                       : (1.0 / static_cast<double>(total + 1)); // add-one
        log_precision_sum += std::log(p);
    }
    double ratio = static_cast<double>(reference.size()) /
                   static_cast<double>(candidate.size());
    double brevity = std::exp(std::min(0.0, 1.0 - ratio));
    return {MetricName::bleu, brevity * std::exp(log_precision_sum / max_n)};
}

std::size_t lcs_length(const TokenList& a, const TokenList& b) {
    if (a.empty() || b.empty())
        return 0;
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1])
                cur[j] = prev[j - 1] + 1;
            else
                cur[j] = std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

MetricScore rouge_l(const TokenList& candidate, const TokenList& reference) {
    if (candidate.empty() || reference.empty())
        throw EmptyInput();
    std::size_t lcs = lcs_length(candidate, reference);
    if (lcs == 0)
        return {MetricName::rouge_l, 0.0};
    double p = static_cast<double>(lcs) / static_cast<double>(candidate.size());
    double r = static_cast<double>(lcs) / static_cast<double>(reference.size());
    return {MetricName::rouge_l, 2.0 * p * r / (p + r)};
}

MetricScore meteor(const TokenList& candidate, const TokenList& reference) {
    if (candidate.empty() || reference.empty())
        throw EmptyInput();

    // Leftmost greedy alignment: each candidate token takes the first unused
    // identical reference position.
    std::unordered_map<std::string, std::vector<std::size_t>> ref_positions;
    for (std::size_t j = 0; j < reference.size(); ++j)
        ref_positions[reference[j]].push_back(j);
    std::unordered_map<std::string, std::size_t> next_use;

    std::vector<std::pair<std::size_t, std::size_t>> matches; // (cand, ref)
    for (std::size_t i = 0; i < candidate.size(); ++i) {
        auto it = ref_positions.find(candidate[i]);
        if (it == ref_positions.end())
            continue;
        std::size_t& used = next_use[candidate[i]];
        if (used < it->second.size()) {
            matches.emplace_back(i, it->second[used]);
            ++used;
        }
    }

    std::size_t m = matches.size();
    if (m == 0)
        return {MetricName::meteor, 0.0};

    std::size_t chunks = 1;
    for (std::size_t k = 1; k < matches.size(); ++k) {
        bool contiguous = matches[k].first == matches[k - 1].first + 1 &&
                          matches[k].second == matches[k - 1].second + 1;
        if (!contiguous)
            ++chunks;
    }

    double p = static_cast<double>(m) / static_cast<double>(candidate.size());
    double r = static_cast<double>(m) / static_cast<double>(reference.size());
    double fmean = 10.0 * p * r / (r + 9.0 * p);
    double frag = static_cast<double>(chunks) / static_cast<double>(m);
    double penalty = 0.5 * frag * frag * frag;
    return {MetricName::meteor, fmean * (1.0 - penalty)};
}

} // namespace asmsearch
