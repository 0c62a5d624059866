#include "asmsearch/retrieval.hpp"
#include "asmsearch/prf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace asmsearch {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        s += a[k] * b[k];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

const RetrievalResult& result_for(
    const std::unordered_map<std::string, const RetrievalResult*>& by_id,
    const QueryRecord& query) {
    auto it = by_id.find(query.id);
    if (it == by_id.end())
        throw MissingResult(query.id);
    return *it->second;
}

std::unordered_map<std::string, const RetrievalResult*> index_results(
    const std::vector<RetrievalResult>& results) {
    std::unordered_map<std::string, const RetrievalResult*> by_id;
    by_id.reserve(results.size());
    for (const RetrievalResult& r : results)
        by_id.emplace(r.query_id, &r);
    return by_id;
}

} // namespace

RetrievalResult search_topk(std::span<const double> query_vec,
                            const EmbeddingMatrix& pool, std::size_t k,
                            bool normalize) {
    if (query_vec.size() != pool.d)
        throw ShapeMismatch("query dimension " +
                            std::to_string(query_vec.size()) +
                            " vs pool dimension " + std::to_string(pool.d));
    if (k < 1 || k > pool.n)
        throw KExceedsPool();

    std::vector<double> query(query_vec.begin(), query_vec.end());
    if (normalize) {
        double qn = norm(query_vec);
        if (qn > 0.0)
            for (double& v : query)
                v /= qn;
    }

    std::vector<std::pair<double, std::size_t>> scored(pool.n);
    for (std::size_t i = 0; i < pool.n; ++i) {
        double s = dot(query, pool.row(i));
        if (normalize) {
            double rn = norm(pool.row(i));
            if (rn > 0.0)
                s /= rn;
        }
        scored[i] = {s, i};
    }
    auto better = [&pool](const std::pair<double, std::size_t>& a,
                          const std::pair<double, std::size_t>& b) {
        if (a.first != b.first)
            return a.first > b.first;
        return pool.ids[a.second] < pool.ids[b.second];
    };
    std::partial_sort(scored.begin(), scored.begin() + static_cast<long>(k),
                      scored.end(), better);

    RetrievalResult result;
    result.ranked_ids.reserve(k);
    result.scores.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        result.ranked_ids.push_back(pool.ids[scored[i].second]);
        result.scores.push_back(scored[i].first);
    }
    return result;
}

double recall_at_k(const std::vector<RetrievalResult>& results,
                   const std::vector<QueryRecord>& judgments, std::size_t k) {
    if (judgments.empty())
        return 0.0;
    auto by_id = index_results(results);
    double sum = 0.0;
    for (const QueryRecord& query : judgments) {
        const RetrievalResult& result = result_for(by_id, query);
        std::size_t cutoff = std::min(k, result.ranked_ids.size());
        std::size_t hits = 0;
        for (std::size_t i = 0; i < cutoff; ++i)
            hits += query.relevant_ids.count(result.ranked_ids[i]);
        std::size_t denom = std::min(query.relevant_ids.size(), k);
        sum += static_cast<double>(hits) / static_cast<double>(denom);
    }
    return sum / static_cast<double>(judgments.size());
}

double mean_ap(const std::vector<RetrievalResult>& results,
               const std::vector<QueryRecord>& judgments) {
    if (judgments.empty())
        return 0.0;
    auto by_id = index_results(results);
    double sum = 0.0;
    for (const QueryRecord& query : judgments) {
        const RetrievalResult& result = result_for(by_id, query);
        double ap = 0.0;
        std::size_t hits = 0;
        for (std::size_t rank = 1; rank <= result.ranked_ids.size(); ++rank) {
            if (query.relevant_ids.count(result.ranked_ids[rank - 1])) {
                ++hits;
                ap += static_cast<double>(hits) / static_cast<double>(rank);
            }
        }
        sum += ap / static_cast<double>(query.relevant_ids.size());
    }
    return sum / static_cast<double>(judgments.size());
}

std::vector<std::string> build_pool(const std::vector<std::string>& corpus_ids,
                                    const std::vector<QueryRecord>& judgments,
                                    std::size_t pool_size, std::uint64_t seed) {
    std::unordered_set<std::string> relevant;
    for (const QueryRecord& query : judgments)
        relevant.insert(query.relevant_ids.begin(), query.relevant_ids.end());
    if (pool_size < relevant.size())
        throw PoolTooSmall("pool size " + std::to_string(pool_size) +
                           " below relevant count " +
                           std::to_string(relevant.size()));
    if (corpus_ids.size() < pool_size)
        throw PoolTooSmall("corpus smaller than requested pool");
    for (const std::string& id : relevant)
        if (std::find(corpus_ids.begin(), corpus_ids.end(), id) ==
            corpus_ids.end())
            throw std::invalid_argument("relevant id not in corpus: " + id);

    std::vector<std::size_t> candidates; // corpus positions of non-relevant ids
    candidates.reserve(corpus_ids.size());
    for (std::size_t i = 0; i < corpus_ids.size(); ++i)
        if (!relevant.count(corpus_ids[i]))
            candidates.push_back(i);

    std::size_t want = pool_size - relevant.size();
    SplitMix rng(seed);
    std::vector<bool> selected(corpus_ids.size(), false);
    // partial Fisher-Yates: the first `want` slots become the sample
    for (std::size_t i = 0; i < want; ++i) {
        std::size_t j = i + static_cast<std::size_t>(
                                rng.bounded(candidates.size() - i));
        std::swap(candidates[i], candidates[j]);
        selected[candidates[i]] = true;
    }

    std::vector<std::string> pool;
    pool.reserve(pool_size);
    for (std::size_t i = 0; i < corpus_ids.size(); ++i)
        if (selected[i] || relevant.count(corpus_ids[i]))
            pool.push_back(corpus_ids[i]);
    return pool;
}

} // namespace asmsearch
