#pragma once

#include "asmsearch/errors.hpp"
#include "asmsearch/infonce.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace asmsearch {

struct QueryRecord {
    std::string id;
    std::string text;
    std::set<std::string> relevant_ids; // non-empty
};

struct RetrievalResult {
    std::string query_id;
    std::vector<std::string> ranked_ids; // descending score
    std::vector<double> scores;          // parallel, non-increasing
};

struct EvalReport {
    std::map<int, double> recall_at;
    double map = 0.0;
    std::size_t n_queries = 0;
    std::size_t pool_size = 0;
};

struct KExceedsPool : std::invalid_argument {
    KExceedsPool() : std::invalid_argument("k exceeds pool size") {}
};

struct MissingResult : std::runtime_error {
    explicit MissingResult(const std::string& query_id)
        : std::runtime_error("no retrieval result for query " + query_id) {}
};

struct PoolTooSmall : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Brute-force top-k by dot product; ties broken by ascending id so the ranking
// is independent of pool row order. `normalize` switches to cosine scoring.
RetrievalResult search_topk(std::span<const double> query_vec,
                            const EmbeddingMatrix& pool, std::size_t k,
                            bool normalize = false);

// Min-normalized recall@k: (1/q) sum_i |relevant_i ∩ top-k_i| / min(|relevant_i|, k).
// Results may be full rankings; only the first k entries count.
double recall_at_k(const std::vector<RetrievalResult>& results,
                   const std::vector<QueryRecord>& judgments, std::size_t k);

// Mean over queries of average precision computed on the full rankings:
// AP = (1/|relevant|) * sum over relevant ranks k of P@k.
double mean_ap(const std::vector<RetrievalResult>& results,
               const std::vector<QueryRecord>& judgments);

// Evaluation pool: every relevant id of every query plus uniformly sampled
// distractors up to pool_size, emitted in corpus order. Deterministic in seed.
std::vector<std::string> build_pool(const std::vector<std::string>& corpus_ids,
                                    const std::vector<QueryRecord>& judgments,
                                    std::size_t pool_size = 10000,
                                    std::uint64_t seed = 0);

} // namespace asmsearch
