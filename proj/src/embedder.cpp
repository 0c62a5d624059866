#include "asmsearch/embedder.hpp"
#include "asmsearch/prf.hpp"

namespace asmsearch {

namespace {
constexpr std::uint64_t kBagSeed = 0x6261675f746f6b73ULL; // "bag_toks"
}

std::vector<double> bag_of_tokens_embedding(
    const std::vector<std::string>& tokens, std::size_t dim) {
    std::vector<double> v(dim, 0.0);
    for (const std::string& token : tokens)
        v[prf(kBagSeed, fnv1a64(token)) % dim] += 1.0;
    return v;
}

} // namespace asmsearch
