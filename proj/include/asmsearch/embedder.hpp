#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace asmsearch {

// Bag-of-token-count embedding: each token increments the dimension selected
// by hashing it, so the vector is a hashed token histogram. Plumbing-only --
// it exercises the retrieval path end to end without a trained encoder.
std::vector<double> bag_of_tokens_embedding(
    const std::vector<std::string>& tokens, std::size_t dim = 64);

} // namespace asmsearch
