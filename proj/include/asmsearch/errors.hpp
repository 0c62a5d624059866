#pragma once

#include <stdexcept>
#include <string>

namespace asmsearch {

// Shared across the contrastive kernel and the retrieval evaluator.
struct ShapeMismatch : std::invalid_argument {
    explicit ShapeMismatch(const std::string& what)
        : std::invalid_argument(what) {}
};

} // namespace asmsearch
