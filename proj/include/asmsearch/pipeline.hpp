#pragma once

#include "asmsearch/ir.hpp"
#include "asmsearch/record.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace asmsearch {

inline constexpr std::size_t kDefaultMinBodyLines = 5;
inline constexpr std::size_t kDefaultMinDocstringWords = 4;
inline constexpr std::size_t kMixShortLimit = 2048;  // tokens
inline constexpr std::size_t kMixTotalLimit = 4096;

// Streaming filter predicate: true when the record survives. Drops
// inline-flagged records first, then bodies shorter than min_body_lines;
// updates the report either way.
bool keep_record(const PairRecord& record, std::size_t min_body_lines,
                 FilterReport& report);

// Whole-corpus convenience over keep_record.
std::vector<PairRecord> filter_pairs(const std::vector<PairRecord>& records,
                                     std::size_t min_body_lines,
                                     FilterReport& report);

struct UnterminatedComment : std::runtime_error {
    UnterminatedComment() : std::runtime_error("unterminated block comment") {}
};

// Removes comments from the function body using the language's comment
// syntax (C family: // and non-nesting /* */; python/ruby: #). String
// literals are untouched; trailing whitespace is trimmed per line;
// body_line_count is recomputed. Throws UnterminatedComment.
SourceFunction strip_source_comments(const SourceFunction& s);

// Docstring cleaning: strips per-line leading/trailing '*' borders, keeps the
// first paragraph (up to the first blank line), and drops the result entirely
// when fewer than min_words words remain. Idempotent.
std::optional<std::string> clean_docstring(const std::string& text,
                                           std::size_t min_words = kDefaultMinDocstringWords);

// Uniform draw over the 6x5 compiler/optimization grid plus a stripped bit,
// as a pure function of (seed, record id).
CompilationProfile assign_profile(std::uint64_t rng_seed,
                                  std::string_view record_id);

// Total token count used for length bucketing: assembly tokens (parsed) plus
// whitespace-separated source body tokens.
std::size_t total_token_count(const PairRecord& record);

// Length mixing at a 3:1 short-to-long ratio. Records above kMixTotalLimit
// total tokens are dropped; short (<= kMixShortLimit) and long records are
// interleaved S S S L until one bucket runs dry, and the leftovers of the
// other bucket are dropped to preserve the exact ratio. When either bucket is
// empty from the start the other passes through unchanged. Order is stable.
std::vector<PairRecord> sample_mix(const std::vector<PairRecord>& records,
                                   std::uint64_t rng_seed);

// Off-by-default ingestion helper: guesses that a function contains inlined
// callees when its label table holds more than one symbol.
bool infer_inline_heuristic(const AssemblyFunction& f);

} // namespace asmsearch
