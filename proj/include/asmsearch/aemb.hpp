#pragma once

#include "asmsearch/infonce.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace asmsearch {

// AEMB embedding file format, shared by the contrastive kernel and retrieval:
//   bytes 0..3   magic "AEMB"
//   byte  4      version, currently 1
//   bytes 5..8   n, unsigned 32-bit little-endian
//   bytes 9..12  d, unsigned 32-bit little-endian
//   then n*d IEEE-754 binary32 values, little-endian, row-major
//   then n ids, UTF-8, each terminated by '\n'

struct AembFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_aemb(std::ostream& out, const EmbeddingMatrix& m);
void write_aemb_file(const std::string& path, const EmbeddingMatrix& m);

EmbeddingMatrix read_aemb(std::istream& in);
EmbeddingMatrix read_aemb_file(const std::string& path);

} // namespace asmsearch
