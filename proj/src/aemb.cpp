#include "asmsearch/aemb.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace asmsearch {

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v),
                          static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) |
           (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

} // namespace

void write_aemb(std::ostream& out, const EmbeddingMatrix& m) {
    if (m.ids.size() != m.n || m.values.size() != m.n * m.d)
        throw AembFormatError("inconsistent embedding matrix");
    out.write("AEMB", 4);
    out.put(static_cast<char>(1));
    put_u32(out, static_cast<std::uint32_t>(m.n));
    put_u32(out, static_cast<std::uint32_t>(m.d));
    for (double v : m.values) {
        std::uint32_t bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
        put_u32(out, bits);
    }
    for (const std::string& id : m.ids) {
        out.write(id.data(), static_cast<std::streamsize>(id.size()));
        out.put('\n');
    }
    if (!out)
        throw AembFormatError("write failed");
}

void write_aemb_file(const std::string& path, const EmbeddingMatrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw AembFormatError("cannot open for writing: " + path);
    write_aemb(out, m);
}

EmbeddingMatrix read_aemb(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "AEMB", 4) != 0)
        throw AembFormatError("bad magic, not an AEMB file");
    int version = in.get();
    if (version != 1)
        throw AembFormatError("unsupported AEMB version " +
                              std::to_string(version));
    EmbeddingMatrix m;
    m.n = get_u32(in);
    m.d = get_u32(in);
    if (!in || m.n == 0 || m.d == 0)
        throw AembFormatError("bad AEMB dimensions");
    m.values.resize(m.n * m.d);
    for (double& v : m.values) {
        float f = std::bit_cast<float>(get_u32(in));
        if (!in)
            throw AembFormatError("truncated AEMB value block");
        if (!std::isfinite(f))
            throw AembFormatError("non-finite embedding value");
        v = static_cast<double>(f);
    }
    m.ids.reserve(m.n);
    for (std::size_t i = 0; i < m.n; ++i) {
        std::string id;
        if (!std::getline(in, id))
            throw AembFormatError("truncated AEMB id block");
        m.ids.push_back(std::move(id));
    }
    return m;
}

EmbeddingMatrix read_aemb_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw AembFormatError("cannot open: " + path);
    return read_aemb(in);
}

} // namespace asmsearch
