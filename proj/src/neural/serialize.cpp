#include "bta/neural/serialize.hpp"

#include <cmath>
#include <fstream>
#include <iterator>

#include "bta/core/bytes.hpp"
#include "bta/core/error.hpp"
#include "bta/core/hash.hpp"

namespace bta::neural {

namespace {

constexpr char kMagic[4] = {'P', 'N', 'E', 'T'};
constexpr std::uint32_t kMaxDim = 1 << 16;

}  // namespace

std::vector<std::uint8_t> save_params(const NetParams& params) {
    params.check();
    ByteWriter w;
    for (char c : kMagic) {
        w.put(static_cast<std::uint8_t>(c));
    }
    w.put(kNetVersion);
    for (int d : params.dims) {
        w.put(static_cast<std::uint32_t>(d));
    }
    for (const auto* v : {&params.w1, &params.b1, &params.w2, &params.b2}) {
        for (double x : *v) {
            w.put(static_cast<float>(x));
        }
    }
    const std::uint32_t crc = crc32(w.bytes());
    w.put(crc);
    return w.take();
}

NetParams load_params(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    for (char c : kMagic) {
        if (r.remaining() == 0 || r.get<std::uint8_t>() != static_cast<std::uint8_t>(c)) {
            throw Error("bad-magic", "not a weight file");
        }
    }
    const auto version = r.get<std::uint16_t>();
    if (version != kNetVersion) {
        throw Error("bad-version", "unsupported weight version " + std::to_string(version));
    }
    std::array<std::uint32_t, 3> dims{};
    for (auto& d : dims) {
        d = r.get<std::uint32_t>();
        if (d < 1 || d > kMaxDim) {
            throw Error("bad-params", "layer dim out of range: " + std::to_string(d));
        }
    }
    NetParams p = NetParams::zeros(static_cast<int>(dims[0]), static_cast<int>(dims[1]), static_cast<int>(dims[2]));
    const std::size_t payload = p.parameter_count() * sizeof(float);
    if (r.remaining() != payload + sizeof(std::uint32_t)) {
        throw Error("truncated", "weight file length does not match its dims");
    }
    bool finite = true;
    for (auto* v : {&p.w1, &p.b1, &p.w2, &p.b2}) {
        for (auto& x : *v) {
            x = static_cast<double>(r.get<float>());
            finite = finite && std::isfinite(x);
        }
    }
    if (!finite) {
        throw Error("non-finite-weight", "weight file contains NaN or Inf");
    }
    const std::size_t body = r.position();
    const auto stored = r.get<std::uint32_t>();
    if (stored != crc32(bytes.first(body))) {
        throw Error("bad-checksum", "weight file checksum mismatch");
    }
    return p;
}

void save_params_file(const NetParams& params, const std::string& path) {
    const auto bytes = save_params(params);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("io", "cannot write " + path);
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

NetParams load_params_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("io", "cannot read " + path);
    }
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_params(bytes);
}

}  // namespace bta::neural
