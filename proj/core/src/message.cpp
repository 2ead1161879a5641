#include "rltqap/message.hpp"

#include <bit>
#include <cstring>

#include "rltqap/errors.hpp"

namespace rltqap {

static_assert(std::endian::native == std::endian::little,
              "wire codec assumes a little-endian host");

namespace {
constexpr char kMagic[4] = {'R', 'L', 'T', 'Q'};
constexpr std::uint8_t kVersion = 1;
constexpr std::size_t kHeaderSize = 16;
}  // namespace

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::CompC: return "Comp(C)";
        case Phase::CompD: return "Comp(D)";
        case Phase::CompE: return "Comp(E)";
        case Phase::MensB: return "Mens(B)";
    }
    return "?";
}

int phase_arity(Phase p) {
    switch (p) {
        case Phase::CompC: return 2;
        case Phase::CompD: return 3;
        case Phase::CompE: return 4;
        case Phase::MensB: return 1;
    }
    return 0;
}

std::size_t encoded_size(const PhaseMessage& msg, int precision_bits) {
    std::size_t per_entry = 2 * static_cast<std::size_t>(phase_arity(msg.phase)) +
                            static_cast<std::size_t>(precision_bits / 8);
    return kHeaderSize + msg.entries.size() * per_entry;
}

std::vector<std::uint8_t> encode(const PhaseMessage& msg, int precision_bits) {
    std::vector<std::uint8_t> out;
    out.reserve(encoded_size(msg, precision_bits));
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(kVersion);
    out.push_back(static_cast<std::uint8_t>(msg.phase));
    auto put = [&](const void* p, std::size_t len) {
        const auto* bytes = static_cast<const std::uint8_t*>(p);
        out.insert(out.end(), bytes, bytes + len);
    };
    put(&msg.source, 2);
    put(&msg.iteration, 4);
    std::uint32_t count = static_cast<std::uint32_t>(msg.entries.size());
    put(&count, 4);
    // header is 4+1+1+2+4+4 = 16 bytes
    int arity = phase_arity(msg.phase);
    for (const auto& [tuple, value] : msg.entries) {
        for (int t = 0; t < 2 * arity; ++t) out.push_back(tuple.v[t]);
        if (precision_bits == 32) {
            float f = static_cast<float>(value);
            put(&f, 4);
        } else {
            put(&value, 8);
        }
    }
    return out;
}

PhaseMessage decode(const std::vector<std::uint8_t>& bytes, int precision_bits, int expected_n) {
    if (bytes.size() < kHeaderSize) throw TruncatedPayload("message shorter than header");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw BadMagic("bad message magic");
    if (bytes[4] != kVersion) throw VersionMismatch("unsupported wire version");
    if (bytes[5] > 3) throw TruncatedPayload("unknown phase byte");
    PhaseMessage msg;
    msg.phase = static_cast<Phase>(bytes[5]);
    std::memcpy(&msg.source, bytes.data() + 6, 2);
    std::memcpy(&msg.iteration, bytes.data() + 8, 4);
    std::uint32_t count;
    std::memcpy(&count, bytes.data() + 12, 4);
    int arity = phase_arity(msg.phase);
    std::size_t per_entry = 2 * static_cast<std::size_t>(arity) + precision_bits / 8;
    if (bytes.size() != kHeaderSize + per_entry * count)
        throw TruncatedPayload("message length does not match entry count");
    msg.entries.reserve(count);
    std::size_t off = kHeaderSize;
    for (std::uint32_t idx = 0; idx < count; ++idx) {
        Tuple t;
        t.arity = arity;
        for (int x = 0; x < 2 * arity; ++x) {
            t.v[x] = bytes[off++];
            if (expected_n > 0 && t.v[x] >= expected_n)
                throw TupleOutOfRange("tuple component exceeds instance size");
        }
        double value;
        if (precision_bits == 32) {
            float f;
            std::memcpy(&f, bytes.data() + off, 4);
            value = f;
            off += 4;
        } else {
            std::memcpy(&value, bytes.data() + off, 8);
            off += 8;
        }
        msg.entries.emplace_back(t, value);
    }
    return msg;
}

}  // namespace rltqap
