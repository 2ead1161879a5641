#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rltqap/indexing.hpp"

namespace rltqap {

enum class Phase : std::uint8_t { CompC = 0, CompD = 1, CompE = 2, MensB = 3 };

const char* phase_name(Phase p);
/// Pair count of the phase's tuples (1 for MensB).
int phase_arity(Phase p);
/// Tensor level the phase transports (1=B ... 4 unused); mapping used by the
/// engine to decide which phases a run level needs.
inline bool phase_at_level(Phase p, int level) {
    switch (p) {
        case Phase::CompE: return level >= 3;
        case Phase::CompD: return level >= 2;
        default: return true;
    }
}

/// Coefficients exchanged between two workers for one phase of one iteration.
struct PhaseMessage {
    Phase phase = Phase::MensB;
    std::uint16_t source = 0;
    std::uint32_t iteration = 0;
    std::vector<std::pair<Tuple, double>> entries;

    bool operator==(const PhaseMessage&) const = default;
};

/// Wire layout (little-endian):
///   magic "RLTQ" | version u8 | phase u8 | source u16 | iteration u32 |
///   entry count u32 | per entry: arity*2 tuple components as u8, then the
///   coefficient as IEEE-754 (4 or 8 bytes per precision_bits).
std::vector<std::uint8_t> encode(const PhaseMessage& msg, int precision_bits = 64);
/// expected_n > 0 additionally range-checks every tuple component.
PhaseMessage decode(const std::vector<std::uint8_t>& bytes, int precision_bits = 64,
                    int expected_n = 0);

/// Size in bytes encode would produce, without building the buffer.
std::size_t encoded_size(const PhaseMessage& msg, int precision_bits = 64);

}  // namespace rltqap
