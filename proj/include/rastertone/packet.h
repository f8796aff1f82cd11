#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace rastertone {

// Serialized bit sequence, one 0/1 value per element, MSB-first ordering.
using BitStream = std::vector<std::uint8_t>;

inline constexpr std::uint8_t kPreambleByte = 0xAA;  // "10101010"
inline constexpr int kPreambleBits = 8;
inline constexpr int kPayloadBits = 32;
inline constexpr int kCrcBits = 8;
inline constexpr int kPacketBits = kPreambleBits + kPayloadBits + kCrcBits;

// CRC-8, polynomial x^8 + x^2 + x + 1 (0x07), init 0x00, MSB-first,
// no reflection, no final XOR, over the payload's four bytes.
std::uint8_t crc8(std::uint32_t payload);

// 10101010 | payload (MSB-first) | crc8(payload) -> 48 bits.
BitStream frame_packet(std::uint32_t payload);

struct Deframed {
    std::uint32_t payload = 0;
    std::uint8_t received_crc = 0;
    std::uint8_t calculated_crc = 0;
    bool ok = false;
};

// Strips the preamble and checks the CRC of a 48-bit packet.
Deframed deframe(const BitStream& bits);

std::array<std::uint8_t, kPreambleBits> preamble_bits();

// ASCII '0'/'1' text form.
std::string bits_to_string(const BitStream& bits);
BitStream bits_from_string(const std::string& text);

void append_bits_msb(BitStream& bits, std::uint64_t value, int count);
std::uint64_t read_bits_msb(const BitStream& bits, std::size_t offset, int count);

}  // namespace rastertone
