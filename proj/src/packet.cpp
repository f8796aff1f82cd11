#include "rastertone/packet.h"

#include <stdexcept>

namespace rastertone {

namespace {

constexpr std::array<std::uint8_t, 256> make_crc8_table() {
    std::array<std::uint8_t, 256> table{};
    for (int i = 0; i < 256; ++i) {
        std::uint8_t crc = static_cast<std::uint8_t>(i);
        for (int bit = 0; bit < 8; ++bit) {
            crc = static_cast<std::uint8_t>((crc & 0x80) ? (crc << 1) ^ 0x07 : (crc << 1));
        }
        table[static_cast<std::size_t>(i)] = crc;
    }
    return table;
}

constexpr auto kCrc8Table = make_crc8_table();

}  // namespace

std::uint8_t crc8(std::uint32_t payload) {
    std::uint8_t crc = 0x00;
    for (int shift = 24; shift >= 0; shift -= 8) {
        const std::uint8_t byte = static_cast<std::uint8_t>(payload >> shift);
        crc = kCrc8Table[static_cast<std::size_t>(crc ^ byte)];
    }
    return crc;
}

BitStream frame_packet(std::uint32_t payload) {
    BitStream bits;
    bits.reserve(kPacketBits);
    append_bits_msb(bits, kPreambleByte, kPreambleBits);
    append_bits_msb(bits, payload, kPayloadBits);
    append_bits_msb(bits, crc8(payload), kCrcBits);
    return bits;
}

Deframed deframe(const BitStream& bits) {
    if (bits.size() != static_cast<std::size_t>(kPacketBits)) {
        throw std::invalid_argument("deframe: expected 48 bits, got " +
                                    std::to_string(bits.size()));
    }
    Deframed d;
    d.payload = static_cast<std::uint32_t>(
        read_bits_msb(bits, kPreambleBits, kPayloadBits));
    d.received_crc = static_cast<std::uint8_t>(
        read_bits_msb(bits, kPreambleBits + kPayloadBits, kCrcBits));
    d.calculated_crc = crc8(d.payload);
    d.ok = d.received_crc == d.calculated_crc;
    return d;
}

std::array<std::uint8_t, kPreambleBits> preamble_bits() {
    std::array<std::uint8_t, kPreambleBits> out{};
    for (int i = 0; i < kPreambleBits; ++i) {
        out[static_cast<std::size_t>(i)] =
            static_cast<std::uint8_t>((kPreambleByte >> (7 - i)) & 1);
    }
    return out;
}

std::string bits_to_string(const BitStream& bits) {
    std::string s;
    s.reserve(bits.size());
    for (std::uint8_t b : bits) s.push_back(b ? '1' : '0');
    return s;
}

BitStream bits_from_string(const std::string& text) {
    BitStream bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c == '0') bits.push_back(0);
        else if (c == '1') bits.push_back(1);
        else throw std::invalid_argument("bit string may contain only '0'/'1'");
    }
    return bits;
}

void append_bits_msb(BitStream& bits, std::uint64_t value, int count) {
    for (int i = count - 1; i >= 0; --i) {
        bits.push_back(static_cast<std::uint8_t>((value >> i) & 1));
    }
}

std::uint64_t read_bits_msb(const BitStream& bits, std::size_t offset, int count) {
    if (offset + static_cast<std::size_t>(count) > bits.size()) {
        throw std::out_of_range("bit read past end of stream");
    }
    std::uint64_t v = 0;
    for (int i = 0; i < count; ++i) {
        v = (v << 1) | (bits[offset + static_cast<std::size_t>(i)] & 1);
    }
    return v;
}

}  // namespace rastertone
