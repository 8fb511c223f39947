// Copyright 2026 The bdc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bdc/codec.h"

#include <stdexcept>

namespace bdc {

BitPair::BitPair(unsigned value) {
    if (value > 3) {
        throw std::out_of_range("BitPair value must be in 0..3");
    }
    value_ = static_cast<uint8_t>(value);
}

std::string BitPair::str() const {
    return {high() ? '1' : '0', low() ? '1' : '0'};
}

PauliOp op_for_bits(BitPair b) {
    return pauli_from_code(b.value());
}

BitPair bits_for_op(PauliOp op) {
    return BitPair(code(op));
}

// Local Paulis on a singlet compose as the Klein four-group: up to phase,
// U_a U_b = U_(a xor b), and U_k|Ψ−⟩ is the Bell state with index k on
// either photon.
BellState expected_bell(PauliOp alice_op, PauliOp bob_op) {
    return bell_from_index(code(alice_op) ^ code(bob_op));
}

BitPair decode_alice(PauliOp bob_op, BellState result) {
    return BitPair(index(result) ^ code(bob_op));
}

BitPair decode_bob(PauliOp alice_op, BellState result) {
    return BitPair(index(result) ^ code(alice_op));
}

MessageBits MessageBits::from_bits(std::vector<uint8_t> bits) {
    MessageBits m;
    for (auto b : bits) {
        if (b > 1) {
            throw std::invalid_argument("message bits must be 0 or 1");
        }
    }
    m.bits_ = std::move(bits);
    if (m.bits_.size() % 2 != 0) {
        m.bits_.push_back(0);
        m.pad_bits_ = 1;
    }
    return m;
}

MessageBits MessageBits::from_pairs(std::span<const BitPair> pairs, size_t pad_bits) {
    if (pad_bits > pairs.size() * 2) {
        throw std::invalid_argument("padding exceeds message length");
    }
    MessageBits m;
    m.bits_.reserve(pairs.size() * 2);
    for (auto p : pairs) {
        m.bits_.push_back(p.high());
        m.bits_.push_back(p.low());
    }
    m.pad_bits_ = pad_bits;
    return m;
}

std::optional<MessageBits> MessageBits::parse(std::string_view text) {
    std::vector<uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') {
            return std::nullopt;
        }
        bits.push_back(c == '1');
    }
    return from_bits(std::move(bits));
}

BitPair MessageBits::pair(size_t i) const {
    return BitPair::from_bits(bits_.at(2 * i), bits_.at(2 * i + 1));
}

std::vector<BitPair> MessageBits::pairs() const {
    std::vector<BitPair> out;
    out.reserve(pair_count());
    for (size_t i = 0; i < pair_count(); i++) {
        out.push_back(pair(i));
    }
    return out;
}

std::vector<uint8_t> MessageBits::payload() const {
    return {bits_.begin(), bits_.begin() + static_cast<ptrdiff_t>(payload_size())};
}

MessageBits MessageBits::padded_to(size_t total_bits) const {
    if (total_bits % 2 != 0 || total_bits < bits_.size()) {
        throw std::invalid_argument("padded length must be even and not shorter than the message");
    }
    MessageBits m = *this;
    m.pad_bits_ += total_bits - bits_.size();
    m.bits_.resize(total_bits, 0);
    return m;
}

MessageBits MessageBits::with_payload_size(size_t payload_bits) const {
    if (payload_bits > bits_.size()) {
        throw std::invalid_argument("payload longer than message");
    }
    MessageBits m = *this;
    m.pad_bits_ = bits_.size() - payload_bits;
    return m;
}

MessageBits MessageBits::stripped() const {
    return from_bits(payload());
}

std::string MessageBits::payload_str() const {
    std::string s;
    s.reserve(payload_size());
    for (size_t k = 0; k < payload_size(); k++) {
        s.push_back(bits_[k] ? '1' : '0');
    }
    return s;
}

MessageBits pack_bits(std::span<const uint8_t> raw) {
    std::vector<uint8_t> bits;
    bits.reserve(raw.size() * 8);
    for (uint8_t byte : raw) {
        for (int k = 7; k >= 0; k--) {
            bits.push_back((byte >> k) & 1);
        }
    }
    return MessageBits::from_bits(std::move(bits));
}

std::vector<uint8_t> unpack_bits(const MessageBits &m) {
    std::vector<uint8_t> out((m.payload_size() + 7) / 8, 0);
    for (size_t k = 0; k < m.payload_size(); k++) {
        if (m.bits()[k]) {
            out[k / 8] |= static_cast<uint8_t>(0x80 >> (k % 8));
        }
    }
    return out;
}

std::optional<std::vector<uint8_t>> parse_hex(std::string_view text) {
    if (text.starts_with("0x") || text.starts_with("0X")) {
        text.remove_prefix(2);
    }
    if (text.size() % 2 != 0) {
        return std::nullopt;
    }
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    std::vector<uint8_t> out;
    out.reserve(text.size() / 2);
    for (size_t k = 0; k < text.size(); k += 2) {
        int hi = nibble(text[k]);
        int lo = nibble(text[k + 1]);
        if (hi < 0 || lo < 0) {
            return std::nullopt;
        }
        out.push_back(static_cast<uint8_t>(hi * 16 + lo));
    }
    return out;
}

std::string to_hex(std::span<const uint8_t> bytes) {
    constexpr char digits[] = "0123456789abcdef";
    std::string s;
    s.reserve(bytes.size() * 2);
    for (uint8_t b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 15]);
    }
    return s;
}

MessageBits random_message(size_t payload_bits, RandomStream &rng) {
    std::vector<uint8_t> bits(payload_bits);
    for (auto &b : bits) {
        b = rng.coin();
    }
    return MessageBits::from_bits(std::move(bits));
}

}  // namespace bdc
