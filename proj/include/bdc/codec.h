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

#ifndef BDC_CODEC_H
#define BDC_CODEC_H

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bdc/qsim.h"

namespace bdc {

/// Two message bits, high bit first ("10" == 2).
class BitPair {
   public:
    constexpr BitPair() = default;
    /// Throws std::out_of_range unless value < 4.
    explicit BitPair(unsigned value);
    constexpr static BitPair from_bits(bool high, bool low) {
        BitPair p;
        p.value_ = static_cast<uint8_t>((high ? 2 : 0) | (low ? 1 : 0));
        return p;
    }

    constexpr uint8_t value() const {
        return value_;
    }
    constexpr bool high() const {
        return (value_ & 2) != 0;
    }
    constexpr bool low() const {
        return (value_ & 1) != 0;
    }
    std::string str() const;

    constexpr bool operator==(const BitPair &) const = default;

   private:
    uint8_t value_ = 0;
};

PauliOp op_for_bits(BitPair b);
BitPair bits_for_op(PauliOp op);

/// Bell outcome when Alice applies `alice_op` to the M photon of a singlet
/// and Bob then applies `bob_op` to either photon.
BellState expected_bell(PauliOp alice_op, PauliOp bob_op);

/// Alice's bits as recovered by Bob from his own op and the Bell result.
BitPair decode_alice(PauliOp bob_op, BellState result);

/// Bob's bits as recovered by Alice from her own op and the announced result.
BitPair decode_bob(PauliOp alice_op, BellState result);

/// An even-length bit sequence carrying a payload plus trailing zero padding.
/// The pad count is stored so the payload length is always recoverable.
class MessageBits {
   public:
    MessageBits() = default;

    /// Pads `bits` with a single zero if its length is odd.
    static MessageBits from_bits(std::vector<uint8_t> bits);
    static MessageBits from_pairs(std::span<const BitPair> pairs, size_t pad_bits);
    /// Parses a string of '0'/'1' characters.
    static std::optional<MessageBits> parse(std::string_view text);

    /// Total length including padding (always even).
    size_t size() const {
        return bits_.size();
    }
    size_t pad_bits() const {
        return pad_bits_;
    }
    size_t payload_size() const {
        return bits_.size() - pad_bits_;
    }
    size_t pair_count() const {
        return bits_.size() / 2;
    }
    bool empty() const {
        return bits_.empty();
    }

    BitPair pair(size_t i) const;
    std::vector<BitPair> pairs() const;
    const std::vector<uint8_t> &bits() const {
        return bits_;
    }
    std::vector<uint8_t> payload() const;

    /// Zero-fills up to `total_bits` (even, >= size()); padding grows accordingly.
    MessageBits padded_to(size_t total_bits) const;
    /// Keeps the first `payload_bits` bits as payload, the remainder becomes padding.
    MessageBits with_payload_size(size_t payload_bits) const;

    /// Drops padding beyond the single bit needed to keep the length even.
    MessageBits stripped() const;

    /// The payload as '0'/'1' characters.
    std::string payload_str() const;

    bool operator==(const MessageBits &) const = default;

   private:
    std::vector<uint8_t> bits_;
    size_t pad_bits_ = 0;
};

/// Expands bytes MSB-first into bits.
MessageBits pack_bits(std::span<const uint8_t> raw);
/// Reassembles bytes from the payload; a trailing partial byte is zero-filled.
std::vector<uint8_t> unpack_bits(const MessageBits &m);

std::optional<std::vector<uint8_t>> parse_hex(std::string_view text);
std::string to_hex(std::span<const uint8_t> bytes);

/// Uniformly random payload of `payload_bits` bits.
MessageBits random_message(size_t payload_bits, RandomStream &rng);

}  // namespace bdc

#endif
