#pragma once

#include <cstdint>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hwdep {

// How 64-bit generator output is turned into test words.
//   whole      one 64-bit word per output
//   low_half   the low 32 bits of each output, high bits discarded
//   high_half  the high 32 bits, low bits discarded
//   halves     both halves, low first then high
//   interleave both halves, high first then low
enum class SplitMode { whole, low_half, high_half, halves, interleave };

inline SplitMode parse_split_mode(std::string_view name) {
  if (name == "whole") return SplitMode::whole;
  if (name == "low") return SplitMode::low_half;
  if (name == "high") return SplitMode::high_half;
  if (name == "halves") return SplitMode::halves;
  if (name == "interleave") return SplitMode::interleave;
  throw std::invalid_argument("unknown split mode: " + std::string(name));
}

inline constexpr std::uint64_t word_mask(int width) noexcept {
  return width == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << width) - 1;
}

// Unbounded w-bit word stream from a built-in generator.
template <class Gen>
class GeneratorSource {
 public:
  GeneratorSource(Gen gen, SplitMode mode) : gen_(gen), mode_(mode) {}

  bool next(std::uint64_t& out) noexcept {
    switch (mode_) {
      case SplitMode::whole:
        out = gen_.next();
        break;
      case SplitMode::low_half:
        out = gen_.next() & 0xFFFFFFFFull;
        break;
      case SplitMode::high_half:
        out = gen_.next() >> 32;
        break;
      case SplitMode::halves:
        if (!pending_valid_) {
          pending_ = gen_.next();
          pending_valid_ = true;
          out = pending_ & 0xFFFFFFFFull;
        } else {
          pending_valid_ = false;
          out = pending_ >> 32;
        }
        break;
      case SplitMode::interleave:
        if (!pending_valid_) {
          pending_ = gen_.next();
          pending_valid_ = true;
          out = pending_ >> 32;
        } else {
          pending_valid_ = false;
          out = pending_ & 0xFFFFFFFFull;
        }
        break;
    }
    return true;
  }

 private:
  Gen gen_;
  SplitMode mode_;
  std::uint64_t pending_ = 0;
  bool pending_valid_ = false;
};

// w-bit little-endian words from a raw byte stream; a partial trailing word
// ends the stream cleanly.
class RawWordSource {
 public:
  RawWordSource(std::FILE* file, int width, bool owns)
      : file_(file), owns_(owns), word_bytes_(width / 8), buf_(1 << 20) {}

  RawWordSource(RawWordSource&& other) noexcept
      : file_(other.file_),
        owns_(other.owns_),
        word_bytes_(other.word_bytes_),
        buf_(std::move(other.buf_)),
        len_(other.len_),
        pos_(other.pos_) {
    other.file_ = nullptr;
    other.owns_ = false;
  }

  RawWordSource(const RawWordSource&) = delete;
  RawWordSource& operator=(const RawWordSource&) = delete;

  ~RawWordSource() {
    if (owns_ && file_) std::fclose(file_);
  }

  static RawWordSource open(const std::string& path, int width) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open " + path);
    return RawWordSource(f, width, true);
  }

  static RawWordSource from_stdin(int width) {
    return RawWordSource(stdin, width, false);
  }

  bool next(std::uint64_t& out) noexcept {
    if (pos_ + word_bytes_ > len_ && !refill()) return false;
    std::uint64_t w = 0;
    for (std::size_t i = 0; i < word_bytes_; ++i)
      w |= std::uint64_t(buf_[pos_ + i]) << (8 * i);
    pos_ += word_bytes_;
    out = w;
    return true;
  }

 private:
  bool refill() noexcept {
    const std::size_t keep = len_ - pos_;
    for (std::size_t i = 0; i < keep; ++i) buf_[i] = buf_[pos_ + i];
    pos_ = 0;
    len_ = keep;
    if (!file_) return false;
    len_ += std::fread(buf_.data() + keep, 1, buf_.size() - keep, file_);
    return len_ >= word_bytes_;
  }

  std::FILE* file_;
  bool owns_;
  std::size_t word_bytes_;
  std::vector<unsigned char> buf_;
  std::size_t len_ = 0;
  std::size_t pos_ = 0;
};

// w-bit little-endian words from an in-memory buffer.
class MemoryWordSource {
 public:
  MemoryWordSource(std::span<const unsigned char> bytes, int width)
      : bytes_(bytes), word_bytes_(static_cast<std::size_t>(width / 8)) {}

  bool next(std::uint64_t& out) noexcept {
    if (pos_ + word_bytes_ > bytes_.size()) return false;
    std::uint64_t w = 0;
    for (std::size_t i = 0; i < word_bytes_; ++i)
      w |= std::uint64_t(bytes_[pos_ + i]) << (8 * i);
    pos_ += word_bytes_;
    out = w;
    return true;
  }

 private:
  std::span<const unsigned char> bytes_;
  std::size_t word_bytes_;
  std::size_t pos_ = 0;
};

// XOR of the bit stream with itself shifted forward (delayed) by one bit,
// regrouped into w-bit words: each bit is XORed with its predecessor. Bits
// are taken least-significant first within each word, matching little-endian
// byte order, so y = x ^ ((x << 1) | (prev >> (w-1))). The first word primes
// the filter and the stream shortens by one word. The word-grid phase
// matters empirically: this alignment is the one that isolates transition
// dependencies of additive scramblers into single signatures.
template <class Inner>
class TransitionalSource {
 public:
  TransitionalSource(Inner inner, int width)
      : inner_(std::move(inner)), shift_(width - 1), mask_(word_mask(width)) {}

  bool next(std::uint64_t& out) noexcept {
    if (!primed_) {
      if (!inner_.next(prev_)) return false;
      primed_ = true;
    }
    std::uint64_t cur = 0;
    if (!inner_.next(cur)) return false;
    out = (cur ^ ((cur << 1) | (prev_ >> shift_))) & mask_;
    prev_ = cur;
    return true;
  }

 private:
  Inner inner_;
  int shift_;
  std::uint64_t mask_;
  std::uint64_t prev_ = 0;
  bool primed_ = false;
};

}  // namespace hwdep
