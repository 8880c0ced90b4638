#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "locasim/errors.hpp"

namespace locasim::detail {

inline std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

class ByteWriter {
 public:
  void raw(std::string_view s) { buf_.append(s); }
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void str(std::string_view s) {
    u64(s.size());
    raw(s);
  }
  // Appends the checksum trailer.
  void finish() { u64(fnv1a(buf_)); }
  const std::string& bytes() const noexcept { return buf_; }

 private:
  std::string buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  std::string_view raw(std::size_t n) {
    need(n);
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint8_t u8() { return static_cast<std::uint8_t>(raw(1)[0]); }
  std::uint32_t u32() {
    auto s = raw(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(s[i]);
    return v;
  }
  std::uint64_t u64() {
    auto s = raw(8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(s[i]);
    return v;
  }
  std::string str() {
    const auto n = u64();
    return std::string(raw(n));
  }
  void verify_checksum() {
    const std::uint64_t want = fnv1a(data_.substr(0, pos_));
    if (u64() != want) throw CheckpointError("checkpoint checksum mismatch");
    if (pos_ != data_.size()) throw CheckpointError("trailing bytes after checkpoint");
  }

 private:
  void need(std::size_t n) const {
    if (n > data_.size() - pos_) throw CheckpointError("truncated checkpoint");
  }

  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace locasim::detail
