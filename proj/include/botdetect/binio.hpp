/*
Copyright 2026 The botdetect Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef BOTDETECT_BINIO_HPP
#define BOTDETECT_BINIO_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "botdetect/error.hpp"

// Little-endian byte buffers for the binary file formats.

namespace botdetect::binio {

class Writer {
 public:
  void bytes(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  const std::vector<char>& buffer() const { return buf_; }

  /// Writes to `path` through a temporary file and rename.
  void save(const std::filesystem::path& path) const;

 private:
  void put(std::uint64_t v, int n) {
    for (int k = 0; k < n; ++k) buf_.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
  }
  std::vector<char> buf_;
};

class Reader {
 public:
  explicit Reader(std::vector<char> data, std::string source = "<buffer>")
      : data_(std::move(data)), source_(std::move(source)) {}
  static Reader open(const std::filesystem::path& path);

  std::size_t remaining() const { return data_.size() - pos_; }
  const std::string& source() const { return source_; }

  std::string bytes(std::size_t n) {
    need(n);
    std::string s(data_.data() + pos_, n);
    pos_ += n;
    return s;
  }
  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }

  void need(std::size_t n) const {
    if (remaining() < n) throw DataError(DataErrorKind::kTruncated, source_ + ": unexpected end of file");
  }

 private:
  std::uint64_t get(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int k = 0; k < n; ++k)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + k])) << (8 * k);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::vector<char> data_;
  std::size_t pos_ = 0;
  std::string source_;
};

}  // namespace botdetect::binio

#endif  // BOTDETECT_BINIO_HPP
