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
#include "botdetect/checkpoint.hpp"

#include <cmath>
#include <limits>

#include "botdetect/binio.hpp"

namespace botdetect {

void save_checkpoint(const std::filesystem::path& path, const std::vector<NamedTensor>& tensors) {
  binio::Writer w;
  w.bytes("BRGP");
  w.u32(static_cast<std::uint32_t>(tensors.size()));
  for (const auto& t : tensors) {
    if (t.name.size() > std::numeric_limits<std::uint16_t>::max()) throw ShapeError("checkpoint: tensor name too long");
    w.u16(static_cast<std::uint16_t>(t.name.size()));
    w.bytes(t.name);
    w.u32(static_cast<std::uint32_t>(t.value.rows()));
    w.u32(static_cast<std::uint32_t>(t.value.cols()));
    for (double v : t.value.values()) w.f32(static_cast<float>(v));
  }
  w.save(path);
}

std::vector<NamedTensor> load_checkpoint(const std::filesystem::path& path) {
  auto r = binio::Reader::open(path);
  if (r.remaining() < 4 || r.bytes(4) != "BRGP")
    throw DataError(DataErrorKind::kBadMagic, path.string() + ": not a checkpoint (bad magic)");
  const std::uint32_t count = r.u32();
  std::vector<NamedTensor> out;
  out.reserve(count);
  for (std::uint32_t k = 0; k < count; ++k) {
    NamedTensor t;
    t.name = r.bytes(r.u16());
    const std::size_t rows = r.u32(), cols = r.u32();
    r.need(rows * cols * 4);
    t.value = Matrix(rows, cols);
    for (auto& v : t.value.values()) {
      v = static_cast<double>(r.f32());
      if (!std::isfinite(v)) throw DataError(DataErrorKind::kMalformed, path.string() + ": non-finite value in " + t.name);
    }
    out.push_back(std::move(t));
  }
  if (r.remaining() != 0) throw DataError(DataErrorKind::kMalformed, path.string() + ": trailing bytes");
  return out;
}

}  // namespace botdetect
