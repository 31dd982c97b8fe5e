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
#ifndef BOTDETECT_CHECKPOINT_HPP
#define BOTDETECT_CHECKPOINT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "botdetect/matrix.hpp"

namespace botdetect {

struct NamedTensor {
  std::string name;
  Matrix value;
};

// BRGP layout: "BRGP", u32 tensor count, then per tensor u16 name length,
// UTF-8 name, u32 rows, u32 cols, rows*cols float32. All little-endian.
// Values are narrowed to float32 on save.
void save_checkpoint(const std::filesystem::path& path, const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> load_checkpoint(const std::filesystem::path& path);

}  // namespace botdetect

#endif  // BOTDETECT_CHECKPOINT_HPP
