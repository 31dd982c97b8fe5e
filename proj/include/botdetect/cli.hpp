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
#ifndef BOTDETECT_CLI_HPP
#define BOTDETECT_CLI_HPP

#include <filesystem>
#include <string>

namespace botdetect::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumerical = 4;

/// Entry point for the `botdetect` tool: prepare, train, eval, ablate and
/// gradcheck subcommands. Returns the process exit code.
int run_cli(int argc, char** argv);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace botdetect::cli

#endif  // BOTDETECT_CLI_HPP
