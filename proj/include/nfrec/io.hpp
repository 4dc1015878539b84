// Copyright 2026 The nfrec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "nfrec/instance.hpp"
#include "nfrec/policy.hpp"

namespace nfrec {

/// Plain-text formats. Every file starts with a "<kind> <version>" line;
/// numbers are written with 17 significant digits so a round trip is exact.
///
///   nfrec-instance 1
///   K <k>
///   similarity <nnz>       followed by nnz lines "i j u_ij"
///   cost                   followed by K values, one per line
///   popularity             followed by K values
///   cached <m>             followed by m indices on one line
///
///   nfrec-policy 1
///   K <k> N <n>
///   entries <nnz>          followed by nnz lines "i j r_ij"
///
///   nfrec-values 1
///   K <k>                  followed by K values
///
/// Lines starting with '#' are ignored. Malformed input raises DataError.

void write_instance(std::ostream& out, const Instance& instance);
Instance read_instance(std::istream& in);
void save_instance(const std::filesystem::path& path, const Instance& instance);
Instance load_instance(const std::filesystem::path& path);

void write_policy(std::ostream& out, const Policy& policy);
Policy read_policy(std::istream& in);
void save_policy(const std::filesystem::path& path, const Policy& policy);
Policy load_policy(const std::filesystem::path& path);

void write_values(std::ostream& out, const Vector& values);
Vector read_values(std::istream& in);
void save_values(const std::filesystem::path& path, const Vector& values);
Vector load_values(const std::filesystem::path& path);

/// Writes `text` to `path`, creating parent directories.
void save_text(const std::filesystem::path& path, const std::string& text);

/// 64-bit FNV-1a over the serialized instance.
std::uint64_t instance_fingerprint(const Instance& instance);

}  // namespace nfrec
