/* Copyright 2026 The RLD Authors. All Rights Reserved.

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
#ifndef RLD_IMAGE_IO_HPP_
#define RLD_IMAGE_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "rld/augment.hpp"

namespace rld {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Decodes any PNG into 8-bit RGB (alpha dropped, gray expanded).
augment::Image ReadPng(const std::filesystem::path& path);
augment::Image DecodePng(const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> EncodePng(const augment::Image& img);
void WritePng(const std::filesystem::path& path, const augment::Image& img);

// Writes to a sibling temporary file and renames it over `path`.
void WriteFileAtomic(const std::filesystem::path& path,
                     const void* data, std::size_t size);
void WriteFileAtomic(const std::filesystem::path& path, const std::string& s);

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path);
std::string ReadFileText(const std::filesystem::path& path);

}  // namespace rld

#endif  // RLD_IMAGE_IO_HPP_
