// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#include <array>
#include <fstream>
#include <iterator>
#include <sstream>

#include <fmt/format.h>

#include "flexsvm/coresim.hpp"

namespace flexsvm::coresim {

std::vector<std::uint32_t> read_data_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open data image {}", path.string()));
  const std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in), {}};
  if (bytes.size() % 4 != 0) {
    throw std::runtime_error(fmt::format("data image {} is {} bytes, not a whole number of words",
                                         path.string(), bytes.size()));
  }
  std::vector<std::uint32_t> words(bytes.size() / 4);
  for (std::size_t i = 0; i < words.size(); ++i) {
    words[i] = static_cast<std::uint32_t>(bytes[4 * i]) |
               (static_cast<std::uint32_t>(bytes[4 * i + 1]) << 8) |
               (static_cast<std::uint32_t>(bytes[4 * i + 2]) << 16) |
               (static_cast<std::uint32_t>(bytes[4 * i + 3]) << 24);
  }
  return words;
}

void write_data_image(const std::filesystem::path& path, std::span<const std::uint32_t> words) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write data image {}", path.string()));
  for (std::uint32_t w : words) {
    const std::array<char, 4> le{static_cast<char>(w & 0xFF), static_cast<char>((w >> 8) & 0xFF),
                                 static_cast<char>((w >> 16) & 0xFF),
                                 static_cast<char>((w >> 24) & 0xFF)};
    out.write(le.data(), le.size());
  }
}

Program load_program(const std::filesystem::path& asm_path,
                     const std::filesystem::path& data_path) {
  std::ifstream in(asm_path);
  if (!in) throw std::runtime_error(fmt::format("cannot open program {}", asm_path.string()));
  std::stringstream text;
  text << in.rdbuf();
  Program p;
  p.text = isa::parse_program(text.str());
  p.data = read_data_image(data_path);
  return p;
}

}  // namespace flexsvm::coresim
