#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "rtpca/tensor3.hpp"

namespace rtpca::io {

// T3B layout: 'T' '3' 'B' 0x01, three little-endian u64 dims (I1, I2, I3),
// then I1*I2*I3 little-endian IEEE-754 doubles in canonical order.
inline constexpr std::uint8_t kT3bMagic[4] = {0x54, 0x33, 0x42, 0x01};

void write_t3b(std::ostream& out, const Tensor3& t);
Tensor3 read_t3b(std::istream& in);

void save_t3b(const std::filesystem::path& path, const Tensor3& t);
Tensor3 load_t3b(const std::filesystem::path& path);

/// 8-bit grayscale image.
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::uint16_t maxval = 255;
  std::vector<std::uint8_t> pixels;  // row major
};

/// Binary PGM (P5) with maxval <= 255.
GrayImage read_pgm(std::istream& in);
void write_pgm(std::ostream& out, const GrayImage& img);
GrayImage load_pgm(const std::filesystem::path& path);
void save_pgm(const std::filesystem::path& path, const GrayImage& img);

/// Stack equally sized frames along mode 3, scaled to [0, 1]. Rows map to
/// i1 and columns to i2.
Tensor3 stack_frames(const std::vector<GrayImage>& frames);

/// Frame i3 of a tensor, clamped to [0, 1] and quantized to 8 bits.
GrayImage frame_from_tensor(const Tensor3& t, std::size_t i3);

}  // namespace rtpca::io
