#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "rtpca/errors.hpp"
#include "rtpca/io.hpp"

namespace rtpca::io {

namespace {

// Reads the next header integer, skipping whitespace and '#' comments.
std::size_t header_int(std::istream& in) {
  int c = in.peek();
  while (c != EOF) {
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
    c = in.peek();
  }
  std::size_t v = 0;
  if (!(in >> v)) throw FormatError("PGM: malformed header");
  return v;
}

}  // namespace

GrayImage read_pgm(std::istream& in) {
  char magic[2];
  if (!in.read(magic, 2) || magic[0] != 'P' || magic[1] != '5') {
    throw FormatError("PGM: only binary P5 images are supported");
  }
  GrayImage img;
  img.width = header_int(in);
  img.height = header_int(in);
  const std::size_t maxval = header_int(in);
  if (img.width == 0 || img.height == 0) throw FormatError("PGM: zero dimension");
  if (maxval == 0 || maxval > 255) throw FormatError("PGM: maxval must be in 1..255");
  img.maxval = static_cast<std::uint16_t>(maxval);
  in.get();  // single whitespace before the raster
  img.pixels.resize(img.width * img.height);
  if (!in.read(reinterpret_cast<char*>(img.pixels.data()),
               static_cast<std::streamsize>(img.pixels.size()))) {
    throw FormatError("PGM: truncated raster");
  }
  return img;
}

void write_pgm(std::ostream& out, const GrayImage& img) {
  out << "P5\n" << img.width << ' ' << img.height << '\n' << img.maxval << '\n';
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  if (!out) throw FormatError("PGM: write failed");
}

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("PGM: cannot open " + path.string());
  return read_pgm(in);
}

void save_pgm(const std::filesystem::path& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("PGM: cannot open " + path.string() + " for writing");
  write_pgm(out, img);
}

Tensor3 stack_frames(const std::vector<GrayImage>& frames) {
  if (frames.empty()) throw DimensionError("stack_frames: no frames");
  const std::size_t h = frames.front().height;
  const std::size_t w = frames.front().width;
  Tensor3 t(h, w, frames.size());
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const auto& f = frames[k];
    if (f.height != h || f.width != w) {
      throw DimensionError("stack_frames: frame " + std::to_string(k) +
                           " has a different size");
    }
    const double scale = 1.0 / static_cast<double>(f.maxval);
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t c = 0; c < w; ++c) {
        t(r, c, k) = scale * f.pixels[r * w + c];
      }
    }
  }
  return t;
}

GrayImage frame_from_tensor(const Tensor3& t, std::size_t i3) {
  GrayImage img;
  img.height = t.n1();
  img.width = t.n2();
  img.pixels.resize(img.width * img.height);
  for (std::size_t r = 0; r < img.height; ++r) {
    for (std::size_t c = 0; c < img.width; ++c) {
      const double v = std::clamp(t(r, c, i3), 0.0, 1.0);
      img.pixels[r * img.width + c] = static_cast<std::uint8_t>(std::lround(255.0 * v));
    }
  }
  return img;
}

}  // namespace rtpca::io
