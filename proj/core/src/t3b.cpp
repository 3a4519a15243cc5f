#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "rtpca/errors.hpp"
#include "rtpca/io.hpp"

namespace rtpca::io {

namespace {

static_assert(sizeof(double) == 8, "T3B assumes 64-bit doubles");

void put_u64(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

bool get_u64(std::istream& in, std::uint64_t& v) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), 8)) return false;
  v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return true;
}

}  // namespace

void write_t3b(std::ostream& out, const Tensor3& t) {
  out.write(reinterpret_cast<const char*>(kT3bMagic), 4);
  put_u64(out, t.n1());
  put_u64(out, t.n2());
  put_u64(out, t.n3());
  for (double x : t.data()) put_u64(out, std::bit_cast<std::uint64_t>(x));
  if (!out) throw FormatError("T3B: write failed");
}

Tensor3 read_t3b(std::istream& in) {
  unsigned char magic[4];
  if (!in.read(reinterpret_cast<char*>(magic), 4) ||
      std::memcmp(magic, kT3bMagic, 4) != 0) {
    throw FormatError("T3B: bad magic");
  }
  std::uint64_t d[3];
  for (auto& v : d) {
    if (!get_u64(in, v)) throw FormatError("T3B: truncated header");
  }
  if (d[0] == 0 || d[1] == 0 || d[2] == 0) throw FormatError("T3B: zero dimension");
  const std::uint64_t count = d[0] * d[1] * d[2];
  if (count / d[0] / d[1] != d[2] || count > (std::uint64_t{1} << 40)) {
    throw FormatError("T3B: dimensions too large");
  }
  std::vector<double> data(count);
  for (auto& x : data) {
    std::uint64_t bits;
    if (!get_u64(in, bits)) throw FormatError("T3B: truncated payload");
    x = std::bit_cast<double>(bits);
  }
  return Tensor3(Dims{d[0], d[1], d[2]}, std::move(data));
}

void save_t3b(const std::filesystem::path& path, const Tensor3& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("T3B: cannot open " + path.string() + " for writing");
  write_t3b(out, t);
}

Tensor3 load_t3b(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("T3B: cannot open " + path.string());
  return read_t3b(in);
}

}  // namespace rtpca::io
