#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "zsnn/errors.hpp"
#include "zsnn/image.hpp"

namespace zsnn {

namespace detail {

inline std::uint32_t read_be_u32(std::istream& in, const std::string& path) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (in.gcount() != 4) throw IoError("truncated IDX header: " + path);
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

}  // namespace detail

// IDX image file (magic 0x00000803): count, rows, cols, then unsigned bytes.
inline std::vector<Image> read_idx_images(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::uint32_t magic = detail::read_be_u32(in, path);
  if (magic != 0x00000803u)
    throw IoError("bad IDX image magic in " + path);
  std::uint32_t count = detail::read_be_u32(in, path);
  std::uint32_t rows = detail::read_be_u32(in, path);
  std::uint32_t cols = detail::read_be_u32(in, path);
  if (rows == 0 || cols == 0) throw IoError("bad IDX dimensions: " + path);
  std::vector<Image> out;
  out.reserve(count);
  std::vector<unsigned char> buf(static_cast<std::size_t>(rows) * cols);
  for (std::uint32_t i = 0; i < count; ++i) {
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size()))
      throw IoError("truncated IDX raster: " + path);
    Image img(static_cast<int>(cols), static_cast<int>(rows));
    for (std::size_t k = 0; k < buf.size(); ++k)
      img.px[k] = static_cast<float>(buf[k]) / 255.0f;
    out.push_back(std::move(img));
  }
  return out;
}

// Inverse of read_idx_images: pixels are snapped to the 1/255 grid the 8-bit
// raster can carry, so write -> read round-trips images already on that grid.
inline void write_idx_images(const std::string& path,
                             const std::vector<Image>& images) {
  if (images.empty()) throw ParamError("write_idx_images: empty list");
  const int w = images.front().width, h = images.front().height;
  for (const auto& img : images)
    if (img.width != w || img.height != h)
      throw ShapeError("write_idx_images: mixed image dimensions");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for write: " + path);
  auto be = [&out](std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<char*>(b), 4);
  };
  be(0x00000803u);
  be(static_cast<std::uint32_t>(images.size()));
  be(static_cast<std::uint32_t>(h));
  be(static_cast<std::uint32_t>(w));
  std::vector<unsigned char> buf;
  for (const auto& img : images) {
    buf.resize(img.px.size());
    for (std::size_t k = 0; k < buf.size(); ++k) {
      float v = img.px[k] < 0.0f ? 0.0f : (img.px[k] > 1.0f ? 1.0f : img.px[k]);
      buf[k] = static_cast<unsigned char>(v * 255.0f + 0.5f);
    }
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw IoError("short write: " + path);
}

}  // namespace zsnn
