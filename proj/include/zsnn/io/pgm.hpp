#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "zsnn/errors.hpp"
#include "zsnn/image.hpp"

namespace zsnn {

namespace detail {

// Reads one whitespace-delimited header token, skipping '#' comment lines.
inline std::string pgm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

}  // namespace detail

// Binary PGM (P5), maxval 255. Pixels map to gray via round(v*255); values
// already on the 1/255 grid survive a write/read cycle bit-exactly.
inline void write_pgm(const std::string& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  std::vector<unsigned char> bytes(img.px.size());
  for (std::size_t i = 0; i < img.px.size(); ++i) {
    float v = img.px[i];
    if (v < 0.0f) v = 0.0f;
    if (v > 1.0f) v = 1.0f;
    bytes[i] = static_cast<unsigned char>(std::lround(v * 255.0f));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write: " + path);
}

inline Image read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  if (detail::pgm_token(in) != "P5") throw IoError("not a P5 PGM: " + path);
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(detail::pgm_token(in));
    h = std::stoi(detail::pgm_token(in));
    maxval = std::stoi(detail::pgm_token(in));
  } catch (const std::exception&) {
    throw IoError("bad PGM header: " + path);
  }
  if (w <= 0 || h <= 0) throw IoError("bad PGM dimensions: " + path);
  if (maxval != 255) throw IoError("only maxval 255 supported: " + path);
  // pgm_token consumed the single whitespace after maxval already when it
  // stopped, so raster bytes start here.
  Image img(w, h);
  std::vector<unsigned char> bytes(img.px.size());
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size()))
    throw IoError("truncated PGM raster: " + path);
  for (std::size_t i = 0; i < bytes.size(); ++i)
    img.px[i] = static_cast<float>(bytes[i]) / 255.0f;
  return img;
}

}  // namespace zsnn
