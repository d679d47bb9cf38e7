#pragma once

#include <array>
#include <cstdint>

namespace zsnn {

// 5x7 digit bitmaps, one byte per row, bit 4 = leftmost column.
inline const std::array<std::array<std::uint8_t, 7>, 10>& digit_glyphs() {
  static const std::array<std::array<std::uint8_t, 7>, 10> g = {{
      {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E},  // 0
      {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E},  // 1
      {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F},  // 2
      {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E},  // 3
      {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02},  // 4
      {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E},  // 5
      {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E},  // 6
      {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},  // 7
      {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E},  // 8
      {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C},  // 9
  }};
  return g;
}

inline bool glyph_bit(int digit, int gx, int gy) {
  return (digit_glyphs()[digit][gy] >> (4 - gx)) & 1;
}

}  // namespace zsnn
