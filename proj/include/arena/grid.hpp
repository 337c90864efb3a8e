#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

namespace arena {

struct Position {
  int x = 0;
  int y = 0;

  friend bool operator==(const Position&, const Position&) = default;
};

/// Row-major order: by y, then x.
constexpr bool row_major_less(Position a, Position b) { return a.y != b.y ? a.y < b.y : a.x < b.x; }

constexpr int chebyshev(Position a, Position b) { return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)); }

enum class TileKind : std::uint8_t { plain, impassable, hole };

char tile_char(TileKind kind);
TileKind tile_from_char(char c);  // throws ConfigError on unknown glyphs

/// Dense rectangular tile map.
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, std::vector<TileKind> tiles);

  int width() const { return width_; }
  int height() const { return height_; }
  int area() const { return width_ * height_; }

  bool in_bounds(Position p) const { return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_; }
  int index(Position p) const { return p.y * width_ + p.x; }
  Position position(int index) const { return {index % width_, index / width_}; }

  TileKind at(Position p) const { return tiles_[static_cast<std::size_t>(index(p))]; }
  bool walkable(Position p) const { return in_bounds(p) && at(p) == TileKind::plain; }

  bool has_holes() const;

  /// One string per row, using '.', '#' and 'O'.
  std::vector<std::string> rows() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<TileKind> tiles_;
};

}  // namespace arena
