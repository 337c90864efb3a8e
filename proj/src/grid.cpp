#include "arena/grid.hpp"

#include <string>

#include "arena/mode_config.hpp"

namespace arena {

char tile_char(TileKind kind) {
  switch (kind) {
    case TileKind::plain: return '.';
    case TileKind::impassable: return '#';
    case TileKind::hole: return 'O';
  }
  return '?';
}

TileKind tile_from_char(char c) {
  switch (c) {
    case '.': return TileKind::plain;
    case '#': return TileKind::impassable;
    case 'O': return TileKind::hole;
    default: throw ConfigError(std::string("unknown tile glyph '") + c + "'");
  }
}

Grid::Grid(int width, int height, std::vector<TileKind> tiles)
    : width_(width), height_(height), tiles_(std::move(tiles)) {
  if (width_ < 2 || height_ < 2) throw ConfigError("map must be at least 2x2");
  if (tiles_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_)) {
    throw ConfigError("map tile count does not match its dimensions");
  }
}

bool Grid::has_holes() const {
  return std::find(tiles_.begin(), tiles_.end(), TileKind::hole) != tiles_.end();
}

std::vector<std::string> Grid::rows() const {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(height_));
  for (int y = 0; y < height_; ++y) {
    std::string row;
    row.reserve(static_cast<std::size_t>(width_));
    for (int x = 0; x < width_; ++x) row.push_back(tile_char(at({x, y})));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace arena
