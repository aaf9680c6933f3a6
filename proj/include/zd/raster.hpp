#pragma once

#include <cstdlib>
#include <vector>

#include "zd/core.hpp"

namespace zd {

/// Bresenham line restricted to orthogonal steps. Wherever the classic
/// algorithm would move diagonally, the horizontal step is emitted first and
/// the vertical one second, so consecutive cells always share an edge.
/// Includes both endpoints; length is |dx| + |dy| + 1.
inline std::vector<Cell> line4(Cell from, Cell to) {
    std::vector<Cell> out;
    const int dx = std::abs(to.x - from.x);
    const int dy = -std::abs(to.y - from.y);
    const int sx = from.x < to.x ? 1 : -1;
    const int sy = from.y < to.y ? 1 : -1;
    int err = dx + dy;
    Cell c = from;
    out.reserve(static_cast<std::size_t>(dx - dy + 1));
    out.push_back(c);
    while (c != to) {
        const int e2 = 2 * err;
        const bool horizontal = e2 >= dy;
        const bool vertical = e2 <= dx;
        if (horizontal) {
            err += dy;
            c.x += sx;
            out.push_back(c);
        }
        if (vertical) {
            err += dx;
            c.y += sy;
            out.push_back(c);
        }
    }
    return out;
}

}  // namespace zd
