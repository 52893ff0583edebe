#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "nnrank/bounds.hpp"

namespace nnrank::bounds {

namespace {

// Support cells are packed into one 64-bit mask (limits.max_support <= 64).
// Maximal all-nonzero rectangles are the closed pairs (R(J), J) of the
// support relation; every closed column set is an intersection of row
// supports, so the family is generated from the rows by pairwise
// intersection to a fixed point.
struct Instance {
  int m, n;
  std::vector<uint64_t> row_support;        // column bitmask per row
  std::vector<int> cell_row, cell_col;      // cell index -> coordinates
  std::map<std::pair<int, int>, int> cell;  // coordinates -> cell index
};

uint64_t rect_mask(const Instance& inst, uint64_t rows, uint64_t cols) {
  uint64_t mask = 0;
  for (int i = 0; i < inst.m; ++i) {
    if (!(rows >> i & 1)) continue;
    for (int j = 0; j < inst.n; ++j)
      if (cols >> j & 1) mask |= uint64_t(1) << inst.cell.at({i, j});
  }
  return mask;
}

// Depth-limited exact set cover: branch on the first uncovered cell.
bool cover_with(const std::vector<uint64_t>& rect_cells, uint64_t covered, uint64_t all,
                int depth, std::vector<int>& chosen, std::vector<int>& best) {
  if (covered == all) {
    best = chosen;
    return true;
  }
  if (depth == 0) return false;
  int first = -1;
  for (int c = 0; c < 64; ++c)
    if ((all >> c & 1) && !(covered >> c & 1)) {
      first = c;
      break;
    }
  for (int r = 0; r < static_cast<int>(rect_cells.size()); ++r) {
    if (!(rect_cells[r] >> first & 1)) continue;
    chosen.push_back(r);
    if (cover_with(rect_cells, covered | rect_cells[r], all, depth - 1, chosen, best))
      return true;
    chosen.pop_back();
  }
  return false;
}

}  // namespace

RectangleCover rectangle_cover_exact(const DenseMatrix& a, const RectangleLimits& limits) {
  Instance inst;
  inst.m = a.rows();
  inst.n = a.cols();
  if (inst.n > 64 || inst.m > 64)
    throw TooLargeError("rectangle cover: dimensions above 64 are not supported; "
                        "use the bounds that scale (nuclear or nu_plus ratios)");
  int support = 0;
  inst.row_support.assign(inst.m, 0);
  for (int i = 0; i < inst.m; ++i)
    for (int j = 0; j < inst.n; ++j)
      if (a(i, j) != 0.0) {
        if (support >= limits.max_support)
          throw TooLargeError("rectangle cover: support exceeds " +
                              std::to_string(limits.max_support) +
                              " cells; use the bounds that scale");
        inst.row_support[i] |= uint64_t(1) << j;
        inst.cell[{i, j}] = support;
        inst.cell_row.push_back(i);
        inst.cell_col.push_back(j);
        ++support;
      }
  RectangleCover cover;
  if (support == 0) return cover;  // empty support: zero rectangles

  // closed column sets = intersections of row supports (pairwise fix point)
  std::vector<uint64_t> closed;
  auto add_closed = [&](uint64_t cols) {
    if (cols == 0) return;
    if (std::find(closed.begin(), closed.end(), cols) != closed.end()) return;
    closed.push_back(cols);
  };
  for (int i = 0; i < inst.m; ++i) add_closed(inst.row_support[i]);
  for (size_t k = 0; k < closed.size(); ++k) {
    for (int i = 0; i < inst.m; ++i) add_closed(closed[k] & inst.row_support[i]);
    if (static_cast<int>(closed.size()) > 4 * limits.max_rectangles)
      throw TooLargeError("rectangle cover: more than " +
                          std::to_string(limits.max_rectangles) +
                          " maximal rectangles; use the bounds that scale");
  }

  std::vector<std::pair<uint64_t, uint64_t>> rects;  // (row set, column set)
  for (uint64_t cols : closed) {
    uint64_t rows = 0;
    for (int i = 0; i < inst.m; ++i)
      if ((inst.row_support[i] & cols) == cols) rows |= uint64_t(1) << i;
    if (rows != 0) rects.emplace_back(rows, cols);
  }
  std::sort(rects.begin(), rects.end());
  rects.erase(std::unique(rects.begin(), rects.end()), rects.end());
  if (static_cast<int>(rects.size()) > limits.max_rectangles)
    throw TooLargeError("rectangle cover: " + std::to_string(rects.size()) +
                        " maximal rectangles exceed the limit " +
                        std::to_string(limits.max_rectangles) +
                        "; use the bounds that scale");

  std::vector<uint64_t> rect_cells(rects.size());
  for (size_t r = 0; r < rects.size(); ++r)
    rect_cells[r] = rect_mask(inst, rects[r].first, rects[r].second);
  const uint64_t all = support == 64 ? ~uint64_t(0) : (uint64_t(1) << support) - 1;

  std::vector<int> chosen, best;
  for (int depth = 1; depth <= static_cast<int>(rects.size()); ++depth) {
    chosen.clear();
    if (cover_with(rect_cells, 0, all, depth, chosen, best)) break;
  }

  cover.count = static_cast<int>(best.size());
  for (int r : best) {
    std::vector<int> rows, cols;
    for (int i = 0; i < inst.m; ++i)
      if (rects[r].first >> i & 1) rows.push_back(i);
    for (int j = 0; j < inst.n; ++j)
      if (rects[r].second >> j & 1) cols.push_back(j);
    cover.rectangles.emplace_back(std::move(rows), std::move(cols));
  }
  return cover;
}

}  // namespace nnrank::bounds
