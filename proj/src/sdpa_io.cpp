#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "nnrank/relaxations.hpp"

namespace nnrank::relax {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const double kSqrt2 = std::sqrt(2.0);

// Per-block layout of the exported problem. Zero-cone variables are fixed at
// zero and dropped; free variables are split into plus/minus halves of a
// diagonal block.
struct BlockMap {
  int sdpa_block = 0;   // 1-based block number, 0 = dropped
  int size = 0;         // negative = diagonal block
  bool split = false;   // free block exported as (z+, z-)
};

}  // namespace

void export_sdpa(const conic::ConicProblem& p, std::ostream& out, const std::string& comment) {
  p.validate();

  std::vector<BlockMap> map(p.cone.blocks.size());
  int nblocks = 0;
  for (size_t bi = 0; bi < p.cone.blocks.size(); ++bi) {
    const conic::ConeBlock& b = p.cone.blocks[bi];
    switch (b.type) {
      case conic::ConeType::Zero:
        map[bi] = {0, 0, false};
        break;
      case conic::ConeType::Free:
        map[bi] = {++nblocks, -2 * b.dim, true};
        break;
      case conic::ConeType::NonNeg:
        map[bi] = {++nblocks, -b.dim, false};
        break;
      case conic::ConeType::Psd:
        map[bi] = {++nblocks, b.dim, false};
        break;
    }
  }

  if (!comment.empty()) out << "\"" << comment << "\n";
  const int nrows = p.constraints.rows;
  out << nrows << "\n";
  out << nblocks << "\n";
  {
    bool first = true;
    for (const BlockMap& bm : map) {
      if (bm.sdpa_block == 0) continue;
      if (!first) out << " ";
      out << bm.size;
      first = false;
    }
    out << "\n";
  }
  {
    for (int r = 0; r < nrows; ++r) {
      if (r) out << " ";
      out << fmt17(p.b[r]);
    }
    out << "\n";
  }

  // one coefficient of matno `mat`: vector coordinate `local` inside cone
  // block bi, value v (in svec scaling for PSD blocks)
  auto emit = [&](int mat, size_t bi, int local, double v) {
    const conic::ConeBlock& blk = p.cone.blocks[bi];
    const BlockMap& bm = map[bi];
    if (bm.sdpa_block == 0 || v == 0.0) return;
    if (blk.type == conic::ConeType::Psd) {
      // invert the svec scaling: matrix entry = v / sqrt(2) off-diagonal
      int i = 0;
      int rem = local;
      while (rem >= blk.dim - i) {
        rem -= blk.dim - i;
        ++i;
      }
      const int j = i + rem;
      const double entry = (i == j) ? v : v / kSqrt2;
      out << mat << " " << bm.sdpa_block << " " << i + 1 << " " << j + 1 << " " << fmt17(entry)
          << "\n";
    } else if (bm.split) {
      out << mat << " " << bm.sdpa_block << " " << local + 1 << " " << local + 1 << " "
          << fmt17(v) << "\n";
      out << mat << " " << bm.sdpa_block << " " << blk.dim + local + 1 << " "
          << blk.dim + local + 1 << " " << fmt17(-v) << "\n";
    } else {
      out << mat << " " << bm.sdpa_block << " " << local + 1 << " " << local + 1 << " "
          << fmt17(v) << "\n";
    }
  };

  auto for_each_block_coord = [&](int flat, size_t& bi, int& local) {
    int off = 0;
    for (bi = 0; bi < p.cone.blocks.size(); ++bi) {
      const int len = p.cone.blocks[bi].length();
      if (flat < off + len) {
        local = flat - off;
        return;
      }
      off += len;
    }
    throw DimensionError("sdpa export: coordinate out of range");
  };

  // matno 0: objective. SDPA's dual maximizes <F0, Y> subject to
  // <Fi, Y> = b_i, so F0 = -c makes the exported optimum equal to
  // -(primal optimum) of `p`.
  for (int flat = 0; flat < static_cast<int>(p.c.size()); ++flat) {
    if (p.c[flat] == 0.0) continue;
    size_t bi;
    int local;
    for_each_block_coord(flat, bi, local);
    emit(0, bi, local, -p.c[flat]);
  }
  // matno r+1: constraint row r
  for (int r = 0; r < nrows; ++r) {
    for (int idx = p.constraints.ptr[r]; idx < p.constraints.ptr[r + 1]; ++idx) {
      size_t bi;
      int local;
      for_each_block_coord(p.constraints.idx[idx], bi, local);
      emit(r + 1, bi, local, p.constraints.val[idx]);
    }
  }
}

void export_sdpa(const conic::ConicProblem& p, const std::filesystem::path& path,
                 const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open file for writing: " + path.string());
  export_sdpa(p, out, comment);
  if (!out) throw Error("write failed: " + path.string());
}

SdpaData parse_sdpa(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file for reading: " + path.string());

  SdpaData data;
  std::string line;
  long lineno = 0;
  int stage = 0;  // 0: mdim, 1: nblock, 2: sizes, 3: rhs, 4: entries
  int nblock = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && (line[0] == '"' || line[0] == '*')) continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    switch (stage) {
      case 0:
        if (!(ls >> data.num_constraints)) throw ParseError("bad constraint count", lineno);
        stage = 1;
        break;
      case 1:
        if (!(ls >> nblock)) throw ParseError("bad block count", lineno);
        stage = 2;
        break;
      case 2: {
        int s;
        while (ls >> s) data.block_sizes.push_back(s);
        if (static_cast<int>(data.block_sizes.size()) != nblock)
          throw ParseError("block size count mismatch", lineno);
        stage = 3;
        break;
      }
      case 3: {
        double v;
        while (ls >> v) data.rhs.push_back(v);
        if (static_cast<int>(data.rhs.size()) != data.num_constraints)
          throw ParseError("rhs length mismatch", lineno);
        stage = 4;
        break;
      }
      default: {
        SdpaData::Entry e;
        if (!(ls >> e.matno >> e.blkno >> e.i >> e.j >> e.value))
          throw ParseError("bad entry quintuple", lineno);
        data.entries.push_back(e);
        break;
      }
    }
  }
  if (stage < 4) throw ParseError("truncated SDPA file", lineno);
  return data;
}

}  // namespace nnrank::relax
