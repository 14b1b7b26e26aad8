#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pmwu/errors.hpp"
#include "pmwu/graph.hpp"

namespace pmwu {

struct MatrixMarketOptions {
  bool drop_self_loops = true;
  /// Treat every entry (i,j) as the undirected edge {i,j}. When false a
  /// `general` file must already be structurally symmetric.
  bool symmetrize = true;
};

struct LoadStats {
  std::size_t entries = 0;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_merged = 0;
};

namespace detail {

struct MtxHeader {
  bool pattern = false;
  bool symmetric = false;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t nnz = 0;
};

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

inline MtxHeader read_mtx_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty Matrix Market stream");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket") throw FormatError("missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") throw FormatError("unsupported object '" + object + "'");
  if (format != "coordinate") throw FormatError("only coordinate format is supported, got '" + format + "'");
  MtxHeader h;
  if (field == "pattern") {
    h.pattern = true;
  } else if (field != "real" && field != "integer") {
    throw FormatError("unsupported field '" + field + "'");
  }
  if (symmetry == "symmetric") {
    h.symmetric = true;
  } else if (symmetry != "general") {
    throw FormatError("unsupported symmetry '" + symmetry + "'");
  }
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    std::istringstream sizes(line);
    long long r = -1, c = -1, nz = -1;
    if (!(sizes >> r >> c >> nz) || r < 0 || c < 0 || nz < 0) {
      throw FormatError("malformed size line: '" + line + "'");
    }
    h.rows = static_cast<std::size_t>(r);
    h.cols = static_cast<std::size_t>(c);
    h.nnz = static_cast<std::size_t>(nz);
    return h;
  }
  throw FormatError("missing size line");
}

/// Reads the nnz coordinate entries as 0-based pairs; values are discarded.
inline std::vector<std::pair<index_t, index_t>> read_mtx_entries(std::istream& in, const MtxHeader& h) {
  std::vector<std::pair<index_t, index_t>> out;
  out.reserve(h.nnz);
  std::string line;
  while (out.size() < h.nnz && std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    std::istringstream entry(line);
    long long i = 0, j = 0;
    if (!(entry >> i >> j)) throw FormatError("malformed entry line: '" + line + "'");
    if (!h.pattern) {
      double value = 0.0;
      if (!(entry >> value)) throw FormatError("missing value on entry line: '" + line + "'");
    }
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > h.rows || static_cast<std::size_t>(j) > h.cols) {
      throw FormatError("entry (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
    }
    out.emplace_back(static_cast<index_t>(i - 1), static_cast<index_t>(j - 1));
  }
  if (out.size() != h.nnz) {
    throw FormatError("expected " + std::to_string(h.nnz) + " entries, found " + std::to_string(out.size()));
  }
  return out;
}

}  // namespace detail

inline Graph read_matrix_market(std::istream& in, const MatrixMarketOptions& opts = {}, LoadStats* stats = nullptr) {
  const auto h = detail::read_mtx_header(in);
  if (h.rows != h.cols) throw FormatError("adjacency matrix must be square");
  if (h.rows == 0) throw FormatError("empty graph");
  auto entries = detail::read_mtx_entries(in, h);
  LoadStats local;
  local.entries = entries.size();

  if (!opts.symmetrize && !h.symmetric) {
    std::vector<std::pair<index_t, index_t>> fwd, rev;
    for (const auto& [i, j] : entries) {
      if (i == j) continue;
      fwd.emplace_back(i, j);
      rev.emplace_back(j, i);
    }
    std::sort(fwd.begin(), fwd.end());
    std::sort(rev.begin(), rev.end());
    fwd.erase(std::unique(fwd.begin(), fwd.end()), fwd.end());
    rev.erase(std::unique(rev.begin(), rev.end()), rev.end());
    if (fwd != rev) throw FormatError("general matrix is not structurally symmetric");
  }

  std::vector<std::pair<index_t, index_t>> pairs;
  pairs.reserve(entries.size());
  for (auto [i, j] : entries) {
    if (i == j) {
      if (!opts.drop_self_loops) throw FormatError("self-loop at vertex " + std::to_string(i + 1));
      ++local.self_loops_dropped;
      continue;
    }
    if (i > j) std::swap(i, j);
    pairs.emplace_back(i, j);
  }
  std::sort(pairs.begin(), pairs.end());
  const auto before = pairs.size();
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  local.duplicates_merged = before - pairs.size();
  if (stats) *stats = local;
  return Graph::from_edges(h.rows, std::move(pairs));
}

inline Graph read_matrix_market(const std::string& path, const MatrixMarketOptions& opts = {},
                                LoadStats* stats = nullptr) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  return read_matrix_market(in, opts, stats);
}

/// Reads a rows x cols matrix as a bipartite graph: row i becomes left
/// vertex i and column j becomes right vertex rows + j.
inline Graph read_biadjacency(std::istream& in, LoadStats* stats = nullptr) {
  const auto h = detail::read_mtx_header(in);
  if (h.rows == 0 || h.cols == 0) throw FormatError("empty graph");
  const auto entries = detail::read_mtx_entries(in, h);
  LoadStats local;
  local.entries = entries.size();
  std::vector<std::pair<index_t, index_t>> pairs;
  pairs.reserve(entries.size() * (h.symmetric ? 2 : 1));
  const auto left = static_cast<index_t>(h.rows);
  for (const auto& [i, j] : entries) {
    pairs.emplace_back(i, left + j);
    if (h.symmetric && i != j) pairs.emplace_back(j, left + i);
  }
  std::sort(pairs.begin(), pairs.end());
  const auto before = pairs.size();
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  local.duplicates_merged = before - pairs.size();
  if (stats) *stats = local;
  auto g = Graph::from_edges(h.rows + h.cols, std::move(pairs));
  g.mark_bipartite(h.rows);
  return g;
}

inline Graph read_biadjacency(const std::string& path, LoadStats* stats = nullptr) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  return read_biadjacency(in, stats);
}

/// Writes the graph as a symmetric pattern matrix (lower triangle).
inline void write_matrix_market(std::ostream& out, const Graph& g) {
  out << "%%MatrixMarket matrix coordinate pattern symmetric\n";
  out << g.n() << ' ' << g.n() << ' ' << g.m() << '\n';
  for (const auto& e : g.edges()) out << (e.c + 1) << ' ' << (e.r + 1) << '\n';
}

inline void write_matrix_market(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  write_matrix_market(out, g);
}

}  // namespace pmwu
