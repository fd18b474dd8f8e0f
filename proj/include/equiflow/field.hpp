#pragma once

// Vector-valued grid functions and their CSV serialization. Rows follow the
// grid's node order (lexicographic in coordinates); %.17g keeps round trips
// bit exact.

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "equiflow/errors.hpp"
#include "equiflow/grid.hpp"
#include "equiflow/linalg.hpp"

namespace equiflow {

struct Field {
  const Grid* grid = nullptr;
  int m = 0;
  std::vector<double> v;  // node major: v[node * m + component]

  Field() = default;
  Field(const Grid& g, int comps)
      : grid(&g), m(comps), v(size_t(g.node_count()) * comps, 0.0) {}

  Vec at(int node) const {
    Vec u = Vec::zero(m);
    const double* p = v.data() + size_t(node) * m;
    for (int c = 0; c < m; ++c) u[c] = p[c];
    return u;
  }

  void set(int node, const Vec& u) {
    double* p = v.data() + size_t(node) * m;
    for (int c = 0; c < m; ++c) p[c] = u[c];
  }

  // value at an arbitrary point, multilinear / barycentric between nodes
  Vec sample(const Vec& x) const {
    InterpStencil st = grid->locate(x);
    Vec u = Vec::zero(m);
    for (int k = 0; k < st.count; ++k) {
      const double* p = v.data() + size_t(st.node[k]) * m;
      for (int c = 0; c < m; ++c) u[c] += st.weight[k] * p[c];
    }
    return u;
  }

  double max_norm() const {
    double best = 0;
    int N = grid->node_count();
    for (int i = 0; i < N; ++i) {
      double s = 0;
      const double* p = v.data() + size_t(i) * m;
      for (int c = 0; c < m; ++c) s += p[c] * p[c];
      if (s > best) best = s;
    }
    return std::sqrt(best);
  }
};

inline void write_field_csv(const Field& f, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw FileFormat("cannot open " + path + " for writing");
  const Grid& g = *f.grid;
  for (int k = 0; k < g.n; ++k) std::fprintf(fp, "%sx%d", k ? "," : "", k + 1);
  for (int c = 0; c < f.m; ++c) std::fprintf(fp, ",u%d", c + 1);
  std::fputc('\n', fp);
  int N = g.node_count();
  for (int i = 0; i < N; ++i) {
    for (int k = 0; k < g.n; ++k)
      std::fprintf(fp, "%s%.17g", k ? "," : "", g.pos[i][k]);
    const double* p = f.v.data() + size_t(i) * f.m;
    for (int c = 0; c < f.m; ++c) std::fprintf(fp, ",%.17g", p[c]);
    std::fputc('\n', fp);
  }
  std::fclose(fp);
}

// Reads a dump produced by write_field_csv back onto the same grid. Rows must
// match the grid's nodes in order; coordinates are checked, not trusted.
inline Field read_field_csv(const Grid& g, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "r");
  if (!fp) throw FileFormat("cannot open " + path);
  char line[4096];
  if (!std::fgets(line, sizeof line, fp)) {
    std::fclose(fp);
    throw FileFormat(path + ": empty file");
  }
  int cols = 1;
  for (const char* p = line; *p; ++p)
    if (*p == ',') ++cols;
  int m = cols - g.n;
  if (m < 1) {
    std::fclose(fp);
    throw FileFormat(path + ": fewer columns than grid coordinates");
  }
  Field f(g, m);
  int N = g.node_count();
  for (int i = 0; i < N; ++i) {
    if (!std::fgets(line, sizeof line, fp)) {
      std::fclose(fp);
      throw FileFormat(path + ": truncated at row " + std::to_string(i + 2));
    }
    const char* p = line;
    for (int c = 0; c < cols; ++c) {
      char* end = nullptr;
      double val = std::strtod(p, &end);
      if (end == p) {
        std::fclose(fp);
        throw FileFormat(path + ": bad number at row " + std::to_string(i + 2));
      }
      if (c < g.n) {
        if (std::abs(val - g.pos[i][c]) > 1e-9 * std::max(1.0, std::abs(val))) {
          std::fclose(fp);
          throw FileFormat(path + ": node coordinates do not match the grid at row " +
                           std::to_string(i + 2));
        }
      } else {
        f.v[size_t(i) * m + (c - g.n)] = val;
      }
      p = end;
      if (*p == ',') ++p;
    }
  }
  if (std::fgets(line, sizeof line, fp)) {
    bool blank = true;
    for (const char* q = line; *q; ++q)
      if (*q != ' ' && *q != '\n' && *q != '\r' && *q != '\t') blank = false;
    if (!blank) {
      std::fclose(fp);
      throw FileFormat(path + ": more rows than grid nodes");
    }
  }
  std::fclose(fp);
  return f;
}

}  // namespace equiflow
