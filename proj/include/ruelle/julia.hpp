#pragma once

/// \file julia.hpp
/// Attraction-time rasterizer for T(w, z) = z (2z - w)/(2 - wz), whose
/// attracting fixed points 0 and infinity split the plane into two basins.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ruelle/numerics.hpp"

namespace ruelle {

enum class Basin : std::uint8_t { zero, infinity, undecided };

struct Viewport {
  double xmin = -1.6, xmax = 1.6, ymin = -1.6, ymax = 1.6;
};

struct Raster {
  int width = 0;
  int height = 0;
  Viewport viewport;
  std::vector<Basin> basin;
  std::vector<int> steps;

  Basin at(int col, int row) const { return basin[static_cast<std::size_t>(row) * width + col]; }

  /// Center of pixel (col, row); row 0 is the top edge (ymax).
  Complex coordinate(int col, int row) const {
    const double x = viewport.xmin + (col + 0.5) * (viewport.xmax - viewport.xmin) / width;
    const double y = viewport.ymax - (row + 0.5) * (viewport.ymax - viewport.ymin) / height;
    return {x, y};
  }
};

struct Orbit {
  Basin basin;
  int steps;
};

/// Iterates T(w, .) from z until |z| < eps, |z| > 1/eps, or maxIter steps.
/// Landing exactly on the pole 2/w counts as escaping to infinity.
inline Orbit classify(Complex w, Complex z, int max_iter, double eps) {
  for (int k = 0; k < max_iter; ++k) {
    const double a = std::abs(z);
    if (a < eps) return {Basin::zero, k};
    if (a > 1.0 / eps) return {Basin::infinity, k};
    const Complex den = 2.0 - w * z;
    if (den == Complex{}) return {Basin::infinity, k + 1};
    z = z * (2.0 * z - w) / den;
    if (!is_finite(z)) return {Basin::infinity, k + 1};
  }
  const double a = std::abs(z);
  if (a < eps) return {Basin::zero, max_iter};
  if (a > 1.0 / eps) return {Basin::infinity, max_iter};
  return {Basin::undecided, max_iter};
}

inline Raster render(Complex w, const Viewport& viewport, int width, int height, int max_iter = 500,
                     double eps = 1e-3) {
  if (width < 16 || height < 16) throw InvalidInput("render: raster must be at least 16x16");
  if (max_iter < 50) throw InvalidInput("render: maxIter must be at least 50");
  if (!(eps > 0.0 && eps < 0.1)) throw InvalidInput("render: epsilon must lie in (0, 0.1)");
  if (!(viewport.xmax > viewport.xmin && viewport.ymax > viewport.ymin)) {
    throw InvalidInput("render: empty viewport");
  }
  Raster r;
  r.width = width;
  r.height = height;
  r.viewport = viewport;
  r.basin.resize(static_cast<std::size_t>(width) * height);
  r.steps.resize(r.basin.size());
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      const Orbit o = classify(w, r.coordinate(col, row), max_iter, eps);
      const auto i = static_cast<std::size_t>(row) * width + col;
      r.basin[i] = o.basin;
      r.steps[i] = o.steps;
    }
  }
  return r;
}

inline double basin_fraction(const Raster& r, Basin b) {
  std::size_t n = 0;
  for (auto v : r.basin) n += v == b;
  return r.basin.empty() ? 0.0 : static_cast<double>(n) / r.basin.size();
}

/// True when the zero-basin pixels form one 4-connected component.
inline bool zero_basin_connected(const Raster& r) {
  std::vector<char> seen(r.basin.size(), 0);
  std::size_t total = 0, start = r.basin.size();
  for (std::size_t i = 0; i < r.basin.size(); ++i) {
    if (r.basin[i] == Basin::zero) {
      ++total;
      if (start == r.basin.size()) start = i;
    }
  }
  if (total == 0) return false;
  std::vector<std::size_t> stack{start};
  seen[start] = 1;
  std::size_t reached = 0;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    ++reached;
    const int row = static_cast<int>(i / r.width), col = static_cast<int>(i % r.width);
    const int dr[] = {-1, 1, 0, 0}, dc[] = {0, 0, -1, 1};
    for (int k = 0; k < 4; ++k) {
      const int rr = row + dr[k], cc = col + dc[k];
      if (rr < 0 || rr >= r.height || cc < 0 || cc >= r.width) continue;
      const auto j = static_cast<std::size_t>(rr) * r.width + cc;
      if (!seen[j] && r.basin[j] == Basin::zero) {
        seen[j] = 1;
        stack.push_back(j);
      }
    }
  }
  return reached == total;
}

enum class PgmMode { basin, steps };

inline std::string pgm_header(int width, int height) {
  std::ostringstream os;
  os << "P5\n" << width << ' ' << height << "\n255\n";
  return os.str();
}

/// Gray levels: basin mode 0 (zero basin), 255 (infinity), 128 (undecided);
/// steps mode scales step counts linearly onto [0, 255].
inline std::vector<std::uint8_t> pgm_payload(const Raster& r, PgmMode mode) {
  std::vector<std::uint8_t> out(r.basin.size());
  int max_steps = 1;
  for (int s : r.steps) max_steps = std::max(max_steps, s);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (mode == PgmMode::basin) {
      out[i] = r.basin[i] == Basin::zero ? 0 : r.basin[i] == Basin::infinity ? 255 : 128;
    } else {
      out[i] = static_cast<std::uint8_t>(std::lround(255.0 * r.steps[i] / max_steps));
    }
  }
  return out;
}

inline void write_pgm(const Raster& r, const std::string& path, PgmMode mode = PgmMode::basin) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("write_pgm: cannot open " + path);
  const auto header = pgm_header(r.width, r.height);
  const auto payload = pgm_payload(r, mode);
  f.write(header.data(), static_cast<std::streamsize>(header.size()));
  f.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
  if (!f) throw Error("write_pgm: write failed for " + path);
}

}  // namespace ruelle
