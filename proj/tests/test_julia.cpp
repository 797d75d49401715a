#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "ruelle/julia.hpp"

using namespace ruelle;

TEST(Classify, SquareMap) {
  EXPECT_EQ(classify(0.0, 0.5, 500, 1e-3).basin, Basin::zero);
  EXPECT_EQ(classify(0.0, 1.5, 500, 1e-3).basin, Basin::infinity);
  EXPECT_EQ(classify(0.0, Complex{0.0, -0.95}, 500, 1e-3).basin, Basin::zero);
  // 0.5 -> 0.25 -> 0.0625 -> ... reaches 1e-3 after 4 steps.
  EXPECT_EQ(classify(0.0, 0.5, 500, 1e-3).steps, 4);
}

TEST(Classify, ReferenceParameter) {
  const auto o = classify(1.0, 0.0, 500, 1e-3);
  EXPECT_EQ(o.basin, Basin::zero);
  EXPECT_EQ(o.steps, 0);
  // Multiplier -1/2 at 0: a point at 0.01 needs only a few steps.
  const auto p = classify(1.0, Complex{0.01, 0.01}, 500, 1e-3);
  EXPECT_EQ(p.basin, Basin::zero);
  EXPECT_LE(p.steps, 5);
}

TEST(Classify, PoleEscapes) {
  const Complex w{0.5, 0.26};
  EXPECT_EQ(classify(w, 2.0 / w, 500, 1e-3).basin, Basin::infinity);
}

TEST(Render, SquareDisk) {
  const Raster r = render(0.0, Viewport{}, 128, 128);
  int inside = 0, zero = 0;
  for (int row = 0; row < r.height; ++row) {
    for (int col = 0; col < r.width; ++col) {
      if (std::abs(r.coordinate(col, row)) <= 0.9) {
        ++inside;
        zero += r.at(col, row) == Basin::zero;
      }
    }
  }
  ASSERT_GT(inside, 0);
  EXPECT_GE(static_cast<double>(zero) / inside, 0.99);
}

TEST(Render, PixelCenters) {
  const Raster r = render(0.0, Viewport{-1.0, 1.0, -1.0, 1.0}, 16, 16);
  EXPECT_LT(std::abs(r.coordinate(0, 0) - Complex{-1.0 + 1.0 / 16, 1.0 - 1.0 / 16}), 1e-15);
  EXPECT_LT(std::abs(r.coordinate(15, 15) - Complex{1.0 - 1.0 / 16, -1.0 + 1.0 / 16}), 1e-15);
}

TEST(Render, FigureParameter) {
  const Raster r = render(Complex{0.5, 0.26}, Viewport{}, 256, 256);
  EXPECT_LT(basin_fraction(r, Basin::undecided), 0.05);
  EXPECT_TRUE(zero_basin_connected(r));
  EXPECT_GT(basin_fraction(r, Basin::zero), 0.1);
  EXPECT_GT(basin_fraction(r, Basin::infinity), 0.1);
}

TEST(Render, StableUnderDoubledIterations) {
  const Complex w{0.5, 0.26};
  const Raster a = render(w, Viewport{}, 128, 128, 500);
  const Raster b = render(w, Viewport{}, 128, 128, 1000);
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.basin.size(); ++i) same += a.basin[i] == b.basin[i];
  EXPECT_GE(static_cast<double>(same) / a.basin.size(), 0.99);
}

TEST(Render, BoundaryNearUnitCircleForRealParameters) {
  for (double w : {0.0, 0.3, 0.6, 1.0}) {
    const Raster r = render(w, Viewport{}, 128, 128);
    const double pixel = 3.2 / 128;
    double worst = 0.0;
    for (int row = 0; row + 1 < r.height; ++row) {
      for (int col = 0; col + 1 < r.width; ++col) {
        const Basin b = r.at(col, row);
        if (b != r.at(col + 1, row) || b != r.at(col, row + 1)) {
          worst = std::max(worst, std::abs(std::abs(r.coordinate(col, row)) - 1.0));
        }
      }
    }
    EXPECT_LE(worst, 0.2 + 2.0 * pixel) << "w=" << w;
  }
}

TEST(Render, RejectsBadSettings) {
  EXPECT_THROW(render(0.0, Viewport{}, 8, 64), InvalidInput);
  EXPECT_THROW(render(0.0, Viewport{}, 64, 64, 10), InvalidInput);
  EXPECT_THROW(render(0.0, Viewport{}, 64, 64, 500, 0.5), InvalidInput);
  EXPECT_THROW(render(0.0, Viewport{1.0, -1.0, -1.0, 1.0}, 64, 64), InvalidInput);
}

TEST(Pgm, Header) {
  EXPECT_EQ(pgm_header(512, 512), "P5\n512 512\n255\n");
  EXPECT_EQ(pgm_header(640, 480), "P5\n640 480\n255\n");
}

TEST(Pgm, AllZeroBasinFile) {
  const Raster r = render(0.0, Viewport{-0.1, 0.1, -0.1, 0.1}, 16, 16);
  ASSERT_EQ(basin_fraction(r, Basin::zero), 1.0);
  const std::string path = ::testing::TempDir() + "zero_basin.pgm";
  write_pgm(r, path);
  std::ifstream f(path, std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  const std::string header = "P5\n16 16\n255\n";
  ASSERT_EQ(bytes.size(), header.size() + 256);
  EXPECT_EQ(bytes.substr(0, header.size()), header);
  for (std::size_t i = header.size(); i < bytes.size(); ++i) EXPECT_EQ(bytes[i], '\0');
  std::remove(path.c_str());
}

TEST(Pgm, StepsModeScales) {
  const Raster r = render(0.0, Viewport{}, 32, 32);
  const auto p = pgm_payload(r, PgmMode::steps);
  int max_steps = 0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < r.steps.size(); ++i) {
    if (r.steps[i] > max_steps) max_steps = r.steps[i], arg = i;
  }
  EXPECT_EQ(p[arg], 255);
  const auto b = pgm_payload(r, PgmMode::basin);
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_EQ(b[i], r.basin[i] == Basin::zero ? 0 : r.basin[i] == Basin::infinity ? 255 : 128);
  }
}

TEST(Pgm, UnwritablePath) {
  const Raster r = render(0.0, Viewport{}, 16, 16);
  EXPECT_THROW(write_pgm(r, "/nonexistent-dir/x.pgm"), Error);
}
