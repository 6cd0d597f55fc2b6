#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fraclab/errors.hpp"

namespace fraclab {

/// Uniform N×N node grid in the plane, spacing h, nodes x_i = c + (i - (N-1)/2) h,
/// restricted to the open ball |x - c| < R.
struct GridSpec {
  std::size_t N = 0;
  double h = 0;
  double R = 0;
  double cx = 0;
  double cy = 0;

  /// Smallest even grid holding the ball plus one ring of exterior nodes. For a fixed h
  /// the node sets of growing R are nested.
  static GridSpec covering(double R, double h, double cx = 0.0, double cy = 0.0) {
    if (!(R > 0.0 && h > 0.0)) throw DomainError("GridSpec: R and h must be positive");
    const auto half = static_cast<std::size_t>(std::ceil(R / h - 1e-12));
    return GridSpec{2 * half + 2, h, R, cx, cy};
  }

  /// Grid with N points per side spanning the ball, h = 2R / (N - 2).
  static GridSpec with_points(double R, std::size_t N) {
    if (N < 4 || N % 2 != 0) throw DomainError("GridSpec: N must be even and >= 4");
    return GridSpec{N, 2.0 * R / static_cast<double>(N - 2), R, 0.0, 0.0};
  }

  void check() const {
    if (N < 2) throw DomainError("GridSpec: N must be >= 2");
    if (!(h > 0.0 && R > 0.0)) throw DomainError("GridSpec: h and R must be positive");
    if (static_cast<double>(N) * h < 2.0 * R) throw DomainError("GridSpec: grid does not cover the ball (N h < 2R)");
  }

  std::size_t size() const { return N * N; }
  double offset(std::size_t i) const { return (static_cast<double>(i) - 0.5 * static_cast<double>(N - 1)) * h; }
  double x(std::size_t i) const { return cx + offset(i); }
  double y(std::size_t j) const { return cy + offset(j); }

  /// (2i - N + 1)² + (2j - N + 1)²: squared distance to the centre in units of h/2, exact.
  std::int64_t radius_key(std::size_t i, std::size_t j) const {
    const auto a = 2 * static_cast<std::int64_t>(i) - static_cast<std::int64_t>(N) + 1;
    const auto b = 2 * static_cast<std::int64_t>(j) - static_cast<std::int64_t>(N) + 1;
    return a * a + b * b;
  }

  double radius_from_key(std::int64_t key) const { return 0.5 * h * std::sqrt(static_cast<double>(key)); }

  bool inside(std::size_t i, std::size_t j) const { return radius_from_key(radius_key(i, j)) < R; }

  std::vector<std::uint8_t> mask() const {
    std::vector<std::uint8_t> m(size());
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) m[i * N + j] = inside(i, j) ? 1 : 0;
    return m;
  }

  bool operator==(const GridSpec&) const = default;
};

/// Function on a GridSpec, identically zero outside the ball (killed condition).
class GridFunction {
public:
  GridFunction() = default;

  explicit GridFunction(const GridSpec& spec) : spec_(spec), values_(spec.size(), 0.0), mask_(spec.mask()) {
    spec_.check();
  }

  GridFunction(const GridSpec& spec, std::vector<double> values) : spec_(spec), values_(std::move(values)), mask_(spec.mask()) {
    spec_.check();
    if (values_.size() != spec_.size()) throw DomainError("GridFunction: value count mismatch");
    enforce_mask();
  }

  /// Samples f(x, y) at the nodes inside the ball.
  template <class F>
  static GridFunction sample(const GridSpec& spec, F&& f) {
    GridFunction g(spec);
    for (std::size_t i = 0; i < spec.N; ++i)
      for (std::size_t j = 0; j < spec.N; ++j)
        if (g.mask_[i * spec.N + j]) g.values_[i * spec.N + j] = f(spec.x(i), spec.y(j));
    return g;
  }

  const GridSpec& spec() const { return spec_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  std::size_t N() const { return spec_.N; }

  double operator()(std::size_t i, std::size_t j) const { return values_[i * spec_.N + j]; }

  /// Replaces the values and re-applies the killed condition.
  void assign(std::vector<double> v) {
    if (v.size() != spec_.size()) throw DomainError("GridFunction: value count mismatch");
    values_ = std::move(v);
    enforce_mask();
  }

  void set(std::size_t i, std::size_t j, double v) {
    if (mask_[i * spec_.N + j]) values_[i * spec_.N + j] = v;
  }

  GridFunction scaled(double c) const {
    GridFunction out = *this;
    for (double& v : out.values_) v *= c;
    return out;
  }

  /// Discrete L² norm (Σ u_i² h²)^{1/2}.
  double l2_norm() const {
    double acc = 0.0;
    for (double v : values_) acc += v * v;
    return std::sqrt(acc) * spec_.h;
  }

  std::size_t masked_count() const {
    std::size_t c = 0;
    for (auto m : mask_) c += m;
    return c;
  }

private:
  void enforce_mask() {
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (!mask_[i]) values_[i] = 0.0;
  }

  GridSpec spec_;
  std::vector<double> values_;
  std::vector<std::uint8_t> mask_;
};

// ---------------------------------------------------------------------------
// Serialization
//
// CSV: header "x,y,value", one row per node in row-major order (i outer, j inner).
// Binary: 32-byte header {char magic[8] = "FRLGRID1"; int64 N; double h; double R},
// followed by N*N little-endian doubles in row-major order. The centre is not stored;
// binary files always describe a grid centred at the origin.

inline void write_grid_csv(std::ostream& os, const GridFunction& u) {
  const auto& sp = u.spec();
  os << "x,y,value\n";
  os.precision(17);
  for (std::size_t i = 0; i < sp.N; ++i)
    for (std::size_t j = 0; j < sp.N; ++j) os << sp.x(i) << ',' << sp.y(j) << ',' << u(i, j) << '\n';
}

/// Reads the CSV format back; `R` is not part of the file and must be supplied.
inline GridFunction read_grid_csv(std::istream& is, double R) {
  std::string line;
  std::vector<double> xs, ys, vals;
  std::getline(is, line);
  if (line.rfind("x,y,value", 0) != 0) throw DomainError("read_grid_csv: missing header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
      throw DomainError("read_grid_csv: expected three columns");
    xs.push_back(std::stod(a));
    ys.push_back(std::stod(b));
    vals.push_back(std::stod(c));
  }
  const auto N = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(vals.size()))));
  if (N * N != vals.size() || N < 2) throw DomainError("read_grid_csv: row count is not a square");
  const double h = xs[N] - xs[0];
  const double half = 0.5 * static_cast<double>(N - 1) * h;
  GridSpec spec{N, h, R, xs[0] + half, ys[0] + half};
  return GridFunction(spec, std::move(vals));
}

inline constexpr char kGridMagic[8] = {'F', 'R', 'L', 'G', 'R', 'I', 'D', '1'};

inline void write_grid_binary(std::ostream& os, const GridFunction& u) {
  const auto& sp = u.spec();
  if (sp.cx != 0.0 || sp.cy != 0.0) throw DomainError("write_grid_binary: only origin-centred grids are supported");
  const std::int64_t N = static_cast<std::int64_t>(sp.N);
  os.write(kGridMagic, 8);
  os.write(reinterpret_cast<const char*>(&N), 8);
  os.write(reinterpret_cast<const char*>(&sp.h), 8);
  os.write(reinterpret_cast<const char*>(&sp.R), 8);
  os.write(reinterpret_cast<const char*>(u.values().data()), static_cast<std::streamsize>(8 * u.values().size()));
}

inline GridFunction read_grid_binary(std::istream& is) {
  char magic[8];
  std::int64_t N = 0;
  double h = 0, R = 0;
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kGridMagic, 8) != 0) throw DomainError("read_grid_binary: bad magic");
  is.read(reinterpret_cast<char*>(&N), 8);
  is.read(reinterpret_cast<char*>(&h), 8);
  is.read(reinterpret_cast<char*>(&R), 8);
  if (!is || N < 2 || N > (1 << 16)) throw DomainError("read_grid_binary: bad header");
  std::vector<double> v(static_cast<std::size_t>(N * N));
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(8 * v.size()));
  if (!is) throw DomainError("read_grid_binary: truncated payload");
  return GridFunction(GridSpec{static_cast<std::size_t>(N), h, R, 0.0, 0.0}, std::move(v));
}

} // namespace fraclab
