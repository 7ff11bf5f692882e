#include "core/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "core/error.hpp"
#include "json.hpp"

namespace wnil {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Composite Simpson for int_0^{pi/4} sec^alpha. The integrand is smooth and
// bounded by 2^{alpha/2}, so a fixed fine partition is far below 1e-12.
double sec_power_integral(double alpha) {
  const int panels = 4096;
  const double a = 0.0, b = kPi / 4.0;
  const double step = (b - a) / panels;
  auto g = [alpha](double theta) { return std::pow(1.0 / std::cos(theta), alpha); };
  double sum = g(a) + g(b);
  for (int i = 1; i < panels; ++i) sum += g(a + i * step) * (i % 2 ? 4.0 : 2.0);
  return sum * step / 3.0;
}

double diagonal_cell_mass(double alpha, double h, int dim) {
  if (dim == 1) return 2.0 * std::pow(h / 2.0, alpha) / alpha;
  return 8.0 / alpha * std::pow(h / 2.0, alpha) * sec_power_integral(alpha);
}

double kernel_value(const CZKernelSpec& spec, const Point& x, const Point& y, int dim) {
  if (spec.kind == CZKernelSpec::Kind::Hilbert1D) return spec.constant / (x[0] - y[0]);
  const double dx = x[0] - y[0], dy = x[1] - y[1];
  const double d = std::sqrt(dx * dx + dy * dy);
  const double num = spec.j == 1 ? dx : dy;
  (void)dim;
  return spec.constant * num / (d * d * d);
}

// C^infinity cutoff in the radial variable: 1 on [0,1], 0 on [2, inf),
// strictly decreasing between.
double radial_bump(double u) {
  u = std::fabs(u);
  if (u <= 1.0) return 1.0;
  if (u >= 2.0) return 0.0;
  const double s = 2.0 - u;
  auto ramp = [](double v) { return v <= 0.0 ? 0.0 : std::exp(-1.0 / v); };
  const double a = ramp(s), b = ramp(1.0 - s);
  return a / (a + b);
}

// Largest k with k * step < bound, robust to rounding at exact multiples.
int strict_window(double bound, double step) {
  int k = static_cast<int>(std::floor(bound / step));
  while (k > 0 && k * step >= bound) --k;
  while ((k + 1) * step < bound) ++k;
  return k;
}

}  // namespace

std::string CZKernelSpec::to_json() const {
  nlohmann::json j_out;
  j_out["kind"] = kind == Kind::Hilbert1D ? "hilbert" : "riesz";
  if (kind == Kind::RieszJ) j_out["component"] = j;
  j_out["constant"] = constant;
  j_out["epsilon"] = epsilon;
  return j_out.dump();
}

CZKernelSpec CZKernelSpec::from_json(const std::string& text) {
  nlohmann::json j_in;
  try {
    j_in = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("kernel json: ") + e.what());
  }
  CZKernelSpec spec;
  const std::string kind = j_in.value("kind", "");
  if (kind == "hilbert") {
    spec.kind = Kind::Hilbert1D;
  } else if (kind == "riesz") {
    spec.kind = Kind::RieszJ;
    spec.j = j_in.value("component", 1);
  } else {
    fail(ErrorCode::ParseError, "kernel json: unknown kind '" + kind + "'");
  }
  spec.constant = j_in.value("constant", 1.0);
  spec.epsilon = j_in.value("epsilon", 0.0);
  require(std::isfinite(spec.constant), ErrorCode::InvalidArgument, "kernel constant not finite");
  require(spec.j == 1 || spec.j == 2, ErrorCode::InvalidArgument, "riesz component must be 1 or 2");
  return spec;
}

GridFunction cz_apply(const CZKernelSpec& spec, const GridFunction& f) {
  const int dim = f.dim();
  if (spec.kind == CZKernelSpec::Kind::Hilbert1D)
    require(dim == 1, ErrorCode::InvalidArgument, "hilbert kernel needs a 1d grid");
  else
    require(dim == 2, ErrorCode::InvalidArgument, "riesz kernel needs a 2d grid");
  require(spec.j == 1 || spec.j == 2, ErrorCode::InvalidArgument, "riesz component must be 1 or 2");
  require(std::isfinite(spec.constant), ErrorCode::InvalidArgument, "kernel constant not finite");

  const double h = f.spacing();
  const double eps = spec.epsilon > 0.0 ? spec.epsilon : h / 2.0;
  require(eps >= 0.49 * h, ErrorCode::InvalidArgument, "truncation below half a cell");
  const double cutoff = eps * (1.0 - 1e-12);
  const double cell = f.cell_measure();

  GridFunction out = GridFunction::zeros(f.box(), h);
  const std::size_t n = f.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point xi = f.center(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double fv = f[k];
      if (fv == 0.0) continue;
      const Point yk = f.center(k);
      if (distance(xi, yk, dim) < cutoff) continue;
      acc += kernel_value(spec, xi, yk, dim) * fv;
    }
    out.values()[i] = acc * cell;
  }
  return out;
}

GridFunction fractional_integral(const GridFunction& f, double alpha, double constant) {
  const int dim = f.dim();
  require(alpha > 0.0 && alpha < dim, ErrorCode::InvalidArgument,
          "fractional order must lie in (0, dim)");
  require(std::isfinite(constant), ErrorCode::InvalidArgument, "constant not finite");

  const double h = f.spacing();
  const double cell = f.cell_measure();
  const double diag = diagonal_cell_mass(alpha, h, dim);
  const double expo = alpha - dim;

  GridFunction out = GridFunction::zeros(f.box(), h);
  const std::size_t n = f.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point xi = f.center(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double fv = f[k];
      if (fv == 0.0) continue;
      if (k == i) {
        acc += fv * diag / cell;   // exact integral over the singular cell
        continue;
      }
      acc += fv * std::pow(distance(xi, f.center(k), dim), expo);
    }
    out.values()[i] = constant * acc * cell;
  }
  return out;
}

double mexican_hat(const Point& x, int dim) {
  if (dim == 1) {
    static const double c1 = 1.0 / std::sqrt(0.75 * std::sqrt(kPi));
    const double u = x[0];
    return c1 * (1.0 - u * u) * std::exp(-0.5 * u * u);
  }
  static const double c2 = 1.0 / std::sqrt(2.0 * kPi);
  const double r2 = x[0] * x[0] + x[1] * x[1];
  return c2 * (2.0 - r2) * std::exp(-0.5 * r2);
}

LPTransform::LPTransform(const GridFunction& f, const LPProfile& profile, bool tabulated) {
  require(profile.t_count >= 2, ErrorCode::InvalidArgument, "need at least two dilations");
  require(profile.pad_factor >= 1.0, ErrorCode::InvalidArgument, "pad factor below 1");
  dim_ = f.dim();
  const double h = f.spacing();
  const Box& box = f.box();

  // Dilations below the cell size cannot be resolved on the lattice: the
  // sampled kernel degenerates to its value at 0 and the energy blows up
  // like (h/t)^2, so the default range starts at h.
  const double t_lo = profile.t_min > 0.0 ? profile.t_min : h;
  const double t_hi = profile.t_max > 0.0 ? profile.t_max : 4.0 * box.diameter();
  require(t_hi > t_lo, ErrorCode::InvalidArgument, "dilation range is empty");

  // Grid-aligned zero padding: extend each axis by whole cells.
  Box padded = box;
  std::array<int, 2> pad_cells = {0, 0};
  for (int a = 0; a < dim_; ++a) {
    const int cells = static_cast<int>(
        std::ceil(0.5 * (profile.pad_factor - 1.0) * f.nx(a) - 1e-9));
    pad_cells[a] = cells;
    padded.lo[a] = box.lo[a] - cells * h;
    padded.hi[a] = box.hi[a] + cells * h;
  }
  layout_ = GridFunction::zeros(padded, h);

  const double step = std::log(t_hi / t_lo) / (profile.t_count - 1);
  t_grid_.resize(profile.t_count);
  t_weights_.assign(profile.t_count, step);
  for (int m = 0; m < profile.t_count; ++m) t_grid_[m] = t_lo * std::exp(step * m);
  t_weights_.front() = step / 2.0;
  t_weights_.back() = step / 2.0;

  const std::size_t pn = layout_.size();
  const std::size_t fn = f.size();
  const double cell = f.cell_measure();
  conv_.assign(t_grid_.size(), std::vector<double>(pn, 0.0));
  sq_.assign(t_grid_.size(), std::vector<double>(pn, 0.0));

  // Offsets between padded and source centers live on the same lattice, so
  // the kernel can be tabulated per offset and reused across cells.
  const int offx = pad_cells[0] + static_cast<int>(f.nx(0));
  const int offy = dim_ == 2 ? pad_cells[1] + static_cast<int>(f.nx(1)) : 0;

  for (std::size_t m = 0; m < t_grid_.size(); ++m) {
    const double t = t_grid_[m];
    const double scale = std::pow(t, -dim_) * cell;
    std::vector<double> table;
    if (tabulated) {
      if (dim_ == 1) {
        table.resize(2 * offx + 1);
        for (int d = -offx; d <= offx; ++d)
          table[d + offx] = mexican_hat({d * h / t, 0.0}, 1) * scale;
      } else {
        table.resize(static_cast<std::size_t>(2 * offx + 1) * (2 * offy + 1));
        for (int dy = -offy; dy <= offy; ++dy)
          for (int dx = -offx; dx <= offx; ++dx)
            table[static_cast<std::size_t>(dy + offy) * (2 * offx + 1) + (dx + offx)] =
                mexican_hat({dx * h / t, dy * h / t}, 2) * scale;
      }
    }
    for (std::size_t i = 0; i < pn; ++i) {
      const Point xi = layout_.center(i);
      double acc = 0.0;
      for (std::size_t k = 0; k < fn; ++k) {
        const double fv = f[k];
        if (fv == 0.0) continue;
        const Point yk = f.center(k);
        if (tabulated) {
          const int dx = static_cast<int>(std::lround((xi[0] - yk[0]) / h));
          if (dim_ == 1) {
            acc += table[dx + offx] * fv;
          } else {
            const int dy = static_cast<int>(std::lround((xi[1] - yk[1]) / h));
            acc += table[static_cast<std::size_t>(dy + offy) * (2 * offx + 1) + (dx + offx)] * fv;
          }
        } else {
          const Point u = {(xi[0] - yk[0]) / t, dim_ == 2 ? (xi[1] - yk[1]) / t : 0.0};
          acc += mexican_hat(u, dim_) * scale * fv;
        }
      }
      conv_[m][i] = acc;
      sq_[m][i] = acc * acc;
    }
  }
}

GridFunction LPTransform::g() const {
  GridFunction out = GridFunction::zeros(layout_.box(), layout_.spacing());
  for (std::size_t m = 0; m < t_grid_.size(); ++m)
    for (std::size_t i = 0; i < out.size(); ++i)
      out.values()[i] += t_weights_[m] * sq_[m][i];
  for (double& v : out.values()) v = std::sqrt(v);
  return out;
}

GridFunction LPTransform::area(double aperture) const {
  require(aperture >= 1.0, ErrorCode::InvalidArgument, "aperture below 1");
  const double h = layout_.spacing();
  const double cell = layout_.cell_measure();
  const std::size_t pn = layout_.size();
  GridFunction out = GridFunction::zeros(layout_.box(), h);

  const int nx = static_cast<int>(layout_.nx(0));
  const int ny = dim_ == 2 ? static_cast<int>(layout_.nx(1)) : 1;

  for (std::size_t m = 0; m < t_grid_.size(); ++m) {
    const double t = t_grid_[m];
    const double radius = aperture * t;
    const double factor = t_weights_[m] / std::pow(t, dim_) * cell;
    // Row prefix sums make each cone slice an O(1) range query.
    std::vector<double> prefix(static_cast<std::size_t>(ny) * (nx + 1), 0.0);
    for (int row = 0; row < ny; ++row)
      for (int cidx = 0; cidx < nx; ++cidx)
        prefix[static_cast<std::size_t>(row) * (nx + 1) + cidx + 1] =
            prefix[static_cast<std::size_t>(row) * (nx + 1) + cidx] +
            sq_[m][static_cast<std::size_t>(row) * nx + cidx];

    const int kx = strict_window(radius, h);
    for (std::size_t i = 0; i < pn; ++i) {
      const int ix = static_cast<int>(i) % nx;
      const int iy = static_cast<int>(i) / nx;
      double slice = 0.0;
      if (dim_ == 1) {
        const int lo = std::max(0, ix - kx), hi = std::min(nx - 1, ix + kx);
        if (lo <= hi) slice = prefix[hi + 1] - prefix[lo];
      } else {
        const int ky = strict_window(radius, h);
        for (int dy = -ky; dy <= ky; ++dy) {
          const int row = iy + dy;
          if (row < 0 || row >= ny) continue;
          const double rem2 = radius * radius - dy * dy * h * h;
          if (rem2 <= 0.0) continue;
          const int kr = strict_window(std::sqrt(rem2), h);
          const int lo = std::max(0, ix - kr), hi = std::min(nx - 1, ix + kr);
          if (lo <= hi)
            slice += prefix[static_cast<std::size_t>(row) * (nx + 1) + hi + 1] -
                     prefix[static_cast<std::size_t>(row) * (nx + 1) + lo];
        }
      }
      out.values()[i] += factor * slice;
    }
  }
  for (double& v : out.values()) v = std::sqrt(v);
  return out;
}

GridFunction LPTransform::area_smooth(double aperture) const {
  require(aperture >= 1.0, ErrorCode::InvalidArgument, "aperture below 1");
  const double h = layout_.spacing();
  const double cell = layout_.cell_measure();
  const std::size_t pn = layout_.size();
  GridFunction out = GridFunction::zeros(layout_.box(), h);

  const int nx = static_cast<int>(layout_.nx(0));
  const int ny = dim_ == 2 ? static_cast<int>(layout_.nx(1)) : 1;

  for (std::size_t m = 0; m < t_grid_.size(); ++m) {
    const double t = t_grid_[m];
    const double radius = aperture * t;
    const double factor = t_weights_[m] / std::pow(t, dim_) * cell;
    const int kx = strict_window(2.0 * radius, h);   // support of the bump
    const int ky = dim_ == 2 ? kx : 0;
    for (std::size_t i = 0; i < pn; ++i) {
      const int ix = static_cast<int>(i) % nx;
      const int iy = static_cast<int>(i) / nx;
      double slice = 0.0;
      for (int dy = -ky; dy <= ky; ++dy) {
        const int row = iy + dy;
        if (dim_ == 2 && (row < 0 || row >= ny)) continue;
        for (int dx = -kx; dx <= kx; ++dx) {
          const int col = ix + dx;
          if (col < 0 || col >= nx) continue;
          const double d =
              dim_ == 1 ? std::fabs(dx) * h : std::sqrt(double(dx) * dx + double(dy) * dy) * h;
          const double w = radial_bump(d / radius);
          if (w == 0.0) continue;
          slice += w * sq_[m][static_cast<std::size_t>(dim_ == 2 ? row : 0) * nx + col];
        }
      }
      out.values()[i] += factor * slice;
    }
  }
  for (double& v : out.values()) v = std::sqrt(v);
  return out;
}

GridFunction LPTransform::g_star(double lambda) const {
  require(lambda > 2.0, ErrorCode::InvalidArgument, "exponent must exceed 2");
  const double cell = layout_.cell_measure();
  const std::size_t pn = layout_.size();
  GridFunction out = GridFunction::zeros(layout_.box(), layout_.spacing());

  for (std::size_t m = 0; m < t_grid_.size(); ++m) {
    const double t = t_grid_[m];
    const double factor = t_weights_[m] / std::pow(t, dim_) * cell;
    for (std::size_t i = 0; i < pn; ++i) {
      const Point xi = layout_.center(i);
      double acc = 0.0;
      for (std::size_t k = 0; k < pn; ++k) {
        const double sv = sq_[m][k];
        if (sv == 0.0) continue;
        const double d = distance(xi, layout_.center(k), dim_);
        acc += std::pow(t / (t + d), lambda * dim_) * sv;
      }
      out.values()[i] += factor * acc;
    }
  }
  for (double& v : out.values()) v = std::sqrt(v);
  return out;
}

GridFunction lp_g(const GridFunction& f, const LPProfile& profile) {
  return LPTransform(f, profile).g();
}

GridFunction lusin_area(const GridFunction& f, double aperture, const LPProfile& profile) {
  return LPTransform(f, profile).area(aperture);
}

GridFunction s_tilde(const GridFunction& f, double aperture, const LPProfile& profile) {
  return LPTransform(f, profile).area_smooth(aperture);
}

GridFunction g_star_lambda(const GridFunction& f, double lambda, const LPProfile& profile) {
  return LPTransform(f, profile).g_star(lambda);
}

KolmogorovCheck kolmogorov_check(const GridFunction& sf, const GridFunction& f, const CellSet& set,
                                 double nu, double alpha) {
  require(nu > 0.0 && nu < 1.0, ErrorCode::InvalidArgument, "exponent must lie in (0, 1)");
  const int dim = f.dim();
  require(alpha >= 0.0 && alpha < dim, ErrorCode::InvalidArgument, "order must lie in [0, dim)");
  require(!set.empty(), ErrorCode::EmptySet, "restriction set is empty");

  const double cell = sf.cell_measure();
  KolmogorovCheck result;
  for (std::size_t idx : set) {
    require(idx < sf.size(), ErrorCode::InvalidArgument, "set index out of range");
    result.lhs += std::pow(std::fabs(sf[idx]), nu) * cell;
  }
  result.set_measure = static_cast<double>(set.size()) * cell;

  double l1 = 0.0;
  for (double v : f.values()) l1 += std::fabs(v);
  l1 *= f.cell_measure();

  const double expo = 1.0 - nu * (dim - alpha) / dim;
  result.rhs = std::pow(result.set_measure, expo) * std::pow(l1, nu);
  result.ratio = result.rhs > 0.0 ? result.lhs / result.rhs
                                  : (result.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  return result;
}

}  // namespace wnil
