#include "core/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace wnil {
namespace {

std::size_t axis_cells(double width, double h) {
  const double ratio = width / h;
  const auto n = static_cast<std::size_t>(std::llround(ratio));
  require(n >= 1 && std::abs(ratio - static_cast<double>(n)) < 1e-9 * std::max(1.0, ratio),
          ErrorCode::InvalidArgument, "grid: h must tile the box an integer number of times");
  return n;
}

// 17 significant digits: enough for a bit-exact double round-trip.
std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

GridFunction::GridFunction(const Box& box, double h, std::vector<double> values)
    : box_(box), h_(h), values_(std::move(values)) {
  require(box.dim == 1 || box.dim == 2, ErrorCode::InvalidArgument, "grid: dim must be 1 or 2");
  require(h > 0.0, ErrorCode::InvalidArgument, "grid: h must be positive");
  nx_[0] = axis_cells(box.width(0), h);
  nx_[1] = box.dim == 2 ? axis_cells(box.width(1), h) : 1;
  require(values_.size() == nx_[0] * nx_[1], ErrorCode::InvalidArgument,
          "grid: value count does not match the cell count");
}

GridFunction GridFunction::sample(const Box& box, double h,
                                  const std::function<double(const Point&)>& fn) {
  GridFunction g = zeros(box, h);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = fn(g.center(i));
  return g;
}

GridFunction GridFunction::zeros(const Box& box, double h) {
  Box b = box;
  const std::size_t n0 = axis_cells(b.width(0), h);
  const std::size_t n1 = b.dim == 2 ? axis_cells(b.width(1), h) : 1;
  return GridFunction(b, h, std::vector<double>(n0 * n1, 0.0));
}

double GridFunction::cell_measure() const { return box_.dim == 1 ? h_ : h_ * h_; }

Point GridFunction::center(std::size_t i) const {
  const std::size_t ix = i % nx_[0];
  const std::size_t iy = i / nx_[0];
  Point p{box_.lo[0] + (static_cast<double>(ix) + 0.5) * h_, 0.0};
  if (box_.dim == 2) p[1] = box_.lo[1] + (static_cast<double>(iy) + 0.5) * h_;
  return p;
}

double GridFunction::value_at(const Point& x) const {
  std::array<std::size_t, 2> idx{0, 0};
  for (int axis = 0; axis < box_.dim; ++axis) {
    const double t = (x[axis] - box_.lo[axis]) / h_;
    if (t < 0.0 || t >= static_cast<double>(nx_[axis])) return 0.0;
    idx[axis] = static_cast<std::size_t>(t);
  }
  return values_[flat_index(idx[0], idx[1])];
}

CellSet GridFunction::cells_in_ball(const Ball& ball) const {
  CellSet out;
  if (ball.radius <= 0.0) return out;
  // Clip candidate index ranges axis-wise, then test the strict distance.
  std::array<long, 2> lo_idx{0, 0}, hi_idx{static_cast<long>(nx_[0]) - 1,
                                           static_cast<long>(nx_[1]) - 1};
  for (int axis = 0; axis < box_.dim; ++axis) {
    const double a = (ball.center[axis] - ball.radius - box_.lo[axis]) / h_ - 0.5;
    const double b = (ball.center[axis] + ball.radius - box_.lo[axis]) / h_ - 0.5;
    lo_idx[axis] = std::max<long>(0, static_cast<long>(std::ceil(a)));
    hi_idx[axis] = std::min<long>(static_cast<long>(nx_[axis]) - 1,
                                  static_cast<long>(std::floor(b)));
  }
  if (box_.dim == 1) lo_idx[1] = hi_idx[1] = 0;
  for (long iy = lo_idx[1]; iy <= hi_idx[1]; ++iy)
    for (long ix = lo_idx[0]; ix <= hi_idx[0]; ++ix) {
      const std::size_t i = flat_index(static_cast<std::size_t>(ix), static_cast<std::size_t>(iy));
      if (ball.contains(center(i), box_.dim)) out.push_back(i);
    }
  return out;
}

bool GridFunction::same_layout(const GridFunction& other) const {
  return box_.dim == other.box_.dim && nx_ == other.nx_ && h_ == other.h_ &&
         box_.lo == other.box_.lo && box_.hi == other.box_.hi;
}

double average_over_ball(const GridFunction& f, const Ball& ball) {
  const CellSet cells = f.cells_in_ball(ball);
  require(!cells.empty(), ErrorCode::EmptyBall, "average_over_ball: ball contains no cell centers");
  return average_over_cells(f, cells);
}

double average_over_cells(const GridFunction& f, const CellSet& cells) {
  require(!cells.empty(), ErrorCode::EmptyBall, "average_over_cells: empty cell set");
  double sum = 0.0;
  for (std::size_t i : cells) sum += f[i];
  return sum / static_cast<double>(cells.size());
}

double integrate(const GridFunction& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += v;
  return sum * f.cell_measure();
}

double integrate(const GridFunction& f, const std::vector<double>& cell_weights) {
  require(cell_weights.size() == f.size(), ErrorCode::GridMismatch,
          "integrate: weight sample count does not match the grid");
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    require(std::isfinite(cell_weights[i]), ErrorCode::NonFiniteWeight,
            "integrate: weight is not finite at a cell");
    sum += f[i] * cell_weights[i];
  }
  return sum * f.cell_measure();
}

double distribution_measure(const GridFunction& f, double lambda) {
  double count = 0.0;
  for (double v : f.values())
    if (std::abs(v) > lambda) count += 1.0;
  return count * f.cell_measure();
}

double distribution_measure(const GridFunction& f, const std::vector<double>& cell_weights,
                            double lambda) {
  require(cell_weights.size() == f.size(), ErrorCode::GridMismatch,
          "distribution_measure: weight sample count does not match the grid");
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (std::abs(f[i]) > lambda) {
      require(std::isfinite(cell_weights[i]), ErrorCode::NonFiniteWeight,
              "distribution_measure: weight is not finite at a cell");
      sum += cell_weights[i];
    }
  return sum * f.cell_measure();
}

// ---------------------------------------------------------------------------
// Serialization. CSV: a single header row "dim,box_lo...,box_hi...,h" followed
// by one value per line in row-major order, all numbers with 17 significant
// digits. JSON mirrors the same fields.
// ---------------------------------------------------------------------------

void GridFunction::save_csv(const std::string& path) const {
  std::ofstream out(path);
  require(out.good(), ErrorCode::IOFailure, "save_csv: cannot open " + path);
  out << box_.dim;
  for (int axis = 0; axis < box_.dim; ++axis) out << ',' << format17(box_.lo[axis]);
  for (int axis = 0; axis < box_.dim; ++axis) out << ',' << format17(box_.hi[axis]);
  out << ',' << format17(h_) << '\n';
  for (double v : values_) out << format17(v) << '\n';
  require(out.good(), ErrorCode::IOFailure, "save_csv: write failed for " + path);
}

GridFunction GridFunction::load_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::IOFailure, "load_csv: cannot open " + path);
  std::string header;
  require(static_cast<bool>(std::getline(in, header)), ErrorCode::ParseError,
          "load_csv: missing header row");
  std::vector<double> fields;
  std::stringstream ss(header);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      fields.push_back(std::stod(tok));
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "load_csv: bad header field '" + tok + "'");
    }
  }
  require(!fields.empty(), ErrorCode::ParseError, "load_csv: empty header");
  const int dim = static_cast<int>(fields[0]);
  require((dim == 1 && fields.size() == 4) || (dim == 2 && fields.size() == 6),
          ErrorCode::ParseError, "load_csv: header field count does not match dim");
  Box box;
  box.dim = dim;
  for (int axis = 0; axis < dim; ++axis) {
    box.lo[axis] = fields[1 + axis];
    box.hi[axis] = fields[1 + dim + axis];
  }
  const double h = fields[1 + 2 * dim];
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      values.push_back(std::stod(line));
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "load_csv: bad value line '" + line + "'");
    }
  }
  return GridFunction(box, h, std::move(values));
}

std::string GridFunction::to_json() const {
  nlohmann::json j;
  j["dim"] = box_.dim;
  j["box_lo"] = std::vector<double>(box_.lo.begin(), box_.lo.begin() + box_.dim);
  j["box_hi"] = std::vector<double>(box_.hi.begin(), box_.hi.begin() + box_.dim);
  j["h"] = h_;
  j["values"] = values_;
  return j.dump();
}

GridFunction GridFunction::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::ParseError, std::string("grid from_json: ") + e.what());
  }
  try {
    Box box;
    box.dim = j.at("dim").get<int>();
    require(box.dim == 1 || box.dim == 2, ErrorCode::ParseError, "grid from_json: bad dim");
    const auto lo = j.at("box_lo").get<std::vector<double>>();
    const auto hi = j.at("box_hi").get<std::vector<double>>();
    require(lo.size() == static_cast<std::size_t>(box.dim) && hi.size() == lo.size(),
            ErrorCode::ParseError, "grid from_json: box arrays do not match dim");
    for (int axis = 0; axis < box.dim; ++axis) {
      box.lo[axis] = lo[axis];
      box.hi[axis] = hi[axis];
    }
    return GridFunction(box, j.at("h").get<double>(), j.at("values").get<std::vector<double>>());
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorCode::ParseError, std::string("grid from_json: ") + e.what());
  }
}

void GridFunction::save_json(const std::string& path) const {
  std::ofstream out(path);
  require(out.good(), ErrorCode::IOFailure, "save_json: cannot open " + path);
  out << to_json() << '\n';
  require(out.good(), ErrorCode::IOFailure, "save_json: write failed for " + path);
}

GridFunction GridFunction::load_json(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::IOFailure, "load_json: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace wnil
