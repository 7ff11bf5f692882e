#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "core/geometry.hpp"

namespace wnil {

// Flat indices of cells, sorted ascending.
using CellSet = std::vector<std::size_t>;

// Scalar samples on a uniform cell-centered grid over a box; the function is
// implicitly 0 outside the box. Values are stored row-major (x fastest).
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(const Box& box, double h, std::vector<double> values);

  // Samples fn at every cell center.
  static GridFunction sample(const Box& box, double h, const std::function<double(const Point&)>& fn);
  static GridFunction zeros(const Box& box, double h);

  int dim() const { return box_.dim; }
  const Box& box() const { return box_; }
  double spacing() const { return h_; }
  double cell_measure() const;
  std::size_t nx(int axis) const { return nx_[axis]; }
  std::size_t size() const { return values_.size(); }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  Point center(std::size_t i) const;
  std::size_t flat_index(std::size_t ix, std::size_t iy = 0) const { return iy * nx_[0] + ix; }

  // Value of the containing cell, 0 outside the box.
  double value_at(const Point& x) const;

  // Indices of cells whose center lies in the open ball.
  CellSet cells_in_ball(const Ball& ball) const;

  bool same_layout(const GridFunction& other) const;

  void save_csv(const std::string& path) const;
  static GridFunction load_csv(const std::string& path);
  std::string to_json() const;
  static GridFunction from_json(const std::string& text);
  void save_json(const std::string& path) const;
  static GridFunction load_json(const std::string& path);

 private:
  Box box_;
  double h_ = 0.0;
  std::array<std::size_t, 2> nx_{0, 1};
  std::vector<double> values_;
};

// Mean of f over the cell centers inside the open ball; EmptyBall if none.
double average_over_ball(const GridFunction& f, const Ball& ball);
double average_over_cells(const GridFunction& f, const CellSet& cells);

// sum f * w * h^n; the unweighted overload uses w = 1. NonFiniteWeight when a
// weight sample is NaN or infinite.
double integrate(const GridFunction& f);
double integrate(const GridFunction& f, const std::vector<double>& cell_weights);

// w-measure of {|f| > lambda}.
double distribution_measure(const GridFunction& f, double lambda);
double distribution_measure(const GridFunction& f, const std::vector<double>& cell_weights,
                            double lambda);

}  // namespace wnil
