#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>

namespace wgfem {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Scalar field on the plane, e.g. a source term or boundary datum.
using ScalarField = std::function<double(const Vec2&)>;
/// Vector field, e.g. the gradient of an exact solution.
using VectorField = std::function<Vec2(const Vec2&)>;
/// Symmetric 2x2 coefficient tensor sampled pointwise.
using TensorField = std::function<Mat2(const Vec2&)>;

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace wgfem
