#pragma once

#include <ostream>
#include <string>

#include <Eigen/Core>

#include "fpl/cli/config.hpp"
#include "fpl/cover.hpp"
#include "fpl/grassmannian.hpp"

namespace fpl::cli {

constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitFail = 2;

/// A planar cover placed at an offset that need not lie on its grid.
struct Shape {
  Cover cover;
  Eigen::Vector2d offset = Eigen::Vector2d::Zero();
};

/// Generators: "square" (unit square, dyadic), "cantor3" (middle-thirds
/// squared), "cantor4" (base-4 digits {0,2,3} squared), "cantor3-x"
/// (middle-thirds times one ternary cell at height 0) and "point:x,y"
/// (the dyadic cell containing the point). `level` is the generator's
/// native level.
Shape make_shape(const std::string& spec, int level, const Eigen::Vector2d& offset = Eigen::Vector2d::Zero());

/// Dyadic cover at `level` of the projection of the shifted shape onto v.
Cover project_shape(const Shape& shape, const Subspace& v, int level);

/// Runs the configured experiment, writing summary.txt, CSVs and SVGs into
/// config.out_dir. Returns kExitPass or kExitFail; errors propagate as
/// exceptions.
int run_experiment(const ExperimentConfig& config, std::ostream& log);

}  // namespace fpl::cli
