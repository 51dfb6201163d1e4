#pragma once

#include <string>
#include <vector>

#include "gb2d/dynamics.hpp"

namespace gb2d {

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// One cell of the standard test matrix: grids {64^2, 128^2}, L in {0.5, 1},
// eps in {0.1, 0.05, 0.025}, perturbations {single-mode, 3-mode random},
// t_end = 0.5, dt scaled with resolution.
struct MatrixEntry {
  int n;
  double L;
  double eps;
  bool random_perturbation;
  std::uint64_t seed;
  double dt;
};

std::vector<MatrixEntry> standard_test_matrix();

// The perturbation recipes of the matrix: a single (1,1) mode at amplitude
// L/(8 pi), or three seeded random modes on top of it.
PerturbationSpec matrix_perturbation(bool random, double L);

// Runs the full acceptance battery; one result per criterion, in order.
std::vector<CriterionResult> run_acceptance_suite();

// Individual criteria (also used by the unit suites).
CriterionResult criterion_riesz_suite();
CriterionResult criterion_sigma12_equivalence();
CriterionResult criterion_entropy_inequality();   // also fills matrix aggregates
CriterionResult criterion_energy_inequality();
CriterionResult criterion_monotonicity();
CriterionResult criterion_invariant_subspaces();
CriterionResult criterion_picard_imex();
CriterionResult criterion_eps_cauchy();
CriterionResult criterion_scheme_order();
CriterionResult criterion_orlicz_layer();
CriterionResult criterion_oscillation_bound();

}  // namespace gb2d
