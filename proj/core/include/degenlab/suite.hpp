#pragma once

#include <string>
#include <vector>

namespace degenlab {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

// Acceptance battery. Each criterion is self-contained, catches its own
// exceptions (an exception is a failure with the message as detail), and
// returns a one-line summary of the measured quantities.

CriterionResult criterion_exact_linear_solutions();   // 1
CriterionResult criterion_grid_convergence();         // 2
CriterionResult criterion_ball_volume_law();          // 3
CriterionResult criterion_height_closed_form();       // 4
CriterionResult criterion_straight_across();          // 5
CriterionResult criterion_annulus_comparability();    // 6
CriterionResult criterion_inequality_monte_carlo();   // 7
CriterionResult criterion_oscillation_decay();        // 8
CriterionResult criterion_truncation_recursion();     // 9
CriterionResult criterion_classifier_dichotomy();     // 10
CriterionResult criterion_structure_audit();          // 11

std::vector<CriterionResult> run_all_criteria();

}  // namespace degenlab
