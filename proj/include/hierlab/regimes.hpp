#pragma once

#include <string>
#include <vector>

namespace hierlab {

struct InequalityCheck {
  std::string text;
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
};

struct RegimeCase {
  std::string name;
  bool applicable = false;  // dimension and range of s match
  bool covers = false;
  std::vector<InequalityCheck> checks;
};

struct RegimeReport {
  int d = 0;
  double s = 0;
  double alpha = 0;
  bool covered = false;
  std::string regime;   // first covering case, or "uncovered"
  std::string binding;  // the decisive inequality
  std::vector<RegimeCase> cases;
};

// Unconditional uniqueness regimes for i u' = -Laplacian u + |u|^alpha u in H^s(R^d).
RegimeReport classify_uniqueness_regime(int d, double s, double alpha);

}  // namespace hierlab
