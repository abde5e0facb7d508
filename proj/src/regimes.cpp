#include "hierlab/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hierlab {

namespace {

constexpr double kSlack = 1e-12;

InequalityCheck less(const std::string& text, double lhs, double rhs) {
  return {text + " (<)", lhs, rhs, lhs < rhs - kSlack};
}
InequalityCheck less_equal(const std::string& text, double lhs, double rhs) {
  return {text + " (<=)", lhs, rhs, lhs <= rhs + kSlack};
}
InequalityCheck equal(const std::string& text, double lhs, double rhs) {
  return {text + " (=)", lhs, rhs, std::abs(lhs - rhs) <= kSlack};
}

RegimeCase make_case(std::string name, bool applicable, std::vector<InequalityCheck> checks) {
  RegimeCase c{std::move(name), applicable, false, std::move(checks)};
  c.covers = applicable && std::all_of(c.checks.begin(), c.checks.end(),
                                       [](const InequalityCheck& i) { return i.holds; });
  return c;
}

}  // namespace

RegimeReport classify_uniqueness_regime(int d, double s, double alpha) {
  RegimeReport r{d, s, alpha, false, "uncovered", "", {}};
  const double dd = d;
  const double gap = dd - 2.0 * s;

  r.cases.push_back(make_case("Kato (i)", true, {less_equal("d/2 <= s", dd / 2.0, s)}));

  if (d >= 2 && s >= 0 && s < dd / 2.0) {
    const double bound = std::min(4.0 / gap, (2.0 * s + 2.0) / gap);
    r.cases.push_back(make_case("Kato (ii)", true,
                                {less("alpha < min{4/(d-2s), (2s+2)/(d-2s)}", alpha, bound)}));
  } else {
    r.cases.push_back(make_case("Kato (ii)", false, {}));
  }

  if (d == 1 && s >= 0 && s < 0.5) {
    r.cases.push_back(make_case(
        "Kato (iii)", true,
        {less_equal("alpha <= (1+2s)/(1-2s)", alpha, (1.0 + 2.0 * s) / (1.0 - 2.0 * s))}));
  } else {
    r.cases.push_back(make_case("Kato (iii)", false, {}));
  }

  if (d >= 3 && d <= 5 && s > 0 && s < 1) {
    const double upper = std::min({4.0 / gap, (dd + 2.0 * s) / gap, (4.0 * s + 2.0) / gap});
    r.cases.push_back(make_case(
        "Furioli-Terraneo", true,
        {less_equal("alpha <= (d+2-2s)/(d-2s)", alpha, (dd + 2.0 - 2.0 * s) / gap),
         less("max{1, 2s/(d-2s)} < alpha", std::max(1.0, 2.0 * s / gap), alpha),
         less("alpha < min{4/(d-2s), (d+2s)/(d-2s), (4s+2)/(d-2s)}", alpha, upper)}));
  } else {
    r.cases.push_back(make_case("Furioli-Terraneo", false, {}));
  }

  if (d >= 3 && s >= 0 && s <= 1) {
    const double upper = std::min((2.0 + 4.0 * s - 4.0 * s / dd) / gap, 4.0 / gap);
    r.cases.push_back(make_case(
        "Rogers", true,
        {less_equal("(2+2s)/(d-2s) <= alpha", (2.0 + 2.0 * s) / gap, alpha),
         less("alpha < min{(2+4s-4s/d)/(d-2s), 4/(d-2s)}", alpha, upper)}));
  } else {
    r.cases.push_back(make_case("Rogers", false, {}));
  }

  if (d == 2 && s > 0 && s < 1) {
    r.cases.push_back(make_case("Han-Fang (d=2)", true,
                                {equal("alpha = (2+2s)/(2-2s)", alpha, (2.0 + 2.0 * s) / (2.0 - 2.0 * s))}));
  } else {
    r.cases.push_back(make_case("Han-Fang (d=2)", false, {}));
  }
  if (d == 3 && s > 0.25 && s < 0.5) {
    r.cases.push_back(make_case("Han-Fang (d=3)", true,
                                {equal("alpha = (3+2s)/(3-2s)", alpha, (3.0 + 2.0 * s) / (3.0 - 2.0 * s))}));
  } else {
    r.cases.push_back(make_case("Han-Fang (d=3)", false, {}));
  }

  for (const auto& c : r.cases) {
    if (c.covers) {
      r.covered = true;
      r.regime = c.name;
      std::ostringstream os;
      for (std::size_t i = 0; i < c.checks.size(); ++i) os << (i ? "; " : "") << c.checks[i].text;
      r.binding = os.str();
      return r;
    }
  }
  // Kato (i) always applies; name it only when nothing narrower does.
  const bool narrower = std::any_of(r.cases.begin() + 1, r.cases.end(),
                                    [](const RegimeCase& c) { return c.applicable; });
  std::ostringstream os;
  for (std::size_t n = narrower ? 1 : 0; n < r.cases.size(); ++n) {
    const auto& c = r.cases[n];
    if (!c.applicable) continue;
    for (const auto& chk : c.checks) {
      if (chk.holds) continue;
      if (os.tellp() > 0) os << "; ";
      os << c.name << ": " << chk.text << " fails (" << chk.lhs << " vs " << chk.rhs << ")";
      break;
    }
  }
  if (os.tellp() > 0) {
    r.binding = os.str();
    return r;
  }
  r.binding = "no case applies";
  return r;
}

}  // namespace hierlab
