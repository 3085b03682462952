// The positive orthant of R^3 fails every check; prints the witnesses.

#include "conelab/conelab.hpp"

#include <iostream>

int main() {
  using namespace conelab;
  const ConeRep C{polyhedral_from_generators({Vec::Unit(3, 0), Vec::Unit(3, 1), Vec::Unit(3, 2)}), "orthant", {}};

  const CssReport css = check_css(C);
  std::cout << "CSS: " << to_string(css.report.verdict) << ", asymmetric section for phi = "
            << css.report.witnesses.front().point.transpose() << '\n';

  const FbiReport fbi = check_fbi(C);
  std::cout << "FBI: " << to_string(fbi.report.verdict) << ", boundary meets a - boundary off a hyperplane for a = "
            << fbi.report.witnesses.front().point.transpose() << '\n';

  std::vector<Vec> ends{make_vec({0.5, 0, 0.5}), make_vec({0, 0.5, 0.5})};
  AffineSubspace line = affine_span(ends);
  const ConvexBody S = make_polytope(ends, line);
  const SectionExtension ext = extend_codim2_section(C, S);
  std::cout << "extension of the segment lies in phi = " << ext.functional.transpose() << ", its center "
            << ext.center.transpose() << " is " << line.distance(ext.center) << " away from the segment's line\n";
}
