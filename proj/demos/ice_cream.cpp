// Walks the ice-cream cone {z >= |(x, y)|} through sections, duality and the
// three property checks.

#include "conelab/conelab.hpp"

#include <iostream>

int main() {
  using namespace conelab;
  Mat basis(3, 2);
  basis << 1, 0, 0, 1, 0, 0;
  const ConeRep C{EllipsoidalCone(make_vec({0, 0, 1}), make_vec({0, 0, 1}), basis, Mat::Identity(2, 2)), "ice-cream", {}};

  const Vec phi = make_vec({0.5, 0, 1});
  const ConvexBody slant = body_of(section_by_functional(C, phi));
  std::cout << "section by phi = (0.5, 0, 1) has center " << slant.ellipsoid().center.transpose() << '\n';

  const DualityCertificate cert = boundedness_certificate(C, phi);
  std::cout << "r* = " << cert.r_star << ", eps* = " << cert.eps_star << ", r* eps* - 1 = " << cert.r_star * cert.eps_star - 1
            << '\n';

  std::cout << "CSS:         " << to_string(check_css(C).report.verdict) << '\n';
  std::cout << "FBI:         " << to_string(check_fbi(C).report.verdict) << '\n';
  std::cout << "ELLIPSOIDAL: " << to_string(certify_ellipsoid(slant).verdict) << '\n';
}
