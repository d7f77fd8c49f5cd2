#pragma once

#include <array>
#include <vector>

namespace mllg {

// Quadrature on the reference tetrahedron in barycentric coordinates.
// Weights sum to 1; multiply by the element volume when integrating.
struct QuadratureRule {
    std::vector<std::array<double, 4>> points;
    std::vector<double> weights;
    int degree = 0;  // exact for polynomials up to this total degree

    static const QuadratureRule& degree1();  //  1 point
    static const QuadratureRule& degree2();  //  4 points
    static const QuadratureRule& degree5();  // 14 points; the default volume rule
};

// Default rule for the coupling/noise integrands (piecewise-polynomial
// products of degree <= 4 appear in the scheme's right-hand sides).
inline const QuadratureRule& volume_rule() { return QuadratureRule::degree5(); }

// Two-point Gauss rule on [0,1]; exact for degree <= 3. Used for edge DOFs.
struct EdgeRule {
    std::array<double, 2> points;
    std::array<double, 2> weights;
};
const EdgeRule& edge_rule();

}  // namespace mllg
