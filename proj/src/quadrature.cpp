#include "mllg/quadrature.hpp"

#include <cmath>

namespace mllg {

namespace {

QuadratureRule make_degree1() {
    QuadratureRule r;
    r.degree = 1;
    r.points = {{0.25, 0.25, 0.25, 0.25}};
    r.weights = {1.0};
    return r;
}

QuadratureRule make_degree2() {
    QuadratureRule r;
    r.degree = 2;
    const double a = 0.58541019662496845;  // (5 + 3 sqrt 5) / 20
    const double b = 0.13819660112501051;  // (5 - sqrt 5) / 20
    for (int i = 0; i < 4; ++i) {
        std::array<double, 4> p = {b, b, b, b};
        p[i] = a;
        r.points.push_back(p);
        r.weights.push_back(0.25);
    }
    return r;
}

// 14-point rule, exact through total degree 5 (Keast-style; weights
// normalized to the reference measure).
QuadratureRule make_degree5() {
    QuadratureRule r;
    r.degree = 5;
    const double b1 = 0.31088591926330005;
    const double a1 = 1.0 - 3.0 * b1;
    const double w1 = 0.11268792571801585;
    const double b2 = 0.09273525031089123;
    const double a2 = 1.0 - 3.0 * b2;
    const double w2 = 0.07349304311636196;
    const double c3 = 0.04550370412564964;
    const double d3 = 0.5 - c3;
    const double w3 = 0.04254602077708147;

    auto push4 = [&r](double a, double b, double w) {
        for (int i = 0; i < 4; ++i) {
            std::array<double, 4> p = {b, b, b, b};
            p[i] = a;
            r.points.push_back(p);
            r.weights.push_back(w);
        }
    };
    push4(a1, b1, w1);
    push4(a2, b2, w2);
    // Six points with two pairs of equal coordinates.
    const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (const auto& pr : pairs) {
        std::array<double, 4> p = {d3, d3, d3, d3};
        p[pr[0]] = c3;
        p[pr[1]] = c3;
        r.points.push_back(p);
        r.weights.push_back(w3);
    }
    return r;
}

}  // namespace

const QuadratureRule& QuadratureRule::degree1() {
    static const QuadratureRule r = make_degree1();
    return r;
}

const QuadratureRule& QuadratureRule::degree2() {
    static const QuadratureRule r = make_degree2();
    return r;
}

const QuadratureRule& QuadratureRule::degree5() {
    static const QuadratureRule r = make_degree5();
    return r;
}

const EdgeRule& edge_rule() {
    static const EdgeRule r = [] {
        EdgeRule e;
        const double s = 1.0 / (2.0 * std::sqrt(3.0));
        e.points = {0.5 - s, 0.5 + s};
        e.weights = {0.5, 0.5};
        return e;
    }();
    return r;
}

}  // namespace mllg
