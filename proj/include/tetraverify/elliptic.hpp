#pragma once

namespace tetraverify {

/// Jacobi elliptic functions at one argument and modulus.
struct EllipticTriple {
    double sn = 0.0;
    double cn = 1.0;
    double dn = 1.0;
    double u = 0.0;
    double k = 0.0;
};

/// sn, cn, dn of real argument u and modulus k in [0, 1), via the
/// arithmetic-geometric mean and descending Landen transformation.
/// Throws std::domain_error for k outside [0, 1) or non-finite u.
EllipticTriple jacobi(double u, double k);

/// Complete elliptic integral of the first kind K(k), k in [0, 1).
double quarter_period(double k);

}  // namespace tetraverify
