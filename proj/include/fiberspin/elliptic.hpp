// Jacobi elliptic functions, complete elliptic integrals and Jacobi theta
// functions. Production evaluation uses the arithmetic-geometric mean and
// the descending Landen recursion; the theta-series route is kept as an
// independent second evaluation path.
//
// Conventions: modulus k (not the parameter m = k^2); sn/cn/dn satisfy
// sn^2 + cn^2 = 1 and dn^2 + k^2 sn^2 = 1. Theta functions are indexed by
// (mu, nu) in {0,1}:
//   Theta_{mu nu}(z, tau) = sum_n exp(i pi [tau (n+mu/2)^2 + 2 (n+mu/2)(z+nu/2)])
// convergent for Im(tau) > 0.

#pragma once

#include <complex>
#include <stdexcept>

namespace fiberspin::elliptic {

/// Modulus pair (k, k') with k in [0,1] and k^2 + k'^2 = 1.
struct EllipticModulus {
    double k;
    double kprime;

    /// Build from k alone; kprime = sqrt((1-k)(1+k)).
    static EllipticModulus from_k(double k);
    /// Build from both values when they are known analytically to higher
    /// accuracy than sqrt(1-k^2) would give. Checks the Pythagorean tie.
    static EllipticModulus from_pair(double k, double kprime);
};

struct QuarterPeriods {
    double K;
    double Kprime;  // +infinity when k == 0 (k' == 1)
};

struct JacobiTriple {
    double sn, cn, dn;
};

/// Auxiliary quotients cd = cn/dn, nd = 1/dn, sd = sn/dn.
struct JacobiAux {
    double cd, nd, sd;
};

struct ThetaIndex {
    int mu = 0;  // in {0,1}
    int nu = 0;  // in {0,1}
    std::complex<double> z;
    std::complex<double> tau;  // Im(tau) > 0
};

/// Complete elliptic integral of the first kind, AGM iteration.
/// Requires 0 <= k < 1; K(0) = pi/2 exactly.
double complete_elliptic_K(double k);

/// Both quarter periods; Kprime = K(k'), +inf at k = 0.
QuarterPeriods quarter_periods(const EllipticModulus& m);

/// sn, cn, dn for real u and k >= 0. Moduli k > 1 are mapped into [0,1]
/// with the reciprocal-modulus identities; k == 1 returns the
/// tanh/sech/sech limits directly.
JacobiTriple jacobi_sn_cn_dn(double u, double k);

/// cd, nd, sd as quotients of jacobi_sn_cn_dn.
JacobiAux jacobi_aux(double u, double k);

/// Smallest series truncation N with exp(-pi Im(tau) N^2) < 1e-16, capped
/// at 64.
int theta_default_truncation(double im_tau);

/// Partial theta sum over n in [-truncation, truncation].
std::complex<double> theta(const ThetaIndex& idx, int truncation);
std::complex<double> theta(const ThetaIndex& idx);  // default truncation

/// sn, cn, dn through the theta-quotient representation with
/// tau = i K'/K and argument u/(2K). Requires 0 < k < 1.
JacobiTriple sn_cn_dn_via_theta(double u, double k);

/// Carlson symmetric integral R_F(x, y, z), x,y,z >= 0, at most one zero.
double carlson_rf(double x, double y, double z);

/// Incomplete elliptic integral of the first kind F(phi, k) for
/// |phi| <= pi/2, via Carlson R_F. F(pi/2, k) = K(k).
double incomplete_elliptic_F(double phi, double k);

/// Inverse functions on the principal branch: u in [0, K] with
/// sn(u,k) = x (x in [0,1]), cn(u,k) = x, dn(u,k) = x (x in [k',1]).
double inverse_sn(double x, double k);
double inverse_cn(double x, double k);
double inverse_dn(double x, double k);

}  // namespace fiberspin::elliptic
