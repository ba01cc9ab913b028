#include "fiberspin/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fiberspin::elliptic {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace

EllipticModulus EllipticModulus::from_k(double k) {
    if (!(k >= 0.0) || k > 1.0)
        throw std::domain_error("EllipticModulus: k must lie in [0, 1]");
    return {k, std::sqrt((1.0 - k) * (1.0 + k))};
}

EllipticModulus EllipticModulus::from_pair(double k, double kprime) {
    if (!(k >= 0.0) || !std::isfinite(kprime))
        throw std::domain_error("EllipticModulus: invalid pair");
    if (k <= 1.0 && std::abs(k * k + kprime * kprime - 1.0) > 1e-12)
        throw std::domain_error("EllipticModulus: k^2 + k'^2 != 1");
    return {k, kprime};
}

double complete_elliptic_K(double k) {
    if (!(k >= 0.0) || k >= 1.0 || !std::isfinite(k))
        throw std::domain_error("complete_elliptic_K: k must lie in [0, 1)");
    double a = 1.0;
    double b = std::sqrt((1.0 - k) * (1.0 + k));
    // quadratic convergence; 8 rounds suffice for any k < 1 - 1e-300
    for (int i = 0; i < 64 && std::abs(a - b) > kEps * a; ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return std::numbers::pi / (2.0 * a);
}

QuarterPeriods quarter_periods(const EllipticModulus& m) {
    QuarterPeriods qp{};
    qp.K = complete_elliptic_K(m.k);
    qp.Kprime = m.kprime < 1.0 ? complete_elliptic_K(m.kprime)
                               : std::numeric_limits<double>::infinity();
    return qp;
}

JacobiTriple jacobi_sn_cn_dn(double u, double k) {
    if (!std::isfinite(u) || !(k >= 0.0))
        throw std::domain_error("jacobi_sn_cn_dn: u must be finite, k >= 0");
    if (k > 1.0) {
        // reciprocal-modulus identities
        const JacobiTriple t = jacobi_sn_cn_dn(k * u, 1.0 / k);
        return {t.sn / k, t.dn, t.cn};
    }
    // parity: sn odd, cn and dn even
    if (u < 0.0) {
        JacobiTriple t = jacobi_sn_cn_dn(-u, k);
        t.sn = -t.sn;
        return t;
    }
    if (u == 0.0) return {0.0, 1.0, 1.0};
    if (k == 0.0) return {std::sin(u), std::cos(u), 1.0};
    if (k == 1.0) {
        const double sech = 1.0 / std::cosh(u);
        return {std::tanh(u), sech, sech};
    }
    if (k < 1.22e-4) {
        // A&S 16.13 small-modulus expansion, O(k^4)
        const double su = std::sin(u), cu = std::cos(u);
        const double m = k * k;
        return {su - 0.25 * m * (u - su * cu) * cu,
                cu + 0.25 * m * (u - su * cu) * su,
                1.0 - 0.5 * m * su * su};
    }

    // descending Landen / AGM scale (A&S 16.4)
    constexpr int kMaxLevels = 32;
    double a[kMaxLevels + 1], c[kMaxLevels + 1];
    double an = 1.0;
    double bn = std::sqrt((1.0 - k) * (1.0 + k));
    int n = 0;
    a[0] = an;
    c[0] = k;
    while (n < kMaxLevels && std::abs(c[n]) > kEps * a[n]) {
        ++n;
        a[n] = 0.5 * (an + bn);
        c[n] = 0.5 * (an - bn);
        bn = std::sqrt(an * bn);
        an = a[n];
    }
    double phi[kMaxLevels + 1];
    phi[n] = std::ldexp(a[n] * u, n);  // 2^n a_n u
    for (int i = n; i >= 1; --i)
        phi[i - 1] = 0.5 * (phi[i] + std::asin(clamp_unit(c[i] / a[i] * std::sin(phi[i]))));
    const double sn = std::sin(phi[0]);
    const double cn = std::cos(phi[0]);
    // dn >= k' > 0 on the real line, so the positive root is exact; the
    // cos(phi1 - phi0) quotient degenerates at odd multiples of K.
    const double dn = std::sqrt(std::max(0.0, 1.0 - k * k * sn * sn));
    return {sn, cn, dn};
}

JacobiAux jacobi_aux(double u, double k) {
    const JacobiTriple t = jacobi_sn_cn_dn(u, k);
    if (t.dn == 0.0)
        throw std::domain_error("jacobi_aux: dn underflowed to zero");
    return {t.cn / t.dn, 1.0 / t.dn, t.sn / t.dn};
}

int theta_default_truncation(double im_tau) {
    if (!(im_tau > 0.0))
        throw std::domain_error("theta: Im(tau) must be positive");
    // exp(-pi Im(tau) N^2) < 1e-16  <=>  N > sqrt(16 ln 10 / (pi Im tau))
    const double n = std::sqrt(16.0 * std::numbers::ln10 / (std::numbers::pi * im_tau));
    return std::min(64, static_cast<int>(std::ceil(n)) + 1);
}

std::complex<double> theta(const ThetaIndex& idx, int truncation) {
    if (!(idx.tau.imag() > 0.0))
        throw std::domain_error("theta: Im(tau) must be positive");
    if (truncation < 1) throw std::domain_error("theta: truncation must be positive");
    const std::complex<double> ipi(0.0, std::numbers::pi);
    std::complex<double> sum = 0.0;
    for (int n = -truncation; n <= truncation; ++n) {
        const double m = n + 0.5 * idx.mu;
        sum += std::exp(ipi * (idx.tau * m * m + 2.0 * m * (idx.z + 0.5 * idx.nu)));
    }
    return sum;
}

std::complex<double> theta(const ThetaIndex& idx) {
    return theta(idx, theta_default_truncation(idx.tau.imag()));
}

JacobiTriple sn_cn_dn_via_theta(double u, double k) {
    if (!(k > 0.0) || !(k < 1.0))
        throw std::domain_error("sn_cn_dn_via_theta: k must lie in (0, 1)");
    const QuarterPeriods qp = quarter_periods(EllipticModulus::from_k(k));
    const std::complex<double> tau(0.0, qp.Kprime / qp.K);
    const double v = u / (2.0 * qp.K);
    const int N = theta_default_truncation(tau.imag());
    auto th = [&](int mu, int nu, std::complex<double> z) {
        return theta(ThetaIndex{mu, nu, z, tau}, N);
    };
    const std::complex<double> t01_half = th(0, 1, 0.5);
    const std::complex<double> t11_half = th(1, 1, 0.5);
    const std::complex<double> t01_0 = th(0, 1, 0.0);
    const std::complex<double> t00_0 = th(0, 0, 0.0);
    const std::complex<double> t10_0 = th(1, 0, 0.0);
    const std::complex<double> t01_v = th(0, 1, v);
    const std::complex<double> t11_v = th(1, 1, v);
    const std::complex<double> t10_v = th(1, 0, v);
    const std::complex<double> t00_v = th(0, 0, v);
    const std::complex<double> sn = t01_half * t11_v / (t11_half * t01_v);
    const std::complex<double> cn = t01_0 * t10_v / (t10_0 * t01_v);
    const std::complex<double> dn = t01_0 * t00_v / (t00_0 * t01_v);
    return {sn.real(), cn.real(), dn.real()};
}

double carlson_rf(double x, double y, double z) {
    if (x < 0.0 || y < 0.0 || z < 0.0 || (x + y) == 0.0 || (y + z) == 0.0 || (z + x) == 0.0)
        throw std::domain_error("carlson_rf: arguments out of domain");
    double xt = x, yt = y, zt = z;
    double mu = 0.0, dx = 0.0, dy = 0.0, dz = 0.0;
    for (int i = 0; i < 200; ++i) {
        mu = (xt + yt + zt) / 3.0;
        dx = 2.0 - (mu + xt) / mu;
        dy = 2.0 - (mu + yt) / mu;
        dz = 2.0 - (mu + zt) / mu;
        if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < 1.5e-8) break;
        const double sx = std::sqrt(xt), sy = std::sqrt(yt), sz = std::sqrt(zt);
        const double lam = sx * (sy + sz) + sy * sz;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        zt = 0.25 * (zt + lam);
    }
    const double e2 = dx * dy - dz * dz;
    const double e3 = dx * dy * dz;
    return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / std::sqrt(mu);
}

double incomplete_elliptic_F(double phi, double k) {
    if (!(k >= 0.0) || k > 1.0 || std::abs(phi) > std::numbers::pi / 2 + 1e-12)
        throw std::domain_error("incomplete_elliptic_F: phi in [-pi/2, pi/2], k in [0, 1]");
    if (phi == 0.0) return 0.0;
    const double s = std::sin(phi);
    const double c2 = std::cos(phi) * std::cos(phi);
    return s * carlson_rf(c2, 1.0 - k * k * s * s, 1.0);
}

double inverse_sn(double x, double k) {
    if (x < 0.0 || x > 1.0) throw std::domain_error("inverse_sn: x must lie in [0, 1]");
    return incomplete_elliptic_F(std::asin(x), k);
}

double inverse_cn(double x, double k) {
    if (x < 0.0 || x > 1.0) throw std::domain_error("inverse_cn: x must lie in [0, 1]");
    return incomplete_elliptic_F(std::acos(x), k);
}

double inverse_dn(double x, double k) {
    if (k == 0.0) {
        if (std::abs(x - 1.0) > 1e-12)
            throw std::domain_error("inverse_dn: dn == 1 identically at k = 0");
        return 0.0;
    }
    const double s2 = (1.0 - x * x) / (k * k);
    if (s2 < -1e-12 || s2 > 1.0 + 1e-12)
        throw std::domain_error("inverse_dn: x out of [k', 1]");
    return incomplete_elliptic_F(std::asin(std::sqrt(std::clamp(s2, 0.0, 1.0))), k);
}

}  // namespace fiberspin::elliptic
