#include "qscat/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qscat {

void QuadratureGrid::validate() const {
    if (nodes.size() != weights.size() || nodes.empty())
        throw domain_error("quadrature grid: empty or mismatched nodes/weights");
    if (!(a < b)) throw domain_error("quadrature grid: domain must satisfy a < b");
    double wsum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!(weights[i] > 0.0)) throw domain_error("quadrature grid: nonpositive weight");
        if (!(nodes[i] > a && nodes[i] < b))
            throw domain_error("quadrature grid: node outside (a,b)");
        if (i > 0 && !(nodes[i] > nodes[i - 1]))
            throw domain_error("quadrature grid: nodes not strictly increasing");
        wsum += weights[i];
    }
    if (std::abs(wsum - (b - a)) > 1e-12 * std::max(1.0, b - a))
        throw domain_error("quadrature grid: weights do not sum to b-a");
}

QuadratureGrid gauss_legendre(int order, double a, double b) {
    if (order < 1 || order > 4096) throw domain_error("gauss_legendre: order out of range");
    if (!(a < b)) throw domain_error("gauss_legendre: need a < b");

    const int n = order;
    std::vector<double> x(n), w(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev initial guess, then Newton on P_n.
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }

    QuadratureGrid g;
    g.a = a;
    g.b = b;
    g.nodes.resize(n);
    g.weights.resize(n);
    const double xm = 0.5 * (a + b), xl = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        g.nodes[i] = xm + xl * x[i];
        g.weights[i] = xl * w[i];
    }
    g.validate();
    return g;
}

namespace specfun {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209;
constexpr double kMaxAbsZ = 1e4;
constexpr int kMaxSingleOrder = 200;
constexpr int kMaxArrayOrder = 4096;

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

// Start-order heuristics for Miller's backward recurrence (Zhang & Jin).
double envj(int n, double x) { return 0.5 * std::log10(6.28 * n) - n * std::log10(1.36 * x / n); }

int msta1(double x, int mp) {
    double a0 = std::max(std::abs(x), 1e-10);
    int n0 = static_cast<int>(1.1 * a0) + 1;
    double f0 = envj(n0, a0) - mp;
    int n1 = n0 + 5;
    double f1 = envj(n1, a0) - mp;
    int nn = n1;
    for (int it = 0; it < 20; ++it) {
        nn = n1 - static_cast<int>((n1 - n0) / (1.0 - f0 / f1));
        double f = envj(nn, a0) - mp;
        if (std::abs(nn - n1) < 1) break;
        n0 = n1; f0 = f1; n1 = nn; f1 = f;
    }
    return nn;
}

int msta2(double x, int n, int mp) {
    double a0 = std::max(std::abs(x), 1e-10);
    double hmp = 0.5 * mp;
    double ejn = envj(std::max(n, 1), a0);
    double obj;
    int n0;
    if (ejn <= hmp) {
        obj = mp;
        n0 = static_cast<int>(1.1 * a0) + 1;
    } else {
        obj = hmp + ejn;
        n0 = std::max(n, 1);
    }
    double f0 = envj(n0, a0) - obj;
    int n1 = n0 + 5;
    double f1 = envj(n1, a0) - obj;
    int nn = n1;
    for (int it = 0; it < 20; ++it) {
        nn = n1 - static_cast<int>((n1 - n0) / (1.0 - f0 / f1));
        double f = envj(nn, a0) - obj;
        if (std::abs(nn - n1) < 1) break;
        n0 = n1; f0 = f1; n1 = nn; f1 = f;
    }
    return nn + 10;
}

} // namespace

namespace detail {

void jy01_series(cplx z, cplx& j0, cplx& j1, cplx& y0, cplx& y1) {
    const cplx q = -0.25 * z * z; // -(z/2)^2
    // J0, and the H_m-weighted companion for Y0
    cplx c = 1.0, sj0 = 1.0, sy0 = 0.0;
    double hm = 0.0;
    for (int m = 1; m <= 256; ++m) {
        c *= q / double(m) / double(m);
        hm += 1.0 / m;
        sj0 += c;
        sy0 -= hm * c;
        if (std::abs(c) < 1e-18 * (std::abs(sj0) + 1e-300)) break;
    }
    // J1 and the (H_m + H_{m+1})-weighted companion for Y1
    cplx d = 1.0, sj1 = 1.0, sy1 = 1.0; // m=0 term of the Y1 sum is H_0+H_1 = 1
    hm = 0.0;
    for (int m = 1; m <= 256; ++m) {
        d *= q / double(m) / double(m + 1);
        hm += 1.0 / m;
        sj1 += d;
        sy1 += (2.0 * hm + 1.0 / (m + 1.0)) * d; // H_m + H_{m+1}
        if (std::abs(d) < 1e-18 * (std::abs(sj1) + 1e-300)) break;
    }
    j0 = sj0;
    j1 = 0.5 * z * sj1;
    const cplx lg = std::log(0.5 * z) + kEulerGamma;
    y0 = M_2_PI * (lg * j0 + sy0);
    y1 = M_2_PI * (lg * j1 - 1.0 / z) - (0.5 * z / M_PI) * sy1;
}

namespace {

// Hankel P/Q expansion: H1_n = sqrt(2/(pi z)) e^{+i(z - (2n+1)pi/4)} sum_m (+i)^m c_m(n)/z^m
// and H2_n with the conjugated phases, truncated adaptively at the smallest term.
void asymptotic_hankel_pair(cplx z, int n, cplx& h1, cplx& h2) {
    const double fournn = 4.0 * n * n;
    cplx s1 = 1.0, s2 = 1.0;
    double cm = 1.0;
    double prev = std::numeric_limits<double>::max();
    cplx zm = 1.0;
    for (int m = 1; m <= 34; ++m) {
        const double odd = 2.0 * m - 1.0;
        cm *= (fournn - odd * odd) / (8.0 * m);
        zm /= z;
        const cplx t = cm * zm;
        const double mag = std::abs(t);
        if (mag > prev) break; // divergent tail reached
        prev = mag;
        cplx it = t, mt = t;
        switch (m & 3) { // i^m and (-i)^m factors
            case 0: break;
            case 1: it *= cplx(0, 1); mt *= cplx(0, -1); break;
            case 2: it *= -1.0; mt *= -1.0; break;
            case 3: it *= cplx(0, -1); mt *= cplx(0, 1); break;
        }
        s1 += it;
        s2 += mt;
        if (mag < 1e-17) break;
    }
    const cplx amp = std::sqrt(2.0 / (M_PI * z));
    const double ph = (2.0 * n + 1.0) * M_PI / 4.0;
    h1 = amp * std::exp(cplx(0, 1) * (z - ph)) * s1;
    h2 = amp * std::exp(cplx(0, -1) * (z - ph)) * s2;
}

} // namespace

void jy01_asymptotic(cplx z, cplx& j0, cplx& j1, cplx& y0, cplx& y1) {
    cplx h10, h20, h11, h21;
    asymptotic_hankel_pair(z, 0, h10, h20);
    asymptotic_hankel_pair(z, 1, h11, h21);
    j0 = 0.5 * (h10 + h20);
    y0 = (h10 - h20) / cplx(0, 2);
    j1 = 0.5 * (h11 + h21);
    y1 = (h11 - h21) / cplx(0, 2);
}

void hankel01_asymptotic(cplx z, cplx& h0, cplx& h1) {
    cplx h2_unused;
    asymptotic_hankel_pair(z, 0, h0, h2_unused);
    asymptotic_hankel_pair(z, 1, h1, h2_unused);
}

} // namespace detail

namespace {

// J0, J1, Y0, Y1 for Re(z) >= 0 (series / asymptotic switch at |z| = 12).
void jy01(cplx z, cplx& j0, cplx& j1, cplx& y0, cplx& y1) {
    if (std::abs(z) <= 12.0)
        detail::jy01_series(z, j0, j1, y0, y1);
    else
        detail::jy01_asymptotic(z, j0, j1, y0, y1);
}

// H1_0, H1_1 for Re(z) >= 0. In the asymptotic range the Hankel form is
// evaluated directly: recombining J + iY would cancel catastrophically for
// large positive Im(z), where H1 ~ e^{-Im z} while J, Y ~ e^{+Im z}. In the
// series range the recombination is exact up to a cancellation amplification
// of at most e^{2 Im z} (documented accuracy limit of the deep upper corner
// of the |z| <= 12 disk).
void h01(cplx z, cplx& h0, cplx& h1) {
    if (std::abs(z) <= 12.0) {
        cplx j0, j1, y0, y1;
        detail::jy01_series(z, j0, j1, y0, y1);
        h0 = j0 + cplx(0, 1) * y0;
        h1 = j1 + cplx(0, 1) * y1;
    } else {
        detail::hankel01_asymptotic(z, h0, h1);
    }
}

// Minimal-solution array J_0..J_nmax by backward recurrence, Re(z) >= 0.
std::vector<cplx> j_array_right(int nmax, cplx z) {
    std::vector<cplx> out(nmax + 1);
    const double az = std::abs(z);
    if (az == 0.0) {
        out.assign(nmax + 1, 0.0);
        out[0] = 1.0;
        return out;
    }
    cplx j0, j1, y0, y1;
    jy01(z, j0, j1, y0, y1);
    out[0] = j0;
    if (nmax >= 1) out[1] = j1;
    if (nmax <= 1) return out;

    int m = msta1(az, 200);
    if (m < nmax)
        m = msta2(az, nmax, 15);
    else
        m = msta1(az, 15);
    m = std::max(m, nmax + 15);

    cplx f2 = 0.0, f1 = 1e-280;
    for (int k = m; k >= 0; --k) {
        cplx f0 = 2.0 * (k + 1.0) / z * f1 - f2;
        if (k <= nmax) out[k] = f0;
        f2 = f1;
        f1 = f0;
        if (std::abs(f0) > 1e250) {
            const double s = 1e-250;
            f1 *= s;
            f2 *= s;
            for (int t = std::min(m, nmax); t > k; --t) out[t] *= s;
            if (k <= nmax) out[k] *= s;
        }
    }
    // Normalize against the more reliable of J0, J1.
    cplx scale = (std::abs(j0) >= std::abs(j1) || nmax < 1) ? j0 / out[0] : j1 / out[1];
    for (auto& v : out) v *= scale;
    out[0] = j0;
    if (nmax >= 1) out[1] = j1;
    return out;
}

// H1_0..H1_nmax by forward recurrence, Re(z) >= 0, z != 0.
std::vector<cplx> h1_array_right(int nmax, cplx z) {
    std::vector<cplx> out(nmax + 1);
    cplx h0, h1;
    h01(z, h0, h1);
    out[0] = h0;
    if (nmax >= 1) out[1] = h1;
    for (int k = 1; k < nmax; ++k) {
        out[k + 1] = 2.0 * k / z * out[k] - out[k - 1];
        if (std::abs(out[k + 1]) > 1e280)
            throw domain_error("hankel1: magnitude overflow (order too large for argument)");
    }
    return out;
}

void check_array_args(int nmax, cplx z) {
    if (nmax < 0 || nmax > kMaxArrayOrder)
        throw domain_error("specfun array: order out of supported range");
    if (std::abs(z) > kMaxAbsZ)
        throw domain_error("specfun: |z| beyond validated range");
}

} // namespace

std::vector<cplx> bessel_j_array(int nmax, cplx z) {
    check_array_args(nmax, z);
    if (z.real() >= 0.0) return j_array_right(nmax, z);
    // J_n(z) = (-1)^n J_n(-z), exact for integer order.
    auto v = j_array_right(nmax, -z);
    for (int n = 1; n <= nmax; n += 2) v[n] = -v[n];
    return v;
}

std::vector<cplx> hankel1_array(int nmax, cplx z) {
    check_array_args(nmax, z);
    if (std::abs(z) == 0.0) throw singularity_error("hankel1: z = 0");
    if (z.real() >= 0.0) return h1_array_right(nmax, z);
    // Continuation through the cut on the negative real axis; the cut itself
    // (Im z == +0 after rotation) belongs to the upper side.
    const cplx x = -z;
    auto j = j_array_right(nmax, x);
    auto h = h1_array_right(nmax, x);
    std::vector<cplx> out(nmax + 1);
    const bool upper = z.imag() >= 0.0;
    for (int n = 0; n <= nmax; ++n) {
        const double s = (n & 1) ? -1.0 : 1.0;
        // upper: H1_n(e^{+i pi}x) = -(-1)^n H2_n(x) = (-1)^n (H1_n - 2 J_n)
        // lower: H1_n(e^{-i pi}x) = (-1)^n (H1_n + 2 J_n)
        out[n] = upper ? s * (h[n] - 2.0 * j[n]) : s * (h[n] + 2.0 * j[n]);
    }
    return out;
}

std::vector<cplx> bessel_j_array_lower(int nmax, double x) {
    if (!(x > 0.0)) throw domain_error("bessel_j_array_lower: need x > 0");
    auto v = bessel_j_array(nmax, cplx(x, 0.0));
    for (int n = 1; n <= nmax; n += 2) v[n] = -v[n];
    return v;
}

std::vector<cplx> hankel1_array_lower(int nmax, double x) {
    if (!(x > 0.0)) throw domain_error("hankel1_array_lower: need x > 0");
    auto j = bessel_j_array(nmax, cplx(x, 0.0));
    auto h = hankel1_array(nmax, cplx(x, 0.0));
    std::vector<cplx> out(nmax + 1);
    for (int n = 0; n <= nmax; ++n) {
        const double s = (n & 1) ? -1.0 : 1.0;
        out[n] = s * (h[n] + 2.0 * j[n]);
    }
    return out;
}

namespace {

void check_single_args(int n, cplx z) {
    if (std::abs(n) > kMaxSingleOrder)
        throw domain_error("specfun: |order| > 200 unsupported");
    if (std::abs(z) > kMaxAbsZ)
        throw domain_error("specfun: |z| beyond validated range");
}

cplx ensure_finite(cplx v, const char* what) {
    if (!finite(v)) throw domain_error(std::string(what) + ": value overflows double range");
    return v;
}

} // namespace

cplx bessel_j(int n, cplx z) {
    check_single_args(n, z);
    const int m = std::abs(n);
    const cplx v = bessel_j_array(m, z)[m];
    return ensure_finite((n < 0 && (m & 1)) ? -v : v, "bessel_j");
}

cplx hankel1(int n, cplx z) {
    check_single_args(n, z);
    if (std::abs(z) == 0.0) throw singularity_error("hankel1: z = 0");
    const int m = std::abs(n);
    const cplx v = hankel1_array(m, z)[m];
    return ensure_finite((n < 0 && (m & 1)) ? -v : v, "hankel1");
}

cplx bessel_y(int n, cplx z) {
    if (std::abs(z) == 0.0) throw singularity_error("bessel_y: z = 0");
    const cplx h = hankel1(n, z), j = bessel_j(n, z);
    return ensure_finite((h - j) / cplx(0, 1), "bessel_y");
}

cplx hankel2(int n, cplx z) {
    if (std::abs(z) == 0.0) throw singularity_error("hankel2: z = 0");
    return ensure_finite(2.0 * bessel_j(n, z) - hankel1(n, z), "hankel2");
}

cplx bessel_j_deriv(int n, cplx z) {
    // f'_n = (f_{n-1} - f_{n+1})/2 with J_{-1} = -J_1
    return 0.5 * (bessel_j(n - 1, z) - bessel_j(n + 1, z));
}

cplx hankel1_deriv(int n, cplx z) {
    return 0.5 * (hankel1(n - 1, z) - hankel1(n + 1, z));
}

} // namespace specfun
} // namespace qscat
