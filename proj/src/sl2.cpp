#include "hyperlab/sl2.hpp"

#include "hyperlab/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hyperlab {

const char* to_string(ElementClass c) {
    switch (c) {
        case ElementClass::identity: return "identity";
        case ElementClass::elliptic: return "elliptic";
        case ElementClass::parabolic: return "parabolic";
        case ElementClass::hyperbolic: return "hyperbolic";
    }
    return "unknown";
}

double det(const AlgebraElement& y) { return -y.a11 * y.a11 - y.a12 * y.a21; }

ElementClass classify(const AlgebraElement& y) {
    if (y.is_zero()) return ElementClass::identity;
    const double d = det(y);
    if (std::abs(d) < kParabolicThreshold) return ElementClass::parabolic;
    return d > 0 ? ElementClass::elliptic : ElementClass::hyperbolic;
}

GroupElement operator*(const GroupElement& a, const GroupElement& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
}

GroupElement GroupElement::canonical() const {
    constexpr double eps = 1e-9;
    double lead = m22;
    if (std::abs(m11) > eps) lead = m11;
    else if (std::abs(m12) > eps) lead = m12;
    else if (std::abs(m21) > eps) lead = m21;
    if (lead < 0) return {-m11, -m12, -m21, -m22};
    return *this;
}

GroupElement GroupElement::renormalized() const {
    const double d = det();
    // Below the rounding noise of det itself the drift is not measurable;
    // rescaling by it would inject error into large hyperbolic elements.
    const double size = std::abs(m11) + std::abs(m12) + std::abs(m21) + std::abs(m22);
    const double noise = 8.0 * 0x1.0p-53 * size * size;
    if (std::abs(d - 1.0) <= std::max(1e-14, noise) || !(d > 0)) return *this;
    const double s = 1.0 / std::sqrt(d);
    return {m11 * s, m12 * s, m21 * s, m22 * s};
}

double max_abs_diff(const GroupElement& a, const GroupElement& b) {
    return std::max({std::abs(a.m11 - b.m11), std::abs(a.m12 - b.m12),
                     std::abs(a.m21 - b.m21), std::abs(a.m22 - b.m22)});
}

double projective_distance(const GroupElement& a, const GroupElement& b) {
    // Either sign of b, so representatives straddling the 1e-9 cutoff still match.
    const GroupElement nb{-b.m11, -b.m12, -b.m21, -b.m22};
    return std::min(max_abs_diff(a, b), max_abs_diff(a, nb));
}

std::uint64_t projective_hash(const GroupElement& g, double quantum) {
    const GroupElement c = g.canonical();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double v : {c.m11, c.m12, c.m21, c.m22}) {
        const auto q = static_cast<std::int64_t>(std::llround(v / quantum));
        h = splitmix64(h ^ std::bit_cast<std::uint64_t>(q));
    }
    return h;
}

GroupElement exp_algebra(const AlgebraElement& y, double t) {
    const double d = det(y);
    double c = 1.0;
    double s = t;  // coefficient of Y
    if (std::abs(d) < kParabolicThreshold) {
        // nilpotent branch: exact
    } else if (d < 0) {
        const double rho = std::sqrt(-d);
        c = std::cosh(rho * t);
        s = std::sinh(rho * t) / rho;
    } else {
        const double omega = std::sqrt(d);
        c = std::cos(omega * t);
        s = std::sin(omega * t) / omega;
    }
    const GroupElement g{c + s * y.a11, s * y.a12, s * y.a21, c - s * y.a11};
    return g.renormalized();
}

AlgebraElement conjugate(const GroupElement& g, const AlgebraElement& y) {
    const GroupElement yy{y.a11, y.a12, y.a21, -y.a11};
    const GroupElement r = g * yy * g.inverse();
    // Symmetrize the diagonal to keep the result exactly traceless.
    return {0.5 * (r.m11 - r.m22), r.m12, r.m21};
}

std::array<double, 3> basis_coordinates(const AlgebraElement& y) {
    // [[a, b], [c, -a]] = 2a X - 2c V + (b + c) U+
    return {2.0 * y.a11, -2.0 * y.a21, y.a12 + y.a21};
}

std::array<double, 9> adjoint_matrix(const GroupElement& g) {
    std::array<double, 9> m{};
    const AlgebraElement basis[3] = {kX, kV, kUplus};
    for (int j = 0; j < 3; ++j) {
        const auto col = basis_coordinates(conjugate(g, basis[j]));
        for (int i = 0; i < 3; ++i) m[3 * i + j] = col[i];
    }
    return m;
}

double adjoint_norm(const GroupElement& g) {
    const auto a = adjoint_matrix(g);
    Eigen::Matrix3d m;
    m << a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7], a[8];
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(m);
    return svd.singularValues()(0);
}

HalfPlanePoint mobius(const GroupElement& g, HalfPlanePoint z) {
    if (!(z.im > 0)) throw std::invalid_argument("mobius: point must satisfy Im z > 0");
    // (m11 z + m12) / (m21 z + m22)
    const double nr = g.m11 * z.re + g.m12, ni = g.m11 * z.im;
    const double dr = g.m21 * z.re + g.m22, di = g.m21 * z.im;
    const double den = dr * dr + di * di;
    return {(nr * dr + ni * di) / den, g.det() * z.im / den};
}

HalfPlanePoint base_point(const GroupElement& g) {
    const double den = g.m21 * g.m21 + g.m22 * g.m22;
    return {(g.m11 * g.m21 + g.m12 * g.m22) / den, 1.0 / den};
}

double cosh_distance(HalfPlanePoint z, HalfPlanePoint w) {
    const double dx = z.re - w.re, dy = z.im - w.im;
    return 1.0 + (dx * dx + dy * dy) / (2.0 * z.im * w.im);
}

double hyp_distance(HalfPlanePoint z, HalfPlanePoint w) {
    const double dx = z.re - w.re, dy = z.im - w.im;
    const double q = (dx * dx + dy * dy) / (2.0 * z.im * w.im);
    // acosh(1 + q) = log1p(q + sqrt(q (q + 2))) keeps precision near 0.
    return std::log1p(q + std::sqrt(q * (q + 2.0)));
}

double frame_angle(const GroupElement& g) {
    // The pushed-forward vertical is i / (m21 i + m22)^2.
    double a = -2.0 * std::atan2(g.m21, g.m22);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a < 0) a += two_pi;
    return a;
}

GroupElement frame_at(HalfPlanePoint z) {
    const double s = std::sqrt(z.im);
    return {s, z.re / s, 0.0, 1.0 / s};
}

AlgebraElement NormalForm::model() const {
    switch (cls) {
        case ElementClass::hyperbolic: return kX;
        case ElementClass::elliptic: return kV;
        case ElementClass::parabolic: return kUplus;
        case ElementClass::identity: break;
    }
    return {};
}

namespace {

// C = P^{-1} for a basis P = [p, q] (columns), scaled into SL(2,R).
GroupElement conjugator_from_basis(double p1, double p2, double q1, double q2) {
    const double d = p1 * q2 - q1 * p2;
    const double s = 1.0 / std::sqrt(d);
    const GroupElement p{p1 * s, q1 * s, p2 * s, q2 * s};
    return p.inverse();
}

}  // namespace

NormalForm normal_form(const AlgebraElement& y) {
    if (y.is_zero()) throw std::invalid_argument("normal_form: zero element");
    const double a = y.a11, b = y.a12, c = y.a21;
    const double d = det(y);
    NormalForm nf;
    if (std::abs(d) < kParabolicThreshold) {
        nf.cls = ElementClass::parabolic;
        // w with Y w != 0, v = Y w spans the kernel; [v, w] maps to U+.
        double w1 = 1, w2 = 0;
        if (std::hypot(b, a) > std::hypot(a, c)) { w1 = 0; w2 = 1; }
        const double v1 = a * w1 + b * w2, v2 = c * w1 - a * w2;
        if (v1 * w2 - w1 * v2 > 0) {
            nf.conjugator = conjugator_from_basis(v1, v2, w1, w2);
            nf.scale = 1.0;
        } else {
            nf.conjugator = conjugator_from_basis(v1, v2, -w1, -w2);
            nf.scale = -1.0;
        }
    } else if (d > 0) {
        nf.cls = ElementClass::elliptic;
        const double omega = std::sqrt(d);
        // Basis [u, Y u / omega] turns Y into -2 omega V.
        double u1 = 1, u2 = 0;
        if (std::abs(b) > std::abs(c)) { u1 = 0; u2 = 1; }
        const double q1 = (a * u1 + b * u2) / omega, q2 = (c * u1 - a * u2) / omega;
        if (u1 * q2 - q1 * u2 > 0) {
            nf.conjugator = conjugator_from_basis(u1, u2, q1, q2);
            nf.scale = -2.0 * omega;
        } else {
            nf.conjugator = conjugator_from_basis(u1, u2, -q1, -q2);
            nf.scale = 2.0 * omega;
        }
    } else {
        nf.cls = ElementClass::hyperbolic;
        const double rho = std::sqrt(-d);
        auto eigvec = [&](double lambda, double& e1, double& e2) {
            // Two candidate kernels of Y - lambda; take the better-scaled one.
            const double x1 = b, x2 = lambda - a;
            const double z1 = lambda + a, z2 = c;
            if (std::hypot(x1, x2) >= std::hypot(z1, z2)) { e1 = x1; e2 = x2; }
            else { e1 = z1; e2 = z2; }
            const double n = std::hypot(e1, e2);
            e1 /= n;
            e2 /= n;
        };
        double p1, p2, q1, q2;
        eigvec(rho, p1, p2);
        eigvec(-rho, q1, q2);
        // diag(rho, -rho) = 2 rho X
        // Negating an eigenvector keeps the diagonal form, so s = 2 rho always.
        if (p1 * q2 - q1 * p2 < 0) { q1 = -q1; q2 = -q2; }
        nf.conjugator = conjugator_from_basis(p1, p2, q1, q2);
        nf.scale = 2.0 * rho;
    }
    return nf;
}

}  // namespace hyperlab
