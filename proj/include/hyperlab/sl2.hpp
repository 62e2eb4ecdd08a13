#pragma once

// Exact linear algebra on sl(2,R) and PSL(2,R).
//
// Frames and Fuchsian group elements are unit-determinant 2x2 real matrices
// taken modulo sign. Points of the hyperbolic plane live in the upper half
// plane and are stored as (re, im) pairs.

#include <array>
#include <cstdint>

namespace hyperlab {

struct HalfPlanePoint {
    double re = 0.0;
    double im = 1.0;
};

inline constexpr HalfPlanePoint kBasePoint{0.0, 1.0};

enum class ElementClass { identity, elliptic, parabolic, hyperbolic };

const char* to_string(ElementClass c);

/// Traceless 2x2 matrix [[a11, a12], [a21, -a11]].
struct AlgebraElement {
    double a11 = 0.0;
    double a12 = 0.0;
    double a21 = 0.0;

    constexpr double a22() const { return -a11; }

    friend constexpr AlgebraElement operator+(AlgebraElement x, AlgebraElement y) {
        return {x.a11 + y.a11, x.a12 + y.a12, x.a21 + y.a21};
    }
    friend constexpr AlgebraElement operator-(AlgebraElement x, AlgebraElement y) {
        return {x.a11 - y.a11, x.a12 - y.a12, x.a21 - y.a21};
    }
    friend constexpr AlgebraElement operator*(double s, AlgebraElement x) {
        return {s * x.a11, s * x.a12, s * x.a21};
    }
    bool is_zero() const { return a11 == 0.0 && a12 == 0.0 && a21 == 0.0; }
};

// Generators of the geodesic flow, the fiber rotation and the stable
// horocycle flow.
inline constexpr AlgebraElement kX{0.5, 0.0, 0.0};
inline constexpr AlgebraElement kV{0.0, 0.5, -0.5};
inline constexpr AlgebraElement kUplus{0.0, 1.0, 0.0};

/// det Y = -a11^2 - a12 a21.
double det(const AlgebraElement& y);

/// Sign of det, with |det| below kParabolicThreshold counted as zero.
ElementClass classify(const AlgebraElement& y);

/// Below this |det| the cos/cosh closed forms lose a digit against the
/// nilpotent branch I + tY, which is exact.
inline constexpr double kParabolicThreshold = 1e-14;

/// Element of SL(2,R) used as a representative of PSL(2,R).
struct GroupElement {
    double m11 = 1.0;
    double m12 = 0.0;
    double m21 = 0.0;
    double m22 = 1.0;

    static constexpr GroupElement identity() { return {}; }

    double det() const { return m11 * m22 - m12 * m21; }
    double trace() const { return m11 + m22; }

    /// Inverse in SL(2,R) (adjugate; exact when det = 1).
    GroupElement inverse() const { return {m22, -m12, -m21, m11}; }

    /// Sign representative: first of (m11, m12, m21) with |.| > 1e-9 made positive.
    GroupElement canonical() const;

    /// Scale by 1/sqrt(det) if |det - 1| exceeds both 1e-14 and the rounding
    /// noise of det at this entry size.
    GroupElement renormalized() const;

    friend GroupElement operator*(const GroupElement& a, const GroupElement& b);
};

/// Max-entry distance between canonical representatives.
double projective_distance(const GroupElement& a, const GroupElement& b);

/// Largest entrywise |a - b| (no sign identification).
double max_abs_diff(const GroupElement& a, const GroupElement& b);

/// Hash of the canonical representative rounded to `quantum`.
std::uint64_t projective_hash(const GroupElement& g, double quantum = 1e-9);

/// exp(tY) by the closed form matching the sign of det Y.
GroupElement exp_algebra(const AlgebraElement& y, double t);

/// g Y g^{-1}.
AlgebraElement conjugate(const GroupElement& g, const AlgebraElement& y);

/// Coordinates of Y in the basis (X, V, U+).
std::array<double, 3> basis_coordinates(const AlgebraElement& y);

/// 3x3 matrix of Y -> g Y g^{-1} in the basis (X, V, U+), row-major.
std::array<double, 9> adjoint_matrix(const GroupElement& g);

/// Operator 2-norm of adjoint_matrix(g).
double adjoint_norm(const GroupElement& g);

/// Moebius action on the upper half plane. Throws for im <= 0.
HalfPlanePoint mobius(const GroupElement& g, HalfPlanePoint z);

/// g . i, using det g = 1.
HalfPlanePoint base_point(const GroupElement& g);

/// cosh of the hyperbolic distance; monotone in the distance and free of
/// cancellation for nearby points.
double cosh_distance(HalfPlanePoint z, HalfPlanePoint w);

double hyp_distance(HalfPlanePoint z, HalfPlanePoint w);

/// Angle of the frame's unit vector measured from the upward vertical at the
/// base point, in [0, 2pi). The identity frame points straight up.
double frame_angle(const GroupElement& g);

/// Frame with base point z pointing straight up.
GroupElement frame_at(HalfPlanePoint z);

struct NormalForm {
    ElementClass cls = ElementClass::identity;
    GroupElement conjugator;  // C with C Y C^{-1} = scale * model
    double scale = 0.0;

    /// The model generator: X, V or U+ by class.
    AlgebraElement model() const;
};

/// Conjugate Y to s X (hyperbolic), s V (elliptic) or s U+ with s = +-1
/// (parabolic). Throws on the zero element.
NormalForm normal_form(const AlgebraElement& y);

}  // namespace hyperlab
