//! Projective coefficient matrices for linear fractional transformations.
//!
//! A map `phi(z) = (az + b)/(cz + d)` with `ad - bc != 0` is stored as the
//! matrix `[[a, b], [c, d]]`, determined up to a nonzero scalar. Composition
//! is matrix multiplication, the inverse is the adjugate, and fixed points are
//! eigenvectors. Points of the Riemann sphere are kept in homogeneous
//! coordinates `(u : v)` so the point at infinity needs no special casing.

use crate::tol;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::Mul;

/// Complex scalar used throughout the crate.
pub type Complex = num_complex::Complex64;

/// Errors raised by map construction, evaluation and the higher-level
/// operations built on top of them.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// `ad - bc` vanishes relative to the squared coefficient scale.
    #[error("degenerate coefficient matrix: |ad - bc| = {det_abs:.3e}, threshold {threshold:.3e}")]
    DegenerateMap { det_abs: f64, threshold: f64 },

    /// A coefficient or argument is NaN or infinite.
    #[error("coefficients and arguments must be finite complex numbers")]
    NonFinite,

    /// Evaluation or a jet was requested at the pole `-d/c`.
    #[error("pole at z = {re}+{im}i: denominator vanishes there")]
    PoleAt { re: f64, im: f64 },

    /// The operation is only defined for self-maps of the unit disk.
    #[error("not a self-map of the unit disk (self-map margin {margin:.3e})")]
    NotASelfMap { margin: f64 },

    /// The operation needs a map of a different dynamical type.
    #[error("{op} expects {expected}, found {found}")]
    WrongClass {
        op: &'static str,
        expected: &'static str,
        found: String,
    },

    /// The operation excludes the identity map.
    #[error("{op} is undefined for the identity map")]
    IdentityInput { op: &'static str },

    /// A point that must lie in the open unit disk does not.
    #[error("point {re}+{im}i is not in the open unit disk")]
    NotInDisk { re: f64, im: f64 },

    /// A rotation coefficient must have unit modulus.
    #[error("expected unit modulus, got |lambda| = {modulus}")]
    NotUnitModulus { modulus: f64 },

    /// Catch-all for invalid argument combinations.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn pole_at(z: Complex) -> Self {
        Error::PoleAt { re: z.re, im: z.im }
    }

    pub(crate) fn not_in_disk(z: Complex) -> Self {
        Error::NotInDisk { re: z.re, im: z.im }
    }
}

/// A point of the Riemann sphere in homogeneous coordinates `(u : v)`.
///
/// The affine point `z` is `(z : 1)` and infinity is `(1 : 0)`. Construction
/// rescales so the larger component has modulus 1, which keeps the chordal
/// metric well conditioned.
#[derive(Debug, Clone, Copy)]
pub struct SpherePoint {
    pub u: Complex,
    pub v: Complex,
}

impl SpherePoint {
    /// Build from raw homogeneous coordinates; `(0, 0)` is rejected.
    pub fn new(u: Complex, v: Complex) -> Result<Self, Error> {
        if !u.is_finite() || !v.is_finite() {
            return Err(Error::NonFinite);
        }
        let m = u.norm().max(v.norm());
        if m == 0.0 {
            return Err(Error::InvalidArgument(
                "homogeneous coordinates (0 : 0) do not name a point".into(),
            ));
        }
        Ok(SpherePoint { u: u / m, v: v / m })
    }

    /// The affine point `z`.
    pub fn finite(z: Complex) -> Self {
        let m = z.norm().max(1.0);
        SpherePoint { u: z / m, v: Complex::new(1.0 / m, 0.0) }
    }

    /// The point at infinity `(1 : 0)`.
    pub fn infinity() -> Self {
        SpherePoint { u: Complex::new(1.0, 0.0), v: Complex::new(0.0, 0.0) }
    }

    /// True when the point is at infinity (relative cutoff `1e-13` on the
    /// normalized second coordinate).
    pub fn is_infinity(&self) -> bool {
        self.v.norm() <= 1e-13 * self.u.norm().max(self.v.norm())
    }

    /// Affine coordinate, or `None` for the point at infinity.
    pub fn to_complex(&self) -> Option<Complex> {
        if self.is_infinity() {
            None
        } else {
            Some(self.u / self.v)
        }
    }

    /// Chordal distance `|u1 v2 - u2 v1| / (|(u1,v1)| |(u2,v2)|)`, between 0 and 1.
    pub fn chordal(&self, other: &SpherePoint) -> f64 {
        let cross = (self.u * other.v - other.u * self.v).norm();
        let n1 = (self.u.norm_sqr() + self.v.norm_sqr()).sqrt();
        let n2 = (other.u.norm_sqr() + other.v.norm_sqr()).sqrt();
        cross / (n1 * n2)
    }

    /// Modulus of the affine coordinate; infinity reports `f64::INFINITY`.
    pub fn abs(&self) -> f64 {
        match self.to_complex() {
            Some(z) => z.norm(),
            None => f64::INFINITY,
        }
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_complex() {
            Some(z) => write!(f, "{}", fmt_complex(z)),
            None => write!(f, "inf"),
        }
    }
}

impl Serialize for SpherePoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.to_complex() {
            Some(z) => [z.re, z.im].serialize(s),
            None => "inf".serialize(s),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SpherePointRepr {
    Word(String),
    Affine([f64; 2]),
    Homogeneous([[f64; 2]; 2]),
}

impl<'de> Deserialize<'de> for SpherePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        match SpherePointRepr::deserialize(d)? {
            SpherePointRepr::Word(w) if w.eq_ignore_ascii_case("inf") => {
                Ok(SpherePoint::infinity())
            }
            SpherePointRepr::Word(w) => Err(D::Error::custom(format!(
                "expected \"inf\", [re, im], or [[ure, uim], [vre, vim]], got \"{w}\""
            ))),
            SpherePointRepr::Affine([re, im]) => Ok(SpherePoint::finite(Complex::new(re, im))),
            SpherePointRepr::Homogeneous([[ur, ui], [vr, vi]]) => {
                SpherePoint::new(Complex::new(ur, ui), Complex::new(vr, vi))
                    .map_err(D::Error::custom)
            }
        }
    }
}

/// Value and first two derivatives of a map at a point.
#[derive(Debug, Clone, Copy)]
pub struct Jet {
    pub value: Complex,
    pub d1: Complex,
    pub d2: Complex,
}

/// Fixed-point set of a linear fractional map.
#[derive(Debug, Clone, Copy)]
pub enum FixedPoints {
    /// The identity fixes every point.
    AllSphere,
    /// A single fixed point of multiplicity two (derivative 1 there).
    Double(SpherePoint),
    /// Two distinct fixed points. The first belongs to the larger-modulus
    /// eigenvalue, so where the multiplier moduli differ it is the attracting
    /// one.
    Pair(SpherePoint, SpherePoint),
}

impl FixedPoints {
    /// The fixed points as a list (empty for the identity).
    pub fn points(&self) -> Vec<SpherePoint> {
        match self {
            FixedPoints::AllSphere => vec![],
            FixedPoints::Double(p) => vec![*p],
            FixedPoints::Pair(p, q) => vec![*p, *q],
        }
    }
}

/// A linear fractional transformation `z -> (az + b)/(cz + d)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Moebius {
    #[serde(with = "complex_pair")]
    pub a: Complex,
    #[serde(with = "complex_pair")]
    pub b: Complex,
    #[serde(with = "complex_pair")]
    pub c: Complex,
    #[serde(with = "complex_pair")]
    pub d: Complex,
}

pub(crate) mod complex_pair {
    use super::Complex;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex::new(re, im))
    }
}

pub(crate) mod complex_pair_list {
    use super::Complex;
    use serde::{Serialize, Serializer};

    pub fn serialize<S: Serializer>(zs: &[Complex], s: S) -> Result<S::Ok, S::Error> {
        zs.iter()
            .map(|z| [z.re, z.im])
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

impl Moebius {
    /// Build a map, rejecting non-finite or degenerate coefficients.
    pub fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Result<Self, Error> {
        if !(a.is_finite() && b.is_finite() && c.is_finite() && d.is_finite()) {
            return Err(Error::NonFinite);
        }
        let m = Moebius { a, b, c, d };
        let threshold = tol::DET_DEGENERACY_REL * m.scale() * m.scale();
        let det_abs = m.det().norm();
        if det_abs <= threshold {
            return Err(Error::DegenerateMap { det_abs, threshold });
        }
        Ok(m)
    }

    /// Build from real coefficients.
    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Result<Self, Error> {
        Moebius::new(
            Complex::new(a, 0.0),
            Complex::new(b, 0.0),
            Complex::new(c, 0.0),
            Complex::new(d, 0.0),
        )
    }

    /// The identity map `z -> z`.
    pub fn identity() -> Self {
        Moebius {
            a: Complex::new(1.0, 0.0),
            b: Complex::new(0.0, 0.0),
            c: Complex::new(0.0, 0.0),
            d: Complex::new(1.0, 0.0),
        }
    }

    /// `ad - bc`.
    pub fn det(&self) -> Complex {
        self.a * self.d - self.b * self.c
    }

    /// Largest coefficient modulus.
    pub fn scale(&self) -> f64 {
        self.a
            .norm()
            .max(self.b.norm())
            .max(self.c.norm())
            .max(self.d.norm())
    }

    /// Unit-determinant representative with a deterministic sign: the first
    /// coefficient of modulus at least half the maximum gets its real part
    /// nonnegative (imaginary part nonnegative on the tie).
    pub fn normalize(&self) -> Moebius {
        let s = self.det().sqrt();
        let mut n = Moebius {
            a: self.a / s,
            b: self.b / s,
            c: self.c / s,
            d: self.d / s,
        };
        let coeffs = [n.a, n.b, n.c, n.d];
        let m = n.scale();
        let lead = coeffs.iter().find(|w| w.norm() >= 0.5 * m).copied().unwrap();
        let flip = lead.re < 0.0 || (lead.re == 0.0 && lead.im < 0.0);
        if flip {
            n.a = -n.a;
            n.b = -n.b;
            n.c = -n.c;
            n.d = -n.d;
        }
        n
    }

    /// Apply to a sphere point: `(u : v) -> (au + bv : cu + dv)`.
    pub fn apply(&self, p: SpherePoint) -> SpherePoint {
        let u = self.a * p.u + self.b * p.v;
        let v = self.c * p.u + self.d * p.v;
        // Nondegeneracy keeps the image away from (0 : 0); renormalize only.
        let m = u.norm().max(v.norm());
        SpherePoint { u: u / m, v: v / m }
    }

    /// Apply to an affine point, tracking a possible image at infinity.
    pub fn apply_z(&self, z: Complex) -> SpherePoint {
        self.apply(SpherePoint::finite(z))
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &Moebius) -> Moebius {
        let m = Moebius {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        };
        // Rescale to keep coefficients from drifting under repeated products.
        let s = m.scale();
        Moebius {
            a: m.a / s,
            b: m.b / s,
            c: m.c / s,
            d: m.d / s,
        }
    }

    /// Inverse map (projective adjugate, no division by the determinant).
    pub fn inverse(&self) -> Moebius {
        Moebius {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// n-th iterate by binary exponentiation; `n = 0` gives the identity.
    pub fn iterate_n(&self, n: u64) -> Moebius {
        let mut result = Moebius::identity();
        let mut base = *self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result.compose(&base);
            }
            base = base.compose(&base);
            k >>= 1;
        }
        result
    }

    /// Fixed points as eigenvectors of the coefficient matrix.
    pub fn fixed_points(&self) -> FixedPoints {
        if self.is_identity() {
            return FixedPoints::AllSphere;
        }
        let n = self.normalize();
        let tr = n.a + n.d;
        let disc = tr * tr - Complex::new(4.0, 0.0);
        if disc.norm() <= tol::CLASS_DISC {
            let lambda = tr / 2.0;
            return FixedPoints::Double(eigenvector(&n, lambda));
        }
        let root = disc.sqrt();
        // Pick the addition that avoids cancellation; the other eigenvalue is
        // its reciprocal since the determinant is 1.
        let lambda1 = if (tr + root).norm() >= (tr - root).norm() {
            (tr + root) / 2.0
        } else {
            (tr - root) / 2.0
        };
        let lambda2 = Complex::new(1.0, 0.0) / lambda1;
        FixedPoints::Pair(eigenvector(&n, lambda1), eigenvector(&n, lambda2))
    }

    /// Derivative at a fixed point, computed in the chart where the point is
    /// finite. For a finite fixed point `z` this is `det/(cz + d)^2`; at
    /// infinity it is `det/a^2`.
    pub fn multiplier_at(&self, p: &SpherePoint) -> Complex {
        if p.is_infinity() {
            self.det() / (self.a * self.a)
        } else {
            let z = p.to_complex().unwrap();
            let den = self.c * z + self.d;
            self.det() / (den * den)
        }
    }

    /// Affine evaluation with a pole guard.
    pub fn eval(&self, z: Complex) -> Result<Complex, Error> {
        if !z.is_finite() {
            return Err(Error::NonFinite);
        }
        let den = self.c * z + self.d;
        if den.norm() <= tol::POLE_REL * self.scale() * z.norm().max(1.0) {
            return Err(Error::pole_at(z));
        }
        Ok((self.a * z + self.b) / den)
    }

    /// Value and first two derivatives at `z0`:
    /// `phi' = det/(cz+d)^2`, `phi'' = -2c det/(cz+d)^3`.
    pub fn jet_at(&self, z0: Complex) -> Result<Jet, Error> {
        if !z0.is_finite() {
            return Err(Error::NonFinite);
        }
        let den = self.c * z0 + self.d;
        if den.norm() <= tol::POLE_REL * self.scale() * z0.norm().max(1.0) {
            return Err(Error::pole_at(z0));
        }
        let det = self.det();
        let value = (self.a * z0 + self.b) / den;
        let d1 = det / (den * den);
        let d2 = -2.0 * self.c * det / (den * den * den);
        Ok(Jet { value, d1, d2 })
    }

    /// Max-norm distance between unit-determinant representatives, minimized
    /// over the residual sign ambiguity. Zero exactly on projectively equal
    /// maps; used for every "maps are equal" test in the crate.
    pub fn proj_distance(&self, other: &Moebius) -> f64 {
        let p = self.normalize();
        let q = other.normalize();
        let dist = |s: f64| -> f64 {
            (p.a - s * q.a)
                .norm()
                .max((p.b - s * q.b).norm())
                .max((p.c - s * q.c).norm())
                .max((p.d - s * q.d).norm())
        };
        dist(1.0).min(dist(-1.0))
    }

    /// True when the map is projectively the identity.
    pub fn is_identity(&self) -> bool {
        self.proj_distance(&Moebius::identity()) <= tol::PROJ_EQ
    }
}

impl Mul for Moebius {
    type Output = Moebius;

    fn mul(self, rhs: Moebius) -> Moebius {
        self.compose(&rhs)
    }
}

fn eigenvector(n: &Moebius, lambda: Complex) -> SpherePoint {
    // Rows of (M - lambda I) give two candidate kernels; take the better one.
    let v1 = (n.b, lambda - n.a);
    let v2 = (lambda - n.d, n.c);
    let (u, v) = if v1.0.norm().max(v1.1.norm()) >= v2.0.norm().max(v2.1.norm()) {
        v1
    } else {
        v2
    };
    // Both candidates vanish only for scalar matrices, which were already
    // routed to AllSphere.
    SpherePoint::new(u, v).expect("eigenvector of a non-scalar matrix")
}

/// Maps of the unit disk that can be evaluated pointwise.
///
/// Implemented by [`Moebius`] and by the closed-form non-rational maps in the
/// example corpus, so orbits and intertwining residuals accept either.
pub trait DiskMap {
    /// Evaluate at a point of the open unit disk.
    fn eval(&self, z: Complex) -> Result<Complex, Error>;

    /// Short label for diagnostics.
    fn label(&self) -> String;
}

impl DiskMap for Moebius {
    fn eval(&self, z: Complex) -> Result<Complex, Error> {
        Moebius::eval(self, z)
    }

    fn label(&self) -> String {
        format!("{self}")
    }
}

impl fmt::Display for Moebius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} z + {}) / ({} z + {})",
            fmt_complex(self.a),
            fmt_complex(self.b),
            fmt_complex(self.c),
            fmt_complex(self.d)
        )
    }
}

/// Compact complex formatting: `2`, `-i`, `1+2i`, `0.5-0.25i`.
pub fn fmt_complex(z: Complex) -> String {
    let re = z.re;
    let im = z.im;
    if im == 0.0 {
        format!("{re}")
    } else if re == 0.0 {
        match im {
            1.0 => "i".into(),
            -1.0 => "-i".into(),
            _ => format!("{im}i"),
        }
    } else {
        let (sign, mag) = if im < 0.0 { ("-", -im) } else { ("+", im) };
        if mag == 1.0 {
            format!("{re}{sign}i")
        } else {
            format!("{re}{sign}{mag}i")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn degenerate_matrix_is_rejected() {
        let err = Moebius::real(1.0, 1.0, 1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::DegenerateMap { .. }), "got {err:?}");
    }

    #[test]
    fn normalize_gives_unit_determinant_and_fixed_sign() {
        let m = Moebius::real(5.0, 3.0, 3.0, 5.0).unwrap();
        let n = m.normalize();
        assert!((n.det() - c(1.0, 0.0)).norm() < 1e-15);
        assert!((n.a - c(1.25, 0.0)).norm() < 1e-15);
        assert!((n.b - c(0.75, 0.0)).norm() < 1e-15);
        // Scaling by any nonzero constant lands on the same representative.
        let scaled = Moebius::new(m.a * c(0.0, -3.0), m.b * c(0.0, -3.0), m.c * c(0.0, -3.0), m.d * c(0.0, -3.0)).unwrap();
        assert!(n.proj_distance(&scaled) < 1e-14);
    }

    #[test]
    fn scaled_identity_normalizes_to_identity() {
        let m = Moebius::real(2.0, 0.0, 0.0, 2.0).unwrap();
        assert!(m.is_identity());
        assert!(m.normalize().proj_distance(&Moebius::identity()) == 0.0);
    }

    #[test]
    fn compose_is_matrix_product_in_application_order() {
        // f(z) = z + 1, g(z) = 2z; (f . g)(z) = 2z + 1.
        let f = Moebius::real(1.0, 1.0, 0.0, 1.0).unwrap();
        let g = Moebius::real(2.0, 0.0, 0.0, 1.0).unwrap();
        let fg = f.compose(&g);
        let z = c(0.3, -0.2);
        let expect = 2.0 * z + 1.0;
        assert!((fg.eval(z).unwrap() - expect).norm() < 1e-15);
        assert!(((f * g).eval(z).unwrap() - expect).norm() < 1e-15);
    }

    #[test]
    fn inverse_composes_to_identity() {
        let m = Moebius::new(c(1.0, -6.3), c(0.0, 6.3), c(0.0, -6.3), c(1.0, 6.3)).unwrap();
        assert!(m.compose(&m.inverse()).is_identity());
        assert!(m.inverse().compose(&m).is_identity());
    }

    #[test]
    fn iterate_matches_repeated_composition() {
        let m = Moebius::real(1.0, 1.0, 0.0, 2.0).unwrap();
        let mut by_hand = Moebius::identity();
        for _ in 0..11 {
            by_hand = m.compose(&by_hand);
        }
        assert!(m.iterate_n(11).proj_distance(&by_hand) < 1e-12);
        assert!(m.iterate_n(0).is_identity());
    }

    #[test]
    fn rotation_squared_is_identity() {
        let m = Moebius::real(-1.0, 0.0, 0.0, 1.0).unwrap();
        assert!(m.iterate_n(2).is_identity());
    }

    #[test]
    fn dilation_iterates_multiply() {
        let m = Moebius::real(1.0, 0.0, 0.0, 2.0).unwrap(); // z/2
        let cube = m.iterate_n(3);
        let expect = Moebius::real(1.0, 0.0, 0.0, 8.0).unwrap();
        assert!(cube.proj_distance(&expect) < 1e-14);
    }

    #[test]
    fn fixed_points_of_identity_is_all_sphere() {
        assert!(matches!(Moebius::identity().fixed_points(), FixedPoints::AllSphere));
    }

    #[test]
    fn fixed_points_of_half_shift_are_one_and_infinity() {
        // (z + 1)/2 fixes 1 and infinity.
        let m = Moebius::real(1.0, 1.0, 0.0, 2.0).unwrap();
        let FixedPoints::Pair(p, q) = m.fixed_points() else {
            panic!("expected two fixed points");
        };
        let one = SpherePoint::finite(c(1.0, 0.0));
        let assign_direct = p.chordal(&one) < 1e-12 && q.is_infinity();
        let assign_swapped = q.chordal(&one) < 1e-12 && p.is_infinity();
        assert!(assign_direct || assign_swapped);
        // The attracting point (multiplier 1/2) is listed first.
        assert!(p.chordal(&one) < 1e-12);
        assert!((m.multiplier_at(&p) - c(0.5, 0.0)).norm() < 1e-12);
        assert!((m.multiplier_at(&q) - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn double_fixed_point_detected_for_parabolic_map() {
        // ((2-i)z + i)/(-iz + 2 + i) has the single fixed point 1.
        let m = Moebius::new(c(2.0, -1.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 1.0)).unwrap();
        let FixedPoints::Double(p) = m.fixed_points() else {
            panic!("expected a double fixed point");
        };
        assert!(p.chordal(&SpherePoint::finite(c(1.0, 0.0))) < 1e-12);
        assert!((m.multiplier_at(&p) - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn jet_values_match_closed_forms() {
        // Same parabolic map: value 1, first derivative 1, second derivative i at z = 1.
        let m = Moebius::new(c(2.0, -1.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 1.0)).unwrap();
        let jet = m.jet_at(c(1.0, 0.0)).unwrap();
        assert!((jet.value - c(1.0, 0.0)).norm() < 1e-14);
        assert!((jet.d1 - c(1.0, 0.0)).norm() < 1e-14);
        assert!((jet.d2 - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn jet_at_pole_errors() {
        let m = Moebius::real(1.0, 0.0, 1.0, -0.5).unwrap(); // pole at 1/2
        assert!(matches!(m.jet_at(c(0.5, 0.0)), Err(Error::PoleAt { .. })));
    }

    #[test]
    fn jet_derivatives_match_finite_differences() {
        let m = Moebius::new(c(3.0, 1.0), c(1.0, 0.0), c(0.5, -0.25), c(4.0, 0.0)).unwrap();
        let z0 = c(0.2, 0.3);
        let h = 1e-5;
        let jet = m.jet_at(z0).unwrap();
        let f = |z: Complex| m.eval(z).unwrap();
        let d1_fd = (f(z0 + c(h, 0.0)) - f(z0 - c(h, 0.0))) / c(2.0 * h, 0.0);
        let d2_fd = (f(z0 + c(h, 0.0)) - 2.0 * f(z0) + f(z0 - c(h, 0.0))) / c(h * h, 0.0);
        assert!((jet.d1 - d1_fd).norm() < 1e-9, "d1 {} vs fd {}", jet.d1, d1_fd);
        assert!((jet.d2 - d2_fd).norm() < 1e-5, "d2 {} vs fd {}", jet.d2, d2_fd);
    }

    #[test]
    fn proj_distance_ignores_scaling_and_detects_difference() {
        let m = Moebius::real(1.0, 1.0, 0.0, 2.0).unwrap();
        let m3 = Moebius::real(3.0, 3.0, 0.0, 6.0).unwrap();
        assert!(m.proj_distance(&m3) < 1e-14);
        let other = Moebius::real(1.0, 1.0, 0.0, 2.0 + 1e-6).unwrap();
        let d = m.proj_distance(&other);
        assert!(d > 1e-8 && d < 1e-5, "distance {d}");
    }

    #[test]
    fn apply_tracks_the_point_at_infinity() {
        let m = Moebius::new(c(0.0, 1.0), c(1.0, 0.0), c(-1.0, 0.0), c(2.0, 1.0)).unwrap();
        // f(infinity) = a/c = -i.
        let img = m.apply(SpherePoint::infinity());
        assert!(img.chordal(&SpherePoint::finite(c(0.0, -1.0))) < 1e-15);
        // The pole is carried to infinity.
        let pole = (-m.d / m.c).re;
        let img2 = m.apply(SpherePoint::finite(c(pole, (-m.d / m.c).im)));
        assert!(img2.is_infinity());
    }

    #[test]
    fn chordal_metric_is_scale_invariant_and_bounded() {
        let p = SpherePoint::new(c(2.0, 1.0), c(1.0, -1.0)).unwrap();
        let q = SpherePoint::new(c(-4.0, -2.0), c(-2.0, 2.0)).unwrap();
        assert!(p.chordal(&q) < 1e-15, "same projective point");
        let r = SpherePoint::infinity();
        assert!(p.chordal(&r) <= 1.0);
        assert!(SpherePoint::finite(c(0.0, 0.0)).chordal(&r) == 1.0);
    }

    #[test]
    fn serde_round_trip_uses_re_im_pairs() {
        let m = Moebius::new(c(1.0, -6.3), c(0.0, 6.3), c(0.0, -6.3), c(1.0, 6.3)).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(
            json,
            r#"{"a":[1.0,-6.3],"b":[0.0,6.3],"c":[0.0,-6.3],"d":[1.0,6.3]}"#
        );
        let back: Moebius = serde_json::from_str(&json).unwrap();
        assert_eq!(back.proj_distance(&m), 0.0);
    }

    #[test]
    fn sphere_point_serde_accepts_all_three_forms() {
        let p: SpherePoint = serde_json::from_str("[0.5,-0.25]").unwrap();
        assert!((p.to_complex().unwrap() - c(0.5, -0.25)).norm() < 1e-15);
        let q: SpherePoint = serde_json::from_str("\"inf\"").unwrap();
        assert!(q.is_infinity());
        let r: SpherePoint = serde_json::from_str("[[1.0,0.0],[2.0,0.0]]").unwrap();
        assert!((r.to_complex().unwrap() - c(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(serde_json::to_string(&q).unwrap(), "\"inf\"");
    }
}
