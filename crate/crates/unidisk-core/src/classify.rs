//! Self-map criteria and the Denjoy-Wolff classification.
//!
//! A linear fractional map sends the open unit disk into itself exactly when
//! its image disk sits inside the closed unit disk; on unit-determinant
//! coefficients that is the inequality
//!
//! ```text
//! |b conj(d) - a conj(c)| + |ad - bc| <= |d|^2 - |c|^2
//! ```
//!
//! An equivalent coefficient-symmetric form (used as the primary test here,
//! with the image form kept as a cross-check) is
//!
//! ```text
//! |d| > |c|   and   2 |a conj(b) - c conj(d)| <= |c|^2 + |d|^2 - |a|^2 - |b|^2
//! ```
//!
//! with equality of both sides to zero characterizing the automorphisms.
//!
//! Every non-identity self-map has a Denjoy-Wolff point: an attracting fixed
//! point in the closed disk. It is interior for the elliptic maps and lies on
//! the unit circle with derivative in (0, 1] otherwise: hyperbolic when the
//! derivative is strictly less than 1, parabolic when it equals 1 (a double
//! fixed point). Parabolic maps split further by the boundary defect
//! `Re(p * phi''(p))`, which is zero exactly for automorphisms.

use crate::moebius::{complex_pair, Complex, Error, FixedPoints, Moebius, SpherePoint};
use crate::tol;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Signed margins of the self-map criteria, on unit-determinant coefficients.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SelfMapReport {
    /// Slack in the image-disk inclusion:
    /// `(|d|^2 - |c|^2) - (|b conj(d) - a conj(c)| + |ad - bc|)`.
    pub margin_image: f64,
    /// Slack in the coefficient-symmetric form:
    /// `(|c|^2 + |d|^2 - |a|^2 - |b|^2) - 2 |a conj(b) - c conj(d)|`.
    pub margin_coeff: f64,
    /// `|d| > |c|`.
    pub denom_dominant: bool,
    /// The map sends the open disk into itself.
    pub is_self_map: bool,
    /// The map is a disk automorphism (onto).
    pub is_automorphism: bool,
    /// The image disk touches the unit circle (margin zero within tolerance).
    /// True for every automorphism and every map with a boundary fixed point,
    /// so this is informational rather than a warning.
    pub boundary_contact: bool,
}

/// Dynamical type of a self-map of the disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassTag {
    Identity,
    EllipticAut,
    EllipticNonAut,
    HyperbolicAut,
    HyperbolicNonAut,
    ParabolicAut,
    ParabolicNonAut,
}

impl ClassTag {
    /// All seven tags, in a fixed order.
    pub const ALL: [ClassTag; 7] = [
        ClassTag::Identity,
        ClassTag::EllipticAut,
        ClassTag::EllipticNonAut,
        ClassTag::HyperbolicAut,
        ClassTag::HyperbolicNonAut,
        ClassTag::ParabolicAut,
        ClassTag::ParabolicNonAut,
    ];

    /// Elliptic, hyperbolic or parabolic (the identity is its own family).
    pub fn family(&self) -> Family {
        match self {
            ClassTag::Identity => Family::Identity,
            ClassTag::EllipticAut | ClassTag::EllipticNonAut => Family::Elliptic,
            ClassTag::HyperbolicAut | ClassTag::HyperbolicNonAut => Family::Hyperbolic,
            ClassTag::ParabolicAut | ClassTag::ParabolicNonAut => Family::Parabolic,
        }
    }

    /// True for the automorphism tags (the identity counts as one).
    pub fn is_automorphism(&self) -> bool {
        matches!(
            self,
            ClassTag::Identity
                | ClassTag::EllipticAut
                | ClassTag::HyperbolicAut
                | ClassTag::ParabolicAut
        )
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClassTag::Identity => "identity",
            ClassTag::EllipticAut => "elliptic_aut",
            ClassTag::EllipticNonAut => "elliptic_non_aut",
            ClassTag::HyperbolicAut => "hyperbolic_aut",
            ClassTag::HyperbolicNonAut => "hyperbolic_non_aut",
            ClassTag::ParabolicAut => "parabolic_aut",
            ClassTag::ParabolicNonAut => "parabolic_non_aut",
        };
        f.write_str(s)
    }
}

/// Coarse fixed-point family of a tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Identity,
    Elliptic,
    Hyperbolic,
    Parabolic,
}

/// Full classification of a self-map.
#[derive(Debug, Clone, Serialize)]
pub struct DiskMapClass {
    pub tag: ClassTag,
    /// Denjoy-Wolff point; `None` only for the identity.
    pub dw: Option<SpherePoint>,
    /// Derivative at the Denjoy-Wolff point (1 for identity and parabolic maps).
    #[serde(with = "complex_pair")]
    pub multiplier: Complex,
    /// Boundary defect `Re(p * phi''(p))` for parabolic maps.
    pub defect: Option<f64>,
    /// The second (repelling) fixed point when the map has two.
    pub other_fixed: Option<SpherePoint>,
    /// Set when the classification sits near a decision boundary (margin,
    /// discriminant or defect within 10x of its tolerance band).
    pub boundary_case: bool,
    /// The self-map margins that admitted the map.
    pub report: SelfMapReport,
}

/// Compute both self-map margins and the automorphism test.
pub fn self_map_report(m: &Moebius) -> SelfMapReport {
    let n = m.normalize();
    let det_norm = n.det().norm();
    let center = (n.b * n.d.conj() - n.a * n.c.conj()).norm();
    let margin_image = (n.d.norm_sqr() - n.c.norm_sqr()) - (center + det_norm);
    let sym = n.c.norm_sqr() + n.d.norm_sqr() - n.a.norm_sqr() - n.b.norm_sqr();
    let cross = (n.a * n.b.conj() - n.c * n.d.conj()).norm();
    let margin_coeff = sym - 2.0 * cross;
    let denom_dominant = n.d.norm() > n.c.norm();
    let is_self_map = denom_dominant && margin_coeff >= -tol::SELF_MAP_MARGIN;
    let is_automorphism =
        is_self_map && sym.abs() <= tol::AUT_EQUALITY && cross <= tol::AUT_EQUALITY;
    SelfMapReport {
        margin_image,
        margin_coeff,
        denom_dominant,
        is_self_map,
        is_automorphism,
        boundary_contact: is_self_map && margin_coeff.abs() <= tol::SELF_MAP_MARGIN,
    }
}

/// Classify a self-map; errors with [`Error::NotASelfMap`] otherwise.
pub fn classify(m: &Moebius) -> Result<DiskMapClass, Error> {
    let report = self_map_report(m);
    if !report.is_self_map {
        return Err(Error::NotASelfMap {
            margin: report.margin_coeff,
        });
    }
    if m.is_identity() {
        return Ok(DiskMapClass {
            tag: ClassTag::Identity,
            dw: None,
            multiplier: Complex::new(1.0, 0.0),
            defect: None,
            other_fixed: None,
            boundary_case: false,
            report,
        });
    }

    let n = m.normalize();
    let tr = n.a + n.d;
    let disc = (tr * tr - Complex::new(4.0, 0.0)).norm();
    // Admitted only through the margin slack: numerically suspect.
    let mut boundary_case = report.margin_coeff < -1e-13;

    match n.fixed_points() {
        FixedPoints::AllSphere => unreachable!("identity handled above"),
        FixedPoints::Double(p) => {
            let z = p.to_complex().ok_or_else(|| {
                Error::InvalidArgument("double fixed point at infinity for a disk self-map".into())
            })?;
            let jet = n.jet_at(z)?;
            let defect = (z * jet.d2).re;
            let tag = if defect.abs() <= tol::DEFECT_ZERO {
                ClassTag::ParabolicAut
            } else {
                ClassTag::ParabolicNonAut
            };
            if defect.abs() > tol::DEFECT_ZERO && defect.abs() <= 10.0 * tol::DEFECT_ZERO {
                boundary_case = true;
            }
            Ok(DiskMapClass {
                tag,
                dw: Some(p),
                multiplier: Complex::new(1.0, 0.0),
                defect: Some(defect),
                other_fixed: None,
                boundary_case,
                report,
            })
        }
        FixedPoints::Pair(p, q) => {
            // Just outside the parabolic discriminant band: the elliptic or
            // hyperbolic label is numerically fragile.
            if disc <= 10.0 * tol::CLASS_DISC {
                boundary_case = true;
            }
            let interior = |s: &SpherePoint| s.abs() < 1.0 - tol::INTERIOR_BAND;
            // A fixed point distinctly off the unit circle yet within decision
            // distance of the interior band makes the elliptic/hyperbolic
            // split fragile. (Genuine boundary fixed points sit on the circle
            // to machine precision and are not flagged.)
            let straddles_band = |s: &SpherePoint| {
                let r = s.abs();
                let gap = (r - 1.0).abs();
                r.is_finite()
                    && (0.1 * tol::INTERIOR_BAND..=10.0 * tol::INTERIOR_BAND).contains(&gap)
            };
            if straddles_band(&p) || straddles_band(&q) {
                boundary_case = true;
            }
            let (dw, other) = if interior(&p) {
                (p, q)
            } else if interior(&q) {
                (q, p)
            } else {
                // Boundary fixed points: the attracting one has |derivative| < 1.
                let mp = n.multiplier_at(&p).norm();
                let mq = n.multiplier_at(&q).norm();
                if mp <= mq {
                    (p, q)
                } else {
                    (q, p)
                }
            };
            let multiplier = n.multiplier_at(&dw);
            let elliptic = interior(&dw);
            let tag = match (elliptic, report.is_automorphism) {
                (true, true) => ClassTag::EllipticAut,
                (true, false) => ClassTag::EllipticNonAut,
                (false, true) => ClassTag::HyperbolicAut,
                (false, false) => ClassTag::HyperbolicNonAut,
            };
            Ok(DiskMapClass {
                tag,
                dw: Some(dw),
                multiplier,
                defect: None,
                other_fixed: Some(other),
                boundary_case,
                report,
            })
        }
    }
}

/// Affine map `w -> Aw + B` of the right half-plane `Re w > 0`, the normal
/// form of a boundary-fixed self-map after the Cayley conjugation
/// `T(z) = (tau + z)/(tau - z)` sending the disk to the half-plane and the
/// Denjoy-Wolff point `tau` to infinity.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HalfPlaneAffine {
    /// Dilation factor `A = 1/phi'(tau)`; at least 1, exactly 1 for parabolic maps.
    pub a: f64,
    /// Translation with `Re B >= 0`; for parabolic maps `B = tau * phi''(tau)`
    /// and `Re B = 0` characterizes the automorphisms.
    #[serde(with = "complex_pair")]
    pub b: Complex,
    /// The boundary Denjoy-Wolff point carried to infinity.
    #[serde(with = "complex_pair")]
    pub tau: Complex,
}

/// The Cayley map sending `tau` to infinity, with its projective inverse.
pub fn cayley_matrix(tau: Complex) -> (Moebius, Moebius) {
    let one = Complex::new(1.0, 0.0);
    let t = Moebius {
        a: one,
        b: tau,
        c: -one,
        d: tau,
    };
    let t_inv = Moebius {
        a: tau,
        b: -tau,
        c: one,
        d: one,
    };
    (t, t_inv)
}

/// Conjugate a hyperbolic or parabolic self-map to its half-plane normal form.
pub fn cayley_conjugate(m: &Moebius) -> Result<HalfPlaneAffine, Error> {
    let cls = classify(m)?;
    match cls.tag.family() {
        Family::Hyperbolic | Family::Parabolic => {}
        _ => {
            return Err(Error::WrongClass {
                op: "cayley_conjugate",
                expected: "a hyperbolic or parabolic self-map",
                found: cls.tag.to_string(),
            })
        }
    }
    let tau = cls
        .dw
        .as_ref()
        .and_then(|p| p.to_complex())
        .ok_or_else(|| Error::InvalidArgument("boundary fixed point must be finite".into()))?;
    let (t, t_inv) = cayley_matrix(tau);
    let hat = t.compose(&m.normalize()).compose(&t_inv);
    // The conjugate fixes infinity, so its c-entry vanishes and the affine
    // coefficients are read off the remaining entries.
    if hat.c.norm() > 1e-8 * hat.scale() {
        return Err(Error::InvalidArgument(format!(
            "conjugated matrix is not affine: |c| = {:.3e}",
            hat.c.norm()
        )));
    }
    let a = hat.a / hat.d;
    let b = hat.b / hat.d;
    if a.im.abs() > 1e-8 * a.norm() {
        return Err(Error::InvalidArgument(format!(
            "dilation factor is not real: {a}"
        )));
    }
    Ok(HalfPlaneAffine { a: a.re, b, tau })
}

/// Rebuild the disk self-map `T^-1 . (w -> Aw + B) . T` from a half-plane form.
pub fn from_halfplane(h: &HalfPlaneAffine) -> Result<Moebius, Error> {
    if !(h.a.is_finite() && h.b.is_finite() && h.tau.is_finite()) {
        return Err(Error::NonFinite);
    }
    if h.a < 1.0 - 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "dilation factor must be at least 1, got {}",
            h.a
        )));
    }
    if h.b.re < -1e-9 {
        return Err(Error::InvalidArgument(format!(
            "translation must have nonnegative real part, got Re B = {}",
            h.b.re
        )));
    }
    if (h.tau.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "tau must lie on the unit circle, got |tau| = {}",
            h.tau.norm()
        )));
    }
    let (t, t_inv) = cayley_matrix(h.tau);
    let affine = Moebius {
        a: Complex::new(h.a, 0.0),
        b: h.b,
        c: Complex::new(0.0, 0.0),
        d: Complex::new(1.0, 0.0),
    };
    Moebius::new(t_inv.a, t_inv.b, t_inv.c, t_inv.d)
        .map(|ti| ti.compose(&affine).compose(&t))
}

/// Boundary defect `Re(p * phi''(p))` of a parabolic self-map; zero exactly
/// for automorphisms.
pub fn parabolic_defect(m: &Moebius) -> Result<f64, Error> {
    let cls = classify(m)?;
    match cls.tag.family() {
        Family::Parabolic => Ok(cls.defect.unwrap()),
        _ => Err(Error::WrongClass {
            op: "parabolic_defect",
            expected: "a parabolic self-map",
            found: cls.tag.to_string(),
        }),
    }
}

/// Smallest `n <= max_n` with `lambda^n = 1` within `eps`, if any.
/// `lambda` must have unit modulus.
pub fn rotation_order(lambda: Complex, max_n: u32, eps: f64) -> Result<Option<u32>, Error> {
    let modulus = lambda.norm();
    if (modulus - 1.0).abs() > 1e-9 {
        return Err(Error::NotUnitModulus { modulus });
    }
    let one = Complex::new(1.0, 0.0);
    let mut w = lambda / modulus;
    for n in 1..=max_n {
        if (w - one).norm() <= eps {
            return Ok(Some(n));
        }
        w *= lambda;
        w /= w.norm();
    }
    Ok(None)
}
