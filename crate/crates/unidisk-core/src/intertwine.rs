//! The intertwining equation `f . phi = psi . f`.
//!
//! Given self-maps `phi` and `psi` of the disk, a self-map `f` intertwines
//! them when `f(phi(z)) = psi(f(z))` for all `z`. When all three are linear
//! fractional the equation is rigid: it forces `f` to transport the fixed-point
//! data of `phi` onto that of `psi`, and conversely that transport is
//! sufficient. Concretely, with `p`, `q` the Denjoy-Wolff points of `phi`,
//! `psi`:
//!
//! - `phi` elliptic: the equation holds iff `f(Fix phi) = Fix psi` and
//!   `phi'(p) = psi'(q)`;
//! - `phi` hyperbolic: additionally `f(p) = q` (sending the attracting point
//!   to the repelling one is not allowed);
//! - `phi` parabolic: `f(p) = q` and the second-derivative balance
//!   `f'(p) * psi''(q) = phi''(p)`.
//!
//! At the level of class tags alone, only certain pairs can ever be
//! intertwined by a nonconstant boundary-regular map; [`type_compatible`]
//! encodes that 7x7 table. [`solve_family`] goes further and produces the
//! full solution family for a concrete pair, parameterized by one complex
//! number.

use crate::classify::{classify, ClassTag, DiskMapClass, Family};
use crate::moebius::{fmt_complex, Complex, DiskMap, Error, Moebius, SpherePoint};
use crate::tol;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Whether a class pair admits nonconstant intertwining maps at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Possible,
    No,
}

/// Table verdict with a one-line justification.
#[derive(Debug, Clone, Serialize)]
pub struct Compatibility {
    pub verdict: Verdict,
    pub reason: String,
}

/// Class-level compatibility of `f . phi = psi . f` for nonconstant `f`.
///
/// The verdicts describe solutions with an angular limit at the attracting
/// fixed point (boundary-regular solutions). Exotic solutions without any
/// boundary limit can exist in excluded pairings, and constant solutions
/// always exist; neither is counted here.
pub fn type_compatible(phi: ClassTag, psi: ClassTag) -> Compatibility {
    use ClassTag::*;
    let possible = |reason: &str| Compatibility {
        verdict: Verdict::Possible,
        reason: reason.into(),
    };
    let no = |reason: &str| Compatibility {
        verdict: Verdict::No,
        reason: reason.into(),
    };
    match (phi, psi) {
        (Identity, Identity) => possible("the identity intertwines with itself through every self-map"),
        (Identity, _) => no("f . id = psi . f forces psi to fix every point of f's image, so psi = id"),
        (EllipticAut, Identity) => possible(
            "an elliptic automorphism whose multiplier is a root of unity collapses to the identity under a map constant on its orbits; irrational rotations do not",
        ),
        (ParabolicAut, Identity) => possible(
            "a parabolic automorphism collapses to the identity under a map invariant along its orbits",
        ),
        (_, Identity) => no(
            "only rational elliptic automorphisms and parabolic automorphisms admit nonconstant maps collapsing them to the identity",
        ),
        (EllipticAut, EllipticAut) => possible(
            "interior fixed points correspond and the unit-modulus multipliers can match",
        ),
        (EllipticNonAut, EllipticNonAut) => possible(
            "interior fixed points correspond and the multipliers (modulus below one) can match",
        ),
        (HyperbolicAut, HyperbolicAut) | (HyperbolicNonAut, HyperbolicAut) | (HyperbolicNonAut, HyperbolicNonAut) => possible(
            "boundary fixed points correspond with equal multipliers in (0, 1)",
        ),
        (HyperbolicAut, EllipticNonAut) | (HyperbolicNonAut, EllipticNonAut) => possible(
            "a non-automorphic f can carry the boundary attracting point inside while keeping the multiplier in (0, 1)",
        ),
        (ParabolicAut, ParabolicAut) | (ParabolicNonAut, ParabolicNonAut) => possible(
            "double boundary fixed points correspond and the half-plane translations are proportional",
        ),
        (EllipticAut, _) | (_, EllipticAut) => no(
            "an elliptic automorphism has a unit-modulus multiplier; its partner must too",
        ),
        (ParabolicAut, ParabolicNonAut) | (ParabolicNonAut, ParabolicAut) => no(
            "the half-plane translation of an automorphism is purely imaginary and of a non-automorphism is not; no positive ratio links them",
        ),
        (p, q) => no(&format!(
            "no boundary-regular nonconstant self-map transports a {p} onto a {q}"
        )),
    }
}

/// Outcome of checking the fixed-point transport conditions for a concrete
/// triple `(f, phi, psi)`.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    /// All conditions for `f . phi = psi . f` hold.
    pub holds: bool,
    /// Which condition failed, or what was verified.
    pub reason: String,
    /// Projective distance between `f . phi` and `psi . f` (0 iff the
    /// equation holds exactly).
    pub residual: f64,
}

fn image_point(f: &Moebius, p: &SpherePoint) -> SpherePoint {
    f.apply(*p)
}

fn finite_dw(cls: &DiskMapClass) -> Result<Complex, Error> {
    cls.dw
        .as_ref()
        .and_then(|p| p.to_complex())
        .ok_or_else(|| Error::InvalidArgument("Denjoy-Wolff point at infinity".into()))
}

/// Check the necessary-and-sufficient conditions for `f . phi = psi . f`
/// on linear fractional self-maps, `phi` and `psi` not the identity.
pub fn check_conditions(
    f: &Moebius,
    phi: &Moebius,
    psi: &Moebius,
) -> Result<ConditionReport, Error> {
    classify(f)?;
    let phi_cls = classify(phi)?;
    let psi_cls = classify(psi)?;
    if phi_cls.tag == ClassTag::Identity || psi_cls.tag == ClassTag::Identity {
        return Err(Error::IdentityInput {
            op: "check_conditions",
        });
    }
    let residual = f.compose(phi).proj_distance(&psi.compose(f));
    let done = |holds: bool, reason: String| Ok(ConditionReport { holds, reason, residual });

    let phi_fixed = phi.fixed_points().points();
    let psi_fixed = psi.fixed_points().points();
    if phi_fixed.len() != psi_fixed.len() {
        return done(
            false,
            format!(
                "fixed-point set mismatch: f is injective but must send {} fixed points onto {}",
                phi_fixed.len(),
                psi_fixed.len()
            ),
        );
    }

    let p_dw = phi_cls.dw.as_ref().unwrap();
    let q_dw = psi_cls.dw.as_ref().unwrap();
    let f_p = image_point(f, p_dw);

    match phi_cls.tag.family() {
        Family::Parabolic => {
            // Single fixed points: f(p) = q, then the second-derivative balance.
            if f_p.chordal(q_dw) > tol::FIXED_SET_CHORDAL {
                return done(
                    false,
                    format!(
                        "denjoy-wolff image mismatch: f({}) = {} but the target fixed point is {}",
                        p_dw, f_p, q_dw
                    ),
                );
            }
            let p = finite_dw(&phi_cls)?;
            let q = finite_dw(&psi_cls)?;
            let phi2 = phi.jet_at(p)?.d2;
            let psi2 = psi.jet_at(q)?.d2;
            let f1 = f.jet_at(p)?.d1;
            let balance = f1 * psi2 - phi2;
            let scale = phi2.norm().max(1.0);
            if balance.norm() > tol::SECOND_DERIV_REL * scale {
                return done(
                    false,
                    format!(
                        "second-derivative mismatch: f'(p) psi''(q) = {} but phi''(p) = {}",
                        fmt_complex(f1 * psi2),
                        fmt_complex(phi2)
                    ),
                );
            }
            done(
                true,
                "denjoy-wolff point transported and second derivatives balance".into(),
            )
        }
        _ => {
            // Two fixed points each: match the sets, then the multipliers.
            let p_other = phi_cls.other_fixed.as_ref().unwrap();
            let q_other = psi_cls.other_fixed.as_ref().unwrap();
            let f_other = image_point(f, p_other);
            let direct = f_p
                .chordal(q_dw)
                .max(f_other.chordal(q_other));
            let swapped = f_p
                .chordal(q_other)
                .max(f_other.chordal(q_dw));
            if direct > tol::FIXED_SET_CHORDAL && swapped > tol::FIXED_SET_CHORDAL {
                return done(
                    false,
                    format!(
                        "fixed-point set mismatch: f sends the fixed points to {} and {}, expected {} and {}",
                        f_p, f_other, q_dw, q_other
                    ),
                );
            }
            if direct > tol::FIXED_SET_CHORDAL {
                return done(
                    false,
                    "denjoy-wolff image mismatch: f swaps the attracting point with the other fixed point".into(),
                );
            }
            let mult_gap = (phi_cls.multiplier - psi_cls.multiplier).norm();
            if mult_gap > tol::MULTIPLIER_EQ {
                return done(
                    false,
                    format!(
                        "multiplier mismatch: phi'(p) = {} but psi'(q) = {}",
                        fmt_complex(phi_cls.multiplier),
                        fmt_complex(psi_cls.multiplier)
                    ),
                );
            }
            done(
                true,
                "fixed points correspond and the denjoy-wolff multipliers agree".into(),
            )
        }
    }
}

/// Shape of the solution set of `f . phi = psi . f` over linear fractional `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// No linear fractional self-map solves the equation.
    Empty,
    /// Solutions `sigma_q^-1 . (w -> t w) . sigma_p` for admissible `t`.
    TwoPoint,
    /// Solutions `T_q^-1 . (w -> c w + t) . T_p` with fixed slope `c`.
    ParabolicAffine,
    /// Inputs classify too close to a decision boundary to solve reliably.
    Degenerate,
}

/// Lazy description of all linear fractional solutions of `f . phi = psi . f`.
///
/// Members are produced from a parameter `t`; not every `t` yields a disk
/// self-map, so use [`SolutionFamily::member_if_self_map`] or
/// [`SolutionFamily::sample`] to obtain verified members.
#[derive(Debug, Clone, Serialize)]
pub struct SolutionFamily {
    pub kind: FamilyKind,
    /// Why the family is empty/degenerate, or how members are built.
    pub reason: String,
    /// Carries fixed points of `phi` to `0` and `infinity` (two-point kind)
    /// or is the Cayley map at the fixed point of `phi` (parabolic kind).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_p: Option<Moebius>,
    /// Same for `psi`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_q: Option<Moebius>,
    /// Fixed affine slope of the parabolic family.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
}

impl SolutionFamily {
    fn empty(reason: String) -> Self {
        SolutionFamily {
            kind: FamilyKind::Empty,
            reason,
            sigma_p: None,
            sigma_q: None,
            slope: None,
        }
    }

    /// Construct the member at parameter `t` (before the self-map filter).
    ///
    /// Two-point families use `t` as the multiplicative factor (`t != 0`);
    /// parabolic families use it as the affine translation term.
    pub fn member(&self, t: Complex) -> Result<Moebius, Error> {
        match self.kind {
            FamilyKind::Empty => Err(Error::InvalidArgument(
                "the solution family is empty".into(),
            )),
            FamilyKind::Degenerate => Err(Error::InvalidArgument(
                "the solution family is degenerate; reclassify the inputs".into(),
            )),
            FamilyKind::TwoPoint => {
                if t.norm() < 1e-15 {
                    return Err(Error::InvalidArgument(
                        "the multiplicative parameter must be nonzero".into(),
                    ));
                }
                let sp = self.sigma_p.as_ref().unwrap();
                let sq = self.sigma_q.as_ref().unwrap();
                let scaling = Moebius {
                    a: t,
                    b: Complex::new(0.0, 0.0),
                    c: Complex::new(0.0, 0.0),
                    d: Complex::new(1.0, 0.0),
                };
                Ok(sq.inverse().compose(&scaling).compose(sp))
            }
            FamilyKind::ParabolicAffine => {
                let sp = self.sigma_p.as_ref().unwrap();
                let sq = self.sigma_q.as_ref().unwrap();
                let affine = Moebius {
                    a: Complex::new(self.slope.unwrap(), 0.0),
                    b: t,
                    c: Complex::new(0.0, 0.0),
                    d: Complex::new(1.0, 0.0),
                };
                Ok(sq.inverse().compose(&affine).compose(sp))
            }
        }
    }

    /// The member at `t` when it is a self-map of the disk.
    pub fn member_if_self_map(&self, t: Complex) -> Option<Moebius> {
        let m = self.member(t).ok()?;
        if crate::classify::self_map_report(&m).is_self_map {
            Some(m)
        } else {
            None
        }
    }

    /// Rejection-sample verified members. Deterministic in `seed`.
    pub fn sample(&self, seed: u64, count: usize, max_attempts: usize) -> Vec<Moebius> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        if matches!(self.kind, FamilyKind::Empty | FamilyKind::Degenerate) {
            return out;
        }
        for _ in 0..max_attempts {
            if out.len() >= count {
                break;
            }
            let t = match self.kind {
                FamilyKind::TwoPoint => {
                    // The canonical frames make positive real factors
                    // admissible whenever any member is a self-map; fully
                    // complex ones cover rotation-like members.
                    let mag = (rng.random_range(-2.0..1.0f64)).exp();
                    if rng.random_bool(0.5) {
                        Complex::new(mag, 0.0)
                    } else {
                        Complex::from_polar(mag, rng.random_range(0.0..std::f64::consts::TAU))
                    }
                }
                FamilyKind::ParabolicAffine => Complex::new(
                    rng.random_range(0.0..4.0f64),
                    rng.random_range(-4.0..4.0f64),
                ),
                _ => unreachable!(),
            };
            if let Some(m) = self.member_if_self_map(t) {
                out.push(m);
            }
        }
        out
    }
}

/// Map sending `p` to 0 and `p_other` to infinity.
fn two_point_collapse(p: &SpherePoint, p_other: &SpherePoint) -> Result<Moebius, Error> {
    let one = Complex::new(1.0, 0.0);
    let zero = Complex::new(0.0, 0.0);
    match (p.to_complex(), p_other.to_complex()) {
        (Some(zp), Some(zr)) => Moebius::new(one, -zp, one, -zr),
        (Some(zp), None) => Moebius::new(one, -zp, zero, one),
        (None, Some(zr)) => Moebius::new(zero, one, one, -zr),
        (None, None) => Err(Error::InvalidArgument(
            "fixed points must be distinct".into(),
        )),
    }
}

/// Rescale a collapse frame so the image of the disk is canonical.
///
/// `two_point_collapse` fixes only where the fixed points go; the disk itself
/// lands on a region whose orientation depends on the input, and the
/// admissible factors of `w -> t w` between two raw regions can form a ray of
/// input-dependent phase, which rejection sampling cannot hit. One complex
/// scalar per frame sends the region to a canonical one:
///
/// - Denjoy-Wolff point on the circle, other fixed point off it: the image is
///   a disk through 0; rotate and scale it onto the disk of radius 1/2 about
///   1/2.
/// - Other fixed point on the circle: the image is a half-plane; send it to
///   the right half-plane when 0 sits on its edge, to `Re w > -1/2` when 0
///   sits inside.
/// - Both fixed points off the circle: the image is a bounded region around
///   0 and every small factor is already admissible; leave it alone.
///
/// Between canonical regions, every pair admitting self-map members admits
/// members with positive real factors.
fn canonical_frame(sigma: Moebius, cls: &DiskMapClass) -> Result<Moebius, Error> {
    let p = cls
        .dw
        .as_ref()
        .and_then(|s| s.to_complex())
        .ok_or_else(|| Error::InvalidArgument("denjoy-wolff point must be finite".into()))?;
    let other = cls.other_fixed.as_ref().unwrap();
    let p_boundary = p.norm() >= 1.0 - tol::INTERIOR_BAND;
    let r_on_circle = other
        .to_complex()
        .is_some_and(|r| (r.norm() - 1.0).abs() <= tol::INTERIOR_BAND);
    let u = if r_on_circle {
        // The pole sits on the unit circle, so the circle maps to a line; two
        // image points away from the pole give its direction, and the image
        // of the disk center tells which side the region is.
        let r = other.to_complex().unwrap();
        let third = Complex::from_polar(1.0, std::f64::consts::TAU / 3.0);
        let w1 = sigma.eval(r * third)?;
        let w2 = sigma.eval(r * third.conj())?;
        let mut normal = (w2 - w1) * Complex::new(0.0, 1.0);
        let w_ref = sigma.eval(Complex::new(0.0, 0.0))?;
        if (normal.conj() * (w_ref - w1)).re < 0.0 {
            normal = -normal;
        }
        if p_boundary {
            // Line through 0 = sigma(p): turn the inward normal to +1.
            normal.inv()
        } else {
            // 0 interior at distance h from the line: shift it to Re = -1/2.
            let nu = normal / normal.norm();
            let h = -(nu.conj() * w1).re;
            nu.conj() / (2.0 * h)
        }
    } else if p_boundary {
        // The image is a disk through 0 = sigma(p). A Moebius map carries
        // point pairs symmetric across a circle to symmetric pairs, so the
        // image of the pole's reflection across the unit circle is symmetric
        // to the image of the pole (infinity), which is the center.
        let center = match other.to_complex() {
            Some(r) => sigma.eval(r.conj().inv())?,
            None => sigma.eval(Complex::new(0.0, 0.0))?,
        };
        (2.0 * center).inv()
    } else {
        return Ok(sigma);
    };
    if !u.is_finite() || u.norm() < 1e-100 {
        return Ok(sigma);
    }
    let scale = Moebius {
        a: u,
        b: Complex::new(0.0, 0.0),
        c: Complex::new(0.0, 0.0),
        d: Complex::new(1.0, 0.0),
    };
    Ok(scale.compose(&sigma))
}

/// Cayley map `T(z) = (tau + z)/(tau - z)` at a boundary point.
fn cayley_at(tau: Complex) -> Moebius {
    let one = Complex::new(1.0, 0.0);
    Moebius {
        a: one,
        b: tau,
        c: -one,
        d: tau,
    }
}

/// Solve `f . phi = psi . f` for linear fractional self-maps `f`.
///
/// `phi` and `psi` must not be the identity. The returned family is exact:
/// every member satisfies the equation to machine precision, and every linear
/// fractional solution arises as a member.
pub fn solve_family(phi: &Moebius, psi: &Moebius) -> Result<SolutionFamily, Error> {
    let phi_cls = classify(phi)?;
    let psi_cls = classify(psi)?;
    if phi_cls.tag == ClassTag::Identity || psi_cls.tag == ClassTag::Identity {
        return Err(Error::IdentityInput { op: "solve_family" });
    }
    if phi_cls.boundary_case || psi_cls.boundary_case {
        return Ok(SolutionFamily {
            kind: FamilyKind::Degenerate,
            reason: "a map classifies within tolerance of a decision boundary; the family construction is unreliable here".into(),
            sigma_p: None,
            sigma_q: None,
            slope: None,
        });
    }
    let compat = type_compatible(phi_cls.tag, psi_cls.tag);
    if compat.verdict == Verdict::No {
        return Ok(SolutionFamily::empty(compat.reason));
    }

    match (phi_cls.tag.family(), psi_cls.tag.family()) {
        (Family::Parabolic, Family::Parabolic) => {
            let p = finite_dw(&phi_cls)?;
            let q = finite_dw(&psi_cls)?;
            // Half-plane translations B = p phi''(p), C = q psi''(q); the
            // affine slope must be their ratio, and only a positive real
            // slope gives a half-plane self-map.
            let b_phi = p * phi.jet_at(p)?.d2;
            let b_psi = q * psi.jet_at(q)?.d2;
            let ratio = b_psi / b_phi;
            if ratio.im.abs() > 1e-8 * ratio.norm() || ratio.re <= 0.0 {
                return Ok(SolutionFamily::empty(format!(
                    "incompatible translation directions: the slope would be {} which is not a positive real",
                    fmt_complex(ratio)
                )));
            }
            Ok(SolutionFamily {
                kind: FamilyKind::ParabolicAffine,
                reason: format!(
                    "solutions conjugate to w -> {} w + t on the half-plane, Re t >= 0",
                    ratio.re
                ),
                sigma_p: Some(cayley_at(p)),
                sigma_q: Some(cayley_at(q)),
                slope: Some(ratio.re),
            })
        }
        _ => {
            // Elliptic/hyperbolic sources: two fixed points on each side.
            let mult_gap = (phi_cls.multiplier - psi_cls.multiplier).norm();
            if mult_gap > tol::MULTIPLIER_EQ {
                return Ok(SolutionFamily::empty(format!(
                    "multiplier mismatch: phi'(p) = {} but psi'(q) = {}",
                    fmt_complex(phi_cls.multiplier),
                    fmt_complex(psi_cls.multiplier)
                )));
            }
            let sigma_p = canonical_frame(
                two_point_collapse(
                    phi_cls.dw.as_ref().unwrap(),
                    phi_cls.other_fixed.as_ref().unwrap(),
                )?,
                &phi_cls,
            )?;
            let sigma_q = canonical_frame(
                two_point_collapse(
                    psi_cls.dw.as_ref().unwrap(),
                    psi_cls.other_fixed.as_ref().unwrap(),
                )?,
                &psi_cls,
            )?;
            Ok(SolutionFamily {
                kind: FamilyKind::TwoPoint,
                reason:
                    "solutions conjugate to w -> t w between the collapsed fixed-point frames"
                        .into(),
                sigma_p: Some(sigma_p),
                sigma_q: Some(sigma_q),
                slope: None,
            })
        }
    }
}

/// Max pointwise residual `|f(phi(z)) - psi(f(z))|` over sample points.
pub fn residual(
    f: &dyn DiskMap,
    phi: &dyn DiskMap,
    psi: &dyn DiskMap,
    samples: &[Complex],
) -> Result<f64, Error> {
    let mut worst = 0.0f64;
    for &z in samples {
        let lhs = f.eval(phi.eval(z)?)?;
        let rhs = psi.eval(f.eval(z)?)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// Default sample grid: 16 equally spaced points on each of the circles of
/// radius 0.3, 0.6 and 0.9.
pub fn sample_grid() -> Vec<Complex> {
    let mut grid = Vec::with_capacity(48);
    for r in [0.3, 0.6, 0.9] {
        for k in 0..16 {
            let theta = std::f64::consts::TAU * k as f64 / 16.0;
            grid.push(Complex::from_polar(r, theta));
        }
    }
    grid
}

/// [`residual`] over the default 48-point grid.
pub fn residual_on_grid(
    f: &dyn DiskMap,
    phi: &dyn DiskMap,
    psi: &dyn DiskMap,
) -> Result<f64, Error> {
    residual(f, phi, psi, &sample_grid())
}

/// Derivative `f'(p) = phi''(p) / psi''(q)` of any conformal intertwining map
/// between two parabolic self-maps, evaluated at the common boundary data.
///
/// When the pair admits solutions at all (positive real translation ratio),
/// the product `p * conj(q) * f'(p)` is a positive real; this is validated and
/// an internal error is raised if violated.
pub fn parabolic_conformal_derivative(phi: &Moebius, psi: &Moebius) -> Result<Complex, Error> {
    let phi_cls = classify(phi)?;
    let psi_cls = classify(psi)?;
    for cls in [&phi_cls, &psi_cls] {
        if cls.tag.family() != Family::Parabolic {
            return Err(Error::WrongClass {
                op: "parabolic_conformal_derivative",
                expected: "a parabolic self-map",
                found: cls.tag.to_string(),
            });
        }
    }
    let p = finite_dw(&phi_cls)?;
    let q = finite_dw(&psi_cls)?;
    let phi2 = phi.jet_at(p)?.d2;
    let psi2 = psi.jet_at(q)?.d2;
    let derivative = phi2 / psi2;
    // Family nonempty iff (q psi''(q)) / (p phi''(p)) is a positive real;
    // in that case p conj(q) f'(p) = (p phi''(p)) / (q psi''(q)) > 0.
    let ratio = (q * psi2) / (p * phi2);
    if ratio.im.abs() <= 1e-8 * ratio.norm() && ratio.re > 0.0 {
        let product = p * q.conj() * derivative;
        if product.im.abs() > 1e-8 * product.norm() || product.re <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "conformality transport violated: p conj(q) f'(p) = {} is not a positive real",
                fmt_complex(product)
            )));
        }
    }
    Ok(derivative)
}
