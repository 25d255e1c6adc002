//! Hyperbolic geometry of forward orbits.
//!
//! The hyperbolic (Poincare) distance on the unit disk is
//!
//! ```text
//! rho(z, w) = atanh |(w - z) / (1 - conj(w) z)|
//! ```
//!
//! Self-maps never increase it (Schwarz-Pick), so the step sequence
//! `rho(z_n, z_{n+1})` along a forward orbit is nonincreasing and has a limit.
//! The limit separates the classes with a boundary Denjoy-Wolff point: it is
//! positive for hyperbolic maps (value `log(A)/2` in terms of the half-plane
//! dilation factor) and for parabolic automorphisms (constant steps), while
//! parabolic non-automorphisms have steps decaying to zero like `1/n`.
//! Elliptic non-automorphisms converge to an interior point with geometrically
//! vanishing steps.

use crate::classify::{classify, ClassTag};
use crate::moebius::{complex_pair_list, Complex, DiskMap, Error, Moebius};
use crate::tol;
use serde::Serialize;

/// Hyperbolic distance between two points of the open unit disk.
pub fn hyperbolic_distance(z: Complex, w: Complex) -> Result<f64, Error> {
    if !z.is_finite() || !w.is_finite() {
        return Err(Error::NonFinite);
    }
    if z.norm() >= 1.0 {
        return Err(Error::not_in_disk(z));
    }
    if w.norm() >= 1.0 {
        return Err(Error::not_in_disk(w));
    }
    let r = ((w - z) / (Complex::new(1.0, 0.0) - w.conj() * z)).norm();
    Ok(r.atanh())
}

/// A forward orbit with its hyperbolic step sequence.
#[derive(Debug, Clone, Serialize)]
pub struct Orbit {
    /// `points[0]` is the start; `points[k+1] = m(points[k])`.
    #[serde(with = "complex_pair_list")]
    pub points: Vec<Complex>,
    /// `steps[k] = rho(points[k], points[k+1])`; nonincreasing for self-maps.
    pub steps: Vec<f64>,
    /// Iteration stopped early because the orbit reached the unit circle to
    /// machine precision (`1 - |z|` below the cutoff).
    pub truncated: bool,
}

/// Iterate a map `n` times from `z0`, recording points and hyperbolic steps.
///
/// Stops early (with `truncated` set) once `1 - |z|` drops below
/// [`tol::ORBIT_BOUNDARY_STOP`], where hyperbolic distances lose all accuracy.
pub fn orbit(map: &dyn DiskMap, z0: Complex, n: usize) -> Result<Orbit, Error> {
    if !z0.is_finite() {
        return Err(Error::NonFinite);
    }
    if z0.norm() >= 1.0 {
        return Err(Error::not_in_disk(z0));
    }
    let mut points = Vec::with_capacity(n + 1);
    let mut steps = Vec::with_capacity(n);
    let mut truncated = false;
    points.push(z0);
    for _ in 0..n {
        let z = *points.last().unwrap();
        let next = map.eval(z)?;
        if 1.0 - next.norm() < tol::ORBIT_BOUNDARY_STOP {
            truncated = true;
            break;
        }
        steps.push(hyperbolic_distance(z, next)?);
        points.push(next);
    }
    Ok(Orbit {
        points,
        steps,
        truncated,
    })
}

/// Verdict of the step-size dichotomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepClass {
    /// Steps tend to zero: elliptic non-automorphisms (geometric decay) and
    /// parabolic non-automorphisms (decay like `1/n`).
    ZeroStep,
    /// Steps stabilize at a positive value: hyperbolic maps and parabolic
    /// automorphisms.
    PositiveStep,
}

/// Classify the limiting step behaviour of the orbit of `m` from `z0`.
///
/// `n` steps are taken (default [`tol::STEP_COUNT`]) and the verdict is
/// ZeroStep when the final step is below `threshold` or when the sequence is
/// still decaying: `steps[n/2] - steps[last] > threshold`. Positive-step maps
/// stabilize geometrically, so their midpoint-to-end decrease is far below any
/// sensible threshold, while the `1/n` decay of parabolic non-automorphisms
/// keeps the decrease near `steps[n/2] / 2`.
///
/// Errors on the identity and on elliptic automorphisms, whose orbits do not
/// converge to the Denjoy-Wolff point.
pub fn step_class(m: &Moebius, z0: Complex, n: usize, threshold: f64) -> Result<StepClass, Error> {
    let cls = classify(m)?;
    match cls.tag {
        ClassTag::Identity => {
            return Err(Error::IdentityInput { op: "step_class" });
        }
        ClassTag::EllipticAut => {
            return Err(Error::WrongClass {
                op: "step_class",
                expected: "a self-map whose orbits converge (not an elliptic automorphism)",
                found: cls.tag.to_string(),
            });
        }
        _ => {}
    }
    if n < 4 {
        return Err(Error::InvalidArgument(format!(
            "step_class needs at least 4 iterations, got {n}"
        )));
    }
    let orb = orbit(m, z0, n)?;
    if orb.steps.len() < 2 {
        // The orbit hit the boundary cutoff almost immediately; only strongly
        // hyperbolic maps do that, and their steps are positive.
        return Ok(StepClass::PositiveStep);
    }
    let last = *orb.steps.last().unwrap();
    let mid = orb.steps[orb.steps.len() / 2];
    if last < threshold || (mid - last) > threshold {
        Ok(StepClass::ZeroStep)
    } else {
        Ok(StepClass::PositiveStep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn distance_from_zero_is_atanh_of_modulus() {
        let d = hyperbolic_distance(c(0.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!((d - 0.5 * 3.0f64.ln()).abs() < 1e-15);
        assert!((d - 0.5f64.atanh()).abs() < 1e-15);
    }

    #[test]
    fn distance_is_symmetric_and_vanishes_on_the_diagonal() {
        let z = c(0.3, -0.4);
        let w = c(-0.1, 0.6);
        let d1 = hyperbolic_distance(z, w).unwrap();
        let d2 = hyperbolic_distance(w, z).unwrap();
        assert!((d1 - d2).abs() < 1e-15);
        assert_eq!(hyperbolic_distance(z, z).unwrap(), 0.0);
    }

    #[test]
    fn distance_rejects_points_outside_the_open_disk() {
        assert!(matches!(
            hyperbolic_distance(c(1.0, 0.0), c(0.0, 0.0)),
            Err(Error::NotInDisk { .. })
        ));
        assert!(matches!(
            hyperbolic_distance(c(0.0, 0.0), c(0.0, -1.2)),
            Err(Error::NotInDisk { .. })
        ));
    }

    #[test]
    fn automorphisms_preserve_the_distance() {
        let g = Moebius::real(3.0, 1.0, 1.0, 3.0).unwrap();
        let z = c(0.2, 0.5);
        let w = c(-0.3, -0.1);
        let d = hyperbolic_distance(z, w).unwrap();
        let dg = hyperbolic_distance(g.eval(z).unwrap(), g.eval(w).unwrap()).unwrap();
        assert!((d - dg).abs() < 1e-12);
    }

    #[test]
    fn self_maps_do_not_increase_the_distance() {
        let m = Moebius::real(1.0, 1.0, 0.0, 2.0).unwrap();
        let z = c(0.2, 0.5);
        let w = c(-0.3, -0.1);
        let d = hyperbolic_distance(z, w).unwrap();
        let dm = hyperbolic_distance(m.eval(z).unwrap(), m.eval(w).unwrap()).unwrap();
        assert!(dm <= d + 1e-12);
    }

    #[test]
    fn orbit_of_the_half_dilation_halves_the_point() {
        let m = Moebius::real(1.0, 0.0, 0.0, 2.0).unwrap();
        let orb = orbit(&m, c(0.8, 0.0), 3).unwrap();
        assert_eq!(orb.points.len(), 4);
        for (got, want) in orb.points.iter().zip([0.8, 0.4, 0.2, 0.1]) {
            assert!((got - c(want, 0.0)).norm() < 1e-15);
        }
        assert!(!orb.truncated);
        assert_eq!(orb.steps.len(), 3);
    }

    #[test]
    fn orbit_steps_are_nonincreasing() {
        for m in [
            Moebius::real(1.0, 1.0, 0.0, 2.0).unwrap(),
            Moebius::real(1.0, 1.0, -1.0, 3.0).unwrap(),
            Moebius::real(1.0, 0.0, -1.0, 2.0).unwrap(),
        ] {
            let orb = orbit(&m, c(0.1, -0.2), 64).unwrap();
            // Check while the orbit is comfortably interior; within 1e-6 of
            // the circle the subtraction 1 - conj(w) z cancels catastrophically
            // and the computed steps jitter well above any honest slack.
            for (k, pair) in orb.steps.windows(2).enumerate() {
                if 1.0 - orb.points[k + 2].norm() < 1e-6 {
                    break;
                }
                assert!(pair[1] <= pair[0] + 1e-10, "steps increased: {pair:?}");
            }
        }
    }

    #[test]
    fn strongly_attracting_orbit_truncates_at_the_boundary() {
        let m = Moebius::real(1.0, 1.0, 0.0, 2.0).unwrap(); // dw = 1, 1 - z_n ~ 2^-n
        let orb = orbit(&m, c(0.0, 0.0), 200).unwrap();
        assert!(orb.truncated);
        assert!(orb.points.len() < 80, "stopped after {}", orb.points.len());
        assert!(orb.points.iter().all(|z| z.norm() < 1.0));
    }

    #[test]
    fn hyperbolic_steps_stabilize_at_half_log_of_the_dilation() {
        let m = Moebius::real(1.0, 1.0, 0.0, 2.0).unwrap(); // half-plane factor 2
        let orb = orbit(&m, c(0.0, 0.0), 40).unwrap();
        let last = *orb.steps.last().unwrap();
        assert!((last - 0.5 * 2.0f64.ln()).abs() < 1e-3, "limit step {last}");
    }

    #[test]
    fn parabolic_automorphism_steps_are_constant() {
        let m = Moebius::new(c(2.0, -1.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 1.0)).unwrap();
        let orb = orbit(&m, c(0.0, 0.0), 64).unwrap();
        let first = orb.steps[0];
        assert!((first - (1.0 / 5.0f64.sqrt()).atanh()).abs() < 1e-12);
        for s in &orb.steps {
            assert!((s - first).abs() < 1e-9, "step {s} differs from {first}");
        }
    }

    #[test]
    fn step_dichotomy_on_the_canonical_examples() {
        let z0 = c(0.0, 0.0);
        let parabolic_na = Moebius::real(1.0, 1.0, -1.0, 3.0).unwrap();
        assert_eq!(
            step_class(&parabolic_na, z0, tol::STEP_COUNT, tol::STEP_THRESHOLD).unwrap(),
            StepClass::ZeroStep
        );
        let parabolic_aut =
            Moebius::new(c(2.0, -1.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 1.0)).unwrap();
        assert_eq!(
            step_class(&parabolic_aut, z0, tol::STEP_COUNT, tol::STEP_THRESHOLD).unwrap(),
            StepClass::PositiveStep
        );
        let hyperbolic = Moebius::real(1.0, 1.0, 0.0, 2.0).unwrap();
        assert_eq!(
            step_class(&hyperbolic, z0, tol::STEP_COUNT, tol::STEP_THRESHOLD).unwrap(),
            StepClass::PositiveStep
        );
        let elliptic_na = Moebius::real(1.0, 0.0, 0.0, 2.0).unwrap();
        assert_eq!(
            step_class(&elliptic_na, c(0.5, 0.0), tol::STEP_COUNT, tol::STEP_THRESHOLD).unwrap(),
            StepClass::ZeroStep
        );
    }

    #[test]
    fn step_class_rejects_identity_and_elliptic_automorphisms() {
        assert!(matches!(
            step_class(&Moebius::identity(), c(0.1, 0.0), 256, 1e-6),
            Err(Error::IdentityInput { .. })
        ));
        let rot = Moebius::real(-1.0, 0.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            step_class(&rot, c(0.1, 0.0), 256, 1e-6),
            Err(Error::WrongClass { .. })
        ));
    }

    #[test]
    fn parabolic_non_aut_steps_decay_like_the_reciprocal_of_n() {
        // Half-plane translation w -> w + 1: from w_0 = 1 the n-th step is
        // atanh(1/(2n+3)), so the 256-step tail is ~2e-3 but still decaying.
        let m = Moebius::real(1.0, 1.0, -1.0, 3.0).unwrap();
        let orb = orbit(&m, c(0.0, 0.0), 256).unwrap();
        let last = *orb.steps.last().unwrap();
        assert!(
            (last - (1.0f64 / 513.0).atanh()).abs() < 1e-9,
            "closed form mismatch: {last}"
        );
        assert!(last > tol::STEP_THRESHOLD, "literal threshold alone would misread this map");
        let mid = orb.steps[orb.steps.len() / 2];
        assert!(mid - last > 1e-3, "decay margin {}", mid - last);
    }
}
