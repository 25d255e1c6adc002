//! Seeded random generators for self-maps of every class.
//!
//! All generators draw from a caller-supplied RNG so sweeps are reproducible
//! from a single seed. Class-specific generators synthesize maps through the
//! normal forms (half-plane coordinates or the centered elliptic form), so
//! the advertised class holds by construction rather than by rejection.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classify::{from_halfplane, ClassTag, HalfPlaneAffine};
use crate::moebius::{Complex, Moebius};

/// A deterministic RNG for reproducible sweeps.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A point of the open disk, kept away from the boundary.
pub fn interior_point<R: Rng>(r: &mut R) -> Complex {
    let radius = r.random_range(0.0..0.85);
    let angle = r.random_range(0.0..std::f64::consts::TAU);
    Complex::from_polar(radius, angle)
}

/// A point of the unit circle.
pub fn boundary_point<R: Rng>(r: &mut R) -> Complex {
    Complex::from_polar(1.0, r.random_range(0.0..std::f64::consts::TAU))
}

fn complex_box<R: Rng>(r: &mut R, half_width: f64) -> Complex {
    Complex::new(
        r.random_range(-half_width..half_width),
        r.random_range(-half_width..half_width),
    )
}

/// A raw coefficient matrix with entries in a box, not degenerate, with no
/// self-map guarantee; exercises the raw classification and margin paths.
pub fn matrix<R: Rng>(r: &mut R) -> Moebius {
    loop {
        if let Ok(m) = Moebius::new(
            complex_box(r, 2.0),
            complex_box(r, 2.0),
            complex_box(r, 2.0),
            complex_box(r, 2.0),
        ) {
            return m;
        }
    }
}

/// A disk automorphism `e^{i theta} (z - w)/(1 - conj(w) z)`.
pub fn automorphism<R: Rng>(r: &mut R) -> Moebius {
    let w = interior_point(r);
    let phase = Complex::from_polar(1.0, r.random_range(0.0..std::f64::consts::TAU));
    Moebius::new(phase, -phase * w, -w.conj(), Complex::new(1.0, 0.0))
        .expect("automorphism matrix is nondegenerate")
}

fn involution_at(p: Complex) -> Moebius {
    Moebius {
        a: Complex::new(-1.0, 0.0),
        b: p,
        c: -p.conj(),
        d: Complex::new(1.0, 0.0),
    }
}

/// An elliptic automorphism: a rotation conjugated to a random fixed point.
pub fn elliptic_aut<R: Rng>(r: &mut R) -> Moebius {
    let p = interior_point(r);
    let theta = r.random_range(0.15..std::f64::consts::TAU - 0.15);
    let rot = Moebius {
        a: Complex::from_polar(1.0, theta),
        b: Complex::new(0.0, 0.0),
        c: Complex::new(0.0, 0.0),
        d: Complex::new(1.0, 0.0),
    };
    let alpha = involution_at(p);
    alpha.compose(&rot).compose(&alpha)
}

/// An elliptic non-automorphism built from the centered normal form
/// `z -> A z/(C z + 1)` with `|A| + |C| < 1`, then moved to a random point.
pub fn elliptic_non_aut<R: Rng>(r: &mut R) -> Moebius {
    let mod_a = r.random_range(0.05..0.9);
    let a = Complex::from_polar(mod_a, r.random_range(0.0..std::f64::consts::TAU));
    let mod_c = r.random_range(0.0..(1.0 - mod_a) * 0.95);
    let c = Complex::from_polar(mod_c, r.random_range(0.0..std::f64::consts::TAU));
    let normal = Moebius {
        a,
        b: Complex::new(0.0, 0.0),
        c,
        d: Complex::new(1.0, 0.0),
    };
    let alpha = involution_at(interior_point(r));
    alpha.compose(&normal).compose(&alpha)
}

/// A hyperbolic automorphism: half-plane `w -> a w + b` with `a > 1`, `b`
/// purely imaginary.
pub fn hyperbolic_aut<R: Rng>(r: &mut R) -> Moebius {
    let h = HalfPlaneAffine {
        a: r.random_range(0.1..2.0f64).exp() + 0.05,
        b: Complex::new(0.0, r.random_range(-2.0..2.0)),
        tau: boundary_point(r),
    };
    from_halfplane(&h).expect("hyperbolic automorphism parameters are admissible")
}

/// A hyperbolic non-automorphism: half-plane dilation with `Re b > 0`.
pub fn hyperbolic_non_aut<R: Rng>(r: &mut R) -> Moebius {
    let h = HalfPlaneAffine {
        a: r.random_range(0.1..2.0f64).exp() + 0.05,
        b: Complex::new(r.random_range(0.05..2.0), r.random_range(-2.0..2.0)),
        tau: boundary_point(r),
    };
    from_halfplane(&h).expect("hyperbolic parameters are admissible")
}

/// A parabolic automorphism: half-plane translation by a nonzero imaginary b.
pub fn parabolic_aut<R: Rng>(r: &mut R) -> Moebius {
    let sign = if r.random_bool(0.5) { 1.0 } else { -1.0 };
    let h = HalfPlaneAffine {
        a: 1.0,
        b: Complex::new(0.0, sign * r.random_range(0.1..3.0)),
        tau: boundary_point(r),
    };
    from_halfplane(&h).expect("parabolic automorphism parameters are admissible")
}

/// A parabolic non-automorphism: half-plane translation with `Re b > 0`.
pub fn parabolic_non_aut<R: Rng>(r: &mut R) -> Moebius {
    let h = HalfPlaneAffine {
        a: 1.0,
        b: Complex::new(r.random_range(0.05..3.0), r.random_range(-3.0..3.0)),
        tau: boundary_point(r),
    };
    from_halfplane(&h).expect("parabolic parameters are admissible")
}

/// A random self-map of the requested class.
pub fn of_class<R: Rng>(r: &mut R, tag: ClassTag) -> Moebius {
    match tag {
        ClassTag::Identity => Moebius::identity(),
        ClassTag::EllipticAut => elliptic_aut(r),
        ClassTag::EllipticNonAut => elliptic_non_aut(r),
        ClassTag::HyperbolicAut => hyperbolic_aut(r),
        ClassTag::HyperbolicNonAut => hyperbolic_non_aut(r),
        ClassTag::ParabolicAut => parabolic_aut(r),
        ClassTag::ParabolicNonAut => parabolic_non_aut(r),
    }
}

/// A random self-map with the class itself drawn uniformly.
pub fn self_map<R: Rng>(r: &mut R) -> Moebius {
    let tags = ClassTag::ALL;
    let pick = r.random_range(0..tags.len());
    of_class(r, tags[pick])
}
