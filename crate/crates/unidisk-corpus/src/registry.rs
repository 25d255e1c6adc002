//! Named non-linear-fractional self-maps used by corpus records.
//!
//! Each entry is a closed-form evaluator on the open unit disk. Where a
//! branch choice matters, the principal branch on the plane slit along the
//! negative real axis is used; every map below composes the Cayley transfer
//! `w = (1+z)/(1-z)` onto the right half-plane first, where the principal
//! logarithm and square root are single-valued.

use std::f64::consts::{PI, TAU};

use unidisk_core::moebius::{Complex, DiskMap, Error};

/// A named evaluable self-map of the disk.
pub struct NamedMap {
    /// Registry key used in corpus files and on the command line.
    pub name: &'static str,
    /// Closed form and branch choice, in plain language.
    pub describe: &'static str,
    eval_fn: fn(Complex) -> Result<Complex, Error>,
}

impl DiskMap for NamedMap {
    fn eval(&self, z: Complex) -> Result<Complex, Error> {
        if !z.is_finite() {
            return Err(Error::NonFinite);
        }
        let value = (self.eval_fn)(z)?;
        if !value.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(value)
    }

    fn label(&self) -> String {
        self.name.to_owned()
    }
}

fn one() -> Complex {
    Complex::new(1.0, 0.0)
}

/// Cayley transfer to the right half-plane; poles at z = 1.
fn to_halfplane(z: Complex) -> Result<Complex, Error> {
    let den = one() - z;
    if den.norm() == 0.0 {
        return Err(Error::NonFinite);
    }
    Ok((one() + z) / den)
}

fn square(z: Complex) -> Result<Complex, Error> {
    Ok(z * z)
}

fn exp_cayley(z: Complex) -> Result<Complex, Error> {
    let w = to_halfplane(z)?;
    Ok((-0.5 * w).exp())
}

fn log_spiral(z: Complex) -> Result<Complex, Error> {
    let ln2 = std::f64::consts::LN_2;
    let w = (one() - z).inv().ln();
    let scale = 0.5 * (-PI * PI / ln2).exp();
    Ok(scale * (Complex::new(0.0, TAU / ln2) * w).exp())
}

fn sqrt_cayley(z: Complex) -> Result<Complex, Error> {
    let s = to_halfplane(z)?.sqrt();
    Ok((s - one()) / (s + one()))
}

fn odd_cubic(z: Complex) -> Result<Complex, Error> {
    Ok(0.5 * (z + z * z * z))
}

static REGISTRY: [NamedMap; 5] = [
    NamedMap {
        name: "example_2_1_square",
        describe: "z^2: doubles the interior fixed point's rotation number; derivative vanishes at 0",
        eval_fn: square,
    },
    NamedMap {
        name: "example_2_2_exp",
        describe: "exp(-(1+z)/(2(1-z))): a half-plane exponential, invariant under the vertical translation by 4*pi*i",
        eval_fn: exp_cayley,
    },
    NamedMap {
        name: "example_2_3_log",
        describe: "(1/2) exp(-pi^2/ln 2) exp((2*pi*i/ln 2) Log(1/(1-z))), principal logarithm; maps the disk into a compact subset and has no radial limit at 1",
        eval_fn: log_spiral,
    },
    NamedMap {
        name: "example_3_2_sqrt",
        describe: "Cayley conjugate of the principal square root of the right half-plane; angular derivative at 1 is infinite",
        eval_fn: sqrt_cayley,
    },
    NamedMap {
        name: "example_3_5_odd_cubic",
        describe: "(z + z^3)/2: an odd self-map commuting with the half turn, not linear fractional",
        eval_fn: odd_cubic,
    },
];

/// Look up a registry map by name.
pub fn lookup(name: &str) -> Option<&'static NamedMap> {
    REGISTRY.iter().find(|m| m.name == name)
}

/// All registry names, in bundled order.
pub fn names() -> Vec<&'static str> {
    REGISTRY.iter().map(|m| m.name).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use unidisk_core::intertwine::sample_grid;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn every_registry_map_sends_the_grid_into_the_disk() {
        for name in names() {
            let map = lookup(name).unwrap();
            for z in sample_grid() {
                let w = map.eval(z).unwrap();
                assert!(w.norm() < 1.0, "{name} leaves the disk at {z}: {w}");
            }
        }
    }

    #[test]
    fn the_exponential_map_is_invariant_under_its_translation() {
        // The half-plane picture of the parabolic automorphism is w + 4*pi*i,
        // which the exponential kills exactly.
        let f = lookup("example_2_2_exp").unwrap();
        let z = c(0.3, -0.4);
        let w = (c(1.0, 0.0) + z) / (c(1.0, 0.0) - z) + c(0.0, 2.0 * TAU);
        let back = (w - c(1.0, 0.0)) / (w + c(1.0, 0.0));
        let gap = (f.eval(z).unwrap() - f.eval(back).unwrap()).norm();
        assert!(gap < 1e-14, "translation moved the value by {gap:.2e}");
    }

    #[test]
    fn the_square_root_map_fixes_the_positive_radius() {
        let f = lookup("example_3_2_sqrt").unwrap();
        let w = f.eval(c(0.5, 0.0)).unwrap();
        assert!(w.im.abs() < 1e-15 && w.re > 0.0 && w.re < 0.5);
    }

    #[test]
    fn unknown_names_are_absent() {
        assert!(lookup("example_9_9_missing").is_none());
    }

    #[test]
    fn registry_maps_reject_nonfinite_input() {
        let f = lookup("example_2_1_square").unwrap();
        assert!(f.eval(c(f64::NAN, 0.0)).is_err());
        let g = lookup("example_2_2_exp").unwrap();
        assert!(g.eval(c(1.0, 0.0)).is_err());
    }
}
