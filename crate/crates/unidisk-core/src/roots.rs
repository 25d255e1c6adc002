//! Iteration roots and embedding into a continuous iteration flow.
//!
//! An elliptic self-map with interior fixed point `p` is conjugate, via the
//! involution exchanging `p` with the origin, to the normal form
//!
//! ```text
//!     z -> A z / (C z + 1),   |A| + |C| <= 1,
//! ```
//!
//! where `A` is the multiplier and `|C|` measures how far the map is from a
//! plain dilation. Matrix powers show an n-th root of this form is
//! `z -> a z / (c z + 1)` with `a^n = A` and `c = C (a - 1)/(A - 1)`, so the
//! candidate for each n-th root `a` of `A` is a self-map exactly when
//!
//! ```text
//!     (1 - |a|) |1 - A| >= |C| |1 - a|,
//! ```
//!
//! that is, when the ratio `r(a) = (1 - |a|)/|1 - a|` is at least the
//! obstruction constant `kappa = |C|/|1 - A|`. The identity
//! `|1 - a| = |1 - b| |1 + b| <= (1 + |b|) |1 - b|` for `b^2 = a` shows
//! `r(b) <= r(a)`: the ratio only decreases down a square-root branch, so a
//! branch that falls below `kappa` never recovers and the embedding search
//! can prune it for good.
//!
//! Hyperbolic and parabolic self-maps always embed: in half-plane
//! coordinates they are `w -> A w + B` with `A >= 1` and `Re B >= 0`, and the
//! flow `w -> A^t w + B (A^t - 1)/(A - 1)` (or `w -> w + t B` when `A = 1`)
//! stays admissible for every `t >= 0`.

use serde::Serialize;

use crate::classify::{cayley_conjugate, classify, from_halfplane, Family, HalfPlaneAffine};
use crate::moebius::{complex_pair, Complex, Error, Moebius};
use crate::tol;

/// An elliptic self-map rewritten as `z -> A z / (C z + 1)` about its fixed point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EllipticNormalForm {
    /// Multiplier `A` at the interior fixed point.
    #[serde(with = "complex_pair")]
    pub multiplier: Complex,
    /// Tilt coefficient `C`; zero exactly for dilations and automorphisms.
    #[serde(with = "complex_pair")]
    pub coefficient: Complex,
    /// The interior fixed point the form is centered on.
    #[serde(with = "complex_pair")]
    pub fixed_point: Complex,
}

impl EllipticNormalForm {
    /// The self-inverse disk automorphism exchanging the fixed point with 0.
    pub fn involution(&self) -> Moebius {
        involution(self.fixed_point)
    }

    /// The normal-form coefficient matrix `[[A, 0], [C, 1]]`.
    pub fn matrix(&self) -> Moebius {
        normal_matrix(self.multiplier, self.coefficient)
    }

    /// Conjugate a map in normal-form coordinates back to the disk frame.
    pub fn restore(&self, g: &Moebius) -> Moebius {
        let alpha = self.involution();
        alpha.compose(g).compose(&alpha)
    }

    /// Obstruction constant `kappa = |C| / |1 - A|` for roots and embedding.
    pub fn obstruction(&self) -> f64 {
        self.coefficient.norm() / (Complex::new(1.0, 0.0) - self.multiplier).norm()
    }
}

fn involution(p: Complex) -> Moebius {
    Moebius {
        a: Complex::new(-1.0, 0.0),
        b: p,
        c: -p.conj(),
        d: Complex::new(1.0, 0.0),
    }
}

fn normal_matrix(a: Complex, c: Complex) -> Moebius {
    Moebius {
        a,
        b: Complex::new(0.0, 0.0),
        c,
        d: Complex::new(1.0, 0.0),
    }
}

/// Center an elliptic self-map on its fixed point as `z -> A z / (C z + 1)`.
///
/// The phase of `C` depends on the centering frame; only `|C|` is intrinsic.
pub fn elliptic_normal_form(phi: &Moebius) -> Result<EllipticNormalForm, Error> {
    let cls = classify(phi)?;
    if cls.tag.family() != Family::Elliptic {
        return Err(Error::WrongClass {
            op: "elliptic_normal_form",
            expected: "an elliptic self-map",
            found: cls.tag.to_string(),
        });
    }
    let p = cls
        .dw
        .as_ref()
        .and_then(|q| q.to_complex())
        .ok_or_else(|| Error::InvalidArgument("interior fixed point must be finite".into()))?;
    let alpha = involution(p);
    let hat = alpha.compose(&phi.normalize()).compose(&alpha);
    if hat.b.norm() > 1e-8 * hat.scale() {
        return Err(Error::InvalidArgument(format!(
            "centered matrix does not fix the origin: |b| = {:.3e}",
            hat.b.norm()
        )));
    }
    Ok(EllipticNormalForm {
        multiplier: hat.a / hat.d,
        coefficient: hat.c / hat.d,
        fixed_point: p,
    })
}

/// Root candidate data in normal-form coordinates for a given root `a` of `A`.
fn root_candidate(nf: &EllipticNormalForm, a: Complex) -> (Complex, f64, f64) {
    let one = Complex::new(1.0, 0.0);
    let c = nf.coefficient * (a - one) / (nf.multiplier - one);
    let margin = (1.0 - a.norm()) - c.norm();
    let ratio = (1.0 - a.norm()) / (one - a).norm();
    (c, margin, ratio)
}

/// All n-th roots of an elliptic self-map, principal root first.
///
/// Every root fixes the same interior point, so each of the n complex n-th
/// roots of the multiplier yields one candidate; the candidates that satisfy
/// the self-map inequality are returned. Automorphisms always have exactly n
/// roots; non-automorphisms have between 0 and n.
pub fn roots_elliptic(phi: &Moebius, n: u32) -> Result<Vec<Moebius>, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("root order must be positive".into()));
    }
    let cls = classify(phi)?;
    if cls.tag.family() != Family::Elliptic {
        return Err(Error::WrongClass {
            op: "roots_elliptic",
            expected: "an elliptic self-map",
            found: cls.tag.to_string(),
        });
    }
    let nf = elliptic_normal_form(phi)?;
    let modulus = nf.multiplier.norm().powf(1.0 / f64::from(n));
    let theta = nf.multiplier.arg();
    let mut out = Vec::new();
    for k in 0..n {
        let angle = (theta + std::f64::consts::TAU * f64::from(k)) / f64::from(n);
        let a = Complex::from_polar(modulus, angle);
        let (c, margin, _) = root_candidate(&nf, a);
        if margin >= -tol::ROOT_ADMIT_SLACK {
            out.push(nf.restore(&normal_matrix(a, c)));
        }
    }
    Ok(out)
}

/// The affine half-plane form of the time-t iterate of `w -> Aw + B`.
fn halfplane_at_time(h: &HalfPlaneAffine, t: f64, parabolic: bool) -> HalfPlaneAffine {
    if parabolic {
        HalfPlaneAffine {
            a: 1.0,
            b: h.b * t,
            tau: h.tau,
        }
    } else {
        let at = h.a.powf(t);
        HalfPlaneAffine {
            a: at,
            b: h.b * ((at - 1.0) / (h.a - 1.0)),
            tau: h.tau,
        }
    }
}

/// The unique n-th root of a hyperbolic or parabolic self-map.
///
/// Any root shares the boundary fixed point, and in half-plane coordinates
/// the affine coefficients are forced: the dilation is the positive real
/// n-th root and the translation is scaled to match, so exactly one root
/// exists and it is always admissible.
pub fn root_nonelliptic(phi: &Moebius, n: u32) -> Result<Moebius, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("root order must be positive".into()));
    }
    let cls = classify(phi)?;
    let parabolic = match cls.tag.family() {
        Family::Hyperbolic => false,
        Family::Parabolic => true,
        _ => {
            return Err(Error::WrongClass {
                op: "root_nonelliptic",
                expected: "a hyperbolic or parabolic self-map",
                found: cls.tag.to_string(),
            })
        }
    };
    let h = cayley_conjugate(phi)?;
    from_halfplane(&halfplane_at_time(&h, 1.0 / f64::from(n), parabolic))
}

/// The n-th root of the identity fixing `p` with rotation number `lambda`.
///
/// Every root of the identity is an elliptic automorphism: conjugating the
/// rotation `z -> lambda z` to the fixed point `p` gives one for each n-th
/// root of unity `lambda != 1`, and distinct pairs `(p, lambda)` give
/// distinct maps.
pub fn identity_roots(p: Complex, lambda: Complex, n: u32) -> Result<Moebius, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("root order must be positive".into()));
    }
    if !(p.is_finite() && lambda.is_finite()) {
        return Err(Error::NonFinite);
    }
    if p.norm() >= 1.0 {
        return Err(Error::not_in_disk(p));
    }
    let modulus = lambda.norm();
    if (modulus - 1.0).abs() > tol::ROTATION_ORDER_EPS {
        return Err(Error::NotUnitModulus { modulus });
    }
    if (lambda - Complex::new(1.0, 0.0)).norm() <= tol::ROTATION_ORDER_EPS {
        return Err(Error::IdentityInput {
            op: "identity_roots",
        });
    }
    let power_gap = (lambda.powu(n) - Complex::new(1.0, 0.0)).norm();
    if power_gap > tol::ROTATION_ORDER_EPS {
        return Err(Error::InvalidArgument(format!(
            "lambda must be an n-th root of unity: |lambda^{n} - 1| = {power_gap:.3e}"
        )));
    }
    let alpha = involution(p);
    let rot = normal_matrix(lambda, Complex::new(0.0, 0.0));
    Ok(alpha.compose(&rot).compose(&alpha))
}

/// A tower of dyadic iterates witnessing an embedding: index k holds the
/// element at time `1/2^k`, so index 0 is the map itself.
#[derive(Debug, Clone, Serialize)]
pub struct RootSequence {
    /// Obstruction constant `|C| / |1 - A|`; zero for non-elliptic maps.
    pub kappa: f64,
    /// Normal-form multiplier (or half-plane dilation) at each depth;
    /// starts at the map's own value and each entry squares to the previous.
    #[serde(with = "crate::moebius::complex_pair_list")]
    pub multipliers: Vec<Complex>,
    /// The dyadic iterates, depth k holding the 2^k-th root.
    pub entries: Vec<Moebius>,
    /// Self-map admission margin of each entry in its normal coordinates.
    pub margins: Vec<f64>,
    /// Contraction ratio `(1 - |a|)/|1 - a|` per entry; empty when the
    /// dilation is real and the ratio carries no information.
    pub ratios: Vec<f64>,
}

/// Outcome of the embedding search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbedKind {
    /// A branch of square roots stays admissible with ratio clearance.
    Embeddable,
    /// Every branch leaves the admissible region; final by ratio monotonicity.
    NotEmbeddable,
    /// A branch survives but its final ratio sits inside the decision band,
    /// or the node budget ran out.
    InconclusiveAtDepth,
}

impl std::fmt::Display for EmbedKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EmbedKind::Embeddable => "embeddable",
            EmbedKind::NotEmbeddable => "not_embeddable",
            EmbedKind::InconclusiveAtDepth => "inconclusive_at_depth",
        };
        f.write_str(s)
    }
}

/// Verdict of the embedding search with its supporting data.
#[derive(Debug, Clone, Serialize)]
pub struct EmbedVerdict {
    pub kind: EmbedKind,
    /// The surviving root tower for positive (and band) verdicts.
    pub witness: Option<RootSequence>,
    /// The flow runs along the edge of the admissible region: automorphism
    /// flows, and ratio ties within the decision band.
    pub boundary: bool,
    /// Human-readable account of the decision.
    pub note: String,
    /// Deepest level at which a live branch was pruned, for negative verdicts.
    pub prune_depth: Option<u32>,
}

struct SearchNode {
    a: Complex,
    c: Complex,
    margin: f64,
    ratio: f64,
}

enum Walk {
    Accepted(Vec<SearchNode>),
    Exhausted,
    Dead,
}

struct Search<'a> {
    nf: &'a EllipticNormalForm,
    kappa: f64,
    max_depth: u32,
    budget: u64,
    deepest_prune: Option<u32>,
    band_path: Option<Vec<SearchNode>>,
}

impl Search<'_> {
    fn walk(&mut self, a: Complex, depth: u32, path: &mut Vec<SearchNode>) -> Walk {
        if self.budget == 0 {
            return Walk::Exhausted;
        }
        self.budget -= 1;
        let (c, margin, ratio) = root_candidate(self.nf, a);
        if ratio < self.kappa - tol::RATIO_BAND {
            self.deepest_prune = Some(self.deepest_prune.map_or(depth, |d| d.max(depth)));
            return Walk::Dead;
        }
        path.push(SearchNode { a, c, margin, ratio });
        let result = if depth == self.max_depth {
            if ratio >= self.kappa + tol::RATIO_BAND {
                Walk::Accepted(snapshot(path))
            } else {
                if self.band_path.is_none() {
                    self.band_path = Some(snapshot(path));
                }
                Walk::Dead
            }
        } else {
            let principal = a.sqrt();
            let mut outcome = Walk::Dead;
            for child in [principal, -principal] {
                match self.walk(child, depth + 1, path) {
                    Walk::Dead => {}
                    other => {
                        outcome = other;
                        break;
                    }
                }
            }
            outcome
        };
        path.pop();
        result
    }
}

fn snapshot(path: &[SearchNode]) -> Vec<SearchNode> {
    path.iter()
        .map(|n| SearchNode {
            a: n.a,
            c: n.c,
            margin: n.margin,
            ratio: n.ratio,
        })
        .collect()
}

fn sequence_from_path(nf: &EllipticNormalForm, kappa: f64, path: &[SearchNode]) -> RootSequence {
    let (c0, m0, r0) = root_candidate(nf, nf.multiplier);
    let head = SearchNode {
        a: nf.multiplier,
        c: c0,
        margin: m0,
        ratio: r0,
    };
    let full: Vec<&SearchNode> = std::iter::once(&head).chain(path.iter()).collect();
    RootSequence {
        kappa,
        multipliers: full.iter().map(|n| n.a).collect(),
        entries: full
            .iter()
            .map(|n| nf.restore(&normal_matrix(n.a, n.c)))
            .collect(),
        margins: full.iter().map(|n| n.margin).collect(),
        ratios: full.iter().map(|n| n.ratio).collect(),
    }
}

/// Decide whether a self-map embeds in a continuous iteration flow.
///
/// Hyperbolic and parabolic maps (and the identity) always do. For elliptic
/// maps the search follows square-root branches down to `2^max_depth`-th
/// roots, pruning a branch as soon as its contraction ratio drops below the
/// obstruction constant; since the ratio only decreases down a branch, a
/// fully pruned tree is a definitive negative. A branch that survives to
/// full depth with clear ratio margin is a witness; a survivor inside the
/// decision band is reported as a boundary case.
pub fn embeddable(phi: &Moebius, max_depth: u32, node_budget: u64) -> Result<EmbedVerdict, Error> {
    if max_depth == 0 {
        return Err(Error::InvalidArgument("embedding depth must be positive".into()));
    }
    let cls = classify(phi)?;
    match cls.tag.family() {
        Family::Identity => Ok(EmbedVerdict {
            kind: EmbedKind::Embeddable,
            witness: None,
            boundary: false,
            note: "the identity embeds in the constant flow".into(),
            prune_depth: None,
        }),
        Family::Hyperbolic | Family::Parabolic => {
            let parabolic = cls.tag.family() == Family::Parabolic;
            let h = cayley_conjugate(phi)?;
            let mut multipliers = Vec::new();
            let mut entries = Vec::new();
            let mut margins = Vec::new();
            for k in 0..=max_depth {
                let hk = halfplane_at_time(&h, 0.5f64.powi(k as i32), parabolic);
                multipliers.push(Complex::new(hk.a, 0.0));
                margins.push(hk.b.re);
                entries.push(from_halfplane(&hk)?);
            }
            let note = if parabolic {
                format!(
                    "translation flow w -> w + tB with B = {} at the boundary fixed point",
                    crate::moebius::fmt_complex(h.b)
                )
            } else {
                format!(
                    "dilation flow w -> A^t w + B(A^t - 1)/(A - 1) with A = {:.6}",
                    h.a
                )
            };
            Ok(EmbedVerdict {
                kind: EmbedKind::Embeddable,
                witness: Some(RootSequence {
                    kappa: 0.0,
                    multipliers,
                    entries,
                    margins,
                    ratios: Vec::new(),
                }),
                boundary: cls.report.is_automorphism,
                note,
                prune_depth: None,
            })
        }
        Family::Elliptic => {
            let nf = elliptic_normal_form(phi)?;
            let kappa = nf.obstruction();
            if cls.report.is_automorphism {
                let theta = nf.multiplier.arg();
                let path: Vec<SearchNode> = (1..=max_depth)
                    .map(|k| {
                        let a = Complex::from_polar(1.0, theta * 0.5f64.powi(k as i32));
                        let (c, margin, ratio) = root_candidate(&nf, a);
                        SearchNode { a, c, margin, ratio }
                    })
                    .collect();
                return Ok(EmbedVerdict {
                    kind: EmbedKind::Embeddable,
                    witness: Some(sequence_from_path(&nf, kappa, &path)),
                    boundary: true,
                    note: format!(
                        "rotation flow about the fixed point {}; every dyadic element is an automorphism",
                        crate::moebius::fmt_complex(nf.fixed_point)
                    ),
                    prune_depth: None,
                });
            }
            let mut search = Search {
                nf: &nf,
                kappa,
                max_depth,
                budget: node_budget,
                deepest_prune: None,
                band_path: None,
            };
            let principal = nf.multiplier.sqrt();
            let mut path = Vec::new();
            let mut accepted = None;
            let mut exhausted = false;
            for child in [principal, -principal] {
                match search.walk(child, 1, &mut path) {
                    Walk::Accepted(p) => {
                        accepted = Some(p);
                        break;
                    }
                    Walk::Exhausted => {
                        exhausted = true;
                        break;
                    }
                    Walk::Dead => {}
                }
            }
            if let Some(p) = accepted {
                let last = p.last().expect("accepted path is nonempty");
                let note = format!(
                    "a square-root branch reaches depth {} with ratio {:.9} above the obstruction {:.9}",
                    max_depth, last.ratio, kappa
                );
                return Ok(EmbedVerdict {
                    kind: EmbedKind::Embeddable,
                    witness: Some(sequence_from_path(&nf, kappa, &p)),
                    boundary: false,
                    note,
                    prune_depth: None,
                });
            }
            if exhausted {
                return Ok(EmbedVerdict {
                    kind: EmbedKind::InconclusiveAtDepth,
                    witness: None,
                    boundary: false,
                    note: format!("node budget of {node_budget} exhausted before a verdict"),
                    prune_depth: None,
                });
            }
            if let Some(p) = search.band_path.take() {
                let last_ratio = p.last().map_or(0.0, |n| n.ratio);
                return Ok(EmbedVerdict {
                    kind: EmbedKind::InconclusiveAtDepth,
                    witness: Some(sequence_from_path(&nf, kappa, &p)),
                    boundary: true,
                    note: format!(
                        "a branch survives to depth {} but its ratio {:.12} sits within {:.0e} of the obstruction {:.12}",
                        max_depth, last_ratio, tol::RATIO_BAND, kappa
                    ),
                    prune_depth: None,
                });
            }
            Ok(EmbedVerdict {
                kind: EmbedKind::NotEmbeddable,
                witness: None,
                boundary: false,
                note: format!(
                    "every square-root branch falls below the obstruction ratio {kappa:.9}; the ratio only decreases with depth, so no deeper branch recovers"
                ),
                prune_depth: search.deepest_prune,
            })
        }
    }
}

/// The flow element at dyadic time `numer / 2^log2_denom`.
///
/// Uses the witness tower when one is supplied (matching its branch), the
/// closed-form flow for non-elliptic maps, and the principal branch for
/// elliptic maps otherwise. Errors when the requested element leaves the
/// disk algebra.
pub fn dyadic_element(
    phi: &Moebius,
    numer: u64,
    log2_denom: u32,
    witness: Option<&RootSequence>,
) -> Result<Moebius, Error> {
    let cls = classify(phi)?;
    let t = numer as f64 * 0.5f64.powi(log2_denom as i32);
    match cls.tag.family() {
        Family::Identity => Ok(Moebius::identity()),
        Family::Hyperbolic | Family::Parabolic => {
            let parabolic = cls.tag.family() == Family::Parabolic;
            let h = cayley_conjugate(phi)?;
            from_halfplane(&halfplane_at_time(&h, t, parabolic))
        }
        Family::Elliptic => {
            if log2_denom == 0 {
                return Ok(phi.iterate_n(numer));
            }
            if let Some(seq) = witness {
                if seq.entries.len() > log2_denom as usize {
                    return Ok(seq.entries[log2_denom as usize].iterate_n(numer));
                }
            }
            let nf = elliptic_normal_form(phi)?;
            let a_t = (nf.multiplier.ln() * t).exp();
            let (c_t, margin, _) = root_candidate(&nf, a_t);
            if margin < -tol::SELF_MAP_MARGIN {
                return Err(Error::NotASelfMap { margin });
            }
            Ok(nf.restore(&normal_matrix(a_t, c_t)))
        }
    }
}
