//! Hermite interpolation machinery and the explicit "magic" interpolants.
//!
//! Divided differences with confluent nodes drive three constructions:
//!
//! * the one-dimensional interpolant certifying optimality of `2m` equally
//!   spaced points on the circle (doubled Chebyshev-style nodes, positive
//!   semidefinite via Chebyshev-U expansions);
//! * the 4-point interpolant `g̃ = F̃(−1,1) + b1·t2(t1+t2)` over the
//!   hexagonal lattice, with `b1` defined piecewise in the sharpness `a`;
//! * the 6-point interpolant over `L`, an element of `P_1(t1)×P_2(t2)` fixed
//!   by three value and two derivative conditions at its nodes.
//!
//! Linearized variants `g_{c,d} = g̃ − β t1t2 + β(ct2 + dt1 − cd)` replace
//! the mixed term by its bilinear majorant on a rectangle with upper-left
//! corner `(c,d)`, and closed-form majorants `g*_{c,d}` replace coefficients
//! by their large-`a` enclosures, making `e^{a/m1} g*` affine in `a`.

use std::f64::consts::PI;
use thiserror::Error;

use crate::energy::{tilde_f_scaled, tilde_f_scaled_partial, EnergyError};
use crate::sympoly::{DualVector, PhiLattice, PvExpansion};
use crate::theta::{tilde_theta_deriv, ThetaError, EPS, EPS2, LARGE_A_MIN};

#[derive(Debug, Error)]
pub enum InterpolantError {
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error("node multiset must be nonempty")]
    EmptyNodes,
    #[error("derivative order {0} exceeds what the evaluator supplies")]
    OrderTooLarge(usize),
    #[error("corner ({0}, {1}) violates the sign conditions of the requested majorant branch")]
    BranchMismatch(f64, f64),
    #[error("rectangle is not contained in [-1,1]^2 or corner is not its upper-left vertex")]
    BadRectangle,
    #[error("sharpness {0} is below the validity threshold {1} of the requested bounds")]
    SharpnessTooSmall(f64, f64),
}

// ---------------------------------------------------------------------------
// Univariate polynomials in the monomial basis.
// ---------------------------------------------------------------------------

/// Dense univariate polynomial; `coeffs[k]` multiplies `t^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly1 {
    pub coeffs: Vec<f64>,
}

impl Poly1 {
    pub fn zero() -> Self {
        Poly1 { coeffs: vec![] }
    }

    pub fn constant(c: f64) -> Self {
        Poly1 { coeffs: vec![c] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|&c| c != 0.0)
            .unwrap_or(0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn add(&self, other: &Poly1) -> Poly1 {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![0.0; n];
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = self.coeffs.get(i).copied().unwrap_or(0.0)
                + other.coeffs.get(i).copied().unwrap_or(0.0);
        }
        Poly1 { coeffs }
    }

    pub fn scaled(&self, s: f64) -> Poly1 {
        Poly1 {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn mul(&self, other: &Poly1) -> Poly1 {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly1::zero();
        }
        let mut coeffs = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly1 { coeffs }
    }

    /// Monic linear factor `t − r`.
    pub fn linear(r: f64) -> Poly1 {
        Poly1 {
            coeffs: vec![-r, 1.0],
        }
    }

    pub fn derivative(&self) -> Poly1 {
        if self.coeffs.len() <= 1 {
            return Poly1::zero();
        }
        Poly1 {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        }
    }

    /// Expansion coefficients in a triangular polynomial basis
    /// (`basis[k]` has exact degree `k`), by back-substitution.
    fn expand_in(&self, basis: &[Poly1]) -> Vec<f64> {
        let mut residual = self.coeffs.clone();
        let n = residual.len();
        let mut out = vec![0.0; n];
        for k in (0..n).rev() {
            let lead = basis[k].coeffs[k];
            let c = residual[k] / lead;
            out[k] = c;
            for (i, &b) in basis[k].coeffs.iter().enumerate() {
                residual[i] -= c * b;
            }
        }
        out
    }

    /// Coefficients in the Chebyshev-T basis.
    pub fn chebyshev_t_coeffs(&self) -> Vec<f64> {
        self.expand_in(&chebyshev_basis(self.coeffs.len(), false))
    }

    /// Coefficients in the Chebyshev-U basis.
    pub fn chebyshev_u_coeffs(&self) -> Vec<f64> {
        self.expand_in(&chebyshev_basis(self.coeffs.len(), true))
    }
}

/// First `n` Chebyshev polynomials of the first (`second = false`) or second
/// kind, in monomial coefficients.
fn chebyshev_basis(n: usize, second: bool) -> Vec<Poly1> {
    let mut basis = Vec::with_capacity(n.max(2));
    basis.push(Poly1::constant(1.0));
    basis.push(Poly1 {
        coeffs: vec![0.0, if second { 2.0 } else { 1.0 }],
    });
    for k in 2..n.max(2) {
        let prev: &Poly1 = &basis[k - 1];
        let doubled = Poly1 {
            coeffs: std::iter::once(0.0)
                .chain(prev.coeffs.iter().map(|&c| 2.0 * c))
                .collect(),
        };
        let next = doubled.add(&basis[k - 2].scaled(-1.0));
        basis.push(next);
    }
    basis
}

// ---------------------------------------------------------------------------
// Divided differences and Hermite interpolation.
// ---------------------------------------------------------------------------

/// A multiset of interpolation nodes; repeated entries prescribe derivative
/// conditions up to the multiplicity.
#[derive(Debug, Clone)]
pub struct NodeMultiset {
    pub nodes: Vec<f64>,
}

impl NodeMultiset {
    pub fn new(mut nodes: Vec<f64>) -> Result<Self, InterpolantError> {
        if nodes.is_empty() {
            return Err(InterpolantError::EmptyNodes);
        }
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(NodeMultiset { nodes })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Largest multiplicity among the nodes.
    pub fn max_multiplicity(&self) -> usize {
        let mut best = 1;
        let mut run = 1;
        for w in self.nodes.windows(2) {
            if w[0] == w[1] {
                run += 1;
                best = best.max(run);
            } else {
                run = 1;
            }
        }
        best
    }
}

/// Full Newton table of divided differences `f[t_0..t_k]`, `k = 0..m`, for a
/// smooth function supplied as `f(t, order) = f^{(order)}(t)`.  Confluent
/// entries use `f[t,..,t] = f^{(j)}(t)/j!`.
pub fn newton_coefficients(
    f: &dyn Fn(f64, usize) -> f64,
    nodes: &NodeMultiset,
) -> Vec<f64> {
    let z = &nodes.nodes;
    let m = z.len();
    let mut table: Vec<f64> = z.iter().map(|&t| f(t, 0)).collect();
    let mut out = vec![table[0]];
    let mut factorial = 1.0;
    for j in 1..m {
        factorial *= j as f64;
        for i in 0..m - j {
            table[i] = if z[i + j] == z[i] {
                f(z[i], j) / factorial
            } else {
                (table[i + 1] - table[i]) / (z[i + j] - z[i])
            };
        }
        out.push(table[0]);
    }
    out
}

/// The top divided difference `f[t_0, …, t_m]`.
pub fn divided_difference(f: &dyn Fn(f64, usize) -> f64, nodes: &NodeMultiset) -> f64 {
    *newton_coefficients(f, nodes).last().unwrap()
}

/// Hermite interpolant `H_T(f) = Σ_k f[t_0..t_k] Π_{i<k}(t − t_i)` of degree
/// at most `|T| − 1`.
pub fn hermite_interpolant(f: &dyn Fn(f64, usize) -> f64, nodes: &NodeMultiset) -> Poly1 {
    let coeffs = newton_coefficients(f, nodes);
    let mut acc = Poly1::zero();
    let mut product = Poly1::constant(1.0);
    for (k, &c) in coeffs.iter().enumerate() {
        acc = acc.add(&product.scaled(c));
        if k + 1 < coeffs.len() {
            product = product.mul(&Poly1::linear(nodes.nodes[k]));
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// The one-dimensional interpolant for 2m equally spaced points.
// ---------------------------------------------------------------------------

/// Interpolant to the periodized Gaussian in one dimension at the doubled
/// nodes `t_j = cos(π(m−j)/m)`, `j = 0..m−1`: degree `≤ 2m−1`, positive
/// semidefinite, and `≤` the target on `[−1,1]`.
#[derive(Debug, Clone)]
pub struct ZInterpolant {
    pub m: usize,
    pub a: f64,
    /// The distinct nodes, each of multiplicity two.
    pub nodes: Vec<f64>,
    pub poly: Poly1,
    /// Expansion of the interpolant in the Chebyshev-T basis.
    pub t_coeffs: Vec<f64>,
}

impl ZInterpolant {
    /// Target function `F̃(t) = √(π/a) θ̃(π/a; t)` and its derivatives.
    pub fn target(a: f64, t: f64, order: usize) -> f64 {
        let scale = (PI / a).sqrt();
        scale
            * tilde_theta_deriv(PI / a, t, order, 1e-14)
                .expect("theta series converges for positive c")
                .value
    }

    /// Linear-programming lower bound `n² c_0 − n H(1)` for `n = 2m` points.
    pub fn lp_bound(&self) -> f64 {
        let n = (2 * self.m) as f64;
        n * n * self.t_coeffs[0] - n * self.poly.eval(1.0)
    }
}

/// Build the one-dimensional magic interpolant for `2m` equally spaced
/// points at sharpness `a`.
pub fn build_g_z(m: usize, a: f64) -> Result<ZInterpolant, InterpolantError> {
    assert!(m >= 1 && a > 0.0);
    let nodes: Vec<f64> = (0..m).map(|j| (PI * (m - j) as f64 / m as f64).cos()).collect();
    let mut doubled = Vec::with_capacity(2 * m);
    for &t in &nodes {
        doubled.push(t);
        doubled.push(t);
    }
    let multiset = NodeMultiset::new(doubled)?;
    let f = move |t: f64, order: usize| ZInterpolant::target(a, t, order);
    let poly = hermite_interpolant(&f, &multiset);
    let t_coeffs = poly.chebyshev_t_coeffs();
    Ok(ZInterpolant {
        m,
        a,
        nodes,
        poly,
        t_coeffs,
    })
}

// ---------------------------------------------------------------------------
// The 4-point interpolant.
// ---------------------------------------------------------------------------

/// Selection rule for the slope coefficient `b1` of the 4-point interpolant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum B1Choice {
    /// The certified piecewise definition: `2 ∂F̃/∂t1(−1,1/2)` for `a ≤ 21`
    /// and `∂F̃/∂t2(−1,1)` for `a > 21`.
    Certified,
    /// The uniform alternative `∂F̃/∂t1(−1,1)`; experimental, uncertified.
    ExperimentalUniform,
}

/// The 4-point magic interpolant `g̃(t1,t2) = c0 + b1 t2(t1+t2)` over the
/// hexagonal lattice, in the normalized Chebyshev-variable convention.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MagicInterpolant4 {
    pub a: f64,
    /// `c0 = F̃(−1,1)`.
    pub c0: f64,
    pub b1: f64,
    /// Whether the `a > 21` branch of the piecewise definition applies.
    pub large_regime: bool,
    pub experimental: bool,
}

impl MagicInterpolant4 {
    pub fn eval(&self, t1: f64, t2: f64) -> f64 {
        self.c0 + self.b1 * t2 * (t1 + t2)
    }

    /// Orbit-sum expansion: `t2(t1+t2) = (1 + 3P)/2` with `P` the symmetric
    /// polynomial of the shortest dual orbit, so the constant coefficient is
    /// `c0 + b1/2` and the orbit coefficient `3b1/2`.
    pub fn expansion(&self) -> PvExpansion {
        let mut terms = std::collections::BTreeMap::new();
        terms.insert(DualVector::new(0, 0), self.c0 + self.b1 / 2.0);
        terms.insert(DualVector::new(1, 1), 1.5 * self.b1);
        PvExpansion {
            phi: PhiLattice::A2,
            terms,
        }
    }
}

/// Build the 4-point interpolant; the `a = 21` regime threshold is inclusive
/// on the small-`a` branch.
pub fn build_g4(a: f64, choice: B1Choice) -> Result<MagicInterpolant4, InterpolantError> {
    assert!(a > 0.0);
    let c0 = tilde_f_scaled(-1.0, 1.0, a, PhiLattice::A2)?;
    let large_regime = a > 21.0;
    let (b1, experimental) = match choice {
        B1Choice::Certified => {
            if large_regime {
                (
                    tilde_f_scaled_partial(-1.0, 1.0, a, PhiLattice::A2, 0, 1)?,
                    false,
                )
            } else {
                (
                    2.0 * tilde_f_scaled_partial(-1.0, 0.5, a, PhiLattice::A2, 1, 0)?,
                    false,
                )
            }
        }
        B1Choice::ExperimentalUniform => (
            tilde_f_scaled_partial(-1.0, 1.0, a, PhiLattice::A2, 1, 0)?,
            true,
        ),
    };
    Ok(MagicInterpolant4 {
        a,
        c0,
        b1,
        large_regime,
        experimental,
    })
}

// ---------------------------------------------------------------------------
// The 6-point interpolant.
// ---------------------------------------------------------------------------

/// The 6-point magic interpolant over `L`:
/// `g̃ = a00 + a10 t1 + a01 t2 + a02 (t1t2 + t2² + 1/4)`,
/// equivalently the Hermite form
/// `((1−t1)/2) f̃1(−1) H_{−1,1/2,1/2}(f̃2) + ((1+t1)/2) f̃1(1)
/// H_{−1/2,−1/2}(f̃2) + c(1+t1)(t2+1/2)²`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MagicInterpolant6 {
    pub a: f64,
    pub a00: f64,
    pub a10: f64,
    pub a01: f64,
    pub a02: f64,
    /// Constant monomial coefficient `b00 = a00 + a02/4`.
    pub b00: f64,
    /// Multiplier of `q = (1+t1)(t2+1/2)²`, chosen to zero the `t1t2²`
    /// monomial coefficient.
    pub c: f64,
}

impl MagicInterpolant6 {
    pub fn eval(&self, t1: f64, t2: f64) -> f64 {
        self.a00 + self.a10 * t1 + self.a01 * t2 + self.a02 * (t1 * t2 + t2 * t2 + 0.25)
    }

    /// Tensor Chebyshev expansion: `t2² = (1 + T_2(t2))/2`.
    pub fn expansion(&self) -> PvExpansion {
        let mut terms = std::collections::BTreeMap::new();
        terms.insert(DualVector::new(0, 0), self.a00 + 0.75 * self.a02);
        terms.insert(DualVector::new(1, 0), self.a10);
        terms.insert(DualVector::new(0, 1), self.a01);
        terms.insert(DualVector::new(1, 1), self.a02);
        terms.insert(DualVector::new(0, 2), self.a02 / 2.0);
        PvExpansion {
            phi: PhiLattice::L,
            terms,
        }
    }
}

/// Values and derivatives of a factor `f̃1` (first) or `f̃2` (second) in the
/// normalized convention, packaged for the divided-difference machinery.
fn factor_fn(a: f64, second: bool) -> impl Fn(f64, usize) -> f64 {
    use crate::theta::{f1f2_deriv, Factor, ThetaRegime};
    move |t: f64, order: usize| {
        let regime = ThetaRegime::new(a);
        let which = if second { Factor::Second } else { Factor::First };
        f1f2_deriv(regime, which, t, order, 1e-14)
            .expect("factor series converges")
            .value
    }
}

/// Build the 6-point interpolant from the coefficient formulas: the
/// derivative condition at `(1, −1/2)` fixes `a01 = f̃1(1) f̃2'(−1/2)`, and
/// `a02 = f̃1(−1) f̃2[−1,1/2,1/2]`.
pub fn build_g6(a: f64) -> Result<MagicInterpolant6, InterpolantError> {
    assert!(a > 0.0);
    let f1 = factor_fn(a, false);
    let f2 = factor_fn(a, true);
    let f1_1 = f1(1.0, 0);
    let f1_m1 = f1(-1.0, 0);
    let f2_half = f2(0.5, 0);
    let f2_mhalf = f2(-0.5, 0);
    let a01 = f1_1 * f2(-0.5, 1);
    let a00 = (f1_1 * f2_mhalf + f1_m1 * f2_half) / 2.0;
    let a10 = (f1_1 * f2_mhalf - f1_m1 * f2_half) / 2.0 + a01 / 2.0;
    let dd = divided_difference(&f2, &NodeMultiset::new(vec![-1.0, 0.5, 0.5])?);
    let a02 = f1_m1 * dd;
    let c = 0.5 * f1_m1 * dd;
    Ok(MagicInterpolant6 {
        a,
        a00,
        a10,
        a01,
        a02,
        b00: a00 + a02 / 4.0,
        c,
    })
}

/// The Hermite form of the 6-point interpolant, evaluated directly; used to
/// cross-check the coefficient formulas.
pub fn g6_hermite_eval(a: f64, t1: f64, t2: f64) -> Result<f64, InterpolantError> {
    let f1 = factor_fn(a, false);
    let f2 = factor_fn(a, true);
    let h3 = hermite_interpolant(&f2, &NodeMultiset::new(vec![-1.0, 0.5, 0.5])?);
    let h2 = hermite_interpolant(&f2, &NodeMultiset::new(vec![-0.5, -0.5])?);
    let dd = divided_difference(&f2, &NodeMultiset::new(vec![-1.0, 0.5, 0.5])?);
    let c = 0.5 * f1(-1.0, 0) * dd;
    let q = (1.0 + t1) * (t2 + 0.5) * (t2 + 0.5);
    Ok((1.0 - t1) / 2.0 * f1(-1.0, 0) * h3.eval(t2)
        + (1.0 + t1) / 2.0 * f1(1.0, 0) * h2.eval(t2)
        + c * q)
}

// ---------------------------------------------------------------------------
// Large-a coefficient enclosures.
// ---------------------------------------------------------------------------

/// Two-sided enclosure for the 4-point slope `b1 = ∂F̃/∂t2(−1,1)`, valid for
/// `a ≥ 21`: `3(2−4ε) a e^{−a/4} / (2π²) ≤ b1 ≤ 3a e^{−a/4}(1+ε)/π²`.
pub fn b1_bounds_4pt(a: f64) -> Result<(f64, f64), InterpolantError> {
    if a < 21.0 {
        return Err(InterpolantError::SharpnessTooSmall(a, 21.0));
    }
    let w = (-a / 4.0).exp();
    Ok((
        3.0 * (2.0 - 4.0 * EPS) * a * w / (2.0 * PI * PI),
        3.0 * a * w * (1.0 + EPS) / (PI * PI),
    ))
}

/// Enclosures of the 6-point coefficients scaled by `e^{a/3}` (each bound is
/// affine in `a`), valid for `a ≥ 9.6`.
#[derive(Debug, Clone, Copy)]
pub struct CoeffBounds6 {
    pub a00: (f64, f64),
    pub a01: (f64, f64),
    pub a10: (f64, f64),
    pub a02: (f64, f64),
    pub b00: (f64, f64),
}

pub fn coeff_bounds_6pt(a: f64) -> Result<CoeffBounds6, InterpolantError> {
    if a < LARGE_A_MIN {
        return Err(InterpolantError::SharpnessTooSmall(a, LARGE_A_MIN));
    }
    let s3 = 3.0_f64.sqrt();
    let a01 = (
        2.0 * (1.0 - EPS) * a / (s3 * PI),
        2.0 * (1.0 + EPS) * a / (s3 * PI),
    );
    let a10 = (
        0.5 * (-1.0 - 6.0 * EPS) + (1.0 - EPS) * a / (s3 * PI),
        0.5 * (-1.0 + 3.0 * EPS) + (1.0 + EPS) * a / (s3 * PI),
    );
    let a00 = (1.5, 1.5 * (1.0 + 3.0 * EPS));
    let a02 = (
        (8.0 / 9.0) * (-(1.0 + EPS) + s3 * a * (1.0 - EPS) / (2.0 * PI)),
        (8.0 / 9.0) * (1.125 * EPS2 - (1.0 + EPS) + s3 * a * (1.0 + EPS) / (2.0 * PI)),
    );
    let b00 = (
        1.5 - (2.0 / 9.0) * (1.0 + EPS) + s3 * a * (1.0 - EPS) / (9.0 * PI),
        1.5 * (1.0 + 3.0 * EPS) + 0.25 * EPS2 - (2.0 / 9.0) * (1.0 + EPS)
            + s3 * a * (1.0 + EPS) / (9.0 * PI),
    );
    Ok(CoeffBounds6 {
        a00,
        a01,
        a10,
        a02,
        b00,
    })
}

// ---------------------------------------------------------------------------
// Linearized interpolants and their closed-form majorants.
// ---------------------------------------------------------------------------

/// Either magic interpolant, for linearization.
#[derive(Debug, Clone)]
pub enum MagicInterpolant {
    FourPoint(MagicInterpolant4),
    SixPoint(MagicInterpolant6),
}

impl MagicInterpolant {
    pub fn a(&self) -> f64 {
        match self {
            MagicInterpolant::FourPoint(g) => g.a,
            MagicInterpolant::SixPoint(g) => g.a,
        }
    }

    pub fn eval(&self, t1: f64, t2: f64) -> f64 {
        match self {
            MagicInterpolant::FourPoint(g) => g.eval(t1, t2),
            MagicInterpolant::SixPoint(g) => g.eval(t1, t2),
        }
    }

    /// Coefficient of the mixed `t1 t2` monomial, the term replaced by its
    /// bilinear majorant.
    pub fn mixed_coeff(&self) -> f64 {
        match self {
            MagicInterpolant::FourPoint(g) => g.b1,
            MagicInterpolant::SixPoint(g) => g.a02,
        }
    }

    /// Exponential scale `m1` for which `e^{a/m1}(F̃ − g)` is convex in `a`.
    pub fn exp_scale(&self) -> f64 {
        match self {
            MagicInterpolant::FourPoint(_) => 4.0,
            MagicInterpolant::SixPoint(_) => 3.0,
        }
    }
}

/// A linearized interpolant on a rectangle `[c, c'] × [d', d]` with
/// upper-left corner `(c, d)`, together with its closed-form large-`a`
/// majorant.
#[derive(Debug, Clone)]
pub struct LinearizedInterpolant {
    pub base: MagicInterpolant,
    pub corner: (f64, f64),
    /// `[t1_lo, t1_hi, t2_lo, t2_hi]`.
    pub rect: [f64; 4],
}

/// Build a linearized interpolant; validates the rectangle geometry and the
/// sign conditions of the majorant branch (`c < 0`, and for the 4-point case
/// `d > 0`).
pub fn linearize(
    base: MagicInterpolant,
    corner: (f64, f64),
    rect: [f64; 4],
) -> Result<LinearizedInterpolant, InterpolantError> {
    let [t1lo, t1hi, t2lo, t2hi] = rect;
    if !(t1lo < t1hi && t2lo < t2hi)
        || t1lo < -1.0
        || t1hi > 1.0
        || t2lo < -1.0
        || t2hi > 1.0
        || (corner.0 - t1lo).abs() > 1e-12
        || (corner.1 - t2hi).abs() > 1e-12
    {
        return Err(InterpolantError::BadRectangle);
    }
    let (c, d) = corner;
    let branch_ok = match base {
        MagicInterpolant::FourPoint(_) => c < 0.0 && d > 0.0,
        MagicInterpolant::SixPoint(_) => c < 0.0,
    };
    if !branch_ok {
        return Err(InterpolantError::BranchMismatch(c, d));
    }
    Ok(LinearizedInterpolant { base, corner, rect })
}

impl LinearizedInterpolant {
    /// `g_{c,d}(t1,t2) = g̃ − β t1t2 + β(c t2 + d t1 − cd)` where `β` is the
    /// mixed-term coefficient; dominates `g̃` for `t1 ≥ c`, `t2 ≤ d` since
    /// `(t1−c)(t2−d) ≤ 0` there.
    pub fn eval_g_cd(&self, t1: f64, t2: f64) -> f64 {
        let (c, d) = self.corner;
        let beta = self.base.mixed_coeff();
        self.base.eval(t1, t2) - beta * t1 * t2 + beta * (c * t2 + d * t1 - c * d)
    }

    /// Closed-form majorant `g*_{c,d}` built from coefficient enclosures;
    /// `e^{a/m1} g*` is affine in `a`.  Valid for `a ≥ 21` (4-point) or
    /// `a ≥ 9.6` (6-point).
    pub fn eval_g_star(&self, a: f64, t1: f64, t2: f64) -> Result<f64, InterpolantError> {
        let (c, d) = self.corner;
        match &self.base {
            MagicInterpolant::FourPoint(_) => {
                let (b1l, b1u) = b1_bounds_4pt(a)?;
                Ok(2.0 * (1.0 + EPS).powi(3) * (-a / 4.0).exp()
                    + b1l * t2 * (t2 + c)
                    + b1l * d * t1
                    - c * d * b1u)
            }
            MagicInterpolant::SixPoint(_) => {
                let b = coeff_bounds_6pt(a)?;
                let w = (-a / 3.0).exp();
                // Branches by the sign of d: on c<t1<0 the t1-coefficient
                // takes its lower bound, the t2-coefficient matches the sign
                // of t2 on the strip, and the bilinear remainder coefficient
                // flips between the enclosure endpoints.
                let v = if d > 0.0 {
                    b.b00.1
                        + b.a10.0 * t1
                        + b.a01.1 * t2
                        + b.a02.1 * t2 * t2
                        + b.a02.0 * (d * t1 + c * t2 - c * d)
                } else {
                    b.b00.1
                        + b.a10.0 * t1
                        + b.a01.0 * t2
                        + b.a02.1 * t2 * t2
                        + b.a02.1 * (d * t1 + c * t2 - c * d)
                };
                Ok(w * v)
            }
        }
    }

    /// Derivative in `a` of `e^{a/m1} g*_{c,d}(t1,t2)`, in closed form.
    pub fn d_scaled_g_star_da(&self, a: f64, t1: f64, t2: f64) -> Result<f64, InterpolantError> {
        let (c, d) = self.corner;
        match &self.base {
            MagicInterpolant::FourPoint(_) => {
                // e^{a/4} g* = 2(1+ε)³ + k_l a t2(t2+c) + k_l a d t1 − cd k_u a
                // with k_l = 3(2−4ε)/(2π²), k_u = 3(1+ε)/π².
                if a < 21.0 {
                    return Err(InterpolantError::SharpnessTooSmall(a, 21.0));
                }
                let kl = 3.0 * (2.0 - 4.0 * EPS) / (2.0 * PI * PI);
                let ku = 3.0 * (1.0 + EPS) / (PI * PI);
                Ok(kl * t2 * (t2 + c) + kl * d * t1 - c * d * ku)
            }
            MagicInterpolant::SixPoint(_) => {
                // Each e^{a/3}-scaled coefficient bound is affine in a;
                // differentiate by finite slope of the affine forms.
                let b0 = coeff_bounds_6pt(a)?;
                let b1 = coeff_bounds_6pt(a + 1.0)?;
                let slope = |f: fn(&CoeffBounds6) -> f64| f(&b1) - f(&b0);
                let v = if d > 0.0 {
                    slope(|b| b.b00.1)
                        + slope(|b| b.a10.0) * t1
                        + slope(|b| b.a01.1) * t2
                        + slope(|b| b.a02.1) * t2 * t2
                        + slope(|b| b.a02.0) * (d * t1 + c * t2 - c * d)
                } else {
                    slope(|b| b.b00.1)
                        + slope(|b| b.a10.0) * t1
                        + slope(|b| b.a01.0) * t2
                        + slope(|b| b.a02.1) * t2 * t2
                        + slope(|b| b.a02.1) * (d * t1 + c * t2 - c * d)
                };
                Ok(v)
            }
        }
    }
}
