//! Periodized Gaussian potentials, discrete periodic energies, and the
//! linear-programming lower bound.
//!
//! A lattice `Λ` periodizes the Gaussian `f_a(r²) = e^{−a r²}` into
//! `F_{a,Λ}(x) = Σ_{v∈Λ} e^{−a|x+v|²}`, the heat-kernel potential felt by a
//! unit charge at `x` from charges on every lattice point.  Over `L = Z×√3Z`
//! this factorizes into a product of two one-dimensional theta functions,
//! `F_{a,L}(x) = (π/(√3a)) θ(π/a; x1) θ(π/(3a); x2/√3)`, and over the
//! hexagonal lattice it is the sum of two such products shifted by the deep
//! hole.  In Chebyshev variables `t_i = cos` of the rescaled coordinates the
//! hexagonal potential becomes `F̃(t1,t2) = f̃1(t1)f̃2(t2) +
//! f̃1(−t1)f̃2(−t2)`, absolutely monotone in each variable.
//!
//! For any conditionally positive semidefinite `g ≤ F` the total energy of
//! `n` points is at least `n²ĝ_0 − n g(0)`; the magic interpolants make this
//! bound sharp.

use nalgebra::DVector;
use std::f64::consts::PI;
use thiserror::Error;

use crate::lattice::{Configuration, Lattice};
use crate::sympoly::{PhiLattice, PvExpansion};
use crate::theta::{factor_deriv, theta, Factor, ThetaError, ThetaRegime};

/// Target for the neglected Gaussian tail of a truncated lattice sum,
/// relative to the leading term.
pub const TAIL_TARGET: f64 = 1e-16;

/// Working tolerance for certified theta evaluations inside energy formulas.
const THETA_TOL: f64 = 1e-14;

#[derive(Debug, Error)]
pub enum EnergyError {
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error("expansion has negative coefficients and is not conditionally positive semidefinite")]
    NotCpsd,
    #[error("energy requires at least two points")]
    TooFewPoints,
}

/// Compensated (Kahan) summation.
pub fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// A Gaussian pair potential `e^{−a r²}` periodized over a lattice, with an
/// automatically sized truncation radius making direct sums a trustworthy
/// oracle: the neglected tail is below [`TAIL_TARGET`].
#[derive(Debug, Clone)]
pub struct GaussianPotential {
    pub a: f64,
    pub lattice: Lattice,
    pub truncation_radius: f64,
}

impl GaussianPotential {
    pub fn new(a: f64, lattice: Lattice) -> Self {
        assert!(a > 0.0, "sharpness must be positive");
        // Crude but safe tail bound: the number of lattice points in a ball
        // of radius R is at most vol(B_{R+δ})/covol with δ the cell diameter,
        // and each neglected term is at most e^{−aR²}.  The target is
        // relative: a reduced point sits within the covering radius ρ ≤ δ/2
        // of the lattice, so its leading term is at least e^{−aρ²}, and the
        // radius grows until count·e^{−aR²} < TAIL_TARGET·e^{−aρ²}.  (At
        // large sharpness an absolute cutoff would swamp the energy, which
        // itself decays like e^{−a d_min²}.)
        let d = lattice.dim() as f64;
        let diam: f64 = (0..lattice.dim())
            .map(|j| lattice.generator().column(j).norm())
            .sum();
        let rho = 0.5 * diam;
        let leading = (-a * rho * rho).exp().max(1e-250);
        let mut r = (1.0 / a).sqrt().max(1.0);
        loop {
            let count = ((r + diam).powf(d) * 4.0 / lattice.covolume()).max(1.0);
            if count * (-a * r * r).exp() < TAIL_TARGET * leading {
                break;
            }
            r += 0.5 / a.sqrt().min(1.0);
        }
        GaussianPotential {
            a,
            lattice,
            truncation_radius: r,
        }
    }

    /// The bare pair potential `f_a(|x|²)`.
    pub fn pair(&self, x: &DVector<f64>) -> f64 {
        (-self.a * x.norm_squared()).exp()
    }
}

/// Periodized potential `F(x) = Σ_{|x+v| ≤ R} e^{−a|x+v|²}` by direct
/// truncated lattice summation.
pub fn big_f(x: &DVector<f64>, pot: &GaussianPotential) -> f64 {
    let xr = pot.lattice.reduce(x);
    let shift_bound = xr.norm();
    let terms = pot
        .lattice
        .points_within(pot.truncation_radius + shift_bound)
        .into_iter()
        .map(|v| (-pot.a * (&xr + v).norm_squared()).exp());
    kahan_sum(terms)
}

/// Theta-factorized fast path for `F_{a,Λ}` over `Λ ∈ {L, A2}`.
pub fn big_f_theta(x: &DVector<f64>, a: f64, phi: PhiLattice) -> Result<f64, EnergyError> {
    let scale = PI / (3.0_f64.sqrt() * a);
    let t1 = |u: f64| theta(PI / a, u, THETA_TOL);
    let t2 = |u: f64| theta(PI / (3.0 * a), u, THETA_TOL);
    let x1 = x[0];
    let x2 = x[1] / 3.0_f64.sqrt();
    let main = t1(x1)?.value * t2(x2)?.value;
    Ok(match phi {
        PhiLattice::L => scale * main,
        PhiLattice::A2 => scale * (main + t1(x1 + 0.5)?.value * t2(x2 + 0.5)?.value),
    })
}

/// Scale factor between the normalized Chebyshev-variable potential
/// [`tilde_f_scaled`] and the true potential: `√3a/π` below the regime
/// boundary `a = π²`, and `1` above it.
pub fn rescale_factor(a: f64) -> f64 {
    if a <= PI * PI {
        3.0_f64.sqrt() * a / PI
    } else {
        1.0
    }
}

/// Order-(l1,l2) partial derivative of the normalized potential
/// `F̃(t1,t2)` in Chebyshev variables.  Over `A2`:
/// `F̃ = f̃1(t1)f̃2(t2) + f̃1(−t1)f̃2(−t2)`; over `L` only the first product.
pub fn tilde_f_scaled_partial(
    t1: f64,
    t2: f64,
    a: f64,
    phi: PhiLattice,
    l1: usize,
    l2: usize,
) -> Result<f64, EnergyError> {
    let regime = ThetaRegime::new(a);
    let conv = regime.convention();
    let d = |which: Factor, t: f64, l: usize| -> Result<f64, EnergyError> {
        Ok(factor_deriv(a, which, conv, t, l, THETA_TOL)?.value)
    };
    let main = d(Factor::First, t1, l1)? * d(Factor::Second, t2, l2)?;
    Ok(match phi {
        PhiLattice::L => main,
        PhiLattice::A2 => {
            let sign = if (l1 + l2) % 2 == 0 { 1.0 } else { -1.0 };
            main + sign * d(Factor::First, -t1, l1)? * d(Factor::Second, -t2, l2)?
        }
    })
}

/// Normalized Chebyshev-variable potential `F̃(t1,t2)`.
pub fn tilde_f_scaled(t1: f64, t2: f64, a: f64, phi: PhiLattice) -> Result<f64, EnergyError> {
    tilde_f_scaled_partial(t1, t2, a, phi, 0, 0)
}

/// True-normalization potential in Chebyshev variables:
/// `F(arccos(t1)/2π, √3 arccos(t2)/2π)`.
pub fn tilde_f(t1: f64, t2: f64, a: f64, phi: PhiLattice) -> Result<f64, EnergyError> {
    Ok(tilde_f_scaled(t1, t2, a, phi)? / rescale_factor(a))
}

/// Inverse Chebyshev change of variables: a representative point with
/// `T(x) = (t1, t2)`.
pub fn t_inverse(t1: f64, t2: f64) -> DVector<f64> {
    DVector::from_vec(vec![
        t1.clamp(-1.0, 1.0).acos() / (2.0 * PI),
        3.0_f64.sqrt() * t2.clamp(-1.0, 1.0).acos() / (2.0 * PI),
    ])
}

/// Total periodic energy `E_F(ω) = Σ_{i≠j} F(x_i − x_j)` over ordered
/// distinct pairs.
pub fn periodic_energy(omega: &Configuration, pot: &GaussianPotential) -> Result<f64, EnergyError> {
    let n = omega.len();
    if n < 2 {
        return Err(EnergyError::TooFewPoints);
    }
    let mut terms = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let diff = &omega.points[i] - &omega.points[j];
                terms.push(big_f(&diff, pot));
            }
        }
    }
    Ok(kahan_sum(terms))
}

/// Pair energy of a symmetrized polynomial potential `g(x) = g̃(T(x))` given
/// by its orbit-sum expansion.
pub fn expansion_energy(g: &PvExpansion, omega: &Configuration) -> f64 {
    let poly = g.to_polynomial();
    let n = omega.len();
    let mut terms = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let diff = &omega.points[i] - &omega.points[j];
                let t1 = (2.0 * PI * diff[0]).cos();
                let t2 = (2.0 * PI * diff[1] / 3.0_f64.sqrt()).cos();
                terms.push(poly.eval(t1, t2));
            }
        }
    }
    kahan_sum(terms)
}

/// Linear-programming lower bound `n²ĝ_0 − n g(0)` for an `n`-point energy,
/// where `ĝ_0` is the constant coefficient of the expansion and
/// `g(0) = g̃(1,1)`.  Requires the expansion to be conditionally positive
/// semidefinite (all non-constant coefficients nonnegative).
pub fn lp_bound(g: &PvExpansion, n: usize) -> Result<f64, EnergyError> {
    if !g.is_cpsd(1e-12) {
        return Err(EnergyError::NotCpsd);
    }
    let g0_hat = g.constant_coefficient();
    let g_origin = g.to_polynomial().eval(1.0, 1.0);
    let n = n as f64;
    Ok(n * n * g0_hat - n * g_origin)
}

/// Report pairing a computed energy with its linear-programming bound.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EnergyReport {
    pub energy: f64,
    pub lp_bound: f64,
    pub gap: f64,
}

impl EnergyReport {
    pub fn new(energy: f64, lp_bound: f64) -> Self {
        EnergyReport {
            energy,
            lp_bound,
            gap: energy - lp_bound,
        }
    }
}

/// Average energy per point of the infinite `Λ`-periodic configuration with
/// representatives `ω`: `(1/N)(E_F(ω) + N Σ_{0≠v∈Λ} f(v))`.
pub fn average_energy(omega: &Configuration, a: f64) -> Result<f64, EnergyError> {
    let pot = GaussianPotential::new(a, omega.ambient.clone());
    let n = omega.len() as f64;
    let self_sum = kahan_sum(
        pot.lattice
            .points_within(pot.truncation_radius)
            .into_iter()
            .filter(|v| v.norm() > 1e-12)
            .map(|v| (-a * v.norm_squared()).exp()),
    );
    let pair = if omega.len() >= 2 {
        periodic_energy(omega, &pot)?
    } else {
        0.0
    };
    Ok(pair / n + self_sum)
}
