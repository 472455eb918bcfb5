//! Jacobi theta series with certified truncation error.
//!
//! The central object is the theta function of the third type,
//!
//! ```text
//! θ(c; x) = 1 + Σ_{k≥1} 2 e^{−πk²c} cos(2πkx),          c > 0,
//! ```
//!
//! together with its Poisson-dual expansion
//!
//! ```text
//! θ(c; x) = c^{−1/2} Σ_{k∈Z} e^{−π(k+x)²/c},
//! ```
//!
//! and the substituted form θ̃(c; t) = θ(c; arccos(t)/(2π)), which is a
//! series in Chebyshev polynomials of the first kind:
//!
//! ```text
//! θ̃(c; t) = 1 + Σ_{k≥1} 2 e^{−πk²c} T_k(t),       t ∈ [−1, 1].
//! ```
//!
//! Every evaluation returns a [`CertifiedValue`]: a floating-point value
//! paired with a rigorous bound on the omitted series mass, obtained by
//! geometric-series comparison.  Derivatives in `t` are computed by the
//! differentiated Chebyshev recurrence, which stays finite at `t = ±1`
//! (where the naive chain rule divides by `sin 2πx = 0`).
//!
//! The module also houses the closed-form lower/upper bound pairs
//! ("enclosures") for the two Gaussian-periodization factors
//!
//! ```text
//! f̃1(t) = Σ_k e^{−a(k+x)²}   = √(π/a)  θ̃(π/a;  t),
//! f̃2(t) = Σ_k e^{−3a(k+u)²}  = √(π/3a) θ̃(π/3a; t),
//! ```
//!
//! used by the certificate suite: sharp truncations of the q-series when
//! `a < π²`, and Gaussian one-or-two-term estimates when `a ≥ 9.6`.

use thiserror::Error;

use std::f64::consts::PI;

/// Maximum number of series terms before reporting the tolerance unreachable.
const MAX_TERMS: usize = 1_000_000;

/// Highest derivative order supported by [`tilde_theta_deriv`].
pub const MAX_DERIV_ORDER: usize = 4;

/// Slack constant ε = 1/1000 valid for all sharpness parameters a ≥ 9.6:
/// it dominates both `2 Σ_{n≥1} e^{−an}` and `5 e^{−a}`.
pub const EPS: f64 = 1.0e-3;

/// Slack constant ε₂ = 1/100, dominating `4(1+ε)² Σ_{n≥1} e^{−2·9.6·n/3}`.
pub const EPS2: f64 = 1.0e-2;

/// Left edge of the parameter range on which [`EPS`] and [`EPS2`] are valid.
pub const LARGE_A_MIN: f64 = 9.6;

/// Re-derives the defining inequalities of [`EPS`] and [`EPS2`] at the
/// worst case a = 9.6.  Returns `true` when both constants are valid.
pub fn margin_constants_valid() -> bool {
    let a = LARGE_A_MIN;
    let geo = |r: f64| r / (1.0 - r);
    let eps_ok = EPS > 2.0 * geo((-a).exp()) && EPS > 5.0 * (-a).exp();
    let eps2_ok = EPS2 > 4.0 * (1.0 + EPS) * (1.0 + EPS) * geo((-2.0 * a / 3.0).exp());
    eps_ok && eps2_ok
}

/// Errors from theta-series evaluation and enclosure lookup.
#[derive(Debug, Error)]
pub enum ThetaError {
    /// The geometric tail bound failed to reach the requested tolerance
    /// within the term budget.
    #[error("tolerance {tol:e} unreachable within {max_terms} series terms")]
    ToleranceUnreachable { tol: f64, max_terms: usize },
    /// Derivative order above [`MAX_DERIV_ORDER`].
    #[error("derivative order {0} exceeds the supported maximum of {MAX_DERIV_ORDER}")]
    OrderTooLarge(usize),
    /// An enclosure was requested outside its range of validity.
    #[error("enclosure {name:?} does not apply at (a, t) = ({a}, {t}): {reason}")]
    OutOfHypothesis {
        name: EnclosureId,
        a: f64,
        t: f64,
        reason: &'static str,
    },
}

/// A floating-point value together with a rigorous bound on the omitted
/// series mass, so the true quantity lies in `[value − tail, value + tail]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifiedValue {
    pub value: f64,
    pub tail: f64,
}

impl CertifiedValue {
    pub fn new(value: f64, tail: f64) -> Self {
        debug_assert!(tail >= 0.0);
        CertifiedValue { value, tail }
    }

    /// Guaranteed lower end of the enclosing interval.
    pub fn lower(&self) -> f64 {
        self.value - self.tail
    }

    /// Guaranteed upper end of the enclosing interval.
    pub fn upper(&self) -> f64 {
        self.value + self.tail
    }

    /// Multiplies the value by an exact scalar, scaling the tail accordingly.
    pub fn scaled(&self, s: f64) -> CertifiedValue {
        CertifiedValue {
            value: self.value * s,
            tail: self.tail * s.abs(),
        }
    }
}

/// Tail bound for truncating the cosine series of θ(c;·) before term `k`:
/// the omitted mass `Σ_{j≥k} 2e^{−πj²c}` is at most
/// `2 e^{−πk²c} / (1 − e^{−π(2k+1)c})` by geometric comparison.
pub fn series_tail_bound(c: f64, k: usize) -> f64 {
    let kf = k as f64;
    2.0 * (-PI * kf * kf * c).exp() / (1.0 - (-PI * (2.0 * kf + 1.0) * c).exp())
}

/// Tail bound for the order-`n` derivative series truncated before term `k`,
/// using `|T_j^{(n)}(t)| ≤ T_j^{(n)}(1) ≤ j^{2n}` and geometric comparison.
/// Returns `None` when the comparison ratio is not yet below 1.
pub fn deriv_tail_bound(c: f64, order: usize, k: usize) -> Option<f64> {
    if order == 0 {
        return Some(series_tail_bound(c, k));
    }
    let kf = k as f64;
    let n2 = 2.0 * order as f64;
    // Successive-term ratio for j ≥ k:  ((j+1)/j)^{2n} e^{−π(2j+1)c}.
    let ratio = ((kf + 1.0) / kf).powf(n2) * (-PI * (2.0 * kf + 1.0) * c).exp();
    if ratio >= 1.0 {
        return None;
    }
    Some(2.0 * kf.powf(n2) * (-PI * kf * kf * c).exp() / (1.0 - ratio))
}

/// Evaluates θ(c; x) by the cosine series with a certified tail below `tol`.
pub fn theta(c: f64, x: f64, tol: f64) -> Result<CertifiedValue, ThetaError> {
    assert!(c > 0.0, "theta requires c > 0");
    assert!(tol > 0.0, "theta requires a positive tolerance");
    let mut value = 1.0;
    let mut compensation = 0.0;
    for k in 1..=MAX_TERMS {
        let tail = series_tail_bound(c, k);
        if tail < tol {
            return Ok(CertifiedValue::new(value, tail));
        }
        let kf = k as f64;
        let term = 2.0 * (-PI * kf * kf * c).exp() * (2.0 * PI * kf * x).cos();
        // Kahan update keeps the summation order-insensitive in practice.
        let y = term - compensation;
        let t = value + y;
        compensation = (t - value) - y;
        value = t;
    }
    Err(ThetaError::ToleranceUnreachable {
        tol,
        max_terms: MAX_TERMS,
    })
}

/// Evaluates the Poisson-dual series `c^{−1/2} Σ_k e^{−π(k+x)²/c}` with a
/// certified tail below `tol`.
pub fn theta_dual(c: f64, x: f64, tol: f64) -> Result<CertifiedValue, ThetaError> {
    assert!(c > 0.0, "theta_dual requires c > 0");
    assert!(tol > 0.0, "theta_dual requires a positive tolerance");
    let scale = c.sqrt().recip();
    // Reduce x to [−1/2, 1/2] by periodicity for the fastest decay.
    let xr = x - x.round();
    let mut sum = (-PI * xr * xr / c).exp();
    for k in 1..=MAX_TERMS {
        let kf = k as f64;
        sum += (-PI * (kf + xr) * (kf + xr) / c).exp();
        sum += (-PI * (-kf + xr) * (-kf + xr) / c).exp();
        // For |j| ≥ k+1 we have (j+xr)² ≥ (k+1/2)² + 2(k+1/2)(|j|−k−1),
        // so each side is geometric with ratio e^{−2π(k+1/2)/c}.
        let edge = kf + 0.5;
        let ratio = (-2.0 * PI * edge / c).exp();
        let tail = scale * 2.0 * (-PI * edge * edge / c).exp() / (1.0 - ratio);
        if tail < tol {
            return Ok(CertifiedValue::new(scale * sum, tail));
        }
    }
    Err(ThetaError::ToleranceUnreachable {
        tol,
        max_terms: MAX_TERMS,
    })
}

/// One step of the differentiated Chebyshev recurrence: given the derivative
/// stacks of `T_{k−1}` and `T_k` at `t` (orders `0..=order`), returns the
/// stack of `T_{k+1}` via `T_{k+1}^{(n)} = 2t T_k^{(n)} + 2n T_k^{(n−1)} − T_{k−1}^{(n)}`.
fn cheb_step(prev: &[f64; 5], cur: &[f64; 5], t: f64, order: usize) -> [f64; 5] {
    let mut next = [0.0; 5];
    for n in 0..=order {
        let lower = if n == 0 { 0.0 } else { cur[n - 1] };
        next[n] = 2.0 * t * cur[n] + 2.0 * (n as f64) * lower - prev[n];
    }
    next
}

/// Evaluates the order-`order` derivative of θ̃(c; ·) at `t ∈ [−1, 1]` with
/// a certified tail below `tol`.  Orders `0..=4` are supported; the
/// Chebyshev recurrence keeps the evaluation exact at `t = ±1`, where the
/// series degenerates to `Σ 2 e^{−πk²c} T_k^{(n)}(±1)`.
pub fn tilde_theta_deriv(
    c: f64,
    t: f64,
    order: usize,
    tol: f64,
) -> Result<CertifiedValue, ThetaError> {
    assert!(c > 0.0, "tilde_theta_deriv requires c > 0");
    assert!(tol > 0.0, "tilde_theta_deriv requires a positive tolerance");
    assert!(
        (-1.0..=1.0).contains(&t),
        "tilde_theta_deriv requires t in [-1, 1]"
    );
    if order > MAX_DERIV_ORDER {
        return Err(ThetaError::OrderTooLarge(order));
    }
    // For small c the cosine series cancels O(1) alternating terms down to
    // values that can be exponentially small, leaving absolute rounding
    // noise (~1e−16) that dwarfs them.  The Poisson-dual Gaussian sum has
    // no cancellation there, so low orders switch to it: order 0 directly,
    // order 1 via the chain rule through x = arccos(t)/2π away from the
    // sin(2πx) = 0 endpoints (where the cosine series is cancellation-free
    // at t = 1 and only used through coarse enclosures at t = −1).
    if c < DUAL_SWITCH {
        let x = t.clamp(-1.0, 1.0).acos() / (2.0 * PI);
        if order == 0 {
            return theta_dual(c, x, tol);
        }
        let sin2pix = (1.0 - t * t).max(0.0).sqrt();
        if order == 1 && sin2pix > 1e-6 {
            return tilde_theta_deriv_dual(c, x, sin2pix, tol);
        }
    }
    let mut value = if order == 0 { 1.0 } else { 0.0 };
    let mut compensation = 0.0;
    // Derivative stacks of T_0 and T_1.
    let mut prev = [1.0, 0.0, 0.0, 0.0, 0.0];
    let mut cur = [t, 1.0, 0.0, 0.0, 0.0];
    for k in 1..=MAX_TERMS {
        if let Some(tail) = deriv_tail_bound(c, order, k) {
            if tail < tol {
                return Ok(CertifiedValue::new(value, tail));
            }
        }
        let kf = k as f64;
        let term = 2.0 * (-PI * kf * kf * c).exp() * cur[order];
        let y = term - compensation;
        let s = value + y;
        compensation = (s - value) - y;
        value = s;
        let next = cheb_step(&prev, &cur, t, order);
        prev = cur;
        cur = next;
    }
    Err(ThetaError::ToleranceUnreachable {
        tol,
        max_terms: MAX_TERMS,
    })
}

/// Threshold below which [`tilde_theta_deriv`] evaluates through the
/// Poisson-dual Gaussian sum (π/c > ~21, where the q-series needs dozens of
/// cancelling terms).
const DUAL_SWITCH: f64 = 0.15;

/// First derivative of θ̃(c; ·) through the dual sum:
/// `θ̃′(t) = Σ_j (j+x) e^{−π(j+x)²/c} / (c^{3/2} sin 2πx)` for
/// `x = arccos(t)/2π ∈ (0, 1/2)`.  Every retained term is computed at full
/// relative precision, so the result stays accurate even when it is
/// exponentially small.
fn tilde_theta_deriv_dual(
    c: f64,
    x: f64,
    sin2pix: f64,
    tol: f64,
) -> Result<CertifiedValue, ThetaError> {
    let scale = 1.0 / (c.powf(1.5) * sin2pix);
    let mut sum = x * (-PI * x * x / c).exp();
    for k in 1..=MAX_TERMS {
        let kf = k as f64;
        sum += (kf + x) * (-PI * (kf + x) * (kf + x) / c).exp();
        sum -= (kf - x) * (-PI * (kf - x) * (kf - x) / c).exp();
        // Beyond |j| = k the terms are bounded by (j+1)e^{−π(j+x)²/c} with
        // (j+x)² ≥ (k+1/2)² + 2(k+1/2)(j−k−1), a geometric envelope.
        let edge = kf + 0.5;
        let ratio = (-2.0 * PI * edge / c).exp();
        let tail = scale * 2.0 * (kf + 1.5) * (-PI * edge * edge / c).exp()
            / (1.0 - ratio).powi(2);
        if tail < tol {
            return Ok(CertifiedValue::new(scale * sum, tail));
        }
    }
    Err(ThetaError::ToleranceUnreachable {
        tol,
        max_terms: MAX_TERMS,
    })
}

/// Partial sum of the order-`order` derivative series of θ̃(c; ·), keeping
/// exactly the terms `k = 1..=j` (plus the constant 1 at order 0).  These
/// truncations are the raw material of the small-`a` enclosures.
pub fn tilde_theta_deriv_partial(c: f64, t: f64, order: usize, j: usize) -> f64 {
    assert!(order <= MAX_DERIV_ORDER);
    let mut value = if order == 0 { 1.0 } else { 0.0 };
    let mut prev = [1.0, 0.0, 0.0, 0.0, 0.0];
    let mut cur = [t, 1.0, 0.0, 0.0, 0.0];
    for k in 1..=j {
        let kf = k as f64;
        value += 2.0 * (-PI * kf * kf * c).exp() * cur[order];
        let next = cheb_step(&prev, &cur, t, order);
        prev = cur;
        cur = next;
    }
    value
}

/// Partial Jacobi triple product with `n_factors` factors:
///
/// ```text
/// Π_{r=1}^{R} (1 − e^{−2πrc}) (1 + 2 e^{−(2r−1)πc} t + e^{−2(2r−1)πc}),
/// ```
///
/// which converges to θ̃(c; t) as `R → ∞`.
pub fn triple_product(c: f64, t: f64, n_factors: usize) -> f64 {
    assert!(c > 0.0, "triple_product requires c > 0");
    assert!(n_factors >= 1, "triple_product requires n_factors >= 1");
    let mut product = 1.0;
    for r in 1..=n_factors {
        let rf = r as f64;
        let q_even = (-2.0 * PI * rf * c).exp();
        let q_odd = (-(2.0 * rf - 1.0) * PI * c).exp();
        product *= (1.0 - q_even) * (1.0 + 2.0 * q_odd * t + q_odd * q_odd);
    }
    product
}

/// Selects which Gaussian-periodization factor is meant: the first factor
/// uses sharpness `a` (parameter `c = π/a`), the second uses `3a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    First,
    Second,
}

impl Factor {
    /// Effective Gaussian sharpness of this factor.
    pub fn sharpness(self, a: f64) -> f64 {
        match self {
            Factor::First => a,
            Factor::Second => 3.0 * a,
        }
    }
}

/// Normalization convention for the factors f̃1, f̃2.
///
/// * `Series`: the bare substituted series θ̃(π/(ma); t) — natural when the
///   q-series converges quickly (small `a`).
/// * `Gaussian`: the periodized-Gaussian normalization
///   `√(π/(ma)) θ̃(π/(ma); t) = Σ_k e^{−ma(k+x)²}` — natural for large `a`,
///   where one or two Gaussian bumps dominate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    Series,
    Gaussian,
}

/// Sharpness parameter with its evaluation regime: the series convention is
/// used for `a ≤ π²` and the Gaussian convention for `a > π²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaRegime {
    pub a: f64,
}

impl ThetaRegime {
    pub fn new(a: f64) -> Self {
        assert!(a > 0.0, "sharpness must be positive");
        ThetaRegime { a }
    }

    /// Convention selected by the regime boundary a = π² (inclusive on the
    /// series side).
    pub fn convention(&self) -> Convention {
        if self.a <= PI * PI {
            Convention::Series
        } else {
            Convention::Gaussian
        }
    }

    /// The exact normalization factor `√(π/(ma))` distinguishing the two
    /// conventions for the given factor.
    pub fn gaussian_scale(&self, which: Factor) -> f64 {
        (PI / which.sharpness(self.a)).sqrt()
    }
}

/// Order-`order` derivative of a factor in an explicitly chosen convention.
pub fn factor_deriv(
    a: f64,
    which: Factor,
    convention: Convention,
    t: f64,
    order: usize,
    tol: f64,
) -> Result<CertifiedValue, ThetaError> {
    let c = PI / which.sharpness(a);
    let raw = tilde_theta_deriv(c, t, order, tol)?;
    Ok(match convention {
        Convention::Series => raw,
        Convention::Gaussian => raw.scaled((PI / which.sharpness(a)).sqrt()),
    })
}

/// Value of f̃1 or f̃2 in the convention selected by the regime.
pub fn f1f2(
    regime: ThetaRegime,
    which: Factor,
    t: f64,
    tol: f64,
) -> Result<CertifiedValue, ThetaError> {
    factor_deriv(regime.a, which, regime.convention(), t, 0, tol)
}

/// Derivative of f̃1 or f̃2 in the convention selected by the regime.
pub fn f1f2_deriv(
    regime: ThetaRegime,
    which: Factor,
    t: f64,
    order: usize,
    tol: f64,
) -> Result<CertifiedValue, ThetaError> {
    factor_deriv(regime.a, which, regime.convention(), t, order, tol)
}

/// Registry of the closed-form lower/upper bound pairs for f̃1, f̃2 and
/// their derivatives used by the certificate suite.  Each variant records
/// one displayed estimate; [`enclosure`] evaluates it and enforces its
/// hypotheses.
///
/// The `SmallTrunc*` variants bound the series convention (valid for
/// `d = π²/a > 1`, i.e. `a < π²`) by explicit truncations plus a constant
/// multiple of the first omitted Gaussian weight.  The `Large*` variants
/// bound the Gaussian convention (valid for `a ≥ 9.6`) by one or two
/// Gaussian bumps with relative slack [`EPS`] / [`EPS2`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnclosureId {
    /// f̃1(t) within `±e^{−4d}/50` of its 2-term truncation; any t.
    SmallTruncF1Value,
    /// f̃2(t) within `±e^{−16d/3}/5` of its 4-term truncation; any t.
    SmallTruncF2Value,
    /// f̃1′(t) within `±e^{−4d}/8` of its 2-term truncation; t = ±1.
    SmallTruncF1Deriv,
    /// f̃2′(t) within `±4e^{−25d/3}` of its 5-term truncation;
    /// t ∈ {−1, −1/2, 1/2, 1}.
    SmallTruncF2Deriv,
    /// f̃2″(t) within `±5e^{−25d/3}` of its 5-term truncation; t = ±1/2.
    SmallTruncF2Second,
    /// f̃1(t) between `e^{−ax²}+e^{−a(x−1)²}` and
    /// `(1+ε)e^{−ax²}(1+e^{−a(1−2x)})` for x = arccos(t)/2π ∈ [0, 1/2].
    LargeF1Value,
    /// f̃2(t) between `e^{−3au²}` and `(1+ε)e^{−3au²}` for t ∈ [−1/2, 1].
    LargeF2Value,
    /// f̃1(1) ∈ (1, 1+ε).
    LargeF1At1,
    /// f̃2(1) ∈ (1, 1+ε).
    LargeF2At1,
    /// f̃1(−1) ∈ (2e^{−a/4}, 2(1+ε)e^{−a/4}).
    LargeF1AtNeg1,
    /// f̃2(−1) ∈ (2e^{−3a/4}, 2(1+ε)e^{−3a/4}).
    LargeF2AtNeg1,
    /// f̃1′(t) between `a e^{−ax²}(x−(1−x)e^{−a(1−2x)})/(π sin 2πx)` and
    /// `a x e^{−ax²}/(π sin 2πx)` for x ∈ (0, 1/2).
    LargeF1DerivInterior,
    /// The same bumps-versus-secant bound for f̃2′ with sharpness 3a.
    LargeF2DerivInterior,
    /// f̃1′(1) ∈ ((1−ε₂) a/(2π²), a/(2π²)).
    LargeF1DerivAt1,
    /// Sharper variant for a ≥ 21: f̃1′(1) ∈ ((1−ε) a/(2π²), a/(2π²)).
    LargeF1DerivAt1Refined,
    /// f̃1′(−1) ∈ (a(a−2)e^{−a/4}/(2π²), a(a−2+ε)e^{−a/4}/(2π²)).
    LargeF1DerivAtNeg1,
    /// f̃2′(1) ∈ ((1−ε₂)·3a/(2π²), 3a/(2π²)).
    LargeF2DerivAt1,
    /// Sharper variant for 3a ≥ 21: f̃2′(1) ∈ ((1−ε)·3a/(2π²), 3a/(2π²)).
    LargeF2DerivAt1Refined,
    /// f̃2′(−1) ∈ (3a(3a−2)e^{−3a/4}/(2π²), 3a(3a−2+ε)e^{−3a/4}/(2π²)).
    LargeF2DerivAtNeg1,
    /// f̃2′(1/2) ∈ ((1−ε) a e^{−a/12}/(√3π), a e^{−a/12}/(√3π)).
    LargeF2DerivAtHalf,
    /// f̃2′(−1/2) ∈ (2(1−ε) a e^{−a/3}/(√3π), 2a e^{−a/3}/(√3π)).
    LargeF2DerivAtNegHalf,
    /// One-sided: f̃2″(1/2) ≥ (4a/π²) e^{−a/12} (−1/2 + π/(6√3) + a/12).
    LargeF2SecondAtHalf,
    /// One-sided: f̃2″(−1/2) ≤ (4a/π²) e^{−a/3} (1/2 − π/(3√3) + a/3).
    LargeF2SecondAtNegHalf,
}

/// All registry entries, in declaration order.
pub const ALL_ENCLOSURES: [EnclosureId; 23] = [
    EnclosureId::SmallTruncF1Value,
    EnclosureId::SmallTruncF2Value,
    EnclosureId::SmallTruncF1Deriv,
    EnclosureId::SmallTruncF2Deriv,
    EnclosureId::SmallTruncF2Second,
    EnclosureId::LargeF1Value,
    EnclosureId::LargeF2Value,
    EnclosureId::LargeF1At1,
    EnclosureId::LargeF2At1,
    EnclosureId::LargeF1AtNeg1,
    EnclosureId::LargeF2AtNeg1,
    EnclosureId::LargeF1DerivInterior,
    EnclosureId::LargeF2DerivInterior,
    EnclosureId::LargeF1DerivAt1,
    EnclosureId::LargeF1DerivAt1Refined,
    EnclosureId::LargeF1DerivAtNeg1,
    EnclosureId::LargeF2DerivAt1,
    EnclosureId::LargeF2DerivAt1Refined,
    EnclosureId::LargeF2DerivAtNeg1,
    EnclosureId::LargeF2DerivAtHalf,
    EnclosureId::LargeF2DerivAtNegHalf,
    EnclosureId::LargeF2SecondAtHalf,
    EnclosureId::LargeF2SecondAtNegHalf,
];

impl EnclosureId {
    /// Which factor this enclosure bounds.
    pub fn factor(self) -> Factor {
        use EnclosureId::*;
        match self {
            SmallTruncF1Value | SmallTruncF1Deriv | LargeF1Value | LargeF1At1 | LargeF1AtNeg1
            | LargeF1DerivInterior | LargeF1DerivAt1 | LargeF1DerivAt1Refined
            | LargeF1DerivAtNeg1 => Factor::First,
            _ => Factor::Second,
        }
    }

    /// Derivative order of the bounded quantity.
    pub fn order(self) -> usize {
        use EnclosureId::*;
        match self {
            SmallTruncF1Value | SmallTruncF2Value | LargeF1Value | LargeF2Value | LargeF1At1
            | LargeF2At1 | LargeF1AtNeg1 | LargeF2AtNeg1 => 0,
            SmallTruncF2Second | LargeF2SecondAtHalf | LargeF2SecondAtNegHalf => 2,
            _ => 1,
        }
    }

    /// Which normalization convention the bounds refer to.
    pub fn convention(self) -> Convention {
        use EnclosureId::*;
        match self {
            SmallTruncF1Value | SmallTruncF2Value | SmallTruncF1Deriv | SmallTruncF2Deriv
            | SmallTruncF2Second => Convention::Series,
            _ => Convention::Gaussian,
        }
    }
}

fn small_a_check(name: EnclosureId, a: f64, t: f64) -> Result<f64, ThetaError> {
    if !(0.0 < a && a < PI * PI) {
        return Err(ThetaError::OutOfHypothesis {
            name,
            a,
            t,
            reason: "requires 0 < a < pi^2 (so that d = pi^2/a > 1)",
        });
    }
    if !(-1.0..=1.0).contains(&t) {
        return Err(ThetaError::OutOfHypothesis {
            name,
            a,
            t,
            reason: "requires t in [-1, 1]",
        });
    }
    Ok(PI * PI / a)
}

fn large_a_check(name: EnclosureId, a: f64, t: f64) -> Result<(), ThetaError> {
    if a < LARGE_A_MIN {
        return Err(ThetaError::OutOfHypothesis {
            name,
            a,
            t,
            reason: "requires a >= 9.6",
        });
    }
    Ok(())
}

fn require_point(name: EnclosureId, a: f64, t: f64, allowed: &[f64]) -> Result<(), ThetaError> {
    if allowed.iter().any(|&p| t == p) {
        Ok(())
    } else {
        Err(ThetaError::OutOfHypothesis {
            name,
            a,
            t,
            reason: "t outside the finite point set of this estimate",
        })
    }
}

/// Gaussian-bump value bounds for a periodized Gaussian of sharpness `s` at
/// `x = arccos(t)/(2π) ∈ [0, 1/2]`: returns
/// `(e^{−sx²}+e^{−s(x−1)²}, (1+ε)e^{−sx²}(1+e^{−s(1−2x)}))`.
fn bump_value_bounds(s: f64, x: f64) -> (f64, f64) {
    let lo = (-s * x * x).exp() + (-s * (x - 1.0) * (x - 1.0)).exp();
    let hi = (1.0 + EPS) * (-s * x * x).exp() * (1.0 + (-s * (1.0 - 2.0 * x)).exp());
    (lo, hi)
}

/// Gaussian-bump derivative bounds at interior `x ∈ (0, 1/2)` for sharpness
/// `s`:  `s e^{−sx²}(x−(1−x)e^{−s(1−2x)})/(π sin 2πx) ≤ θ̃′ ≤ s x e^{−sx²}/(π sin 2πx)`.
fn bump_deriv_bounds(s: f64, x: f64) -> (f64, f64) {
    let sin = (2.0 * PI * x).sin();
    let gauss = (-s * x * x).exp();
    let lo = s * gauss * (x - (1.0 - x) * (-s * (1.0 - 2.0 * x)).exp()) / (PI * sin);
    let hi = s * x * gauss / (PI * sin);
    // The correction term can underflow, leaving lo above hi by one ulp.
    (lo.min(hi), hi.max(lo))
}

/// Evaluates the named closed-form enclosure at sharpness `a` and abscissa
/// `t`, returning `(lower, upper)` bounds on the quantity identified by
/// [`EnclosureId::factor`], [`EnclosureId::order`], and
/// [`EnclosureId::convention`].  One-sided estimates report `±∞` on the
/// missing side.
pub fn enclosure(name: EnclosureId, a: f64, t: f64) -> Result<(f64, f64), ThetaError> {
    use EnclosureId::*;
    let pair = match name {
        SmallTruncF1Value => {
            let d = small_a_check(name, a, t)?;
            let mid = tilde_theta_deriv_partial(PI / a, t, 0, 2);
            let pad = (-4.0 * d).exp() / 50.0;
            (mid - pad, mid + pad)
        }
        SmallTruncF2Value => {
            let d = small_a_check(name, a, t)?;
            let mid = tilde_theta_deriv_partial(PI / (3.0 * a), t, 0, 4);
            let pad = (-16.0 * d / 3.0).exp() / 5.0;
            (mid - pad, mid + pad)
        }
        SmallTruncF1Deriv => {
            let d = small_a_check(name, a, t)?;
            require_point(name, a, t, &[-1.0, 1.0])?;
            let mid = tilde_theta_deriv_partial(PI / a, t, 1, 2);
            let pad = (-4.0 * d).exp() / 8.0;
            (mid - pad, mid + pad)
        }
        SmallTruncF2Deriv => {
            let d = small_a_check(name, a, t)?;
            require_point(name, a, t, &[-1.0, -0.5, 0.5, 1.0])?;
            let mid = tilde_theta_deriv_partial(PI / (3.0 * a), t, 1, 5);
            let pad = 4.0 * (-25.0 * d / 3.0).exp();
            (mid - pad, mid + pad)
        }
        SmallTruncF2Second => {
            let d = small_a_check(name, a, t)?;
            require_point(name, a, t, &[-0.5, 0.5])?;
            let mid = tilde_theta_deriv_partial(PI / (3.0 * a), t, 2, 5);
            let pad = 5.0 * (-25.0 * d / 3.0).exp();
            (mid - pad, mid + pad)
        }
        LargeF1Value => {
            large_a_check(name, a, t)?;
            if !(-1.0..=1.0).contains(&t) {
                return Err(ThetaError::OutOfHypothesis {
                    name,
                    a,
                    t,
                    reason: "requires t in [-1, 1]",
                });
            }
            let x = t.acos() / (2.0 * PI);
            bump_value_bounds(a, x)
        }
        LargeF2Value => {
            large_a_check(name, a, t)?;
            if !(-0.5..=1.0).contains(&t) {
                return Err(ThetaError::OutOfHypothesis {
                    name,
                    a,
                    t,
                    reason: "requires t in [-1/2, 1]",
                });
            }
            let u = t.acos() / (2.0 * PI);
            let g = (-3.0 * a * u * u).exp();
            (g, (1.0 + EPS) * g)
        }
        LargeF1At1 => {
            large_a_check(name, a, t)?;
            require_point(name, a, t, &[1.0])?;
            (1.0, 1.0 + EPS)
        }
        LargeF2At1 => {
            large_a_check(name, a, t)?;
            require_point(name, a, t, &[1.0])?;
            (1.0, 1.0 + EPS)
        }
        LargeF1AtNeg1 => {
            large_a_check(name, a, t)?;
            require_point(name, a, t, &[-1.0])?;
            let g = (-a / 4.0).exp();
            (2.0 * g, 2.0 * (1.0 + EPS) * g)
        }
        LargeF2AtNeg1 => {
            large_a_check(name, a, t)?;
            require_point(name, a, t, &[-1.0])?;
            let g = (-3.0 * a / 4.0).exp();
            (2.0 * g, 2.0 * (1.0 + EPS) * g)
        }
        LargeF1DerivInterior => {
            large_a_check(name, a, t)?;
            if !(-1.0 < t && t < 1.0) {
                return Err(ThetaError::OutOfHypothesis {
                    name,
                    a,
                    t,
                    reason: "requires t in (-1, 1)",
                });
            }
            bump_deriv_bounds(a, t.acos() / (2.0 * PI))
        }
        LargeF2DerivInterior => {
            large_a_check(name, a, t)?;
            if !(-1.0 < t && t < 1.0) {
                return Err(ThetaError::OutOfHypothesis {
                    name,
                    a,
                    t,
                    reason: "requires t in (-1, 1)",
                });
            }
            bump_deriv_bounds(3.0 * a, t.acos() / (2.0 * PI))
        }
        LargeF1DerivAt1 => {
            large_a_check(name, a, t)?;
            require_point(name, a, t, &[1.0])?;
            let m = a / (2.0 * PI * PI);
            ((1.0 - EPS2) * m, m)
        }
        LargeF1DerivAt1Refined => {
            if a < 21.0 {
                return Err(ThetaError::OutOfHypothesis {
                    name,
                    a,
                    t,
                    reason: "requires a >= 21",
                });
            }
            require_point(name, a, t, &[1.0])?;
            let m = a / (2.0 * PI * PI);
            ((1.0 - EPS) * m, m)
        }
        LargeF1DerivAtNeg1 => {
            large_a_check(name, a, t)?;
            require_point(name, a, t, &[-1.0])?;
            let m = a / (2.0 * PI * PI) * (-a / 4.0).exp();
            (m * (a - 2.0), m * (a - 2.0 + EPS))
        }
        LargeF2DerivAt1 => {
            large_a_check(name, a, t)?;
            require_point(name, a, t, &[1.0])?;
            let m = 3.0 * a / (2.0 * PI * PI);
            ((1.0 - EPS2) * m, m)
        }
        LargeF2DerivAt1Refined => {
            if 3.0 * a < 21.0 {
                return Err(ThetaError::OutOfHypothesis {
                    name,
                    a,
                    t,
                    reason: "requires 3a >= 21",
                });
            }
            large_a_check(name, a, t)?;
            require_point(name, a, t, &[1.0])?;
            let m = 3.0 * a / (2.0 * PI * PI);
            ((1.0 - EPS) * m, m)
        }
        LargeF2DerivAtNeg1 => {
            large_a_check(name, a, t)?;
            require_point(name, a, t, &[-1.0])?;
            let m = 3.0 * a / (2.0 * PI * PI) * (-3.0 * a / 4.0).exp();
            (m * (3.0 * a - 2.0), m * (3.0 * a - 2.0 + EPS))
        }
        LargeF2DerivAtHalf => {
            large_a_check(name, a, t)?;
            require_point(name, a, t, &[0.5])?;
            let m = a * (-a / 12.0).exp() / (3.0f64.sqrt() * PI);
            ((1.0 - EPS) * m, m)
        }
        LargeF2DerivAtNegHalf => {
            large_a_check(name, a, t)?;
            require_point(name, a, t, &[-0.5])?;
            let m = 2.0 * a * (-a / 3.0).exp() / (3.0f64.sqrt() * PI);
            ((1.0 - EPS) * m, m)
        }
        LargeF2SecondAtHalf => {
            large_a_check(name, a, t)?;
            require_point(name, a, t, &[0.5])?;
            let lo = 4.0 * a / (PI * PI)
                * (-a / 12.0).exp()
                * (-0.5 + PI / (6.0 * 3.0f64.sqrt()) + a / 12.0);
            (lo, f64::INFINITY)
        }
        LargeF2SecondAtNegHalf => {
            large_a_check(name, a, t)?;
            require_point(name, a, t, &[-0.5])?;
            let hi = 4.0 * a / (PI * PI)
                * (-a / 3.0).exp()
                * (0.5 - PI / (3.0 * 3.0f64.sqrt()) + a / 3.0);
            (f64::NEG_INFINITY, hi)
        }
    };
    debug_assert!(
        pair.0 <= pair.1,
        "inverted enclosure {name:?} at a={a}, t={t}: {pair:?}"
    );
    Ok(pair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const TOL: f64 = 1e-14;

    #[test]
    fn margin_constants_hold() {
        assert!(margin_constants_valid());
    }

    #[test]
    fn theta_matches_direct_summation() {
        // 50-term direct sum of 1 + 2 Σ e^{-πk²} at x = 0.
        let direct: f64 = 1.0 + 2.0 * (1..50).map(|k| (-PI * (k * k) as f64).exp()).sum::<f64>();
        let v = theta(1.0, 0.0, TOL).unwrap();
        assert_abs_diff_eq!(v.value, direct, epsilon = 1e-14);
    }

    #[test]
    fn theta_even_and_periodic() {
        for &c in &[0.3, 1.0, 2.5] {
            for &x in &[0.13, 0.31, 0.49] {
                let a = theta(c, x, TOL).unwrap().value;
                let b = theta(c, -x, TOL).unwrap().value;
                let p = theta(c, x + 1.0, TOL).unwrap().value;
                assert_abs_diff_eq!(a, b, epsilon = 1e-13);
                assert_abs_diff_eq!(a, p, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn poisson_identity_across_scales() {
        for &c in &[0.05, 0.2, 1.0, 5.0, 40.0, 100.0] {
            for &x in &[0.0, 0.17, 0.5, 0.93] {
                let s = theta(c, x, TOL).unwrap();
                let d = theta_dual(c, x, TOL).unwrap();
                let slack = s.tail + d.tail + 1e-13;
                assert!(
                    (s.value - d.value).abs() <= slack,
                    "poisson mismatch at c={c}, x={x}: {} vs {}",
                    s.value,
                    d.value
                );
            }
        }
    }

    #[test]
    fn dual_central_term_dominates_for_fast_decay() {
        // For small c the k=0 Gaussian dominates the dual series.
        let c = 0.05;
        let v = theta_dual(c, 0.0, 1e-13).unwrap();
        assert!(v.value >= c.sqrt().recip());
        assert_abs_diff_eq!(v.value, c.sqrt().recip(), epsilon = 1e-10);
        // For large c the value stays above the k=0 term alone.
        let big = theta_dual(400.0, 0.0, 1e-12).unwrap();
        assert!(big.value >= 400.0f64.sqrt().recip());
    }

    #[test]
    fn tilde_theta_agrees_with_theta_under_substitution() {
        for &c in &[0.4, 1.0, 3.0] {
            for &x in &[0.0, 0.1, 0.25, 0.5] {
                let direct = theta(c, x, TOL).unwrap().value;
                let sub = tilde_theta_deriv(c, (2.0 * PI * x).cos(), 0, TOL).unwrap().value;
                assert_abs_diff_eq!(direct, sub, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn first_derivative_at_one_matches_limit_series_and_finite_difference() {
        let c = 1.0;
        // Explicit limit series Σ 2k² e^{−ck²π}.
        let series: f64 = (1..60).map(|k| 2.0 * ((k * k) as f64) * (-c * PI * ((k * k) as f64)).exp()).sum();
        let v = tilde_theta_deriv(c, 1.0, 1, TOL).unwrap();
        assert_abs_diff_eq!(v.value, series, epsilon = 1e-13);
        // Central finite difference of the order-0 evaluation.
        let h = 1e-4;
        let f = |t: f64| tilde_theta_deriv(c, t, 0, TOL).unwrap().value;
        let fd = (f(1.0) - f(1.0 - 2.0 * h)) / (2.0 * h);
        assert!((v.value - fd).abs() < 1e-6, "fd mismatch: {} vs {}", v.value, fd);
    }

    #[test]
    fn alternating_limit_series_at_minus_one() {
        let c = 0.8;
        let series: f64 = (1..60)
            .map(|k| {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * 2.0 * ((k * k) as f64) * (-c * PI * ((k * k) as f64)).exp()
            })
            .sum();
        let v = tilde_theta_deriv(c, -1.0, 1, TOL).unwrap();
        assert_abs_diff_eq!(v.value, series, epsilon = 1e-13);
    }

    #[test]
    fn derivatives_strictly_positive_on_grid() {
        for &c in &[0.3, 1.0, 3.0] {
            for order in 1..=4 {
                for i in 0..50 {
                    let t = -1.0 + 2.0 * (i as f64) / 49.0;
                    // Fixed 40-term partial sums: the certified evaluation may
                    // stop before the first nonzero term when the whole series
                    // is below tolerance.
                    let v = tilde_theta_deriv_partial(c, t, order, 40);
                    assert!(
                        v > 0.0,
                        "nonpositive derivative: c={c}, order={order}, t={t}"
                    );
                }
            }
        }
    }

    #[test]
    fn finite_difference_oracle_for_higher_orders() {
        let c = 0.7;
        let h = 1e-4;
        for order in 1..=3 {
            for &t in &[-0.6, 0.0, 0.4] {
                let f = |s: f64| tilde_theta_deriv(c, s, order - 1, TOL).unwrap().value;
                let fd = (f(t + h) - f(t - h)) / (2.0 * h);
                let v = tilde_theta_deriv(c, t, order, TOL).unwrap().value;
                assert!((v - fd).abs() < 1e-5 * v.abs().max(1.0), "order {order}, t {t}");
            }
        }
    }

    #[test]
    fn triple_product_matches_series() {
        for &c in &[0.5, 1.0, 3.0] {
            for i in 0..100 {
                let t = -1.0 + 2.0 * (i as f64) / 99.0;
                let series = tilde_theta_deriv(c, t, 0, TOL).unwrap().value;
                let product = triple_product(c, t, 60);
                assert!(
                    (series - product).abs() < 1e-12,
                    "c={c}, t={t}: {series} vs {product}"
                );
            }
        }
    }

    #[test]
    fn triple_product_positive_at_minus_one() {
        assert!(triple_product(4.0, -1.0, 40) > 0.0);
    }

    #[test]
    fn log_derivative_is_completely_monotone() {
        // The ratio θ̃'/θ̃ is completely monotone on [−1,1]: positive,
        // decreasing, and convex (alternating derivative signs).
        let c = 1.0;
        let ratio = |t: f64| {
            let d1 = tilde_theta_deriv(c, t, 1, TOL).unwrap().value;
            let d0 = tilde_theta_deriv(c, t, 0, TOL).unwrap().value;
            d1 / d0
        };
        let h = 1e-3;
        for &t in &[-0.8, -0.3, 0.0, 0.4, 0.8] {
            let r = ratio(t);
            let r1 = (ratio(t + h) - ratio(t - h)) / (2.0 * h);
            let r2 = (ratio(t + h) - 2.0 * r + ratio(t - h)) / (h * h);
            assert!(r > 0.0 && r1 < 0.0 && r2 > 0.0, "t={t}: {r}, {r1}, {r2}");
        }
    }

    #[test]
    fn tail_bounds_monotone_in_truncation_point() {
        for &c in &[0.1, 1.0, 5.0] {
            let mut prev = f64::INFINITY;
            for k in 1..30 {
                let tail = series_tail_bound(c, k);
                assert!(tail <= prev);
                prev = tail;
            }
            for order in 1..=4 {
                let mut prev = f64::INFINITY;
                for k in 1..60 {
                    if let Some(tail) = deriv_tail_bound(c, order, k) {
                        assert!(tail <= prev, "c={c}, order={order}, k={k}");
                        prev = tail;
                    }
                }
            }
        }
    }

    #[test]
    fn regime_boundary_scale_factor() {
        let a = PI * PI;
        let small = ThetaRegime::new(a);
        assert_eq!(small.convention(), Convention::Series);
        let just_above = ThetaRegime::new(a + 1e-9);
        assert_eq!(just_above.convention(), Convention::Gaussian);
        // At the boundary both conventions differ exactly by √(π/a) = 1/√π.
        let t = 0.3;
        let series = factor_deriv(a, Factor::First, Convention::Series, t, 0, TOL).unwrap();
        let gauss = factor_deriv(a, Factor::First, Convention::Gaussian, t, 0, TOL).unwrap();
        assert_abs_diff_eq!(gauss.value, series.value * (PI / a).sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn f1_near_one_for_large_a() {
        for &a in &[9.6, 20.0, 50.0] {
            let v = factor_deriv(a, Factor::First, Convention::Gaussian, 1.0, 0, 1e-13).unwrap();
            // 1e-12 slack absorbs the rounding of the √(π/a) rescaling.
            assert!(
                v.value > 1.0 - 1e-12 && v.value < 1.0 + EPS,
                "a={a}: {}",
                v.value
            );
        }
    }

    #[test]
    fn enclosures_bracket_series_values() {
        // For every registry entry, the certified series value of the bounded
        // quantity must lie inside the closed-form enclosure at a sample of
        // admissible (a, t).
        use EnclosureId::*;
        let small_as = [1.1, 3.0, 7.0, 9.3];
        let large_as = [9.6, 11.0, 15.0, 21.0, 40.0, 90.0];
        for &id in ALL_ENCLOSURES.iter() {
            let (a_samples, t_samples): (&[f64], Vec<f64>) = match id {
                SmallTruncF1Value | SmallTruncF2Value => {
                    (&small_as, vec![-1.0, -0.63, 0.0, 0.41, 1.0])
                }
                SmallTruncF1Deriv => (&small_as, vec![-1.0, 1.0]),
                SmallTruncF2Deriv => (&small_as, vec![-1.0, -0.5, 0.5, 1.0]),
                SmallTruncF2Second => (&small_as, vec![-0.5, 0.5]),
                LargeF1Value => (&large_as, vec![-1.0, -0.5, 0.0, 0.5, 1.0]),
                LargeF2Value => (&large_as, vec![-0.5, -0.2, 0.3, 1.0]),
                LargeF1At1 | LargeF2At1 => (&large_as, vec![1.0]),
                LargeF1AtNeg1 | LargeF2AtNeg1 => (&large_as, vec![-1.0]),
                LargeF1DerivInterior | LargeF2DerivInterior => {
                    (&large_as, vec![-0.9, -0.5, 0.0, 0.5, 0.9])
                }
                LargeF1DerivAt1 | LargeF2DerivAt1 => (&large_as, vec![1.0]),
                LargeF1DerivAt1Refined => (&[21.0, 40.0, 90.0][..], vec![1.0]),
                LargeF2DerivAt1Refined => (&[9.6, 15.0, 40.0][..], vec![1.0]),
                LargeF1DerivAtNeg1 | LargeF2DerivAtNeg1 => (&large_as, vec![-1.0]),
                LargeF2DerivAtHalf => (&large_as, vec![0.5]),
                LargeF2DerivAtNegHalf => (&large_as, vec![-0.5]),
                LargeF2SecondAtHalf => (&large_as, vec![0.5]),
                LargeF2SecondAtNegHalf => (&large_as, vec![-0.5]),
            };
            for &a in a_samples {
                for &t in &t_samples {
                    let (lo, hi) = enclosure(id, a, t).unwrap();
                    assert!(lo <= hi, "{id:?} inverted at a={a}, t={t}");
                    let series =
                        factor_deriv(a, id.factor(), id.convention(), t, id.order(), 1e-13)
                            .unwrap();
                    // Rounding slack: the displayed bounds are strict
                    // mathematically but may touch within a few ulps.
                    let slack = series.tail + 1e-11 * (1.0 + series.value.abs());
                    assert!(
                        lo - slack <= series.value && series.value <= hi + slack,
                        "{id:?} fails at a={a}, t={t}: {} not in [{lo}, {hi}]",
                        series.value
                    );
                }
            }
        }
    }

    #[test]
    fn enclosure_rejects_out_of_hypothesis_points() {
        assert!(enclosure(EnclosureId::LargeF1Value, 5.0, 0.0).is_err());
        assert!(enclosure(EnclosureId::SmallTruncF1Value, 12.0, 0.0).is_err());
        assert!(enclosure(EnclosureId::LargeF2Value, 12.0, -0.9).is_err());
        assert!(enclosure(EnclosureId::SmallTruncF2Second, 3.0, 0.3).is_err());
        assert!(enclosure(EnclosureId::LargeF1DerivAt1Refined, 15.0, 1.0).is_err());
    }
}
