//! Symmetrized cosine basis functions and their polynomial images.
//!
//! For a lattice Λ with symmetry group G and dual vector v, the basic
//! building block is the group-averaged exponential
//!
//! ```text
//! C_v(x) = (1/|G(v)|) Σ_{v' ∈ G(v)} e^{2πi v'·x},
//! ```
//!
//! which is real by the ±v symmetry of the orbit.  Both lattices used here
//! (the hexagonal lattice A2 and the rectangular lattice L = Z×√3Z) contain
//! L as a rectangular sublattice, so under the change of variables
//!
//! ```text
//! (t1, t2) = T(x) = (cos 2πx₁, cos(2πx₂/√3))
//! ```
//!
//! every C_v becomes a bivariate polynomial P_v(t1, t2).  For L these are
//! tensor Chebyshev polynomials T_{k1}(t1)T_{k2}(t2); for A2 they are
//! obtained by additionally averaging over the three rotation cosets of the
//! reflection subgroup, and are polynomials in the two generators
//!
//! ```text
//! α = P_{v'}  = (−1 + 2t2(t1+t2))/3,          v'  = [1, 1/√3],
//! β = P_{v''} = (−1 + 2t1(t1−3t2+4t2³))/3,    v'' = [2, 0],
//! ```
//!
//! graded by the degree 𝒟(α^{k0}β^{k1}) = 2k0 + 3k1.  The polynomials
//! {P_v} are orthogonal with respect to the product Chebyshev weight
//! (1−t1²)^{−1/2}(1−t2²)^{−1/2} on [−1,1]², which underlies the expansion
//! routine used to certify conditional positive semidefiniteness.

use std::collections::BTreeMap;

use thiserror::Error;

/// Coefficients below this threshold are pruned from polynomials.
const COEFF_PRUNE: f64 = 1e-15;

/// Errors from basis construction and expansion.
#[derive(Debug, Error)]
pub enum SymPolyError {
    /// The integer coordinates do not describe a dual vector of the lattice.
    #[error("vector with coordinates ({0}, {1}) is not in the dual of the requested lattice")]
    NotInDual(i64, i64),
    /// The vector lies outside the fundamental cone needed for the grading.
    #[error("vector with coordinates ({0}, {1}) is not in the fundamental cone")]
    NotInCone(i64, i64),
    /// Reconstruction residual above threshold in the expansion routine.
    #[error("polynomial is not in the span of the basis up to the requested degree (residual {0:e})")]
    NotInSpan(f64),
}

/// Which periodizing lattice the polynomial basis belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum PhiLattice {
    /// Hexagonal lattice spanned by (1,0) and (1/2, √3/2).
    A2,
    /// Rectangular lattice Z × √3 Z.
    L,
}

/// A dual-lattice vector stored by its integer coordinates (k1, k2) with
/// respect to the rectangular dual basis, so that v = [k1, k2/√3].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DualVector {
    pub k1: i64,
    pub k2: i64,
}

impl DualVector {
    pub fn new(k1: i64, k2: i64) -> Self {
        DualVector { k1, k2 }
    }

    /// The vector in ambient coordinates: [k1, k2/√3].
    pub fn vector(&self) -> [f64; 2] {
        [self.k1 as f64, self.k2 as f64 / 3.0f64.sqrt()]
    }

    /// Recovers integer coordinates from an ambient vector, if the entries
    /// are within `tol` of integers.
    pub fn from_vector(v: [f64; 2], tol: f64) -> Option<Self> {
        let k1 = v[0].round();
        let k2 = (v[1] * 3.0f64.sqrt()).round();
        if (v[0] - k1).abs() <= tol && (v[1] * 3.0f64.sqrt() - k2).abs() <= tol {
            Some(DualVector::new(k1 as i64, k2 as i64))
        } else {
            None
        }
    }

    /// Squared Euclidean length k1² + k2²/3.
    pub fn norm_sq(&self) -> f64 {
        (self.k1 * self.k1) as f64 + (self.k2 * self.k2) as f64 / 3.0
    }

    /// Membership in the dual lattice Φ*: every (k1, k2) for L, the parity
    /// condition k1 ≡ k2 (mod 2) for A2.
    pub fn in_dual(&self, phi: PhiLattice) -> bool {
        match phi {
            PhiLattice::L => true,
            PhiLattice::A2 => (self.k1 - self.k2) % 2 == 0,
        }
    }

    /// Rotation by π/3 in integer coordinates:
    /// (k1, k2) ↦ ((k1−k2)/2, (3k1+k2)/2), defined exactly when k1 ≡ k2 (mod 2).
    fn rotated(&self) -> DualVector {
        debug_assert!((self.k1 - self.k2) % 2 == 0);
        DualVector::new((self.k1 - self.k2) / 2, (3 * self.k1 + self.k2) / 2)
    }

    /// Canonical representative of the symmetry orbit: for L the coordinate
    /// reflections give (|k1|, |k2|); for A2 the twelve-element group gives
    /// the unique representative with 0 ≤ k2 ≤ k1.
    pub fn orbit_representative(&self, phi: PhiLattice) -> DualVector {
        match phi {
            PhiLattice::L => DualVector::new(self.k1.abs(), self.k2.abs()),
            PhiLattice::A2 => {
                debug_assert!(
                    self.in_dual(PhiLattice::A2),
                    "A2 orbit representative requires k1 ≡ k2 (mod 2)"
                );
                // The twelve-element group acts through six rotations composed
                // with coordinate sign flips; the canonical representative is
                // the unique absolute pair with 0 ≤ k2 ≤ k1.
                let mut cur = *self;
                for _ in 0..6 {
                    let cand = DualVector::new(cur.k1.abs(), cur.k2.abs());
                    if cand.k2 <= cand.k1 {
                        return cand;
                    }
                    cur = cur.rotated();
                }
                unreachable!("every rotation orbit meets the fundamental cone")
            }
        }
    }
}

/// A finitely supported polynomial in the monomial basis t1^i t2^j.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BivariatePolynomial {
    coeffs: BTreeMap<(u32, u32), f64>,
}

impl BivariatePolynomial {
    pub fn zero() -> Self {
        BivariatePolynomial::default()
    }

    pub fn constant(c: f64) -> Self {
        let mut p = BivariatePolynomial::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn monomial(i: u32, j: u32, c: f64) -> Self {
        let mut p = BivariatePolynomial::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: f64) {
        let entry = self.coeffs.entry((i, j)).or_insert(0.0);
        *entry += c;
        if entry.abs() < COEFF_PRUNE {
            self.coeffs.remove(&(i, j));
        }
    }

    pub fn coefficient(&self, i: u32, j: u32) -> f64 {
        self.coeffs.get(&(i, j)).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), f64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Total degree of the highest monomial, or 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.coeffs.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn eval(&self, t1: f64, t2: f64) -> f64 {
        // Horner-free direct evaluation; polynomials here are tiny.
        self.coeffs
            .iter()
            .map(|(&(i, j), &c)| c * t1.powi(i as i32) * t2.powi(j as i32))
            .sum()
    }

    pub fn scaled(&self, s: f64) -> BivariatePolynomial {
        let mut out = BivariatePolynomial::zero();
        for (&(i, j), &c) in &self.coeffs {
            out.add_term(i, j, c * s);
        }
        out
    }

    pub fn add(&self, other: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = self.clone();
        for (&(i, j), &c) in &other.coeffs {
            out.add_term(i, j, c);
        }
        out
    }

    pub fn sub(&self, other: &BivariatePolynomial) -> BivariatePolynomial {
        self.add(&other.scaled(-1.0))
    }

    pub fn mul(&self, other: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = BivariatePolynomial::zero();
        for (&(i1, j1), &c1) in &self.coeffs {
            for (&(i2, j2), &c2) in &other.coeffs {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> BivariatePolynomial {
        let mut out = BivariatePolynomial::constant(1.0);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative with respect to t1 (axis 0) or t2 (axis 1).
    pub fn derivative(&self, axis: usize) -> BivariatePolynomial {
        let mut out = BivariatePolynomial::zero();
        for (&(i, j), &c) in &self.coeffs {
            match axis {
                0 if i > 0 => out.add_term(i - 1, j, c * i as f64),
                1 if j > 0 => out.add_term(i, j - 1, c * j as f64),
                _ => {}
            }
        }
        out
    }
}

/// Coefficients of the Chebyshev polynomial of the first kind T_k in the
/// monomial basis (exact small integers in f64).
fn chebyshev_t_coeffs(k: u32) -> Vec<f64> {
    let mut prev = vec![1.0];
    if k == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 1.0];
    for _ in 1..k {
        let mut next = vec![0.0; cur.len() + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// The tensor Chebyshev polynomial T_{|k1|}(t1) T_{|k2|}(t2).
pub fn tensor_chebyshev(k1: i64, k2: i64) -> BivariatePolynomial {
    let c1 = chebyshev_t_coeffs(k1.unsigned_abs() as u32);
    let c2 = chebyshev_t_coeffs(k2.unsigned_abs() as u32);
    let mut out = BivariatePolynomial::zero();
    for (i, &a) in c1.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        for (j, &b) in c2.iter().enumerate() {
            if b == 0.0 {
                continue;
            }
            out.add_term(i as u32, j as u32, a * b);
        }
    }
    out
}

/// Group-averaged cosine sum C_v(x) over the orbit of `v` under the point
/// group `elements` (d×d orthogonal matrices).  The imaginary parts cancel
/// pairwise; the remaining sine mass is asserted to be below 1e−12.
pub fn c_v(v: &DualVector, group: &crate::lattice::PointGroup, x: &[f64]) -> f64 {
    let vec = v.vector();
    let mut orbit: Vec<[f64; 2]> = Vec::new();
    for g in &group.elements {
        let w = [
            g[(0, 0)] * vec[0] + g[(0, 1)] * vec[1],
            g[(1, 0)] * vec[0] + g[(1, 1)] * vec[1],
        ];
        if !orbit
            .iter()
            .any(|o| (o[0] - w[0]).abs() < 1e-9 && (o[1] - w[1]).abs() < 1e-9)
        {
            orbit.push(w);
        }
    }
    let mut cos_sum = 0.0;
    let mut sin_sum = 0.0;
    for w in &orbit {
        let phase = 2.0 * std::f64::consts::PI * (w[0] * x[0] + w[1] * x[1]);
        cos_sum += phase.cos();
        sin_sum += phase.sin();
    }
    debug_assert!(
        sin_sum.abs() <= 1e-12 * orbit.len() as f64,
        "imaginary parts failed to cancel: {sin_sum}"
    );
    cos_sum / orbit.len() as f64
}

/// The polynomial image P_v of C_v under the change of variables
/// (t1, t2) = (cos 2πx₁, cos(2πx₂/√3)).
///
/// For L this is the tensor Chebyshev polynomial.  For A2 it is the average
/// of the three tensor Chebyshev polynomials attached to the rotation
/// cosets of the reflection subgroup, with exact 1/3-rational coefficients.
pub fn p_v(v: &DualVector, phi: PhiLattice) -> Result<BivariatePolynomial, SymPolyError> {
    if !v.in_dual(phi) {
        return Err(SymPolyError::NotInDual(v.k1, v.k2));
    }
    Ok(match phi {
        PhiLattice::L => tensor_chebyshev(v.k1, v.k2),
        PhiLattice::A2 => {
            let r1 = v.rotated();
            let r2 = r1.rotated();
            tensor_chebyshev(v.k1, v.k2)
                .add(&tensor_chebyshev(r1.k1, r1.k2))
                .add(&tensor_chebyshev(r2.k1, r2.k2))
                .scaled(1.0 / 3.0)
        }
    })
}

/// The generator α = P_{v'} with v' = [1, 1/√3].
pub fn alpha() -> BivariatePolynomial {
    p_v(&DualVector::new(1, 1), PhiLattice::A2).unwrap()
}

/// The generator β = P_{v''} with v'' = [2, 0].
pub fn beta() -> BivariatePolynomial {
    p_v(&DualVector::new(2, 0), PhiLattice::A2).unwrap()
}

/// Degree of `v` in the fundamental cone 0 ≤ k2 ≤ k1, k1 ≡ k2 (mod 2),
/// where v = k0·v' + K·v'' with k0 = k2, K = (k1−k2)/2 and the grading is
/// 2k0 + 3K.
pub fn a2_degree(v: &DualVector) -> Result<u32, SymPolyError> {
    if !(0 <= v.k2 && v.k2 <= v.k1) || (v.k1 - v.k2) % 2 != 0 {
        return Err(SymPolyError::NotInCone(v.k1, v.k2));
    }
    Ok((2 * v.k2 + 3 * (v.k1 - v.k2) / 2) as u32)
}

/// Enumerates orbit representatives of Φ*/G_Φ with the given degree bound:
/// for A2, vectors of the fundamental cone with `a2_degree ≤ max_degree`;
/// for L, the nonnegative quadrant with polynomial total degree
/// k1 + k2 ≤ max_degree.
pub fn orbit_representatives(phi: PhiLattice, max_degree: u32) -> Vec<DualVector> {
    let mut out = Vec::new();
    let bound = max_degree as i64;
    match phi {
        PhiLattice::L => {
            for k1 in 0..=bound {
                for k2 in 0..=(bound - k1) {
                    out.push(DualVector::new(k1, k2));
                }
            }
        }
        PhiLattice::A2 => {
            for k1 in 0..=bound {
                for k2 in 0..=k1 {
                    let v = DualVector::new(k1, k2);
                    if let Ok(d) = a2_degree(&v) {
                        if d <= max_degree {
                            out.push(v);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Expansion of a polynomial in the P_v basis of a lattice, indexed by
/// orbit representatives.
#[derive(Clone, Debug)]
pub struct PvExpansion {
    pub phi: PhiLattice,
    pub terms: BTreeMap<DualVector, f64>,
}

impl PvExpansion {
    /// Coefficient on the representative `v` (0 when absent).
    pub fn coefficient(&self, v: &DualVector) -> f64 {
        self.terms.get(v).copied().unwrap_or(0.0)
    }

    /// The constant (v = 0) coefficient.
    pub fn constant_coefficient(&self) -> f64 {
        self.coefficient(&DualVector::new(0, 0))
    }

    /// Conditional positive semidefiniteness: every coefficient away from
    /// the zero orbit is nonnegative (up to `tol`).
    pub fn is_cpsd(&self, tol: f64) -> bool {
        self.terms
            .iter()
            .all(|(v, &c)| (v.k1 == 0 && v.k2 == 0) || c >= -tol)
    }

    /// Reconstructs the polynomial Σ c_v P_v.
    pub fn to_polynomial(&self) -> BivariatePolynomial {
        let mut out = BivariatePolynomial::zero();
        for (v, &c) in &self.terms {
            out = out.add(&p_v(v, self.phi).unwrap().scaled(c));
        }
        out
    }
}

/// Tensor Gauss–Chebyshev inner product ⟨p, q⟩ with respect to the weight
/// (1−t1²)^{−1/2}(1−t2²)^{−1/2}, normalized by 1/π² so that ⟨1, 1⟩ = 1.
/// Exact for integrands of degree below `n` in each variable.
pub fn chebyshev_inner_product(
    p: &BivariatePolynomial,
    q: &BivariatePolynomial,
    n: usize,
) -> f64 {
    let nodes: Vec<f64> = (0..n)
        .map(|i| (std::f64::consts::PI * (i as f64 + 0.5) / n as f64).cos())
        .collect();
    let mut sum = 0.0;
    for &t1 in &nodes {
        for &t2 in &nodes {
            sum += p.eval(t1, t2) * q.eval(t1, t2);
        }
    }
    sum / (n * n) as f64
}

/// Expands `p` in the P_v basis up to `max_degree`, using orthogonality
/// with respect to the product Chebyshev weight.  Fails when the sup-norm
/// residual of the reconstruction on a 64×64 grid exceeds 1e−9.
pub fn expand_in_pv(
    p: &BivariatePolynomial,
    phi: PhiLattice,
    max_degree: u32,
) -> Result<PvExpansion, SymPolyError> {
    let reps = orbit_representatives(phi, max_degree);
    // Quadrature order: exact for degree 2·max(total degrees).
    let n = (2 * (p.total_degree().max(2 * max_degree)) + 2) as usize;
    let mut terms = BTreeMap::new();
    for v in reps {
        let basis = p_v(&v, phi).unwrap();
        let num = chebyshev_inner_product(p, &basis, n);
        let den = chebyshev_inner_product(&basis, &basis, n);
        let c = num / den;
        if c.abs() >= COEFF_PRUNE {
            terms.insert(v, c);
        }
    }
    let expansion = PvExpansion { phi, terms };
    let recon = expansion.to_polynomial();
    let mut residual: f64 = 0.0;
    for i in 0..64 {
        for j in 0..64 {
            let t1 = -1.0 + 2.0 * i as f64 / 63.0;
            let t2 = -1.0 + 2.0 * j as f64 / 63.0;
            residual = residual.max((p.eval(t1, t2) - recon.eval(t1, t2)).abs());
        }
    }
    if residual > 1e-9 {
        return Err(SymPolyError::NotInSpan(residual));
    }
    Ok(expansion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Lattice, NamedGroup};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn t_map(x: &[f64; 2]) -> (f64, f64) {
        let two_pi = 2.0 * std::f64::consts::PI;
        ((two_pi * x[0]).cos(), (two_pi * x[1] / 3.0f64.sqrt()).cos())
    }

    #[test]
    fn cv_at_zero_vector_is_one() {
        let group = crate::lattice::point_group(NamedGroup::A2);
        let v = DualVector::new(0, 0);
        for &x in &[[0.1, 0.2], [0.7, -0.3]] {
            assert!((c_v(&v, &group, &x) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn cv_rectangular_is_product_of_cosines() {
        let group = crate::lattice::point_group(NamedGroup::Rectangular(2));
        let mut rng = StdRng::seed_from_u64(11);
        let v = DualVector::new(2, 3);
        for _ in 0..50 {
            let x = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let two_pi = 2.0 * std::f64::consts::PI;
            let expected =
                (two_pi * 2.0 * x[0]).cos() * (two_pi * 3.0 / 3.0f64.sqrt() * x[1]).cos();
            assert!((c_v(&v, &group, &x) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn cv_bounded_by_one() {
        let group = crate::lattice::point_group(NamedGroup::A2);
        let mut rng = StdRng::seed_from_u64(5);
        let v = DualVector::new(3, 1);
        for _ in 0..100 {
            let x = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            assert!(c_v(&v, &group, &x).abs() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn cv_is_group_invariant() {
        let group = crate::lattice::point_group(NamedGroup::A2);
        let mut rng = StdRng::seed_from_u64(17);
        let v = DualVector::new(3, 1);
        for _ in 0..20 {
            let x = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let base = c_v(&v, &group, &x);
            for g in &group.elements {
                let gx = [
                    g[(0, 0)] * x[0] + g[(0, 1)] * x[1],
                    g[(1, 0)] * x[0] + g[(1, 1)] * x[1],
                ];
                assert!((c_v(&v, &group, &gx) - base).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn generator_polynomials_match_closed_forms() {
        // α = (−1 + 2t2(t1+t2))/3 and β = (−1 + 2t1(t1 − 3t2 + 4t2³))/3.
        let a = alpha();
        let b = beta();
        let mut expected_a = BivariatePolynomial::zero();
        expected_a.add_term(0, 0, -1.0 / 3.0);
        expected_a.add_term(1, 1, 2.0 / 3.0);
        expected_a.add_term(0, 2, 2.0 / 3.0);
        let mut expected_b = BivariatePolynomial::zero();
        expected_b.add_term(0, 0, -1.0 / 3.0);
        expected_b.add_term(2, 0, 2.0 / 3.0);
        expected_b.add_term(1, 1, -2.0);
        expected_b.add_term(1, 3, 8.0 / 3.0);
        assert!(a.sub(&expected_a).is_zero(), "alpha mismatch: {a:?}");
        assert!(b.sub(&expected_b).is_zero(), "beta mismatch: {b:?}");
    }

    #[test]
    fn tensor_chebyshev_for_l() {
        // P_v for v = [2, 1/√3] over L is T_2(t1) T_1(t2) = (2t1²−1) t2.
        let p = p_v(&DualVector::new(2, 1), PhiLattice::L).unwrap();
        assert!((p.coefficient(2, 1) - 2.0).abs() < 1e-14);
        assert!((p.coefficient(0, 1) + 1.0).abs() < 1e-14);
    }

    #[test]
    fn p_v_matches_c_v_under_substitution() {
        let mut rng = StdRng::seed_from_u64(23);
        let cases = [
            (PhiLattice::A2, NamedGroup::A2, DualVector::new(1, 1)),
            (PhiLattice::A2, NamedGroup::A2, DualVector::new(2, 0)),
            (PhiLattice::A2, NamedGroup::A2, DualVector::new(3, 1)),
            (PhiLattice::A2, NamedGroup::A2, DualVector::new(4, 2)),
            (PhiLattice::L, NamedGroup::Rectangular(2), DualVector::new(2, 1)),
            (PhiLattice::L, NamedGroup::Rectangular(2), DualVector::new(1, 3)),
        ];
        for (phi, group_name, v) in cases {
            let group = crate::lattice::point_group(group_name);
            let p = p_v(&v, phi).unwrap();
            for _ in 0..200 {
                let x = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.5..1.5)];
                let (t1, t2) = t_map(&x);
                let lhs = p.eval(t1, t2);
                let rhs = c_v(&v, &group, &x);
                assert!(
                    (lhs - rhs).abs() < 1e-10,
                    "{phi:?} v=({},{}): {lhs} vs {rhs}",
                    v.k1,
                    v.k2
                );
            }
        }
    }

    #[test]
    fn p_v_rejects_non_dual_vector() {
        assert!(p_v(&DualVector::new(1, 0), PhiLattice::A2).is_err());
        assert!(p_v(&DualVector::new(1, 0), PhiLattice::L).is_ok());
    }

    #[test]
    fn a2_degree_of_generators() {
        assert_eq!(a2_degree(&DualVector::new(1, 1)).unwrap(), 2);
        assert_eq!(a2_degree(&DualVector::new(2, 0)).unwrap(), 3);
        assert_eq!(a2_degree(&DualVector::new(0, 0)).unwrap(), 0);
        assert!(a2_degree(&DualVector::new(1, 2)).is_err());
        assert!(a2_degree(&DualVector::new(2, 1)).is_err());
    }

    #[test]
    fn a2_polynomials_have_even_total_degree_monomials() {
        for v in orbit_representatives(PhiLattice::A2, 8) {
            let p = p_v(&v, PhiLattice::A2).unwrap();
            for ((i, j), c) in p.terms() {
                assert!(
                    (i + j) % 2 == 0,
                    "odd monomial t1^{i} t2^{j} (coeff {c}) in P_v for ({}, {})",
                    v.k1,
                    v.k2
                );
            }
        }
    }

    #[test]
    fn orthogonality_up_to_degree_eight() {
        let reps = orbit_representatives(PhiLattice::A2, 8);
        for (idx, v) in reps.iter().enumerate() {
            let pv = p_v(v, PhiLattice::A2).unwrap();
            for w in reps.iter().skip(idx + 1) {
                let pw = p_v(w, PhiLattice::A2).unwrap();
                let ip = chebyshev_inner_product(&pv, &pw, 40);
                assert!(
                    ip.abs() < 1e-8,
                    "nonorthogonal pair ({},{}) vs ({},{}): {ip}",
                    v.k1,
                    v.k2,
                    w.k1,
                    w.k2
                );
            }
        }
    }

    #[test]
    fn leading_term_in_generator_grading() {
        // Every P_v with degree ≤ 8 is a polynomial in the generators α, β,
        // and its leading monomial in the grading (degree ascending, ties
        // broken by lower α-power ranking higher) is α^{k0}β^{K}, where
        // v = k0·v' + K·v''.  The α,β-expansion is recovered by inverting
        // the change of basis between monomials α^i β^j (2i+3j ≤ 8) and the
        // P_w basis.
        let reps = orbit_representatives(PhiLattice::A2, 8);
        let monos: Vec<(u32, u32)> = (0..=4u32)
            .flat_map(|i| (0..=2u32).map(move |j| (i, j)))
            .filter(|&(i, j)| 2 * i + 3 * j <= 8)
            .collect();
        assert_eq!(monos.len(), reps.len());
        let n = monos.len();
        let a = alpha();
        let b = beta();
        let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
        for (col, &(i, j)) in monos.iter().enumerate() {
            let q = a.pow(i).mul(&b.pow(j));
            let e = expand_in_pv(&q, PhiLattice::A2, 8).unwrap();
            for (row, v) in reps.iter().enumerate() {
                m[(row, col)] = e.coefficient(v);
            }
        }
        let inv = m.try_inverse().expect("change of basis is invertible");
        for (row, v) in reps.iter().enumerate() {
            let k0 = v.k2 as u32;
            let kk = ((v.k1 - v.k2) / 2) as u32;
            // Rank: degree first, then fewer α factors ranks higher.
            let lead = monos
                .iter()
                .enumerate()
                .filter(|&(c, _)| inv[(c, row)].abs() > 1e-7)
                .max_by_key(|&(_, &(i, j))| (2 * i + 3 * j, std::cmp::Reverse(i)))
                .map(|(c, &ij)| (ij, inv[(c, row)]))
                .expect("nonzero expansion");
            assert_eq!(
                lead.0,
                (k0, kk),
                "P_({}, {}) leads with α^{} β^{}",
                v.k1,
                v.k2,
                lead.0 .0,
                lead.0 .1
            );
            assert!(lead.1 > 0.0, "negative leading coefficient for ({}, {})", v.k1, v.k2);
        }
    }

    #[test]
    fn expansion_of_single_basis_polynomial() {
        let v = DualVector::new(1, 1);
        let p = p_v(&v, PhiLattice::A2).unwrap();
        let e = expand_in_pv(&p, PhiLattice::A2, 4).unwrap();
        assert!((e.coefficient(&v) - 1.0).abs() < 1e-10);
        assert_eq!(
            e.terms.iter().filter(|(_, c)| c.abs() > 1e-10).count(),
            1
        );
    }

    #[test]
    fn expansion_of_constant() {
        let e = expand_in_pv(&BivariatePolynomial::constant(1.0), PhiLattice::A2, 4).unwrap();
        assert!((e.constant_coefficient() - 1.0).abs() < 1e-12);
        assert!(e.is_cpsd(1e-12));
    }

    #[test]
    fn four_point_interpolant_shape_expands_in_alpha() {
        // t2(t1 + t2) = (1 + 3α)/2, the conditionally PSD shape of the
        // 4-point interpolant.
        let mut p = BivariatePolynomial::zero();
        p.add_term(1, 1, 1.0);
        p.add_term(0, 2, 1.0);
        let e = expand_in_pv(&p, PhiLattice::A2, 4).unwrap();
        assert!((e.constant_coefficient() - 0.5).abs() < 1e-10);
        assert!((e.coefficient(&DualVector::new(1, 1)) - 1.5).abs() < 1e-10);
        assert!(e.is_cpsd(1e-12));
        // Cross-check symbolically: (1 + 3α)/2 reproduces p at random points.
        let recon = BivariatePolynomial::constant(1.0)
            .add(&alpha().scaled(3.0))
            .scaled(0.5);
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..100 {
            let t1 = rng.gen_range(-1.0..1.0);
            let t2 = rng.gen_range(-1.0..1.0);
            assert!((recon.eval(t1, t2) - p.eval(t1, t2)).abs() < 1e-12);
        }
    }

    #[test]
    fn expansion_rejects_out_of_span() {
        // t1 alone is odd, hence not a combination of A2 basis polynomials
        // of even monomial degree.
        let p = BivariatePolynomial::monomial(1, 0, 1.0);
        assert!(expand_in_pv(&p, PhiLattice::A2, 6).is_err());
    }

    #[test]
    fn orbit_representative_is_canonical() {
        let v = DualVector::new(-3, 1);
        // Not an A2 dual vector (parity differs); L representative flips signs.
        assert_eq!(
            v.orbit_representative(PhiLattice::L),
            DualVector::new(3, 1)
        );
        let w = DualVector::new(1, 3);
        let rep = w.orbit_representative(PhiLattice::A2);
        assert_eq!(rep, DualVector::new(2, 0));
        // The rotation action fixes lengths.
        assert!((rep.norm_sq() - w.norm_sq()).abs() < 1e-12);
    }

    #[test]
    fn dual_vector_roundtrip() {
        let v = DualVector::new(4, -7);
        let back = DualVector::from_vector(v.vector(), 1e-12).unwrap();
        assert_eq!(v, back);
        assert!(DualVector::from_vector([0.5, 0.1], 1e-9).is_none());
    }

    fn lattice_membership_oracle(v: &DualVector, lattice: &Lattice) -> bool {
        lattice
            .dual()
            .coordinates(&nalgebra::DVector::from_vec(vec![
                v.vector()[0],
                v.vector()[1],
            ]))
            .iter()
            .all(|c| (c - c.round()).abs() < 1e-9)
    }

    #[test]
    fn in_dual_matches_lattice_oracle() {
        let a2 = Lattice::a2();
        for k1 in -4..=4 {
            for k2 in -4..=4 {
                let v = DualVector::new(k1, k2);
                assert_eq!(
                    v.in_dual(PhiLattice::A2),
                    lattice_membership_oracle(&v, &a2),
                    "mismatch at ({k1}, {k2})"
                );
            }
        }
    }
}
