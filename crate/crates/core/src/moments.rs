//! Configuration moments `M_v(ω) = Σ_x e^{2πi v·x}`, the structured moment
//! theorem for lattice coset configurations, the moment index sets of the four
//! periodic point families, and their interpolation node sets.
//!
//! For a sublattice pair `Φ ⊆ Λ` the coset configuration `ω(Φ,Λ) = Λ/Φ` has
//! `M_v(ω) = κ` (the index `[Λ:Φ]`) when `v ∈ Λ*` and `0` otherwise; replacing
//! `Λ` by `(1/m)Λ` makes the vanishing set exactly `Φ* ∖ (mΛ*)`.  The four
//! families periodize `m²`, `2m²`, `3m²`, and `6m²` points of suitable
//! hexagonal refinements over `A2` or `L = Z × √3Z`, and their index sets are
//! congruence conditions on the integer labels `v = [k1, k2/√3]`.

use nalgebra::DVector;
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

use crate::lattice::{
    coset_representatives, smith_normal_form, Configuration, Lattice, LatticeError,
};
use crate::sympoly::DualVector;

/// Tolerance for deduplicating cosine collisions among interpolation nodes.
pub const NODE_DEDUP_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum MomentError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("vector is not in the dual of the periodizing lattice")]
    NotInDual,
    #[error("family parameter m must be positive")]
    InvalidParameter,
}

/// The `v`-moment `M_v(ω) = Σ_{x∈ω} e^{2πi v·x}` by direct summation.
pub fn moment(v: &DVector<f64>, omega: &Configuration) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for x in &omega.points {
        let phase = 2.0 * PI * v.dot(x);
        sum += Complex64::new(phase.cos(), phase.sin());
    }
    sum
}

/// Moment of the coset configuration `ω(Φ,Λ)` in closed form: `κ = [Λ:Φ]` if
/// `v ∈ Λ*`, and `0` otherwise.  Requires `Φ ⊆ Λ` and `v ∈ Φ*`.
pub fn structured_moment(
    phi: &Lattice,
    lambda: &Lattice,
    v: &DVector<f64>,
) -> Result<f64, MomentError> {
    let w = lambda.sublattice_coords(phi)?;
    let kappa = smith_normal_form(&w)?.index();
    if !phi.dual().contains(v) {
        return Err(MomentError::NotInDual);
    }
    if lambda.dual().contains(v) {
        Ok(kappa as f64)
    } else {
        Ok(0.0)
    }
}

/// The four families of periodic configurations, named by their point count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Family {
    /// `ω(A2, (1/m)A2)` — `m²` points over the hexagonal lattice.
    M2,
    /// `ω(L, (1/m)A2)` — `2m²` points over `L`.
    TwoM2,
    /// `ω(A2, (1/(m√3))A2^{π/6})` — `3m²` points over the hexagonal lattice.
    ThreeM2,
    /// `ω(L, (1/(m√3))A2^{π/6})` — `6m²` points over `L`.
    SixM2,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::M2, Family::TwoM2, Family::ThreeM2, Family::SixM2];

    /// Parse the CLI spelling `m2 | 2m2 | 3m2 | 6m2`.
    pub fn from_name(name: &str) -> Option<Family> {
        match name {
            "m2" => Some(Family::M2),
            "2m2" => Some(Family::TwoM2),
            "3m2" => Some(Family::ThreeM2),
            "6m2" => Some(Family::SixM2),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::M2 => "m2",
            Family::TwoM2 => "2m2",
            Family::ThreeM2 => "3m2",
            Family::SixM2 => "6m2",
        }
    }

    /// Number of points for parameter `m`.
    pub fn size(&self, m: u32) -> usize {
        let m = m as usize;
        match self {
            Family::M2 => m * m,
            Family::TwoM2 => 2 * m * m,
            Family::ThreeM2 => 3 * m * m,
            Family::SixM2 => 6 * m * m,
        }
    }

    /// The periodizing lattice `Φ`.
    pub fn phi(&self) -> Lattice {
        match self {
            Family::M2 | Family::ThreeM2 => Lattice::a2(),
            Family::TwoM2 | Family::SixM2 => Lattice::rect_l(),
        }
    }

    /// The refining lattice `Λ_m ⊇ Φ` whose cosets form the configuration.
    pub fn lambda(&self, m: u32) -> Result<Lattice, MomentError> {
        if m == 0 {
            return Err(MomentError::InvalidParameter);
        }
        let base = match self {
            Family::M2 | Family::TwoM2 => Lattice::a2(),
            Family::ThreeM2 | Family::SixM2 => {
                Lattice::a2().rotate(PI / 6.0).scale(1.0 / 3.0_f64.sqrt())
            }
        };
        Ok(base.scale(1.0 / m as f64))
    }

    /// The configuration `ω(Φ, Λ_m)` as coset representatives.
    pub fn configuration(&self, m: u32) -> Result<Configuration, MomentError> {
        Ok(coset_representatives(&self.phi(), &self.lambda(m)?)?)
    }

    /// Does the dual vector `[k1, k2/√3]` lie in the cone `W_Φ` of orbit
    /// representatives: `0 ≤ k2 ≤ k1`, `k1 ≡ k2 (mod 2)` over `A2`, and
    /// `k1, k2 ≥ 0` over `L`?
    pub fn in_cone(&self, v: &DualVector) -> bool {
        match self {
            Family::M2 | Family::ThreeM2 => {
                0 <= v.k2 && v.k2 <= v.k1 && (v.k1 - v.k2) % 2 == 0
            }
            Family::TwoM2 | Family::SixM2 => v.k1 >= 0 && v.k2 >= 0,
        }
    }

    /// Does `v = [k1, k2/√3]` lie in the dual `Λ_1*` of the refining lattice
    /// at `m = 1`?  `A2* = {k1 ≡ k2 (mod 2)}`, and the `π/6`-rotated
    /// refinement additionally requires `k2 ≡ 0 (mod 3)`.
    fn in_refiner_dual(&self, k1: i64, k2: i64) -> bool {
        match self {
            Family::M2 | Family::TwoM2 => (k1 - k2) % 2 == 0,
            Family::ThreeM2 | Family::SixM2 => (k1 - k2) % 2 == 0 && k2.rem_euclid(3) == 0,
        }
    }
}

/// The moment index set `I = W_Φ ∖ (mΛ*)`: orbit representatives whose moment
/// vanishes on the family's configuration.  Membership is a congruence test;
/// `enumerate` lists the members up to a label bound.
#[derive(Debug, Clone, Copy)]
pub struct MomentIndexSet {
    pub family: Family,
    pub m: u32,
}

impl MomentIndexSet {
    pub fn contains(&self, v: &DualVector) -> bool {
        if !self.family.in_cone(v) {
            return false;
        }
        let m = self.m as i64;
        let excluded = v.k1 % m == 0
            && v.k2 % m == 0
            && self.family.in_refiner_dual(v.k1 / m, v.k2 / m);
        !excluded
    }

    /// All members with `0 ≤ k1, k2 ≤ bound`.
    pub fn enumerate(&self, bound: i64) -> Vec<DualVector> {
        let mut out = Vec::new();
        for k1 in 0..=bound {
            for k2 in 0..=bound {
                let v = DualVector::new(k1, k2);
                if self.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }
}

/// Index set of the family at parameter `m ≥ 1`.
pub fn index_set(family: Family, m: u32) -> Result<MomentIndexSet, MomentError> {
    if m == 0 {
        return Err(MomentError::InvalidParameter);
    }
    Ok(MomentIndexSet { family, m })
}

/// Interpolation nodes `(t1, t2)` of a family in Chebyshev variables: the
/// image of the configuration's fundamental-domain points under
/// `T(x) = (cos 2πx1, cos(2πx2/√3))`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct NodeSet {
    pub family: Family,
    pub m: u32,
    pub nodes: Vec<(f64, f64)>,
}

/// Node set of the family at parameter `m ≥ 1`: explicit cosine grids with
/// congruence filters, deduplicated within `NODE_DEDUP_TOL`.
pub fn node_set(family: Family, m: u32) -> Result<NodeSet, MomentError> {
    if m == 0 {
        return Err(MomentError::InvalidParameter);
    }
    let mi = m as i64;
    let mf = m as f64;
    let mut raw: Vec<(f64, f64)> = Vec::new();
    match family {
        Family::M2 => {
            // 0 ≤ 3k2 ≤ k1 ≤ m, k1 ≡ k2 (mod 2).
            for k1 in 0..=mi {
                for k2 in 0..=k1 / 3 {
                    if (k1 - k2) % 2 == 0 {
                        raw.push(((PI * k1 as f64 / mf).cos(), (PI * k2 as f64 / mf).cos()));
                    }
                }
            }
        }
        Family::TwoM2 => {
            // 0 ≤ k1, k2 ≤ m, k1 ≡ k2 (mod 2).
            for k1 in 0..=mi {
                for k2 in 0..=mi {
                    if (k1 - k2) % 2 == 0 {
                        raw.push(((PI * k1 as f64 / mf).cos(), (PI * k2 as f64 / mf).cos()));
                    }
                }
            }
        }
        Family::ThreeM2 => {
            // 0 ≤ k2 ≤ k1 ≤ m, k1 ≡ k2 (mod 2); t2 grid is a third as fine.
            for k1 in 0..=mi {
                for k2 in 0..=k1 {
                    if (k1 - k2) % 2 == 0 {
                        raw.push((
                            (PI * k1 as f64 / mf).cos(),
                            (PI * k2 as f64 / (3.0 * mf)).cos(),
                        ));
                    }
                }
            }
        }
        Family::SixM2 => {
            // 0 ≤ k1 ≤ m, 0 ≤ k2 ≤ 3m, k1 ≡ k2 (mod 2).
            for k1 in 0..=mi {
                for k2 in 0..=3 * mi {
                    if (k1 - k2) % 2 == 0 {
                        raw.push((
                            (PI * k1 as f64 / mf).cos(),
                            (PI * k2 as f64 / (3.0 * mf)).cos(),
                        ));
                    }
                }
            }
        }
    }
    let mut nodes: Vec<(f64, f64)> = Vec::new();
    for p in raw {
        if !nodes
            .iter()
            .any(|q| (q.0 - p.0).abs() < NODE_DEDUP_TOL && (q.1 - p.1).abs() < NODE_DEDUP_TOL)
        {
            nodes.push(p);
        }
    }
    Ok(NodeSet { family, m, nodes })
}
