//! Lattice arithmetic: generators, duals, sublattices, Smith normal form,
//! coset representatives, and the point symmetry groups of the named lattices.
//!
//! A lattice is the integer span of the columns of a generator matrix `V`.
//! The hexagonal lattice `A2` (generator `[[1,1/2],[0,√3/2]]`) and the
//! rectangular lattice `L = Z × √3Z` are the two main actors; `Z^d` and
//! general rectangular lattices are supported for sanity paths.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

/// Tolerance for deciding that a real matrix entry is an integer.  Generators
/// containing √3 make exact integrality impossible after inversion.
pub const INTEGRALITY_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("generator matrix is singular or not square")]
    SingularGenerator,
    #[error("integer matrix is singular")]
    SingularIntegerMatrix,
    #[error("{0} is not a sublattice of the given lattice (non-integer coordinates)")]
    NotASublattice(String),
    #[error("integer overflow in Smith normal form (entries exceed 64-bit range)")]
    Overflow,
    #[error("lattice index {0} exceeds the supported range")]
    IndexTooLarge(i64),
    #[error("unsupported named lattice: {0}")]
    UnsupportedLattice(String),
}

/// A full-rank lattice `VZ^d` in `R^d`; columns of `generator` are the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    generator: DMatrix<f64>,
    dim: usize,
}

impl Lattice {
    pub fn new(generator: DMatrix<f64>) -> Result<Self, LatticeError> {
        let dim = generator.nrows();
        if dim == 0 || generator.ncols() != dim {
            return Err(LatticeError::SingularGenerator);
        }
        let det = generator.clone().determinant();
        if det.abs() < 1e-12 {
            return Err(LatticeError::SingularGenerator);
        }
        Ok(Self { generator, dim })
    }

    /// The hexagonal lattice with minimal vector length 1.
    pub fn a2() -> Self {
        Self::new(DMatrix::from_row_slice(2, 2, &[
            1.0,
            0.5,
            0.0,
            3.0_f64.sqrt() / 2.0,
        ]))
        .expect("A2 generator is invertible")
    }

    /// The rectangular lattice `Z × √3Z`.
    pub fn rect_l() -> Self {
        Self::rectangular(&[1.0, 3.0_f64.sqrt()])
    }

    /// `Z^d`.
    pub fn zd(d: usize) -> Self {
        Self::new(DMatrix::identity(d, d)).expect("identity is invertible")
    }

    /// Rectangular lattice `a_1 Z × … × a_d Z`.
    pub fn rectangular(sides: &[f64]) -> Self {
        let d = sides.len();
        let mut m = DMatrix::zeros(d, d);
        for (i, &s) in sides.iter().enumerate() {
            m[(i, i)] = s;
        }
        Self::new(m).expect("rectangular generator is invertible")
    }

    /// Parse a named lattice key: `"A2" | "L" | "Z" | "Zd:d" | "rect:a1,a2,..."`.
    pub fn from_name(name: &str) -> Result<Self, LatticeError> {
        match name {
            "A2" => Ok(Self::a2()),
            "L" => Ok(Self::rect_l()),
            "Z" => Ok(Self::zd(1)),
            "Z2" => Ok(Self::zd(2)),
            _ => {
                if let Some(spec) = name.strip_prefix("rect:") {
                    let sides: Result<Vec<f64>, _> =
                        spec.split(',').map(|s| s.trim().parse::<f64>()).collect();
                    match sides {
                        Ok(s) if !s.is_empty() && s.iter().all(|&x| x > 0.0) => {
                            Ok(Self::rectangular(&s))
                        }
                        _ => Err(LatticeError::UnsupportedLattice(name.to_string())),
                    }
                } else {
                    Err(LatticeError::UnsupportedLattice(name.to_string()))
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator(&self) -> &DMatrix<f64> {
        &self.generator
    }

    /// Covolume `|det V|`, i.e. the volume of the fundamental parallelepiped.
    pub fn covolume(&self) -> f64 {
        self.generator.clone().determinant().abs()
    }

    /// Dual lattice, generated by the inverse transpose of the generator.
    pub fn dual(&self) -> Lattice {
        let inv = self
            .generator
            .clone()
            .try_inverse()
            .expect("lattice generator is invertible by invariant");
        Lattice {
            generator: inv.transpose(),
            dim: self.dim,
        }
    }

    /// Scale the lattice by `s`.
    pub fn scale(&self, s: f64) -> Lattice {
        Lattice {
            generator: &self.generator * s,
            dim: self.dim,
        }
    }

    /// Rotate a 2-D lattice by angle `phi`.
    pub fn rotate(&self, phi: f64) -> Lattice {
        assert_eq!(self.dim, 2, "rotation only supported in dimension 2");
        let r = DMatrix::from_row_slice(2, 2, &[phi.cos(), -phi.sin(), phi.sin(), phi.cos()]);
        Lattice {
            generator: &r * &self.generator,
            dim: 2,
        }
    }

    /// Coordinates of `x` in the lattice basis: `V^{-1} x`.
    pub fn coordinates(&self, x: &DVector<f64>) -> DVector<f64> {
        self.generator
            .clone()
            .try_inverse()
            .expect("invertible by invariant")
            * x
    }

    /// Reduce `x` modulo the lattice into the half-open fundamental
    /// parallelepiped `V[0,1)^d`.
    pub fn reduce(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut c = self.coordinates(x);
        for ci in c.iter_mut() {
            *ci -= ci.floor();
            // Guard against values like -1e-17 whose floor subtraction
            // rounds back up to exactly 1.0.
            if *ci >= 1.0 {
                *ci -= 1.0;
            }
        }
        &self.generator * c
    }

    /// Does `x` belong to the lattice (up to `INTEGRALITY_TOL` in coordinates)?
    pub fn contains(&self, x: &DVector<f64>) -> bool {
        self.coordinates(x)
            .iter()
            .all(|c| (c - c.round()).abs() < INTEGRALITY_TOL)
    }

    /// Integer coordinate matrix `W` with `V_sub = V_self · W`, if `sub` is a
    /// sublattice of `self`... i.e. `self ⊇ sub`.
    pub fn sublattice_coords(&self, sub: &Lattice) -> Result<DMatrix<i64>, LatticeError> {
        let w_real = self
            .generator
            .clone()
            .try_inverse()
            .expect("invertible by invariant")
            * &sub.generator;
        let mut w = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let e = w_real[(i, j)];
                if (e - e.round()).abs() > INTEGRALITY_TOL {
                    return Err(LatticeError::NotASublattice(format!(
                        "entry ({i},{j}) = {e}"
                    )));
                }
                w[(i, j)] = e.round() as i64;
            }
        }
        Ok(w)
    }

    /// Enumerate all lattice vectors with Euclidean norm at most `radius`.
    pub fn points_within(&self, radius: f64) -> Vec<DVector<f64>> {
        // Bound integer coordinates via the dual basis: if x = V k, then
        // k_i = u_i · x with u_i the i-th row of V^{-1}, so |k_i| ≤ |u_i| |x|.
        let inv = self
            .generator
            .clone()
            .try_inverse()
            .expect("invertible by invariant");
        let bounds: Vec<i64> = (0..self.dim)
            .map(|i| (inv.row(i).norm() * radius).ceil() as i64 + 1)
            .collect();
        let mut out = Vec::new();
        let mut k = vec![0i64; self.dim];
        self.enumerate_rec(0, &bounds, &mut k, radius, &mut out);
        out
    }

    fn enumerate_rec(
        &self,
        i: usize,
        bounds: &[i64],
        k: &mut Vec<i64>,
        radius: f64,
        out: &mut Vec<DVector<f64>>,
    ) {
        if i == self.dim {
            let x = &self.generator
                * DVector::from_iterator(self.dim, k.iter().map(|&ki| ki as f64));
            if x.norm() <= radius {
                out.push(x);
            }
            return;
        }
        for ki in -bounds[i]..=bounds[i] {
            k[i] = ki;
            self.enumerate_rec(i + 1, bounds, k, radius, out);
        }
    }
}

/// Exact integer Smith normal form `W = S·D·T` with unimodular `S`, `T` and
/// diagonal `D` whose entries form a divisibility chain.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub s: DMatrix<i64>,
    pub d: DMatrix<i64>,
    pub t: DMatrix<i64>,
    pub source: DMatrix<i64>,
}

impl SmithDecomposition {
    /// Diagonal elementary divisors `λ_1 | λ_2 | … | λ_d`.
    pub fn divisors(&self) -> Vec<i64> {
        (0..self.d.nrows()).map(|i| self.d[(i, i)]).collect()
    }

    /// Index `κ = λ_1 ⋯ λ_d`.
    pub fn index(&self) -> i64 {
        self.divisors().iter().product()
    }
}

fn checked_mul_add(acc: i64, a: i64, b: i64) -> Result<i64, LatticeError> {
    a.checked_mul(b)
        .and_then(|p| acc.checked_add(p))
        .ok_or(LatticeError::Overflow)
}

fn int_det(m: &DMatrix<i64>) -> Result<i64, LatticeError> {
    // Bareiss-free cofactor expansion is fine for d ≤ 4.
    let n = m.nrows();
    if n == 1 {
        return Ok(m[(0, 0)]);
    }
    let mut det = 0i64;
    let mut sign = 1i64;
    for j in 0..n {
        let minor = m.clone().remove_row(0).remove_column(j);
        let sub = int_det(&minor)?;
        let term = m[(0, j)].checked_mul(sub).ok_or(LatticeError::Overflow)?;
        det = det
            .checked_add(sign.checked_mul(term).ok_or(LatticeError::Overflow)?)
            .ok_or(LatticeError::Overflow)?;
        sign = -sign;
    }
    Ok(det)
}

/// Smith normal form over the integers with overflow checking.
pub fn smith_normal_form(w: &DMatrix<i64>) -> Result<SmithDecomposition, LatticeError> {
    let n = w.nrows();
    assert_eq!(w.ncols(), n, "Smith normal form requires a square matrix");
    let det = int_det(w)?;
    if det == 0 {
        return Err(LatticeError::SingularIntegerMatrix);
    }
    if det.abs() > (1 << 31) {
        return Err(LatticeError::IndexTooLarge(det.abs()));
    }

    let mut d = w.clone();
    let mut s: DMatrix<i64> = DMatrix::identity(n, n);
    let mut t: DMatrix<i64> = DMatrix::identity(n, n);

    // Row operation d ← E d must be mirrored as s ← s E^{-1} so that
    // w = s d t stays invariant (and dually for columns).
    for pivot in 0..n {
        loop {
            // Find entry with minimal nonzero absolute value in the block.
            let mut best: Option<(usize, usize)> = None;
            for i in pivot..n {
                for j in pivot..n {
                    if d[(i, j)] != 0
                        && best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let (bi, bj) = best.ok_or(LatticeError::SingularIntegerMatrix)?;
            // Move it to the pivot position.
            if bi != pivot {
                d.swap_rows(bi, pivot);
                s.swap_columns(bi, pivot);
            }
            if bj != pivot {
                d.swap_columns(bj, pivot);
                t.swap_rows(bj, pivot);
            }
            // Eliminate the pivot row and column.
            let mut clean = true;
            for i in pivot + 1..n {
                let q = d[(i, pivot)].div_euclid(d[(pivot, pivot)]);
                if q != 0 {
                    for j in pivot..n {
                        d[(i, j)] = checked_mul_add(d[(i, j)], -q, d[(pivot, j)])?;
                    }
                    for k in 0..n {
                        s[(k, pivot)] = checked_mul_add(s[(k, pivot)], q, s[(k, i)])?;
                    }
                }
                if d[(i, pivot)] != 0 {
                    clean = false;
                }
            }
            for j in pivot + 1..n {
                let q = d[(pivot, j)].div_euclid(d[(pivot, pivot)]);
                if q != 0 {
                    for i in pivot..n {
                        d[(i, j)] = checked_mul_add(d[(i, j)], -q, d[(i, pivot)])?;
                    }
                    for k in 0..n {
                        t[(pivot, k)] = checked_mul_add(t[(pivot, k)], q, t[(j, k)])?;
                    }
                }
                if d[(pivot, j)] != 0 {
                    clean = false;
                }
            }
            if clean && d.view((pivot + 1, pivot), (n - pivot - 1, 1)).iter().all(|&e| e == 0) {
                break;
            }
        }
    }

    // Make diagonal positive.
    for i in 0..n {
        if d[(i, i)] < 0 {
            for j in 0..n {
                d[(i, j)] = -d[(i, j)];
            }
            for k in 0..n {
                s[(k, i)] = -s[(k, i)];
            }
        }
    }

    // Enforce the divisibility chain λ_i | λ_{i+1} by folding offending pairs.
    loop {
        let mut fixed = true;
        for i in 0..n - 1 {
            let (a, b) = (d[(i, i)], d[(i + 1, i + 1)]);
            if b % a != 0 {
                fixed = false;
                // Add column i+1 to column i, creating entry b below the
                // pivot, then redo the elimination on the 2×2 block.
                // d ← d, with col_i += col_{i+1}: mirrored by t row op.
                for r in 0..n {
                    d[(r, i)] = d[(r, i)].checked_add(d[(r, i + 1)]).ok_or(LatticeError::Overflow)?;
                }
                for k in 0..n {
                    t[(i + 1, k)] = t[(i + 1, k)].checked_sub(t[(i, k)]).ok_or(LatticeError::Overflow)?;
                }
                // Now the block is [[a,0],[b,b]]; reduce via gcd steps.
                reduce_block(&mut d, &mut s, &mut t, i)?;
            }
        }
        if fixed {
            break;
        }
    }

    // Block reduction may reintroduce negative diagonal entries.
    for i in 0..n {
        if d[(i, i)] < 0 {
            for j in 0..n {
                d[(i, j)] = -d[(i, j)];
            }
            for k in 0..n {
                s[(k, i)] = -s[(k, i)];
            }
        }
    }

    let snf = SmithDecomposition {
        s,
        d,
        t,
        source: w.clone(),
    };
    debug_assert_eq!(&snf.s * &snf.d * &snf.t, *w);
    Ok(snf)
}

/// Re-run the elimination on the trailing block starting at `pivot` after a
/// divisibility fix-up introduced off-diagonal entries.
fn reduce_block(
    d: &mut DMatrix<i64>,
    s: &mut DMatrix<i64>,
    t: &mut DMatrix<i64>,
    pivot: usize,
) -> Result<(), LatticeError> {
    let n = d.nrows();
    loop {
        let mut best: Option<(usize, usize)> = None;
        for i in pivot..n {
            for j in pivot..n {
                if d[(i, j)] != 0
                    && best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let (bi, bj) = best.ok_or(LatticeError::SingularIntegerMatrix)?;
        if bi != pivot {
            d.swap_rows(bi, pivot);
            s.swap_columns(bi, pivot);
        }
        if bj != pivot {
            d.swap_columns(bj, pivot);
            t.swap_rows(bj, pivot);
        }
        let mut clean = true;
        for i in pivot + 1..n {
            let q = d[(i, pivot)].div_euclid(d[(pivot, pivot)]);
            if q != 0 {
                for j in pivot..n {
                    d[(i, j)] = checked_mul_add(d[(i, j)], -q, d[(pivot, j)])?;
                }
                for k in 0..n {
                    s[(k, pivot)] = checked_mul_add(s[(k, pivot)], q, s[(k, i)])?;
                }
            }
            if d[(i, pivot)] != 0 {
                clean = false;
            }
        }
        for j in pivot + 1..n {
            let q = d[(pivot, j)].div_euclid(d[(pivot, pivot)]);
            if q != 0 {
                for i in pivot..n {
                    d[(i, j)] = checked_mul_add(d[(i, j)], -q, d[(i, pivot)])?;
                }
                for k in 0..n {
                    t[(pivot, k)] = checked_mul_add(t[(pivot, k)], q, t[(j, k)])?;
                }
            }
            if d[(pivot, j)] != 0 {
                clean = false;
            }
        }
        if clean {
            break;
        }
    }
    if d[(pivot, pivot)] < 0 {
        for j in 0..n {
            d[(pivot, j)] = -d[(pivot, j)];
        }
        for k in 0..n {
            s[(k, pivot)] = -s[(k, pivot)];
        }
    }
    Ok(())
}

/// A finite multiset of points reduced into the fundamental parallelepiped of
/// the periodizing lattice `Φ`.
#[derive(Debug, Clone)]
pub struct Configuration {
    pub points: Vec<DVector<f64>>,
    pub ambient: Lattice,
}

impl Configuration {
    pub fn new(points: Vec<DVector<f64>>, ambient: Lattice) -> Self {
        let points = points.iter().map(|p| ambient.reduce(p)).collect();
        Self { points, ambient }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Representatives of the cosets `Λ/Φ` for a sublattice `Φ ⊆ Λ`, constructed
/// from the Smith decomposition of the coordinate matrix `W = V_Λ^{-1} V_Φ`:
/// with `W = S·D·T`, the points `Ṽ j`, `Ṽ = V_Λ S`, `j ∈ Π [0..λ_i)`, hit
/// every coset exactly once.
pub fn coset_representatives(phi: &Lattice, lambda: &Lattice) -> Result<Configuration, LatticeError> {
    let w = lambda.sublattice_coords(phi)?;
    let snf = smith_normal_form(&w)?;
    let divisors = snf.divisors();
    let d = phi.dim();
    let s_real = snf.s.map(|e| e as f64);
    let v_tilde = lambda.generator() * s_real;

    let mut points = Vec::with_capacity(snf.index() as usize);
    let mut j = vec![0i64; d];
    loop {
        let x = &v_tilde * DVector::from_iterator(d, j.iter().map(|&ji| ji as f64));
        points.push(x);
        // Odometer increment over Π [0..λ_i).
        let mut i = 0;
        loop {
            if i == d {
                return Ok(Configuration::new(points, phi.clone()));
            }
            j[i] += 1;
            if j[i] < divisors[i] {
                break;
            }
            j[i] = 0;
            i += 1;
        }
    }
}

/// Finite group of orthogonal matrices fixing a lattice.
#[derive(Debug, Clone)]
pub struct PointGroup {
    pub elements: Vec<DMatrix<f64>>,
}

impl PointGroup {
    /// Orbit of a vector under the group, deduplicated within `tol`.
    pub fn orbit(&self, v: &DVector<f64>, tol: f64) -> Vec<DVector<f64>> {
        let mut orbit: Vec<DVector<f64>> = Vec::new();
        for g in &self.elements {
            let gv = g * v;
            if !orbit.iter().any(|w| (w - &gv).norm() < tol) {
                orbit.push(gv);
            }
        }
        orbit
    }
}

/// Named point groups: the 12-element dihedral group of `A2`, the coordinate
/// reflections of rectangular lattices, and `{±1}` for `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedGroup {
    A2,
    L,
    Rectangular(usize),
    Z,
}

pub fn point_group(name: NamedGroup) -> PointGroup {
    match name {
        NamedGroup::A2 => {
            // Dihedral group of order 12: rotations by kπ/3 and the
            // corresponding reflections.
            let mut elements = Vec::with_capacity(12);
            for k in 0..6 {
                let phi = std::f64::consts::PI / 3.0 * k as f64;
                let (s, c) = phi.sin_cos();
                elements.push(DMatrix::from_row_slice(2, 2, &[c, -s, s, c]));
                // Reflection across the line at angle phi/2 composed with the
                // rotation: reflection matrix [[c, s], [s, -c]].
                elements.push(DMatrix::from_row_slice(2, 2, &[c, s, s, -c]));
            }
            PointGroup { elements }
        }
        NamedGroup::L => point_group(NamedGroup::Rectangular(2)),
        NamedGroup::Rectangular(d) => {
            // All 2^d sign patterns on the coordinates.
            let mut elements = Vec::with_capacity(1 << d);
            for mask in 0..(1u32 << d) {
                let mut m = DMatrix::zeros(d, d);
                for i in 0..d {
                    m[(i, i)] = if mask & (1 << i) != 0 { -1.0 } else { 1.0 };
                }
                elements.push(m);
            }
            PointGroup { elements }
        }
        NamedGroup::Z => PointGroup {
            elements: vec![
                DMatrix::from_row_slice(1, 1, &[1.0]),
                DMatrix::from_row_slice(1, 1, &[-1.0]),
            ],
        },
    }
}

/// Check that every element of `g` maps `lat` onto itself.
pub fn group_fixes_lattice(g: &PointGroup, lat: &Lattice) -> bool {
    g.elements.iter().all(|m| {
        let image = Lattice {
            generator: m * lat.generator(),
            dim: lat.dim(),
        };
        lat.sublattice_coords(&image)
            .is_ok_and(|w| int_det(&w).map(|d| d.abs() == 1).unwrap_or(false))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn v2(x: f64, y: f64) -> DVector<f64> {
        DVector::from_vec(vec![x, y])
    }

    #[test]
    fn dual_of_z2_is_z2() {
        let z2 = Lattice::zd(2);
        assert_eq!(z2.dual().generator(), z2.generator());
    }

    #[test]
    fn dual_of_l_is_scaled() {
        // L = Z × √3Z has dual Z × (1/√3)Z.
        let l = Lattice::rect_l();
        let dual = l.dual();
        assert_abs_diff_eq!(dual.generator()[(0, 0)], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(dual.generator()[(1, 1)], 1.0 / 3.0_f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn dual_of_a2_contains_expected_vectors() {
        let dual = Lattice::a2().dual();
        let s3 = 3.0_f64.sqrt();
        assert!(dual.contains(&v2(1.0, -1.0 / s3)));
        assert!(dual.contains(&v2(0.0, 2.0 / s3)));
        // Dual pairing: every dual basis vector has integer products with A2.
        let a2 = Lattice::a2();
        for j in 0..2 {
            for k in 0..2 {
                let ip = dual.generator().column(j).dot(&a2.generator().column(k));
                assert!((ip - ip.round()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dual_is_involution() {
        for lat in [Lattice::a2(), Lattice::rect_l(), Lattice::zd(3)] {
            let dd = lat.dual().dual();
            // Same lattice: mutual sublattice with unimodular coordinates.
            let w1 = lat.sublattice_coords(&dd).unwrap();
            let w2 = dd.sublattice_coords(&lat).unwrap();
            assert_eq!(int_det(&w1).unwrap().abs(), 1);
            assert_eq!(int_det(&w2).unwrap().abs(), 1);
        }
    }

    #[test]
    fn reduce_into_fundamental_domain() {
        let z2 = Lattice::zd(2);
        let r = z2.reduce(&v2(1.25, 0.0));
        assert_abs_diff_eq!(r[0], 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(r[1], 0.0, epsilon = 1e-14);
        let r = z2.reduce(&v2(-0.1, -0.1));
        assert_abs_diff_eq!(r[0], 0.9, epsilon = 1e-14);
        assert_abs_diff_eq!(r[1], 0.9, epsilon = 1e-14);
        // A lattice vector reduces to 0.
        let a2 = Lattice::a2();
        let v = a2.generator() * v2(3.0, -2.0);
        assert!(a2.reduce(&v).norm() < 1e-12);
    }

    #[test]
    fn snf_identity_and_diagonal() {
        let id: DMatrix<i64> = DMatrix::identity(2, 2);
        let snf = smith_normal_form(&id).unwrap();
        assert_eq!(snf.divisors(), vec![1, 1]);
        let diag = DMatrix::from_row_slice(2, 2, &[2, 0, 0, 2]);
        let snf = smith_normal_form(&diag).unwrap();
        assert_eq!(snf.divisors(), vec![2, 2]);
        assert_eq!(int_det(&snf.s).unwrap().abs(), 1);
        assert_eq!(int_det(&snf.t).unwrap().abs(), 1);
    }

    #[test]
    fn snf_upper_triangular_example() {
        // [[2,1],[0,3]] has elementary divisors 1, 6.
        let w = DMatrix::from_row_slice(2, 2, &[2, 1, 0, 3]);
        let snf = smith_normal_form(&w).unwrap();
        assert_eq!(snf.divisors(), vec![1, 6]);
        assert_eq!(&snf.s * &snf.d * &snf.t, w);
        assert_eq!(int_det(&snf.s).unwrap().abs(), 1);
        assert_eq!(int_det(&snf.t).unwrap().abs(), 1);
    }

    #[test]
    fn snf_random_matrices_product_identity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let mut tried = 0;
        while tried < 200 {
            let n = rng.gen_range(1..=4);
            let w = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-6i64..=6));
            let Ok(snf) = smith_normal_form(&w) else {
                continue; // singular draw
            };
            tried += 1;
            assert_eq!(&snf.s * &snf.d * &snf.t, w, "product identity for {w}");
            assert_eq!(int_det(&snf.s).unwrap().abs(), 1);
            assert_eq!(int_det(&snf.t).unwrap().abs(), 1);
            assert_eq!(snf.index(), int_det(&w).unwrap().abs());
            let div = snf.divisors();
            for i in 0..n - 1 {
                assert_eq!(div[i + 1] % div[i], 0, "divisibility chain for {w}");
            }
        }
    }

    #[test]
    fn snf_rejects_singular() {
        let w = DMatrix::from_row_slice(2, 2, &[1, 2, 2, 4]);
        assert!(matches!(
            smith_normal_form(&w),
            Err(LatticeError::SingularIntegerMatrix)
        ));
    }

    #[test]
    fn coset_reps_trivial_index() {
        let a2 = Lattice::a2();
        let reps = coset_representatives(&a2, &a2).unwrap();
        assert_eq!(reps.len(), 1);
        assert!(reps.points[0].norm() < 1e-12);
    }

    #[test]
    fn coset_reps_z2_grid() {
        let phi = Lattice::zd(2).scale(2.0);
        let reps = coset_representatives(&phi, &Lattice::zd(2)).unwrap();
        assert_eq!(reps.len(), 4);
        // The 4 points are {0,1}² up to reduction.
        for x in 0..2 {
            for y in 0..2 {
                let target = v2(x as f64, y as f64);
                assert!(
                    reps.points.iter().any(|p| (p - &target).norm() < 1e-10),
                    "missing {target}"
                );
            }
        }
    }

    #[test]
    fn coset_reps_a2_half() {
        let a2 = Lattice::a2();
        let half = a2.scale(0.5);
        let reps = coset_representatives(&a2, &half).unwrap();
        assert_eq!(reps.len(), 4);
        // Pairwise distinct modulo A2.
        for i in 0..4 {
            for j in 0..i {
                let diff = &reps.points[i] - &reps.points[j];
                assert!(!a2.contains(&diff), "points {i},{j} collide mod A2");
            }
        }
    }

    #[test]
    fn coset_reps_cardinality_matches_determinant() {
        let l = Lattice::rect_l();
        let half_a2 = Lattice::a2().scale(0.5);
        let reps = coset_representatives(&l, &half_a2).unwrap();
        let det = (half_a2
            .generator()
            .clone()
            .try_inverse()
            .unwrap()
            * l.generator())
        .determinant();
        assert_eq!(reps.len() as i64, det.abs().round() as i64);
        assert_eq!(reps.len(), 8);
    }

    #[test]
    fn coset_reps_rejects_non_sublattice() {
        let a2 = Lattice::a2();
        let z2 = Lattice::zd(2);
        assert!(coset_representatives(&a2, &z2).is_err());
    }

    #[test]
    fn point_groups_fix_their_lattices() {
        assert!(group_fixes_lattice(&point_group(NamedGroup::A2), &Lattice::a2()));
        assert!(group_fixes_lattice(&point_group(NamedGroup::L), &Lattice::rect_l()));
        assert!(group_fixes_lattice(
            &point_group(NamedGroup::Rectangular(2)),
            &Lattice::rectangular(&[2.0, 5.0])
        ));
        assert!(group_fixes_lattice(&point_group(NamedGroup::Z), &Lattice::zd(1)));
    }

    #[test]
    fn group_orders() {
        assert_eq!(point_group(NamedGroup::A2).elements.len(), 12);
        assert_eq!(point_group(NamedGroup::L).elements.len(), 4);
        assert_eq!(point_group(NamedGroup::Z).elements.len(), 2);
    }

    #[test]
    fn a2_group_permutes_shortest_vectors() {
        // The 6 shortest vectors of A2 (norm 1) are permuted by every element.
        let a2 = Lattice::a2();
        let shortest: Vec<DVector<f64>> = a2
            .points_within(1.0 + 1e-9)
            .into_iter()
            .filter(|v| (v.norm() - 1.0).abs() < 1e-9)
            .collect();
        assert_eq!(shortest.len(), 6);
        for g in &point_group(NamedGroup::A2).elements {
            for v in &shortest {
                let gv = g * v;
                assert!(
                    shortest.iter().any(|w| (w - &gv).norm() < 1e-12),
                    "image not among shortest vectors"
                );
            }
        }
    }

    #[test]
    fn a2_group_is_exactly_the_brute_force_symmetry_set() {
        // Oracle: enumerate all orthogonal maps sending the hexagon of
        // shortest vectors to itself (determined by images of two
        // independent shortest vectors), and compare as a set.
        let a2 = Lattice::a2();
        let shortest: Vec<DVector<f64>> = a2
            .points_within(1.0 + 1e-9)
            .into_iter()
            .filter(|v| (v.norm() - 1.0).abs() < 1e-9)
            .collect();
        let e1 = v2(1.0, 0.0);
        let e2 = v2(0.5, 3.0_f64.sqrt() / 2.0);
        let basis = DMatrix::from_columns(&[e1.clone(), e2.clone()]);
        let basis_inv = basis.clone().try_inverse().unwrap();
        let mut oracle: Vec<DMatrix<f64>> = Vec::new();
        for img1 in &shortest {
            for img2 in &shortest {
                let m = DMatrix::from_columns(&[img1.clone(), img2.clone()]) * &basis_inv;
                // Orthogonality check.
                if ((&m * m.transpose()) - DMatrix::<f64>::identity(2, 2)).norm() < 1e-9
                    && group_fixes_lattice(&PointGroup { elements: vec![m.clone()] }, &a2)
                    && !oracle.iter().any(|o| (o - &m).norm() < 1e-9)
                {
                    oracle.push(m);
                }
            }
        }
        let group = point_group(NamedGroup::A2);
        assert_eq!(oracle.len(), group.elements.len());
        for g in &group.elements {
            assert!(oracle.iter().any(|o| (o - g).norm() < 1e-9));
        }
    }

    #[test]
    fn from_name_parses() {
        assert!(Lattice::from_name("A2").is_ok());
        assert!(Lattice::from_name("L").is_ok());
        assert!(Lattice::from_name("Z").is_ok());
        assert!(Lattice::from_name("rect:1,2.5").is_ok());
        assert!(Lattice::from_name("E8").is_err());
        assert!(Lattice::from_name("rect:-1,2").is_err());
    }

    #[test]
    fn points_within_counts_a2() {
        // A2 has 1 + 6 points within radius 1 + eps.
        assert_eq!(Lattice::a2().points_within(1.0 + 1e-9).len(), 7);
    }
}
