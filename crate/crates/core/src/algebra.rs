//! Finite-dimensional graded associative F_p-algebras presenting tensor
//! monads A⊗– on D(k), with the sphericalness verdict for the monadic
//! adjunction: the twist cone(1 → A) must be invertible (one-dimensional
//! homology) and the unit must commute with the twist up to homotopy.
//!
//! Twist objects, unit matrices and section matrices are computed in the
//! canonical presentation whose first basis vector is the unit; this is what
//! makes the section data of non-isomorphic algebras literally comparable.

use crate::complex::{
    cone, homotopy_between, swap_iso, unit_tensor_left, unit_tensor_right, ChainComplex, ChainMap,
    Homotopy,
};
use crate::error::{AlgebraViolation, Error, Result};
use crate::linalg::{Matrix, PrimeField};
use std::collections::BTreeMap;

/// Default cap on exhaustive enumerations (F_p-points, candidate linear maps).
pub const DEFAULT_ENUM_BOUND: u64 = 1 << 20;

/// A validated graded associative unital algebra, given by structure
/// constants `c_{ij}^k` with flat index `(i*dim + j)*dim + k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedAlgebra {
    field: PrimeField,
    labels: Vec<String>,
    degrees: Vec<i64>,
    unit: Vec<u64>,
    constants: Vec<u64>,
}

impl GradedAlgebra {
    /// Validate and build. All violated identities are collected with their
    /// witness indices before rejecting.
    pub fn new(
        field: PrimeField,
        labels: Vec<String>,
        degrees: Vec<i64>,
        unit: Vec<i64>,
        constants: Vec<i64>,
    ) -> Result<Self> {
        let dim = labels.len();
        if degrees.len() != dim || unit.len() != dim {
            return Err(Error::Dimension("basis, degrees and unit lengths must agree".into()));
        }
        if constants.len() != dim * dim * dim {
            return Err(Error::Dimension(format!(
                "expected {} structure constants, got {}",
                dim * dim * dim,
                constants.len()
            )));
        }
        let a = GradedAlgebra {
            field,
            labels,
            degrees,
            unit: unit.iter().map(|&v| field.reduce(v)).collect(),
            constants: constants.iter().map(|&v| field.reduce(v)).collect(),
        };
        let violations = a.violations();
        if violations.is_empty() {
            Ok(a)
        } else {
            Err(Error::Algebra(violations))
        }
    }

    fn c(&self, i: usize, j: usize, k: usize) -> u64 {
        self.constants[(i * self.dim() + j) * self.dim() + k]
    }

    fn violations(&self) -> Vec<AlgebraViolation> {
        let dim = self.dim();
        let f = self.field;
        let mut out = Vec::new();
        for (index, &u) in self.unit.iter().enumerate() {
            if u != 0 && self.degrees[index] != 0 {
                out.push(AlgebraViolation::UnitDegree { index });
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    if self.c(i, j, k) != 0 && self.degrees[k] != self.degrees[i] + self.degrees[j]
                    {
                        out.push(AlgebraViolation::Degree { i, j, k });
                    }
                }
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    for l in 0..dim {
                        let lhs = (0..dim)
                            .fold(0, |acc, m| f.add(acc, f.mul(self.c(i, j, m), self.c(m, k, l))));
                        let rhs = (0..dim)
                            .fold(0, |acc, m| f.add(acc, f.mul(self.c(j, k, m), self.c(i, m, l))));
                        if lhs != rhs {
                            out.push(AlgebraViolation::Associativity { i, j, k, l });
                        }
                    }
                }
            }
        }
        for j in 0..dim {
            for k in 0..dim {
                let left = (0..dim)
                    .fold(0, |acc, i| f.add(acc, f.mul(self.unit[i], self.c(i, j, k))));
                if left != u64::from(j == k) {
                    out.push(AlgebraViolation::LeftUnit { j, k });
                }
                let right = (0..dim)
                    .fold(0, |acc, i| f.add(acc, f.mul(self.unit[i], self.c(j, i, k))));
                if right != u64::from(j == k) {
                    out.push(AlgebraViolation::RightUnit { j, k });
                }
            }
        }
        out
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn unit_coordinates(&self) -> &[u64] {
        &self.unit
    }

    pub fn multiply(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let dim = self.dim();
        let mut out = vec![0u64; dim];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let xy = self.field.mul(xi, yj);
                for (k, o) in out.iter_mut().enumerate() {
                    *o = self.field.add(*o, self.field.mul(xy, self.c(i, j, k)));
                }
            }
        }
        out
    }

    /// The map A⊗A → A in the given basis: a dim × dim² matrix whose
    /// (k, i·dim+j) entry is `c_{ij}^k`.
    pub fn multiplication_matrix(&self) -> Matrix {
        let dim = self.dim();
        Matrix::from_fn(self.field, dim, dim * dim, |k, col| {
            self.c(col / dim, col % dim, k)
        })
    }

    /// Per-degree position of each basis vector inside [`Self::complex`].
    fn basis_positions(&self) -> Vec<(i64, usize)> {
        let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
        self.degrees
            .iter()
            .map(|&d| {
                let pos = counts.entry(d).or_insert(0);
                let out = (d, *pos);
                *pos += 1;
                out
            })
            .collect()
    }

    /// The underlying complex of A: the graded vector space with zero
    /// differential, one degree block per distinct basis degree.
    pub fn complex(&self) -> ChainComplex {
        let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
        for &d in &self.degrees {
            *dims.entry(d).or_insert(0) += 1;
        }
        ChainComplex::new(self.field, dims, BTreeMap::new()).expect("zero differential")
    }

    /// The unit as a chain map k → A.
    pub fn unit_chain_map(&self) -> ChainMap {
        let a = self.complex();
        let k = ChainComplex::unit(self.field);
        let mut col = Matrix::zero(self.field, a.dim(0), 1);
        for (i, &(d, pos)) in self.basis_positions().iter().enumerate() {
            if d == 0 {
                col.set(pos, 0, self.unit[i]);
            }
        }
        ChainMap::new(k, a, BTreeMap::from([(0, col)])).expect("zero differentials commute")
    }

    /// Re-express the algebra in the basis given by the columns of `b`
    /// (coordinates in the current basis). Each new basis vector must be
    /// homogeneous; `new_degrees[i]` is the degree of column i.
    pub fn change_basis(
        &self,
        b: &Matrix,
        new_labels: Vec<String>,
        new_degrees: Vec<i64>,
    ) -> Result<GradedAlgebra> {
        let dim = self.dim();
        if b.rows() != dim || b.cols() != dim || new_degrees.len() != dim {
            return Err(Error::Dimension("change_basis: square matrix of full dimension".into()));
        }
        for (i, &nd) in new_degrees.iter().enumerate() {
            for a in 0..dim {
                if b.get(a, i) != 0 && self.degrees[a] != nd {
                    return Err(Error::Dimension(format!(
                        "change_basis: column {i} is not homogeneous of degree {nd}"
                    )));
                }
            }
        }
        let binv = b.inverse().ok_or_else(|| {
            Error::Dimension("change_basis: matrix is singular".into())
        })?;
        let f = self.field;
        let column = |idx: usize| -> Vec<u64> { (0..dim).map(|a| b.get(a, idx)).collect() };
        let mut constants = vec![0i64; dim * dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let prod = self.multiply(&column(i), &column(j));
                for k in 0..dim {
                    let coord =
                        (0..dim).fold(0, |acc, a| f.add(acc, f.mul(binv.get(k, a), prod[a])));
                    constants[(i * dim + j) * dim + k] = coord as i64;
                }
            }
        }
        let unit_vec = Matrix::from_fn(f, dim, 1, |a, _| self.unit[a]);
        let new_unit = binv.mul(&unit_vec)?;
        GradedAlgebra::new(
            f,
            new_labels,
            new_degrees,
            (0..dim).map(|a| new_unit.get(a, 0) as i64).collect(),
            constants,
        )
    }

    /// The same algebra presented in a basis whose first vector is the unit,
    /// completed greedily by standard basis vectors. Unit coordinates become
    /// (1, 0, ..., 0); this normal form makes twist and section data of
    /// different algebras entry-comparable.
    pub fn canonical_presentation(&self) -> GradedAlgebra {
        let dim = self.dim();
        let f = self.field;
        let mut cols: Vec<Vec<u64>> = vec![self.unit.clone()];
        let mut degrees = vec![0i64];
        let mut labels = vec!["1".to_string()];
        for a in 0..dim {
            if cols.len() == dim {
                break;
            }
            let mut candidate = vec![0u64; dim];
            candidate[a] = 1;
            let test = Matrix::from_fn(f, dim, cols.len() + 1, |r, c| {
                if c < cols.len() {
                    cols[c][r]
                } else {
                    candidate[r]
                }
            });
            if test.rank() == cols.len() + 1 {
                cols.push(candidate);
                degrees.push(self.degrees[a]);
                labels.push(self.labels[a].clone());
            }
        }
        let b = Matrix::from_fn(f, dim, dim, |r, c| cols[c][r]);
        self.change_basis(&b, labels, degrees)
            .expect("unit-first completion is a homogeneous basis")
    }

    /// Block-diagonal direct product of two algebras.
    pub fn direct_product(&self, other: &GradedAlgebra) -> Result<GradedAlgebra> {
        if self.field != other.field {
            return Err(Error::ModulusMismatch(self.field.modulus(), other.field.modulus()));
        }
        let (da, db) = (self.dim(), other.dim());
        let dim = da + db;
        let labels = self
            .labels
            .iter()
            .map(|l| format!("l.{l}"))
            .chain(other.labels.iter().map(|l| format!("r.{l}")))
            .collect();
        let degrees = self.degrees.iter().chain(&other.degrees).copied().collect();
        let unit: Vec<i64> =
            self.unit.iter().chain(&other.unit).map(|&u| u as i64).collect();
        let mut constants = vec![0i64; dim * dim * dim];
        for i in 0..da {
            for j in 0..da {
                for k in 0..da {
                    constants[(i * dim + j) * dim + k] = self.c(i, j, k) as i64;
                }
            }
        }
        for i in 0..db {
            for j in 0..db {
                for k in 0..db {
                    constants[((da + i) * dim + da + j) * dim + da + k] = other.c(i, j, k) as i64;
                }
            }
        }
        GradedAlgebra::new(self.field, labels, degrees, unit, constants)
    }
}

/// Named preset algebras. `square-zero(d)` takes any integer degree d.
pub fn preset(name: &str, field: PrimeField) -> Result<GradedAlgebra> {
    match name {
        "product2" => GradedAlgebra::new(
            field,
            vec!["e1".into(), "e2".into()],
            vec![0, 0],
            vec![1, 1],
            // e_i e_j = delta_ij e_i
            vec![1, 0, 0, 0, 0, 0, 0, 1],
        ),
        "product3" => {
            let dim = 3;
            let mut constants = vec![0i64; dim * dim * dim];
            for i in 0..dim {
                constants[(i * dim + i) * dim + i] = 1;
            }
            GradedAlgebra::new(
                field,
                vec!["e1".into(), "e2".into(), "e3".into()],
                vec![0, 0, 0],
                vec![1, 1, 1],
                constants,
            )
        }
        "dual-numbers" => GradedAlgebra::new(
            field,
            vec!["1".into(), "eps".into()],
            vec![0, 0],
            vec![1, 0],
            // 1*1 = 1, 1*eps = eps*1 = eps, eps^2 = 0
            vec![1, 0, 0, 1, 0, 1, 0, 0],
        ),
        _ => {
            if let Some(body) = name.strip_prefix("square-zero(").and_then(|s| s.strip_suffix(')'))
            {
                let d: i64 = body
                    .parse()
                    .map_err(|_| Error::UnknownPreset(name.to_string()))?;
                return GradedAlgebra::new(
                    field,
                    vec!["1".into(), "x".into()],
                    vec![0, d],
                    vec![1, 0],
                    vec![1, 0, 0, 1, 0, 1, 0, 0],
                );
            }
            Err(Error::UnknownPreset(name.to_string()))
        }
    }
}

/// The monad M = A⊗– with unit u = 1_A⊗– and multiplication from the
/// algebra product; the algebra axioms are exactly the monad axioms.
#[derive(Debug, Clone)]
pub struct MonadPresentation {
    algebra: GradedAlgebra,
}

impl MonadPresentation {
    pub fn new(algebra: GradedAlgebra) -> Self {
        MonadPresentation { algebra }
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }
}

/// The twist cone(1 → A) in the canonical presentation, with its defining
/// maps.
#[derive(Debug, Clone)]
pub struct TwistData {
    /// cone(u): k in degree 1 stacked on A.
    pub complex: ChainComplex,
    /// The unit component (1, 0, ..., 0) in the canonical basis.
    pub unit_matrix: Matrix,
    /// Section of the twist: the connecting map cone(u)[-1] → k.
    pub section: ChainMap,
}

/// The twist object of the monad: the cone of the unit k → A, computed in
/// the canonical unit-first basis, together with the section map.
pub fn twist_object(m: &MonadPresentation) -> TwistData {
    let canon = m.algebra().canonical_presentation();
    let u = canon.unit_chain_map();
    let data = cone(&u);
    TwistData {
        complex: data.complex,
        unit_matrix: u.component(0),
        section: data.projection.shift(-1),
    }
}

/// The reduced twist: the cokernel of the split injection u, i.e. the span
/// of the non-unit canonical basis vectors with zero differential.
pub fn reduced_twist(m: &MonadPresentation) -> ChainComplex {
    let canon = m.algebra().canonical_presentation();
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    for &d in &canon.degrees()[1..] {
        *dims.entry(d).or_insert(0) += 1;
    }
    ChainComplex::new(canon.field(), dims, BTreeMap::new()).expect("zero differential")
}

/// True iff the twist is an autoequivalence of D(k): its total homology is
/// one-dimensional and concentrated in a single degree.
pub fn is_twist_autoequivalence(m: &MonadPresentation) -> bool {
    let h = twist_object(m).complex.homology();
    h.len() == 1 && h.values().copied().sum::<usize>() == 1
}

/// Homotopy witness for the commutation of the unit with the twist: both
/// composites X → A⊗X (via u⊗id and via id⊗u transported through the Koszul
/// swap) are built on X = reduced twist and compared.
pub fn unit_commutation(m: &MonadPresentation) -> Result<Option<Homotopy>> {
    let canon = m.algebra().canonical_presentation();
    let a = canon.complex();
    let u = canon.unit_chain_map();
    let x = reduced_twist(m);
    let idx = ChainMap::identity(&x);

    let left = ChainMap::tensor_map(&u, &idx)?.compose(&unit_tensor_left(&x)?)?;
    let right = swap_iso(&x, &a)?
        .compose(&ChainMap::tensor_map(&idx, &u)?)?
        .compose(&unit_tensor_right(&x)?)?;
    homotopy_between(&left, &right)
}

/// Verdict of the monadic sphericalness criterion.
#[derive(Debug, Clone)]
pub struct SphericalVerdict {
    pub twist: TwistData,
    pub invertible: bool,
    pub commutation: Option<Homotopy>,
    pub spherical: bool,
    pub diagnostics: Vec<String>,
}

/// Combine both conditions: the adjunction presented by the monad is
/// spherical iff the twist is invertible and the unit commutes with it.
pub fn spherical_verdict(m: &MonadPresentation) -> Result<SphericalVerdict> {
    let twist = twist_object(m);
    let invertible = is_twist_autoequivalence(m);
    let commutation = unit_commutation(m)?;
    let mut diagnostics = Vec::new();
    if !invertible {
        diagnostics.push(format!(
            "twist not invertible: homology {:?}",
            twist.complex.homology()
        ));
    }
    if commutation.is_none() {
        diagnostics.push("unit commutation witness absent".into());
    }
    let spherical = invertible && commutation.is_some();
    Ok(SphericalVerdict { twist, invertible, commutation, spherical, diagnostics })
}

/// Count solutions of x² = x in the degree-0 part by exhaustive enumeration.
pub fn count_idempotents(a: &GradedAlgebra) -> Result<u64> {
    count_idempotents_bounded(a, DEFAULT_ENUM_BOUND)
}

pub fn count_idempotents_bounded(a: &GradedAlgebra, bound: u64) -> Result<u64> {
    let p = a.field().modulus();
    let indices: Vec<usize> =
        (0..a.dim()).filter(|&i| a.degrees()[i] == 0).collect();
    p.checked_pow(indices.len() as u32)
        .filter(|&n| n <= bound)
        .ok_or_else(|| {
            Error::ResourceBound(format!(
                "idempotent enumeration needs p^{} > {bound} points",
                indices.len()
            ))
        })?;
    let mut count = 0;
    let mut coords = vec![0u64; indices.len()];
    loop {
        let mut x = vec![0u64; a.dim()];
        for (pos, &i) in indices.iter().enumerate() {
            x[i] = coords[pos];
        }
        if a.multiply(&x, &x) == x {
            count += 1;
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == coords.len() {
                return Ok(count);
            }
            coords[pos] += 1;
            if coords[pos] < p {
                break;
            }
            coords[pos] = 0;
            pos += 1;
        }
    }
}

/// Exhaustively search for a degree-preserving algebra isomorphism a → b.
pub fn brute_force_isomorphic(a: &GradedAlgebra, b: &GradedAlgebra) -> Result<bool> {
    brute_force_isomorphic_bounded(a, b, DEFAULT_ENUM_BOUND)
}

pub fn brute_force_isomorphic_bounded(
    a: &GradedAlgebra,
    b: &GradedAlgebra,
    bound: u64,
) -> Result<bool> {
    if a.field() != b.field() {
        return Err(Error::ModulusMismatch(a.field().modulus(), b.field().modulus()));
    }
    if a.dim() != b.dim() {
        return Ok(false);
    }
    let dim = a.dim();
    if dim > 3 {
        return Err(Error::ResourceBound(format!(
            "isomorphism search limited to dimension 3, got {dim}"
        )));
    }
    let mut da: BTreeMap<i64, usize> = BTreeMap::new();
    let mut db: BTreeMap<i64, usize> = BTreeMap::new();
    for &d in a.degrees() {
        *da.entry(d).or_insert(0) += 1;
    }
    for &d in b.degrees() {
        *db.entry(d).or_insert(0) += 1;
    }
    if da != db {
        return Ok(false);
    }
    // entries allowed only where row and column degrees agree
    let free: Vec<(usize, usize)> = (0..dim)
        .flat_map(|r| (0..dim).map(move |c| (r, c)))
        .filter(|&(r, c)| b.degrees()[r] == a.degrees()[c])
        .collect();
    let p = a.field().modulus();
    p.checked_pow(free.len() as u32).filter(|&n| n <= bound).ok_or_else(|| {
        Error::ResourceBound(format!("isomorphism search needs p^{} candidates", free.len()))
    })?;
    let f = a.field();
    let mut entries = vec![0u64; free.len()];
    loop {
        let mut phi = Matrix::zero(f, dim, dim);
        for (pos, &(r, c)) in free.iter().enumerate() {
            phi.set(r, c, entries[pos]);
        }
        if is_isomorphism(a, b, &phi) {
            return Ok(true);
        }
        let mut pos = 0;
        loop {
            if pos == entries.len() {
                return Ok(false);
            }
            entries[pos] += 1;
            if entries[pos] < p {
                break;
            }
            entries[pos] = 0;
            pos += 1;
        }
    }
}

fn is_isomorphism(a: &GradedAlgebra, b: &GradedAlgebra, phi: &Matrix) -> bool {
    let dim = a.dim();
    if phi.rank() != dim {
        return false;
    }
    let apply = |x: &[u64]| -> Vec<u64> {
        (0..dim)
            .map(|r| {
                (0..dim).fold(0, |acc, c| a.field().add(acc, a.field().mul(phi.get(r, c), x[c])))
            })
            .collect()
    };
    if apply(a.unit_coordinates()) != b.unit_coordinates() {
        return false;
    }
    for i in 0..dim {
        for j in 0..dim {
            let mut ei = vec![0u64; dim];
            let mut ej = vec![0u64; dim];
            ei[i] = 1;
            ej[j] = 1;
            let lhs = apply(&a.multiply(&ei, &ej));
            let rhs = b.multiply(&apply(&ei), &apply(&ej));
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}
