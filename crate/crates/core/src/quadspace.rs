//! Free quadratic spaces stored by their polar Gram matrix.
//!
//! `gram[i][j] = b(e_i, e_j)` where `b(v, w) = q(v + w) - q(v) - q(w)`, so the
//! diagonal holds `2 q(e_i)` and `q(v) = (1/2) v^T G v`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::rings::linalg::{self, Matrix};
use crate::rings::{Elem, Ring, RingDescriptor, RingHom};

/// Coordinates of a vector in the standard basis.
pub type Vector = Vec<Elem>;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticSpace {
    ring: Ring,
    gram: Matrix,
}

/// Generators of a free non-degenerate subspace together with the (unit)
/// determinant of their Gram matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceWitness {
    pub generators: Vec<Vector>,
    pub gram_det: Elem,
}

/// On-disk form of a space: `{"ring": <descriptor>, "gram": [[...]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpaceFile {
    pub ring: RingDescriptor,
    pub gram: Vec<Vec<Value>>,
}

impl QuadraticSpace {
    /// Checks shape, symmetry, canonical entries and that `det(gram)` is a unit.
    pub fn new(ring: &Ring, gram: Matrix) -> Result<Self> {
        let n = gram.len();
        for row in &gram {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
            for x in row {
                ring.check(x)?;
            }
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        if !ring.is_unit(&linalg::det(ring, &gram)) {
            return Err(Error::DegenerateForm);
        }
        Ok(QuadraticSpace { ring: ring.clone(), gram })
    }

    pub fn zero(ring: &Ring) -> Self {
        QuadraticSpace { ring: ring.clone(), gram: Vec::new() }
    }

    /// `<a_1, ..., a_n>`, i.e. `q(x) = sum a_i x_i^2`.
    pub fn diagonal(ring: &Ring, entries: &[Elem]) -> Result<Self> {
        if entries.iter().any(|a| !ring.is_unit(a)) {
            return Err(Error::NotUnit);
        }
        let n = entries.len();
        let mut gram = vec![vec![ring.zero(); n]; n];
        for (i, a) in entries.iter().enumerate() {
            gram[i][i] = ring.add(a, a);
        }
        Ok(QuadraticSpace { ring: ring.clone(), gram })
    }

    pub fn diagonal_ints(ring: &Ring, entries: &[i64]) -> Result<Self> {
        let e: Vec<Elem> = entries.iter().map(|&a| ring.from_int(a)).collect();
        Self::diagonal(ring, &e)
    }

    /// `m` copies of the hyperbolic plane `(x, y) -> xy`.
    pub fn hyperbolic(ring: &Ring, m: usize) -> Self {
        let n = 2 * m;
        let mut gram = vec![vec![ring.zero(); n]; n];
        for k in 0..m {
            gram[2 * k][2 * k + 1] = ring.one();
            gram[2 * k + 1][2 * k] = ring.one();
        }
        QuadraticSpace { ring: ring.clone(), gram }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    fn check_vec(&self, v: &[Elem]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), got: v.len() });
        }
        Ok(())
    }

    pub fn b(&self, v: &[Elem], w: &[Elem]) -> Result<Elem> {
        self.check_vec(v)?;
        self.check_vec(w)?;
        Ok(self.b_unchecked(v, w))
    }

    pub fn q(&self, v: &[Elem]) -> Result<Elem> {
        self.check_vec(v)?;
        Ok(self.q_unchecked(v))
    }

    pub(crate) fn b_unchecked(&self, v: &[Elem], w: &[Elem]) -> Elem {
        let r = &self.ring;
        let gw = linalg::mat_vec(r, &self.gram, w);
        linalg::dot(r, v, &gw)
    }

    pub(crate) fn q_unchecked(&self, v: &[Elem]) -> Elem {
        let r = &self.ring;
        let n = v.len();
        let mut acc = r.zero();
        for i in 0..n {
            if v[i].is_zero() {
                continue;
            }
            // diagonal contributes g_ii/2 v_i^2, each off-diagonal pair g_ij v_i v_j once
            let mut row = r.mul(&self.gram[i][i], &r.mul(&r.half(), &v[i]));
            for j in i + 1..n {
                row = r.add(&row, &r.mul(&self.gram[i][j], &v[j]));
            }
            acc = r.add(&acc, &r.mul(&v[i], &row));
        }
        acc
    }

    /// Gram matrix `b(v_i, v_j)` of a list of vectors.
    pub fn gram_of(&self, vectors: &[Vector]) -> Matrix {
        let k = vectors.len();
        let mut m = vec![vec![self.ring.zero(); k]; k];
        for i in 0..k {
            for j in i..k {
                let x = self.b_unchecked(&vectors[i], &vectors[j]);
                m[j][i] = x.clone();
                m[i][j] = x;
            }
        }
        m
    }

    pub fn orth_sum(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let (n, m) = (self.rank(), other.rank());
        let mut gram = vec![vec![self.ring.zero(); n + m]; n + m];
        for i in 0..n {
            gram[i][..n].clone_from_slice(&self.gram[i]);
        }
        for i in 0..m {
            gram[n + i][n..].clone_from_slice(&other.gram[i]);
        }
        Ok(QuadraticSpace { ring: self.ring.clone(), gram })
    }

    /// Tensor product; the Kronecker product of polar matrices is halved so
    /// that `<a> (x) <b> = <ab>`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let r = &self.ring;
        let half = r.half();
        let gram = linalg::kron(r, &self.gram, &other.gram)
            .into_iter()
            .map(|row| row.iter().map(|x| r.mul(x, &half)).collect())
            .collect();
        Ok(QuadraticSpace { ring: r.clone(), gram })
    }

    /// `c q` for a unit `c`.
    pub fn scaled(&self, c: &Elem) -> Result<Self> {
        if !self.ring.is_unit(c) {
            return Err(Error::NotUnit);
        }
        let r = &self.ring;
        let gram = self
            .gram
            .iter()
            .map(|row| row.iter().map(|x| r.mul(x, c)).collect())
            .collect();
        Ok(QuadraticSpace { ring: r.clone(), gram })
    }

    pub fn negate(&self) -> Self {
        let r = &self.ring;
        let gram = self
            .gram
            .iter()
            .map(|row| row.iter().map(|x| r.neg(x)).collect())
            .collect();
        QuadraticSpace { ring: r.clone(), gram }
    }

    /// The restriction of the form to the span of `generators`, provided their
    /// Gram determinant is a unit.
    pub fn subspace(&self, generators: &[Vector]) -> Result<(SubspaceWitness, QuadraticSpace)> {
        for g in generators {
            self.check_vec(g)?;
        }
        let gram = self.gram_of(generators);
        let det = linalg::det(&self.ring, &gram);
        if !self.ring.is_unit(&det) {
            return Err(Error::GramNotUnit { det });
        }
        Ok((
            SubspaceWitness { generators: generators.to_vec(), gram_det: det },
            QuadraticSpace { ring: self.ring.clone(), gram },
        ))
    }

    pub fn base_change(&self, hom: &RingHom) -> Result<Self> {
        if hom.source() != &self.ring {
            return Err(Error::RingMismatch);
        }
        let gram = self
            .gram
            .iter()
            .map(|row| row.iter().map(|x| hom.apply(x)).collect())
            .collect();
        Ok(QuadraticSpace { ring: hom.target().clone(), gram })
    }

    pub fn map_vector(hom: &RingHom, v: &[Elem]) -> Vector {
        v.iter().map(|x| hom.apply(x)).collect()
    }

    /// One space per residue field, with its projection.
    pub fn residue_spaces(&self) -> Vec<(QuadraticSpace, RingHom)> {
        (0..self.ring.residue_count())
            .map(|i| {
                let h = RingHom::residue(&self.ring, i);
                (self.base_change(&h).expect("residue map has this source"), h)
            })
            .collect()
    }

    /// Image of `v` in the `i`-th residue space.
    pub fn residue_vector(&self, i: usize, v: &[Elem]) -> Vector {
        v.iter().map(|x| self.ring.project(i, x)).collect()
    }

    /// True iff every residue image of `v` is nonzero.
    pub fn is_unimodular(&self, v: &[Elem]) -> bool {
        v.len() == self.rank()
            && (0..self.ring.residue_count())
                .all(|i| v.iter().any(|x| !self.ring.project(i, x).is_zero()))
    }

    pub fn is_isotropic_vector(&self, v: &[Elem]) -> bool {
        self.is_unimodular(v) && self.q_unchecked(v).is_zero()
    }

    /// A basis of the orthogonal complement of the span of `generators`,
    /// whose Gram matrix must be a unit.
    ///
    /// The generators are completed to a basis by standard vectors chosen in
    /// each residue field and lifted; the extra vectors are then projected
    /// away from the span using the inverse Gram matrix.
    pub fn orthogonal_complement(&self, generators: &[Vector]) -> Result<Vec<Vector>> {
        let (_, sub) = self.subspace(generators)?;
        let r = &self.ring;
        let inv = linalg::inverse(r, sub.gram()).ok_or(Error::DegenerateForm)?;
        let extra = complete_basis(r, generators, self.rank());
        Ok(extra
            .into_iter()
            .map(|c| {
                let pairing: Vec<Elem> =
                    generators.iter().map(|w| self.b_unchecked(w, &c)).collect();
                let coeffs = linalg::mat_vec(r, &inv, &pairing);
                let mut out = c;
                for (w, a) in generators.iter().zip(&coeffs) {
                    for (o, x) in out.iter_mut().zip(w) {
                        *o = r.sub(o, &r.mul(a, x));
                    }
                }
                out
            })
            .collect())
    }

    /// The space obtained by restricting to a basis of a free summand, e.g. an
    /// orthogonal complement.
    pub fn restrict(&self, basis: &[Vector]) -> Result<QuadraticSpace> {
        self.subspace(basis).map(|(_, s)| s)
    }

    pub fn to_file(&self) -> SpaceFile {
        SpaceFile {
            ring: self.ring.descriptor(),
            gram: self
                .gram
                .iter()
                .map(|row| row.iter().map(|x| self.ring.encode(x)).collect())
                .collect(),
        }
    }

    pub fn from_file(file: &SpaceFile) -> Result<Self> {
        let ring = Ring::from_descriptor(&file.ring)?;
        let gram = file
            .gram
            .iter()
            .map(|row| row.iter().map(|x| ring.decode(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        QuadraticSpace::new(&ring, gram)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpaceFile = serde_json::from_str(text)
            .map_err(|e| Error::MalformedElement(format!("form file: {e}")))?;
        Self::from_file(&file)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self.to_file()).expect("space files serialize")
    }
}

/// Vectors `c_1..c_{n-k}` such that `generators` followed by them is a basis
/// of `R^n`. The generators must span a free direct summand.
pub fn complete_basis(r: &Ring, generators: &[Vector], n: usize) -> Vec<Vector> {
    let k = generators.len();
    // indices of standard vectors completing each residue image
    let picks: Vec<Vec<usize>> = (0..r.residue_count())
        .map(|i| {
            let field = r.residue_field(i);
            let mut echelon: Vec<(usize, Vector)> = Vec::new();
            for g in generators {
                let reduced: Vector = g.iter().map(|x| r.project(i, x)).collect();
                let ok = echelon_insert(&field, &mut echelon, reduced);
                debug_assert!(ok, "generators independent modulo the radical");
            }
            let mut picked = Vec::with_capacity(n - k);
            for l in 0..n {
                if picked.len() == n - k {
                    break;
                }
                let mut e = vec![field.zero(); n];
                e[l] = field.one();
                if echelon_insert(&field, &mut echelon, e) {
                    picked.push(l);
                }
            }
            picked
        })
        .collect();
    (0..n - k)
        .map(|j| {
            (0..n)
                .map(|l| {
                    let targets: Vec<Elem> = picks
                        .iter()
                        .enumerate()
                        .map(|(i, p)| {
                            let field = r.residue_field(i);
                            if p[j] == l {
                                field.one()
                            } else {
                                field.zero()
                            }
                        })
                        .collect();
                    r.lift_residues(&targets)
                })
                .collect()
        })
        .collect()
}

/// Reduces `v` against an echelon list over a field and appends it when it
/// stays nonzero. Returns whether it was independent.
fn echelon_insert(k: &Ring, echelon: &mut Vec<(usize, Vector)>, mut v: Vector) -> bool {
    for (pivot, row) in echelon.iter() {
        if v[*pivot].is_zero() {
            continue;
        }
        let c = v[*pivot].clone();
        for (x, y) in v.iter_mut().zip(row) {
            *x = k.sub(x, &k.mul(&c, y));
        }
    }
    let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    let inv = k.invert(&v[pivot]).expect("nonzero in a field");
    let v: Vector = v.iter().map(|x| k.mul(x, &inv)).collect();
    // keep earlier rows reduced at the new pivot
    for (_, row) in echelon.iter_mut() {
        if !row[pivot].is_zero() {
            let c = row[pivot].clone();
            for (x, y) in row.iter_mut().zip(&v) {
                *x = k.sub(x, &k.mul(&c, y));
            }
        }
    }
    echelon.push((pivot, v));
    true
}
