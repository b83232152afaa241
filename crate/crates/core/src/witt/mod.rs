//! Reflections, isotropic vectors, diagonalization and Witt decomposition.
//!
//! Most searches happen in the residue spaces, where the ring is a finite
//! field, and the results are lifted back through the radical.

mod lift;
mod table;

pub use lift::{lift_prescribed, lift_prescribed_with_route, LiftRoute};
pub use table::{witt_ring_table, WittRingTable};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::oracle;
use crate::quadspace::{QuadraticSpace, Vector};
use crate::rings::field;
use crate::rings::{Elem, Ring};

/// Largest `|R|^rank` for which a decomposition kernel is certified by
/// exhaustive enumeration.
pub const CERTIFY_CAP: u128 = 20_000;

const NEWTON_STEPS: usize = 256;

/// `v - b(v, w) q(w)^{-1} w`.
pub fn reflect(space: &QuadraticSpace, w: &[Elem], v: &[Elem]) -> Result<Vector> {
    let r = space.ring();
    let qw = space.q(w)?;
    let inv = r.invert(&qw).ok_or(Error::NotUnit)?;
    let c = r.mul(&space.b(v, w)?, &inv);
    Ok(v.iter().zip(w).map(|(x, y)| r.sub(x, &r.mul(&c, y))).collect())
}

/// Coordinatewise lift of one residue vector per residue field.
pub(crate) fn lift_vector(r: &Ring, residue_vectors: &[Vector]) -> Vector {
    let n = residue_vectors.first().map_or(0, Vec::len);
    (0..n)
        .map(|l| {
            let targets: Vec<Elem> = residue_vectors.iter().map(|v| v[l].clone()).collect();
            r.lift_residues(&targets)
        })
        .collect()
}

/// `sum c_k basis_k`.
pub(crate) fn combine(r: &Ring, basis: &[Vector], coeffs: &[Elem]) -> Vector {
    let n = basis.first().map_or(0, Vec::len);
    let mut out = vec![r.zero(); n];
    for (b, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(b) {
            *o = r.add(o, &r.mul(c, x));
        }
    }
    out
}

fn standard(k: &Ring, n: usize, l: usize) -> Vector {
    (0..n).map(|j| if j == l { k.one() } else { k.zero() }).collect()
}

/// A `w` with `b(v, w) = 1`, for unimodular `v`.
pub fn dual_vector(space: &QuadraticSpace, v: &[Elem]) -> Result<Vector> {
    if !space.is_unimodular(v) {
        return Err(Error::NotUnimodular);
    }
    let r = space.ring();
    let n = space.rank();
    let pairing: Vector = (0..n)
        .map(|l| space.b_unchecked(v, &standard(r, n, l)))
        .collect();
    let residue_targets: Vec<Vector> = (0..r.residue_count())
        .map(|i| {
            let k = r.residue_field(i);
            let l = pairing
                .iter()
                .position(|x| !r.project(i, x).is_zero())
                .expect("non-degenerate pairing with a unimodular vector");
            let inv = k.invert(&r.project(i, &pairing[l])).expect("nonzero in a field");
            let mut t = vec![k.zero(); n];
            t[l] = inv;
            t
        })
        .collect();
    let w = lift_vector(r, &residue_targets);
    let c = r
        .invert(&space.b_unchecked(v, &w))
        .expect("pairing is a unit on every residue");
    Ok(w.iter().map(|x| r.mul(x, &c)).collect())
}

/// A vector whose value is a unit (exists whenever the rank is positive).
pub fn unit_value_vector(space: &QuadraticSpace) -> Option<Vector> {
    let n = space.rank();
    if n == 0 {
        return None;
    }
    let r = space.ring();
    let residue_vectors: Vec<Vector> = space
        .residue_spaces()
        .into_iter()
        .map(|(s, _)| {
            let k = s.ring().clone();
            let g = s.gram();
            if let Some(l) = (0..n).find(|&l| !g[l][l].is_zero()) {
                return standard(&k, n, l);
            }
            let (l, m) = (0..n)
                .flat_map(|l| (l + 1..n).map(move |m| (l, m)))
                .find(|&(l, m)| !g[l][m].is_zero())
                .expect("non-degenerate form has a nonzero entry");
            let mut v = standard(&k, n, l);
            v[m] = k.one();
            v
        })
        .collect();
    let v = lift_vector(r, &residue_vectors);
    debug_assert!(r.is_unit(&space.q_unchecked(&v)));
    Some(v)
}

/// A diagonal form together with the basis realizing it.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagonalization {
    pub entries: Vec<Elem>,
    /// `basis[i]` in original coordinates, with `q(basis[i]) = entries[i]`
    /// and `b(basis[i], basis[j]) = 0` for `i != j`.
    pub basis: Vec<Vector>,
}

/// Splits off unit-value vectors one at a time.
pub fn diagonalize(space: &QuadraticSpace) -> Diagonalization {
    let r = space.ring();
    let n = space.rank();
    let mut basis: Vec<Vector> = (0..n).map(|l| standard(r, n, l)).collect();
    let mut cur = space.clone();
    let mut out = Diagonalization { entries: Vec::new(), basis: Vec::new() };
    while let Some(v) = unit_value_vector(&cur) {
        out.entries.push(cur.q_unchecked(&v));
        out.basis.push(combine(r, &basis, &v));
        let comp = cur
            .orthogonal_complement(std::slice::from_ref(&v))
            .expect("unit value vector spans a non-degenerate line");
        basis = comp.iter().map(|c| combine(r, &basis, c)).collect();
        cur = cur.restrict(&comp).expect("complement is non-degenerate");
    }
    out
}

/// Nonzero isotropic vector of a space over a finite field.
fn field_isotropic_vector(space: &QuadraticSpace, rng: &mut ChaCha8Rng) -> Option<Vector> {
    let k = space.ring();
    let n = space.rank();
    if n < 2 {
        return None;
    }
    let d = diagonalize(space);
    let a = &d.entries;
    let coeffs: Vec<Elem> = if n == 2 {
        // a0 + a1 y^2 = 0
        let t = k.neg(&k.mul(&a[0], &k.invert(&a[1])?));
        let y = field::sqrt(k, &t)?;
        vec![k.one(), y]
    } else {
        // a0 x^2 + a1 y^2 + a2 = 0 always has a solution
        let inv1 = k.invert(&a[1]).expect("diagonal entries are units");
        let solve = |x: &Elem| {
            let t = k.mul(&k.neg(&k.add(&a[2], &k.mul(&a[0], &k.mul(x, x)))), &inv1);
            field::sqrt(k, &t).map(|y| (x.clone(), y))
        };
        let found = (0..64)
            .map(|_| k.random_element(rng))
            .find_map(|x| solve(&x))
            .or_else(|| k.elements_unbounded().find_map(|x| solve(&x)))
            .expect("ternary forms over finite fields are isotropic");
        let (x, mut y) = found;
        if rng.gen::<bool>() {
            y = k.neg(&y);
        }
        let mut c = vec![x, y, k.one()];
        c.resize(n, k.zero());
        c
    };
    let v = combine(k, &d.basis, &coeffs);
    let lambda = k.random_unit(rng);
    Some(v.iter().map(|x| k.mul(x, &lambda)).collect())
}

/// Turns a unimodular `v` with `q(v)` in the radical into an exact isotropic
/// vector with the same residues.
pub fn hensel_isotropic(space: &QuadraticSpace, v: &[Elem]) -> Result<Vector> {
    let r = space.ring();
    let w = dual_vector(space, v)?;
    let qv = space.q_unchecked(v);
    if !r.in_radical(&qv) {
        return Err(Error::Precondition("value is not in the radical".into()));
    }
    let qw = space.q_unchecked(&w);
    // q(v + xw) = q(v) + x + x^2 q(w)
    let mut x = r.zero();
    for _ in 0..NEWTON_STEPS {
        let next = r.neg(&r.add(&qv, &r.mul(&qw, &r.mul(&x, &x))));
        if next == x {
            break;
        }
        x = next;
    }
    let u: Vector = v.iter().zip(&w).map(|(a, b)| r.add(a, &r.mul(&x, b))).collect();
    debug_assert!(space.q_unchecked(&u).is_zero());
    Ok(u)
}

/// A unimodular isotropic vector, or `None` when the space is anisotropic.
///
/// Each residue space is searched over its diagonalization (complete over a
/// finite field); the residue vectors are lifted and corrected by Newton
/// iteration along a dual vector.
pub fn find_isotropic(space: &QuadraticSpace, rng: &mut ChaCha8Rng) -> Option<Vector> {
    if space.rank() < 2 {
        return None;
    }
    let mut residue_vectors = Vec::new();
    for (s, _) in space.residue_spaces() {
        residue_vectors.push(field_isotropic_vector(&s, rng)?);
    }
    let v = lift_vector(space.ring(), &residue_vectors);
    Some(hensel_isotropic(space, &v).expect("lifted residue vector is unimodular"))
}

/// `w` with `q(w) = 0` and `b(v, w) = 1`.
pub fn complete_hyperbolic_pair(space: &QuadraticSpace, v: &[Elem]) -> Result<(Vector, Vector)> {
    let r = space.ring();
    if !space.q(v)?.is_zero() {
        return Err(Error::NotIsotropic);
    }
    let w = dual_vector(space, v)?;
    let qw = space.q_unchecked(&w);
    let w: Vector = w.iter().zip(v).map(|(a, b)| r.sub(a, &r.mul(&qw, b))).collect();
    Ok((v.to_vec(), w))
}

/// How anisotropy of a decomposition kernel was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelCertificate {
    /// Exhaustive enumeration of the kernel.
    Oracle,
    /// The residue search came up empty; not independently re-checked.
    ResidueSearch,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WittDecomposition {
    pub index: usize,
    pub pairs: Vec<(Vector, Vector)>,
    /// Basis of the kernel in original coordinates.
    pub kernel_basis: Vec<Vector>,
    pub kernel: QuadraticSpace,
    pub certificate: KernelCertificate,
}

pub fn witt_decompose(space: &QuadraticSpace, rng: &mut ChaCha8Rng) -> WittDecomposition {
    witt_decompose_with_cap(space, rng, CERTIFY_CAP)
}

/// Splits off hyperbolic planes until the remainder is anisotropic.
pub fn witt_decompose_with_cap(
    space: &QuadraticSpace,
    rng: &mut ChaCha8Rng,
    cap: u128,
) -> WittDecomposition {
    let r = space.ring();
    let n = space.rank();
    let mut basis: Vec<Vector> = (0..n).map(|l| standard(r, n, l)).collect();
    let mut cur = space.clone();
    let mut pairs = Vec::new();
    let certificate = loop {
        let v = match find_isotropic(&cur, rng) {
            Some(v) => v,
            None => match oracle::isotropy_oracle(&cur, cap) {
                Ok(Some(v)) => v,
                Ok(None) => break KernelCertificate::Oracle,
                Err(_) => break KernelCertificate::ResidueSearch,
            },
        };
        let (e, f) = complete_hyperbolic_pair(&cur, &v).expect("isotropic unimodular vector");
        pairs.push((combine(r, &basis, &e), combine(r, &basis, &f)));
        let comp = cur
            .orthogonal_complement(&[e, f])
            .expect("hyperbolic plane is non-degenerate");
        basis = comp.iter().map(|c| combine(r, &basis, c)).collect();
        cur = cur.restrict(&comp).expect("complement is non-degenerate");
    };
    WittDecomposition {
        index: pairs.len(),
        pairs,
        kernel_basis: basis,
        kernel: cur,
        certificate,
    }
}

impl WittDecomposition {
    /// `{"index", "pairs", "kernel_basis", "kernel_gram", "certificate"}`.
    pub fn to_json(&self, r: &Ring) -> Value {
        json!({
            "index": self.index,
            "pairs": self.pairs.iter()
                .map(|(e, f)| json!([r.encode_vec(e), r.encode_vec(f)]))
                .collect::<Vec<_>>(),
            "kernel_basis": self.kernel_basis.iter().map(|v| r.encode_vec(v)).collect::<Vec<_>>(),
            "kernel_gram": self.kernel.gram().iter().map(|row| r.encode_vec(row)).collect::<Vec<_>>(),
            "certificate": self.certificate,
        })
    }
}

/// Re-checks a decomposition certificate using only `q` and `b`.
pub fn verify_witt_certificate(space: &QuadraticSpace, cert: &Value) -> Result<()> {
    let r = space.ring();
    let bad = |m: &str| Error::InvalidDatum(m.to_string());
    let index = cert["index"].as_u64().ok_or_else(|| bad("missing index"))? as usize;
    let pairs = cert["pairs"].as_array().ok_or_else(|| bad("missing pairs"))?;
    let kernel: Vec<Vector> = cert["kernel_basis"]
        .as_array()
        .ok_or_else(|| bad("missing kernel_basis"))?
        .iter()
        .map(|v| r.decode_vec(v))
        .collect::<Result<_>>()?;
    let kernel_gram: Vec<Vector> = cert["kernel_gram"]
        .as_array()
        .ok_or_else(|| bad("missing kernel_gram"))?
        .iter()
        .map(|v| r.decode_vec(v))
        .collect::<Result<_>>()?;
    if pairs.len() != index || 2 * index + kernel.len() != space.rank() {
        return Err(bad("rank count does not add up"));
    }
    let mut all: Vec<Vector> = Vec::new();
    for p in pairs {
        let e = r.decode_vec(&p[0])?;
        let f = r.decode_vec(&p[1])?;
        if !space.q(&e)?.is_zero() || !space.q(&f)?.is_zero() || !r.is_one(&space.b(&e, &f)?) {
            return Err(bad("not a hyperbolic pair"));
        }
        for w in &all {
            if !space.b(w, &e)?.is_zero() || !space.b(w, &f)?.is_zero() {
                return Err(bad("pairs are not orthogonal"));
            }
        }
        all.push(e);
        all.push(f);
    }
    for k in &kernel {
        for w in &all {
            if !space.b(w, k)?.is_zero() {
                return Err(bad("kernel is not orthogonal to the pairs"));
            }
        }
    }
    if space.gram_of(&kernel) != kernel_gram {
        return Err(bad("kernel gram does not match"));
    }
    all.extend(kernel);
    space.subspace(&all).map_err(|_| bad("vectors do not form a basis"))?;
    Ok(())
}

fn fixed_rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0)
}

pub fn witt_index(space: &QuadraticSpace) -> usize {
    witt_decompose(space, &mut fixed_rng()).index
}

/// `a` and `b` are Witt equivalent iff `a + (-b)` is hyperbolic.
pub fn witt_equivalent(a: &QuadraticSpace, b: &QuadraticSpace) -> Result<bool> {
    let sum = a.orth_sum(&b.negate())?;
    Ok(is_hyperbolic(&sum))
}

pub fn is_hyperbolic(space: &QuadraticSpace) -> bool {
    space.rank().is_multiple_of(2) && witt_index(space) * 2 == space.rank()
}

/// `<a, b, c, abc>` for a rank-3 space diagonalized as `<a, b, c>`.
pub fn pfister_associate(space: &QuadraticSpace) -> Result<QuadraticSpace> {
    if space.rank() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: space.rank() });
    }
    let r = space.ring();
    let mut e = diagonalize(space).entries;
    let abc = r.mul(&e[0], &r.mul(&e[1], &e[2]));
    e.push(abc);
    QuadraticSpace::diagonal(r, &e)
}
