use rand_chacha::ChaCha8Rng;

use super::EtaleExtension;
use crate::error::{Error, Result};
use crate::quadspace::{QuadraticSpace, SubspaceWitness, Vector};
use crate::rings::{Elem, Ring};
use crate::witt::{self, combine, find_isotropic};

/// Hyperbolic pairs `(e_i, f_i)` and a vector `w` with unit value `a`, all
/// mutually orthogonal.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperbolicFrame {
    pub pairs: Vec<(Vector, Vector)>,
    pub w: Vector,
    pub a: Elem,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsotropicSubspace {
    /// `v_0, ..., v_{n-1}` over the base ring.
    pub vectors: Vec<Vector>,
    pub witness: SubspaceWitness,
    pub subspace: QuadraticSpace,
    /// `sum theta^i v_i` over the extension.
    pub combination: Vector,
}

/// `s` hyperbolic pairs plus an orthogonal unit-value vector, taken from a
/// Witt decomposition. Needs rank at least `2s + 1`.
pub fn hyperbolic_frame(
    space: &QuadraticSpace,
    s: usize,
    rng: &mut ChaCha8Rng,
) -> Result<HyperbolicFrame> {
    if space.rank() < 2 * s + 1 {
        return Err(Error::Precondition(format!("rank {} is below {}", space.rank(), 2 * s + 1)));
    }
    let r = space.ring();
    let d = witt::witt_decompose(space, rng);
    if d.index < s {
        return Err(Error::Precondition(format!("Witt index {} is below {s}", d.index)));
    }
    let pairs: Vec<(Vector, Vector)> = d.pairs.into_iter().take(s).collect();
    let flat: Vec<Vector> = pairs.iter().flat_map(|(e, f)| [e.clone(), f.clone()]).collect();
    let comp = if flat.is_empty() {
        (0..space.rank())
            .map(|l| (0..space.rank()).map(|j| if j == l { r.one() } else { r.zero() }).collect())
            .collect()
    } else {
        space.orthogonal_complement(&flat)?
    };
    let rest = space.restrict(&comp)?;
    let w_local = witt::unit_value_vector(&rest).expect("complement has positive rank");
    let a = rest.q_unchecked(&w_local);
    Ok(HyperbolicFrame { pairs, w: combine(r, &comp, &w_local), a })
}

/// `count` units summing to `target`, drawn at random when possible.
fn units_with_sum(r: &Ring, count: usize, target: &Elem, rng: &mut ChaCha8Rng) -> Vec<Elem> {
    if count == 0 {
        return Vec::new();
    }
    for _ in 0..16 {
        let mut out: Vec<Elem> = (0..count - 1).map(|_| r.random_unit(rng)).collect();
        let last = r.sub(target, &r.sum(&out));
        if r.is_unit(&last) {
            out.push(last);
            return out;
        }
    }
    // c/2 + c/2 for a unit c, then (1, 1, -2) or pairs (1, -1)
    let mut out = Vec::with_capacity(count);
    let mut left = count;
    if !target.is_zero() {
        if count % 2 == 1 {
            out.push(target.clone());
            left -= 1;
        } else {
            let h = r.mul(target, &r.half());
            out.push(h.clone());
            out.push(h);
            left -= 2;
        }
    } else if count % 2 == 1 {
        out.extend([r.one(), r.one(), r.from_int(-2)]);
        left -= 3;
    }
    for k in 0..left {
        out.push(if k % 2 == 0 { r.one() } else { r.from_int(-1) });
    }
    out
}

/// Vectors `v_0..v_{n-1}` over `R` spanning a free non-degenerate rank-`n`
/// subspace whose combination `sum theta^i v_i` is isotropic over `S`.
///
/// Requires rank greater than `n`. For `n >= 2` this makes the base change
/// isotropic automatically (finite residue fields); for `n = 1` an isotropic
/// vector over `R` is required.
pub fn construct_isotropic_subspace(
    space: &QuadraticSpace,
    ext: &EtaleExtension,
    rng: &mut ChaCha8Rng,
) -> Result<IsotropicSubspace> {
    let n = ext.degree();
    if space.ring() != ext.base() {
        return Err(Error::RingMismatch);
    }
    if space.rank() <= n {
        return Err(Error::Precondition(format!(
            "rank {} must exceed the extension degree {n}",
            space.rank()
        )));
    }
    let r = space.ring();
    let vectors = if n == 1 {
        vec![find_isotropic(space, rng).ok_or(Error::Anisotropic)?]
    } else {
        let s = n / 2;
        let frame = hyperbolic_frame(space, s, rng)?;
        vectors_from_frame(r, ext, &frame, rng)
    };
    let (witness, subspace) = space.subspace(&vectors)?;
    let combination = ext.combine(&vectors);
    debug_assert!(ext
        .base_change(space)
        .map(|sp| sp.q_unchecked(&combination).is_zero())
        .unwrap_or(false));
    Ok(IsotropicSubspace { vectors, witness, subspace, combination })
}

/// The explicit choice of `v_i` from a frame.
pub fn vectors_from_frame(
    r: &Ring,
    ext: &EtaleExtension,
    frame: &HyperbolicFrame,
    rng: &mut ChaCha8Rng,
) -> Vec<Vector> {
    let n = ext.degree();
    let s = n / 2;
    let scale = |c: &Elem, v: &Vector| -> Vector { v.iter().map(|x| r.mul(c, x)).collect() };
    let add = |x: &Vector, y: &Vector| -> Vector { x.iter().zip(y).map(|(a, b)| r.add(a, b)).collect() };
    if n == 2 {
        // theta^2 = alpha + beta theta
        let f = ext.modulus();
        let alpha = r.neg(&f.coeff(r, 0));
        let beta = r.neg(&f.coeff(r, 1));
        let quarter = r.mul(&r.half(), &r.half());
        let c = r.mul(
            &r.neg(&r.add(&alpha, &r.mul(&quarter, &r.mul(&beta, &beta)))),
            &frame.a,
        );
        let (e1, f1) = &frame.pairs[0];
        let v0 = add(
            &add(&scale(&c, e1), f1),
            &scale(&r.neg(&r.mul(&beta, &r.half())), &frame.w),
        );
        return vec![v0, frame.w.clone()];
    }
    let target = if n.is_multiple_of(2) { r.zero() } else { r.neg(&frame.a) };
    let lambdas = units_with_sum(r, s, &target, rng);
    let mut out = Vec::with_capacity(n);
    for i in 0..s {
        out.push(scale(&lambdas[i], &frame.pairs[i].0));
    }
    if n % 2 == 1 {
        out.push(frame.w.clone());
    }
    for i in out.len()..n {
        out.push(frame.pairs[n - i - 1].1.clone());
    }
    out
}
