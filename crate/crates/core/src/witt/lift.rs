use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{dual_vector, lift_vector, reflect, NEWTON_STEPS};
use crate::error::{Error, Result};
use crate::quadspace::{QuadraticSpace, Vector};
use crate::rings::Elem;

/// How a prescribed lift was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftRoute {
    /// Rank one: `u = c v` with `c^2 = 1`.
    Sign,
    /// Product of this many lifted reflections.
    Reflections(usize),
    /// Residue padding was impossible; targets lifted and corrected along a
    /// dual vector.
    Newton,
}

/// A vector `u` with `q(u) = q(v)` whose residues are the given targets.
///
/// Each residue target is reached from `v` by at most two reflections; the
/// residue chains are padded to a common length by reflections fixing the
/// relevant vector, and the reflection vectors are lifted to `R`.
pub fn lift_prescribed(space: &QuadraticSpace, v: &[Elem], targets: &[Vector]) -> Result<Vector> {
    lift_prescribed_with_route(space, v, targets).map(|(u, _)| u)
}

pub fn lift_prescribed_with_route(
    space: &QuadraticSpace,
    v: &[Elem],
    targets: &[Vector],
) -> Result<(Vector, LiftRoute)> {
    let r = space.ring();
    let n = space.rank();
    if !space.is_unimodular(v) {
        return Err(Error::NotUnimodular);
    }
    if targets.len() != r.residue_count() {
        return Err(Error::DimensionMismatch { expected: r.residue_count(), got: targets.len() });
    }
    let residues = space.residue_spaces();
    for (i, ((s, _), t)) in residues.iter().zip(targets).enumerate() {
        if t.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: t.len() });
        }
        let k = s.ring();
        for x in t {
            k.check(x)?;
        }
        if t.iter().all(Elem::is_zero) {
            return Err(Error::Precondition(format!("target {i} is zero")));
        }
        if s.q_unchecked(t) != s.q_unchecked(&space.residue_vector(i, v)) {
            return Err(Error::Precondition(format!("target {i} has a different value")));
        }
    }

    if n == 1 {
        let signs: Vec<Elem> = residues
            .iter()
            .zip(targets)
            .enumerate()
            .map(|(i, ((s, _), t))| {
                let k = s.ring();
                let c = k.mul(&t[0], &k.invert(&r.project(i, &v[0])).expect("unimodular"));
                if k.is_one(&k.mul(&c, &c)) {
                    Ok(c)
                } else {
                    Err(Error::Precondition("incompatible rank-one target".into()))
                }
            })
            .collect::<Result<_>>()?;
        // Newton for c^2 = 1 starting from a lift of the signs
        let mut c = r.lift_residues(&signs);
        for _ in 0..NEWTON_STEPS {
            if r.is_one(&r.mul(&c, &c)) {
                break;
            }
            let inv = r.invert(&c).expect("lift of a sign is a unit");
            c = r.mul(&r.half(), &r.add(&c, &inv));
        }
        return Ok((vec![r.mul(&c, &v[0])], LiftRoute::Sign));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x11f7);
    let mut plans = Vec::with_capacity(residues.len());
    for (i, ((s, _), t)) in residues.iter().zip(targets).enumerate() {
        let x = space.residue_vector(i, v);
        match reflection_chain(s, &x, t, &mut rng) {
            Some(chain) => plans.push((chain, x, t.clone())),
            None => return newton_lift(space, v, targets),
        }
    }
    let len = plans.iter().map(|(c, _, _)| c.len()).max().unwrap_or(0);
    let mut steps: Vec<Vec<Vector>> = Vec::with_capacity(plans.len());
    for ((s, _), (chain, x, y)) in residues.iter().zip(plans) {
        let missing = len - chain.len();
        if missing == 0 {
            steps.push(chain);
            continue;
        }
        // pad after the chain with reflections fixing y, or before it with
        // reflections fixing x
        if let Some(z) = orthogonal_anisotropic(s, &y) {
            let mut c = chain;
            c.extend(std::iter::repeat_n(z, missing));
            steps.push(c);
        } else if let Some(z) = orthogonal_anisotropic(s, &x) {
            let mut c: Vec<Vector> = std::iter::repeat_n(z, missing).collect();
            c.extend(chain);
            steps.push(c);
        } else {
            return newton_lift(space, v, targets);
        }
    }
    let mut u = v.to_vec();
    for step in 0..len {
        let per_residue: Vec<Vector> = steps.iter().map(|c| c[step].clone()).collect();
        let z = lift_vector(r, &per_residue);
        u = reflect(space, &z, &u).expect("lifted reflection vector has unit value");
    }
    debug_assert_eq!(space.q_unchecked(&u), space.q_unchecked(v));
    Ok((u, LiftRoute::Reflections(len)))
}

/// Reflection vectors over a field whose product sends `x` to `y`.
fn reflection_chain(
    s: &QuadraticSpace,
    x: &Vector,
    y: &Vector,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Vector>> {
    let k = s.ring();
    if x == y {
        return Some(Vec::new());
    }
    let diff: Vector = x.iter().zip(y).map(|(a, b)| k.sub(a, b)).collect();
    if !s.q_unchecked(&diff).is_zero() {
        return Some(vec![diff]);
    }
    let sum: Vector = x.iter().zip(y).map(|(a, b)| k.add(a, b)).collect();
    if !s.q_unchecked(&sum).is_zero() && !s.q_unchecked(y).is_zero() {
        return Some(vec![sum, y.clone()]);
    }
    // pass through an intermediate u = refl_z(x)
    for _ in 0..4096 {
        let z: Vector = (0..x.len()).map(|_| k.random_element(rng)).collect();
        if s.q_unchecked(&z).is_zero() {
            continue;
        }
        let u = reflect(s, &z, x).expect("anisotropic z");
        let d1: Vector = x.iter().zip(&u).map(|(a, b)| k.sub(a, b)).collect();
        let d2: Vector = u.iter().zip(y).map(|(a, b)| k.sub(a, b)).collect();
        if !s.q_unchecked(&d1).is_zero() && !s.q_unchecked(&d2).is_zero() {
            return Some(vec![d1, d2]);
        }
    }
    None
}

/// A vector `z` over a field with `b(y, z) = 0` and `q(z) != 0`.
fn orthogonal_anisotropic(s: &QuadraticSpace, y: &Vector) -> Option<Vector> {
    let k = s.ring();
    let n = s.rank();
    let g: Vector = (0..n)
        .map(|l| {
            let mut e = vec![k.zero(); n];
            e[l] = k.one();
            s.b_unchecked(y, &e)
        })
        .collect();
    let pivot = g.iter().position(|c| !c.is_zero())?;
    let inv = k.invert(&g[pivot]).expect("nonzero in a field");
    // basis of the kernel of z -> sum g_l z_l
    let basis: Vec<Vector> = (0..n)
        .filter(|&m| m != pivot)
        .map(|m| {
            let mut z = vec![k.zero(); n];
            z[m] = k.one();
            z[pivot] = k.neg(&k.mul(&g[m], &inv));
            z
        })
        .collect();
    if let Some(z) = basis.iter().find(|z| !s.q_unchecked(z).is_zero()) {
        return Some(z.clone());
    }
    for a in 0..basis.len() {
        for b in a + 1..basis.len() {
            let z: Vector = basis[a].iter().zip(&basis[b]).map(|(p, q)| k.add(p, q)).collect();
            if !s.q_unchecked(&z).is_zero() {
                return Some(z);
            }
        }
    }
    None
}

/// Lift the targets directly and solve `q(w + x z) = q(v)` with `b(w, z) = 1`;
/// the constant term lies in the radical so the iteration terminates.
fn newton_lift(
    space: &QuadraticSpace,
    v: &[Elem],
    targets: &[Vector],
) -> Result<(Vector, LiftRoute)> {
    let r = space.ring();
    let w = lift_vector(r, targets);
    let z = dual_vector(space, &w)?;
    let delta = r.sub(&space.q_unchecked(v), &space.q_unchecked(&w));
    let qz = space.q_unchecked(&z);
    let mut x = r.zero();
    for _ in 0..NEWTON_STEPS {
        let next = r.sub(&delta, &r.mul(&qz, &r.mul(&x, &x)));
        if next == x {
            break;
        }
        x = next;
    }
    let u: Vector = w.iter().zip(&z).map(|(a, b)| r.add(a, &r.mul(&x, b))).collect();
    debug_assert_eq!(space.q_unchecked(&u), space.q_unchecked(v));
    Ok((u, LiftRoute::Newton))
}
