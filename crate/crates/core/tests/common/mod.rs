#![allow(dead_code)]

use quadforms::rings::{Elem, Poly, Ring};
use quadforms::{QuadraticSpace, Vector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn f(p: u64) -> Ring {
    Ring::prime_field(p).unwrap()
}

pub fn zmod(p: u64, e: u32) -> Ring {
    Ring::zmod(p, e).unwrap()
}

/// F_9 as F_3[t]/(t^2 + 1).
pub fn f9() -> Ring {
    Ring::galois(3, 1, &[1, 0, 1]).unwrap()
}

pub fn product(parts: &[Ring]) -> Ring {
    Ring::product(parts.to_vec()).unwrap()
}

/// Small rings used by the property tests, all of size at most 125.
pub fn small_rings() -> Vec<Ring> {
    vec![
        f(3),
        f(5),
        f(7),
        f9(),
        zmod(3, 2),
        zmod(3, 3),
        zmod(5, 2),
        product(&[f(3), f(5)]),
        product(&[zmod(3, 2), f(3)]),
    ]
}

pub fn ints(r: &Ring, xs: &[i64]) -> Vector {
    xs.iter().map(|&x| r.from_int(x)).collect()
}

pub fn random_vector(r: &Ring, n: usize, g: &mut ChaCha8Rng) -> Vector {
    (0..n).map(|_| r.random_element(g)).collect()
}

pub fn random_diagonal(r: &Ring, n: usize, g: &mut ChaCha8Rng) -> QuadraticSpace {
    let d: Vec<Elem> = (0..n).map(|_| r.random_unit(g)).collect();
    QuadraticSpace::diagonal(r, &d).unwrap()
}

/// A non-degenerate form with a random unimodular change of basis applied
/// to a random diagonal form.
pub fn random_space(r: &Ring, n: usize, g: &mut ChaCha8Rng) -> QuadraticSpace {
    let d = random_diagonal(r, n, g);
    loop {
        let basis: Vec<Vector> = (0..n).map(|_| random_vector(r, n, g)).collect();
        if let Ok((_, s)) = d.subspace(&basis) {
            return s;
        }
    }
}

/// Random monic polynomial of degree `n` with unit discriminant.
pub fn random_separable(r: &Ring, n: usize, g: &mut ChaCha8Rng) -> Poly {
    loop {
        let mut c: Vec<Elem> = (0..n).map(|_| r.random_element(g)).collect();
        c.push(r.one());
        let p = Poly::new(c);
        if quadforms::rings::poly::is_separable(r, &p).unwrap_or(false) {
            return p;
        }
    }
}
