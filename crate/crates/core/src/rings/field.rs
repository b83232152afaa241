//! Algorithms that need the coefficient ring to be a finite field: gcds,
//! factorization, square roots and the search for irreducible polynomials.

use super::poly::{self, Poly};
use super::{Elem, Ring};
use crate::error::{Error, Result};

fn field_size(k: &Ring) -> u128 {
    debug_assert!(k.is_field());
    k.cardinality().expect("field size fits in u128")
}

/// Monic gcd over a field.
pub fn gcd(k: &Ring, a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = poly::rem(k, &a, &b);
        a = b;
        b = r;
    }
    a.to_monic(k).unwrap_or_default()
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inverse_mod(k: &Ring, a: &Poly, m: &Poly) -> Option<Poly> {
    // extended Euclid tracking the coefficient of a
    let (mut r0, mut r1) = (m.clone(), poly::rem(k, a, m));
    let (mut s0, mut s1) = (Poly::zero(), Poly::constant(k, k.one()));
    while !r1.is_zero() {
        let (q, r) = poly::divmod(k, &r0, &r1).ok()?;
        r0 = r1;
        r1 = r;
        let s = poly::sub(k, &s0, &poly::mul(k, &q, &s1));
        s0 = s1;
        s1 = s;
    }
    if r0.degree() != Some(0) {
        return None;
    }
    let c = k.invert(r0.leading().unwrap())?;
    Some(poly::rem(k, &poly::scale(k, &s0, &c), m))
}

/// `base^exp mod m`.
pub fn pow_mod(k: &Ring, base: &Poly, mut exp: u128, m: &Poly) -> Poly {
    let mut result = poly::rem(k, &Poly::constant(k, k.one()), m);
    let mut b = poly::rem(k, base, m);
    while exp > 0 {
        if exp & 1 == 1 {
            result = poly::rem(k, &poly::mul(k, &result, &b), m);
        }
        exp >>= 1;
        if exp > 0 {
            b = poly::rem(k, &poly::mul(k, &b, &b), m);
        }
    }
    result
}

/// `t^{q^d} mod f` for `d = 1..=max_d`.
fn frobenius_powers(k: &Ring, f: &Poly, max_d: usize) -> Vec<Poly> {
    let q = field_size(k);
    let t = Poly::monomial(k, k.one(), 1);
    let mut out = Vec::with_capacity(max_d);
    let mut h = t;
    for _ in 0..max_d {
        h = pow_mod(k, &h, q, f);
        out.push(h.clone());
    }
    out
}

/// Rabin-style test: no irreducible factor of degree at most `deg/2`.
pub fn is_irreducible(k: &Ring, f: &Poly) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    let Some(f) = f.to_monic(k) else { return false };
    let t = Poly::monomial(k, k.one(), 1);
    frobenius_powers(k, &f, n / 2)
        .iter()
        .all(|h| gcd(k, &f, &poly::sub(k, h, &t)).degree() == Some(0))
}

/// Monic polynomials of degree `d` in enumeration order (constant term fastest).
fn monic_of_degree(k: &Ring, d: usize) -> impl Iterator<Item = Poly> + '_ {
    let elems: Vec<Elem> = k.elements_unbounded().collect();
    let q = elems.len();
    let mut idx = vec![0usize; d];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let mut coeffs: Vec<Elem> = idx.iter().map(|&i| elems[i].clone()).collect();
        coeffs.push(k.one());
        done = true;
        for i in idx.iter_mut() {
            *i += 1;
            if *i < q {
                done = false;
                break;
            }
            *i = 0;
        }
        Some(Poly::new(coeffs))
    })
}

/// Roots of `f` in `k` by exhaustive evaluation.
pub fn roots(k: &Ring, f: &Poly) -> Vec<Elem> {
    k.elements_unbounded()
        .filter(|x| poly::eval(k, f, x).is_zero())
        .collect()
}

/// Monic irreducible factors of `f` (with multiplicity), smallest degree first.
///
/// Distinct-degree gcds locate the degree of the smallest factor; the factor
/// itself is then found by trial division over monic polynomials of that
/// degree.
pub fn factor(k: &Ring, f: &Poly) -> Vec<Poly> {
    let mut f = match f.to_monic(k) {
        Some(f) => f,
        None => return Vec::new(),
    };
    let t = Poly::monomial(k, k.one(), 1);
    let mut out = Vec::new();
    'outer: while f.degree().is_some_and(|n| n > 0) {
        let n = f.degree().unwrap();
        for (i, h) in frobenius_powers(k, &f, n / 2).iter().enumerate() {
            let d = i + 1;
            let g = gcd(k, &f, &poly::sub(k, h, &t));
            if g.degree() == Some(0) {
                continue;
            }
            let factor = if g.degree() == Some(d) {
                g
            } else {
                monic_of_degree(k, d)
                    .find(|cand| poly::rem(k, &g, cand).is_zero())
                    .expect("a degree-d factor divides the distinct-degree part")
            };
            while let Ok((q, r)) = poly::divmod(k, &f, &factor) {
                if !r.is_zero() {
                    break;
                }
                out.push(factor.clone());
                f = q;
            }
            continue 'outer;
        }
        out.push(f);
        break;
    }
    out
}

pub fn is_square(k: &Ring, x: &Elem) -> bool {
    x.is_zero() || k.is_one(&k.pow(x, (field_size(k) - 1) / 2))
}

/// A square root in a finite field of odd characteristic (Tonelli-Shanks).
pub fn sqrt(k: &Ring, x: &Elem) -> Option<Elem> {
    if x.is_zero() {
        return Some(k.zero());
    }
    if !is_square(k, x) {
        return None;
    }
    let q = field_size(k);
    let mut s = 0;
    let mut odd = q - 1;
    while odd.is_multiple_of(2) {
        odd /= 2;
        s += 1;
    }
    let z = k
        .elements_unbounded()
        .find(|y| !is_square(k, y))
        .expect("finite fields of odd characteristic have nonsquares");
    let mut m = s;
    let mut c = k.pow(&z, odd);
    let mut t = k.pow(x, odd);
    let mut r = k.pow(x, odd.div_ceil(2));
    while !k.is_one(&t) {
        let mut i = 0;
        let mut t2 = t.clone();
        while !k.is_one(&t2) {
            t2 = k.mul(&t2, &t2);
            i += 1;
        }
        let mut b = c.clone();
        for _ in 0..m - i - 1 {
            b = k.mul(&b, &b);
        }
        m = i;
        c = k.mul(&b, &b);
        t = k.mul(&t, &c);
        r = k.mul(&r, &b);
    }
    Some(r)
}

/// A monic polynomial of the given degree over `r` whose image in every
/// residue field is irreducible (hence separable). The first irreducible
/// polynomial in enumeration order is taken in each residue field and the
/// coefficients are lifted through the residue map.
pub fn find_irreducible(r: &Ring, degree: usize, budget: usize) -> Result<Poly> {
    if degree == 0 {
        return Err(Error::Precondition("degree must be positive".into()));
    }
    let mut per_field = Vec::new();
    for k in r.residue_fields() {
        let g = monic_of_degree(&k, degree)
            .take(budget)
            .find(|p| is_irreducible(&k, p))
            .ok_or_else(|| {
                Error::BudgetExhausted(format!("no irreducible of degree {degree} over {k}"))
            })?;
        per_field.push((k, g));
    }
    let coeffs = (0..=degree)
        .map(|i| {
            let targets: Vec<Elem> = per_field.iter().map(|(k, g)| g.coeff(k, i)).collect();
            r.lift_residues(&targets)
        })
        .collect();
    Ok(Poly::new(coeffs))
}

/// Cubic with irreducible reduction in every residue field.
pub fn find_irreducible_cubic(r: &Ring) -> Result<Poly> {
    find_irreducible(r, 3, 1_000_000)
}
