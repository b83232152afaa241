//! Dense univariate polynomials over a [`Ring`], lowest degree first.

use super::{linalg, Elem, Ring};
use crate::error::{Error, Result};

/// Coefficient list with trailing zeros trimmed; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly(Vec<Elem>);

impl Poly {
    pub fn new(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last().is_some_and(Elem::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(_r: &Ring, c: Elem) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c * t^k`.
    pub fn monomial(r: &Ring, c: Elem, k: usize) -> Self {
        let mut v = vec![r.zero(); k];
        v.push(c);
        Poly::new(v)
    }

    pub fn from_ints(r: &Ring, coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| r.from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.0
    }

    /// Number of stored coefficients (`degree + 1`, or 0 for zero).
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Elem> {
        self.0.last()
    }

    pub fn coeff_ref(&self, i: usize) -> &Elem {
        &self.0[i]
    }

    pub fn coeff(&self, r: &Ring, i: usize) -> Elem {
        self.0.get(i).cloned().unwrap_or_else(|| r.zero())
    }

    /// Leading coefficient is a unit.
    pub fn is_monic(&self, r: &Ring) -> bool {
        self.leading().is_some_and(|c| r.is_unit(c))
    }

    /// Scale so the leading coefficient is exactly 1.
    pub fn to_monic(&self, r: &Ring) -> Option<Poly> {
        let inv = r.invert(self.leading()?)?;
        Some(scale(r, self, &inv))
    }
}

pub fn add(r: &Ring, a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    Poly::new((0..n).map(|i| r.add(&a.coeff(r, i), &b.coeff(r, i))).collect())
}

pub fn sub(r: &Ring, a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    Poly::new((0..n).map(|i| r.sub(&a.coeff(r, i), &b.coeff(r, i))).collect())
}

pub fn neg(r: &Ring, a: &Poly) -> Poly {
    Poly::new(a.0.iter().map(|c| r.neg(c)).collect())
}

pub fn scale(r: &Ring, a: &Poly, c: &Elem) -> Poly {
    Poly::new(a.0.iter().map(|x| r.mul(x, c)).collect())
}

pub fn mul(r: &Ring, a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let mut out = vec![r.zero(); a.len() + b.len() - 1];
    for (i, x) in a.0.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.0.iter().enumerate() {
            out[i + j] = r.add(&out[i + j], &r.mul(x, y));
        }
    }
    Poly::new(out)
}

/// Horner evaluation at `x`.
pub fn eval(r: &Ring, p: &Poly, x: &Elem) -> Elem {
    p.0.iter()
        .rev()
        .fold(r.zero(), |acc, c| r.add(&r.mul(&acc, x), c))
}

pub fn derivative(r: &Ring, p: &Poly) -> Poly {
    Poly::new(
        p.0.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| r.mul(c, &r.from_int(i as i64)))
            .collect(),
    )
}

/// `a = q*b + r` with `deg r < deg b`; `b` must have a unit leading coefficient.
pub fn divmod(r: &Ring, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
    let db = b.degree().ok_or(Error::NotMonic)?;
    let inv = r.invert(b.leading().unwrap()).ok_or(Error::NotMonic)?;
    let mut rem = a.0.clone();
    if rem.len() <= db {
        return Ok((Poly::zero(), a.clone()));
    }
    let mut quot = vec![r.zero(); rem.len() - db];
    for k in (db..rem.len()).rev() {
        let c = r.mul(&rem[k], &inv);
        if c.is_zero() {
            continue;
        }
        for j in 0..=db {
            rem[k - db + j] = r.sub(&rem[k - db + j], &r.mul(&c, &b.0[j]));
        }
        quot[k - db] = c;
    }
    rem.truncate(db);
    Ok((Poly::new(quot), Poly::new(rem)))
}

/// Remainder modulo a polynomial with unit leading coefficient.
pub fn rem(r: &Ring, a: &Poly, b: &Poly) -> Poly {
    divmod(r, a, b).expect("divisor has a unit leading coefficient").1
}

/// Resultant of `a` and `b` taken with formal degrees `da >= deg a`,
/// `db >= deg b` (Sylvester determinant, division-free).
pub fn resultant_formal(r: &Ring, a: &Poly, da: usize, b: &Poly, db: usize) -> Elem {
    let size = da + db;
    let mut m = vec![vec![r.zero(); size]; size];
    // rows hold coefficients from the highest formal degree down
    for i in 0..db {
        for j in 0..=da {
            m[i][i + j] = a.coeff(r, da - j);
        }
    }
    for i in 0..da {
        for j in 0..=db {
            m[db + i][i + j] = b.coeff(r, db - j);
        }
    }
    linalg::det(r, &m)
}

pub fn resultant(r: &Ring, a: &Poly, b: &Poly) -> Elem {
    match (a.degree(), b.degree()) {
        (Some(da), Some(db)) => resultant_formal(r, a, da, b, db),
        _ => r.zero(),
    }
}

/// `(-1)^{n(n-1)/2} Res(f, f') / lc(f)` with `f'` taken at formal degree `n-1`.
pub fn discriminant(r: &Ring, f: &Poly) -> Result<Elem> {
    let n = f.degree().ok_or(Error::NotMonic)?;
    let lc_inv = r.invert(f.leading().unwrap()).ok_or(Error::NotMonic)?;
    if n == 0 {
        return Ok(r.one());
    }
    let res = resultant_formal(r, f, n, &derivative(r, f), n - 1);
    let d = r.mul(&res, &lc_inv);
    Ok(if (n * (n - 1) / 2) % 2 == 1 { r.neg(&d) } else { d })
}

/// Monic with unit discriminant.
pub fn is_separable(r: &Ring, f: &Poly) -> Result<bool> {
    Ok(r.is_unit(&discriminant(r, f)?))
}
