//! Dense matrices over a commutative [`Ring`] that may have zero divisors.

use super::{Elem, Ring};

pub type Matrix = Vec<Vec<Elem>>;

pub fn identity(r: &Ring, n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { r.one() } else { r.zero() }).collect())
        .collect()
}

pub fn transpose(m: &Matrix) -> Matrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mul(r: &Ring, a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(r.zero(), |acc, k| r.add(&acc, &r.mul(&row[k], &b[k][j])))
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(r: &Ring, a: &Matrix, v: &[Elem]) -> Vec<Elem> {
    a.iter()
        .map(|row| dot(r, row, v))
        .collect()
}

pub fn dot(r: &Ring, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter()
        .zip(b)
        .fold(r.zero(), |acc, (x, y)| r.add(&acc, &r.mul(x, y)))
}

pub fn kron(r: &Ring, a: &Matrix, b: &Matrix) -> Matrix {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![r.zero(); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = r.mul(&a[i][j], &b[k][l]);
                }
            }
        }
    }
    out
}

/// Coefficients `c_0 = 1, c_1, ..., c_n` of `det(xI - A) = sum c_k x^{n-k}`,
/// computed with Berkowitz's division-free recursion.
pub fn charpoly(r: &Ring, a: &Matrix) -> Vec<Elem> {
    let n = a.len();
    let mut coeffs = vec![r.one()];
    for k in 0..n {
        // grow from the leading k x k block by row/column k
        let col: Vec<Elem> = (0..k).map(|i| a[i][k].clone()).collect();
        let row: Vec<Elem> = (0..k).map(|j| a[k][j].clone()).collect();
        let mut toeplitz = vec![r.one(), r.neg(&a[k][k])];
        let mut v = col;
        for _ in 0..k {
            toeplitz.push(r.neg(&dot(r, &row, &v)));
            // v <- A_k v
            v = (0..k)
                .map(|i| (0..k).fold(r.zero(), |acc, j| r.add(&acc, &r.mul(&a[i][j], &v[j]))))
                .collect();
        }
        let next: Vec<Elem> = (0..k + 2)
            .map(|i| {
                (0..=i.min(k)).fold(r.zero(), |acc, j| {
                    r.add(&acc, &r.mul(&toeplitz[i - j], &coeffs[j]))
                })
            })
            .collect();
        coeffs = next;
    }
    coeffs
}

/// Determinant without divisions.
pub fn det(r: &Ring, a: &Matrix) -> Elem {
    let n = a.len();
    let c = charpoly(r, a);
    if n % 2 == 1 {
        r.neg(&c[n])
    } else {
        c[n].clone()
    }
}

/// Inverse by Gauss-Jordan elimination. When no single entry below the
/// diagonal is a unit, a residue-wise combination of the lower rows is added
/// to the pivot row so that the pivot becomes a unit.
pub fn inverse(r: &Ring, a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut m = a.clone();
    let mut inv = identity(r, n);
    for col in 0..n {
        if !r.is_unit(&m[col][col]) {
            let residues = r.residue_count();
            let mut choice = vec![None; residues];
            for (i, c) in choice.iter_mut().enumerate() {
                if r.project(i, &m[col][col]).is_zero() {
                    let row = (col + 1..n).find(|&row| !r.project(i, &m[row][col]).is_zero())?;
                    *c = Some(row);
                }
            }
            for row in col + 1..n {
                let targets: Vec<Elem> = choice
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let k = r.residue_field(i);
                        if *c == Some(row) {
                            k.one()
                        } else {
                            k.zero()
                        }
                    })
                    .collect();
                let mu = r.lift_residues(&targets);
                if mu.is_zero() {
                    continue;
                }
                for j in 0..n {
                    m[col][j] = r.add(&m[col][j], &r.mul(&mu, &m[row][j]));
                    inv[col][j] = r.add(&inv[col][j], &r.mul(&mu, &inv[row][j]));
                }
            }
        }
        let p = r.invert(&m[col][col])?;
        for j in 0..n {
            m[col][j] = r.mul(&m[col][j], &p);
            inv[col][j] = r.mul(&inv[col][j], &p);
        }
        for row in 0..n {
            if row == col || m[row][col].is_zero() {
                continue;
            }
            let f = m[row][col].clone();
            for j in 0..n {
                m[row][j] = r.sub(&m[row][j], &r.mul(&f, &m[col][j]));
                inv[row][j] = r.sub(&inv[row][j], &r.mul(&f, &inv[col][j]));
            }
        }
    }
    Some(inv)
}
