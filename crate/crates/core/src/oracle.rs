//! Exhaustive ground truth for small instances.
//!
//! Everything here is brute force over a deterministic enumeration order:
//! ring elements in slot order, vectors lexicographic with the last
//! coordinate varying fastest.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::quadspace::{QuadraticSpace, Vector};
use crate::rings::{Elem, Ring};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub instance: Value,
    pub property: String,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<u128>,
}

/// How an isotropy verdict was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMode {
    /// Every vector of `R^n`.
    Full,
    /// Every projective point of every residue space.
    Residue,
}

fn power(base: u128, exp: usize) -> Option<u128> {
    u32::try_from(exp).ok().and_then(|e| base.checked_pow(e))
}

fn check_cap(size: Option<u128>, cap: u128) -> Result<u128> {
    match size {
        Some(s) if s <= cap => Ok(s),
        Some(s) => Err(Error::CapExceeded { size: s, cap }),
        None => Err(Error::CapExceeded { size: u128::MAX, cap }),
    }
}

/// All vectors of `R^rank`, lexicographic.
pub fn all_vectors(r: &Ring, rank: usize, cap: u128) -> Result<Vec<Vector>> {
    check_cap(r.cardinality().and_then(|c| power(c, rank)), cap)?;
    let elems: Vec<Elem> = r.elements(cap)?.collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; rank];
    loop {
        out.push(idx.iter().map(|&i| elems[i].clone()).collect());
        let mut pos = rank;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < elems.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// First unimodular `v` with `q(v) = 0`, or `None` if the space is anisotropic.
pub fn isotropy_oracle(space: &QuadraticSpace, cap: u128) -> Result<Option<Vector>> {
    Ok(all_vectors(space.ring(), space.rank(), cap)?
        .into_iter()
        .find(|v| space.is_unimodular(v) && space.q_unchecked(v).is_zero()))
}

/// Number of nonzero vectors with `q(v) = 0`.
pub fn isotropic_count(space: &QuadraticSpace, cap: u128) -> Result<u128> {
    Ok(all_vectors(space.ring(), space.rank(), cap)?
        .iter()
        .filter(|v| v.iter().any(|x| !x.is_zero()) && space.q_unchecked(v).is_zero())
        .count() as u128)
}

/// Whether a space over a field has a nonzero isotropic vector, by running
/// over projective points (first nonzero coordinate equal to 1). The search
/// stops at the first witness; the cap only fails a search that visits more
/// than `cap` points without one.
fn field_isotropic(space: &QuadraticSpace, cap: u128) -> Result<bool> {
    let k = space.ring();
    let n = space.rank();
    let points = k.cardinality().and_then(|c| power(c, n).map(|m| (m - 1) / (c - 1)));
    let elems: Vec<Elem> = k.elements(cap)?.collect();
    let mut visited: u128 = 0;
    for lead in 0..n {
        let tail = n - lead - 1;
        let mut idx = vec![0usize; tail];
        loop {
            let mut v = vec![k.zero(); n];
            v[lead] = k.one();
            for (j, &i) in idx.iter().enumerate() {
                v[lead + 1 + j] = elems[i].clone();
            }
            if space.q_unchecked(&v).is_zero() {
                return Ok(true);
            }
            visited += 1;
            if visited > cap {
                check_cap(points, cap)?;
            }
            let mut pos = tail;
            let mut done = true;
            while pos > 0 {
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < elems.len() {
                    done = false;
                    break;
                }
                idx[pos] = 0;
            }
            if done {
                break;
            }
        }
    }
    Ok(false)
}

/// Isotropy decided on the residue spaces: the space is isotropic iff every
/// residue space has a nonzero isotropic vector.
pub fn residue_isotropy_oracle(space: &QuadraticSpace, cap: u128) -> Result<bool> {
    for (res, _) in space.residue_spaces() {
        if !field_isotropic(&res, cap)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Full enumeration when `|R|^rank <= cap`, otherwise the residue oracle.
pub fn decide_isotropy(space: &QuadraticSpace, cap: u128) -> Result<(bool, OracleMode)> {
    let full = space.ring().cardinality().and_then(|c| power(c, space.rank()));
    if full.is_some_and(|s| s <= cap) {
        Ok((isotropy_oracle(space, cap)?.is_some(), OracleMode::Full))
    } else {
        Ok((residue_isotropy_oracle(space, cap)?, OracleMode::Residue))
    }
}

/// Largest `m` such that `m` mutually orthogonal hyperbolic pairs exist.
pub fn witt_index_oracle(space: &QuadraticSpace, cap: u128) -> Result<usize> {
    let all = all_vectors(space.ring(), space.rank(), cap)?;
    let iso: Vec<&Vector> = all
        .iter()
        .filter(|v| space.is_unimodular(v) && space.q_unchecked(v).is_zero())
        .collect();
    let nulls: Vec<&Vector> = all.iter().filter(|v| space.q_unchecked(v).is_zero()).collect();
    let r = space.ring();
    let max = space.rank() / 2;

    fn search(
        space: &QuadraticSpace,
        r: &Ring,
        iso: &[&Vector],
        nulls: &[&Vector],
        chosen: &mut Vec<Vector>,
        max: usize,
    ) -> usize {
        let mut best = chosen.len() / 2;
        if best == max {
            return best;
        }
        let orth = |v: &Vector, chosen: &[Vector]| {
            chosen.iter().all(|c| space.b_unchecked(v, c).is_zero())
        };
        for e in iso {
            if !orth(e, chosen) {
                continue;
            }
            let Some(f) = nulls
                .iter()
                .find(|f| orth(f, chosen) && r.is_one(&space.b_unchecked(e, f)))
            else {
                continue;
            };
            chosen.push((*e).clone());
            chosen.push((*f).clone());
            best = best.max(search(space, r, iso, nulls, chosen, max));
            chosen.truncate(chosen.len() - 2);
            if best == max {
                break;
            }
        }
        best
    }

    Ok(search(space, r, &iso, &nulls, &mut Vec::new(), max))
}

/// Images `m_0..m_{n-1}` of the basis of `a` in `b` with
/// `b(m_i, m_j) = gram_a[i][j]`, found by backtracking over columns.
pub fn isometry_oracle(
    a: &QuadraticSpace,
    b: &QuadraticSpace,
    cap: u128,
) -> Result<Option<Vec<Vector>>> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch);
    }
    if a.rank() != b.rank() {
        return Ok(None);
    }
    let r = a.ring();
    let n = a.rank();
    if a.gram() == b.gram() {
        return Ok(Some(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { r.one() } else { r.zero() }).collect())
                .collect(),
        ));
    }
    let all = all_vectors(r, n, cap)?;
    let norms: Vec<Elem> = all.iter().map(|v| b.b_unchecked(v, v)).collect();

    fn extend(
        a: &QuadraticSpace,
        b: &QuadraticSpace,
        all: &[Vector],
        norms: &[Elem],
        images: &mut Vec<Vector>,
    ) -> bool {
        let i = images.len();
        if i == a.rank() {
            return true;
        }
        let g = a.gram();
        for (v, norm) in all.iter().zip(norms) {
            if norm != &g[i][i] {
                continue;
            }
            if images
                .iter()
                .enumerate()
                .all(|(j, m)| b.b_unchecked(m, v) == g[j][i])
            {
                images.push(v.clone());
                if extend(a, b, all, norms, images) {
                    return true;
                }
                images.pop();
            }
        }
        false
    }

    let mut images = Vec::new();
    Ok(extend(a, b, &all, &norms, &mut images).then_some(images))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::DEFAULT_CAP;

    #[test]
    fn isotropy_examples() {
        let f3 = Ring::prime_field(3).unwrap();
        let f5 = Ring::prime_field(5).unwrap();
        let h = QuadraticSpace::hyperbolic(&f3, 1);
        assert!(isotropy_oracle(&h, DEFAULT_CAP).unwrap().is_some());
        assert_eq!(isotropic_count(&h, DEFAULT_CAP).unwrap(), 4);
        let d5 = QuadraticSpace::diagonal_ints(&f5, &[1, 1]).unwrap();
        assert!(isotropy_oracle(&d5, DEFAULT_CAP).unwrap().is_some());
        assert_eq!(isotropic_count(&d5, DEFAULT_CAP).unwrap(), 8);
        let d3 = QuadraticSpace::diagonal_ints(&f3, &[1, 1]).unwrap();
        assert_eq!(isotropy_oracle(&d3, DEFAULT_CAP).unwrap(), None);
        assert!(!residue_isotropy_oracle(&d3, DEFAULT_CAP).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let f5 = Ring::prime_field(5).unwrap();
        let d = QuadraticSpace::diagonal_ints(&f5, &[1, 1, 1]).unwrap();
        assert_eq!(
            isotropy_oracle(&d, 100).unwrap_err(),
            Error::CapExceeded { size: 125, cap: 100 }
        );
    }

    #[test]
    fn residue_oracle_matches_full_enumeration() {
        let rings = [
            Ring::zmod(3, 2).unwrap(),
            Ring::product(vec![Ring::prime_field(3).unwrap(), Ring::prime_field(5).unwrap()])
                .unwrap(),
        ];
        for r in &rings {
            let units = r.units(DEFAULT_CAP).unwrap();
            for a in &units {
                for b in &units {
                    let s = QuadraticSpace::diagonal(r, &[a.clone(), b.clone()]).unwrap();
                    assert_eq!(
                        isotropy_oracle(&s, DEFAULT_CAP).unwrap().is_some(),
                        residue_isotropy_oracle(&s, DEFAULT_CAP).unwrap(),
                        "{r}"
                    );
                }
            }
        }
    }

    #[test]
    fn witt_index_examples() {
        let f3 = Ring::prime_field(3).unwrap();
        assert_eq!(witt_index_oracle(&QuadraticSpace::hyperbolic(&f3, 2), DEFAULT_CAP).unwrap(), 2);
        let d = QuadraticSpace::diagonal_ints(&f3, &[1, 1, 1]).unwrap();
        assert_eq!(witt_index_oracle(&d, DEFAULT_CAP).unwrap(), 1);
        let one = QuadraticSpace::diagonal_ints(&f3, &[1]).unwrap();
        assert_eq!(witt_index_oracle(&one, DEFAULT_CAP).unwrap(), 0);
    }

    #[test]
    fn isometry_examples() {
        let f5 = Ring::prime_field(5).unwrap();
        let one = QuadraticSpace::diagonal_ints(&f5, &[1]).unwrap();
        let four = QuadraticSpace::diagonal_ints(&f5, &[4]).unwrap();
        let two = QuadraticSpace::diagonal_ints(&f5, &[2]).unwrap();
        assert_eq!(
            isometry_oracle(&one, &one, DEFAULT_CAP).unwrap(),
            Some(vec![vec![f5.one()]])
        );
        let m = isometry_oracle(&four, &one, DEFAULT_CAP).unwrap().unwrap();
        assert_eq!(one.q(&m[0]).unwrap(), f5.from_int(4));
        assert_eq!(isometry_oracle(&one, &two, DEFAULT_CAP).unwrap(), None);
    }
}
