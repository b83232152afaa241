use crate::error::{Error, Result};
use crate::quadspace::{QuadraticSpace, Vector};
use crate::rings::{build_etale_extension, Elem, Poly, Ring, RingHom};

/// `S = R[t]/(f)` with `f` monic separable, its generator `theta` and the
/// structural map `R -> S`.
#[derive(Clone, Debug)]
pub struct EtaleExtension {
    base: Ring,
    ext: Ring,
    modulus: Poly,
    theta: Elem,
    embedding: RingHom,
}

impl EtaleExtension {
    /// `f` only needs a unit leading coefficient; it is normalized to be monic.
    pub fn new(base: &Ring, f: &Poly) -> Result<Self> {
        let modulus = f.to_monic(base).ok_or(Error::NotMonic)?;
        if modulus.degree().unwrap_or(0) == 0 {
            return Err(Error::Precondition("extension degree must be positive".into()));
        }
        let (ext, embedding, theta) = build_etale_extension(base, &modulus)?;
        Ok(EtaleExtension { base: base.clone(), ext, modulus, theta, embedding })
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn ring(&self) -> &Ring {
        &self.ext
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn theta(&self) -> &Elem {
        &self.theta
    }

    pub fn embedding(&self) -> &RingHom {
        &self.embedding
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().expect("modulus is nonzero")
    }

    /// Coordinates of `x` in the basis `1, theta, ..., theta^{n-1}`.
    pub fn coordinates(&self, x: &Elem) -> Vec<Elem> {
        if self.degree() == 1 {
            return vec![self.ext.blocks(x)[0].clone()];
        }
        self.ext.blocks(x)
    }

    /// The functional `s` with `s(theta^{n-1}) = 1` and `s(theta^i) = 0`
    /// for smaller `i`.
    pub fn transfer(&self, x: &Elem) -> Elem {
        self.coordinates(x).pop().expect("positive degree")
    }

    pub fn embed(&self, x: &Elem) -> Elem {
        self.embedding.apply(x)
    }

    pub fn embed_vector(&self, v: &[Elem]) -> Vector {
        v.iter().map(|x| self.embed(x)).collect()
    }

    pub fn base_change(&self, space: &QuadraticSpace) -> Result<QuadraticSpace> {
        space.base_change(&self.embedding)
    }

    /// `sum theta^i v_i`; any number of vectors is allowed.
    pub fn combine(&self, vectors: &[Vector]) -> Vector {
        let s = &self.ext;
        let n = vectors.first().map_or(0, Vec::len);
        let mut out = vec![s.zero(); n];
        let mut power = s.one();
        for v in vectors {
            for (o, x) in out.iter_mut().zip(v) {
                *o = s.add(o, &s.mul(&power, &self.embed(x)));
            }
            power = s.mul(&power, &self.theta);
        }
        out
    }

    /// Inverse of [`combine`](Self::combine) on `n` vectors.
    pub fn split(&self, u: &[Elem]) -> Vec<Vector> {
        let coords: Vec<Vec<Elem>> = u.iter().map(|x| self.coordinates(x)).collect();
        (0..self.degree())
            .map(|i| coords.iter().map(|c| c[i].clone()).collect())
            .collect()
    }
}

/// The transfer of a space over `S` to `R`: basis `e_k theta^i`, form
/// `s(b_S(x, y))`.
pub fn transfer_space(ext: &EtaleExtension, space: &QuadraticSpace) -> Result<QuadraticSpace> {
    if space.ring() != ext.ring() {
        return Err(Error::RingMismatch);
    }
    let s = ext.ring();
    let n = ext.degree();
    let m = space.rank();
    let mut powers = vec![s.one()];
    for _ in 1..2 * n - 1 {
        let next = s.mul(powers.last().unwrap(), ext.theta());
        powers.push(next);
    }
    let g = space.gram();
    let mut gram = vec![vec![ext.base().zero(); m * n]; m * n];
    for k in 0..m {
        for l in 0..m {
            for i in 0..n {
                for j in 0..n {
                    gram[k * n + i][l * n + j] = ext.transfer(&s.mul(&powers[i + j], &g[k][l]));
                }
            }
        }
    }
    QuadraticSpace::new(ext.base(), gram)
}

/// The form `x -> s(x^2)` on `S`.
pub fn unit_transfer_form(ext: &EtaleExtension) -> Result<QuadraticSpace> {
    transfer_space(ext, &QuadraticSpace::diagonal(ext.ring(), &[ext.ring().one()])?)
}
