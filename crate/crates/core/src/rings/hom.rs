use std::fmt;
use std::sync::Arc;

use super::poly::{self, Poly};
use super::{Elem, Ring};
use crate::error::{Error, Result};

type MapFn = dyn Fn(&Elem) -> Elem + Send + Sync;

/// A ring homomorphism between two [`Ring`]s.
///
/// Homomorphisms out of a quotient `B[t]/(f)` are determined by a map on `B`
/// and the image of `t`; those images are kept in `generator_images`.
#[derive(Clone)]
pub struct RingHom {
    source: Ring,
    target: Ring,
    generator_images: Vec<Elem>,
    map: Arc<MapFn>,
}

impl fmt::Debug for RingHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingHom({} -> {})", self.source, self.target)
    }
}

impl RingHom {
    fn from_fn(
        source: Ring,
        target: Ring,
        generator_images: Vec<Elem>,
        map: impl Fn(&Elem) -> Elem + Send + Sync + 'static,
    ) -> Self {
        RingHom {
            source,
            target,
            generator_images,
            map: Arc::new(map),
        }
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn generator_images(&self) -> &[Elem] {
        &self.generator_images
    }

    pub fn apply(&self, x: &Elem) -> Elem {
        (self.map)(x)
    }

    pub fn apply_poly(&self, p: &Poly) -> Poly {
        Poly::new(p.coeffs().iter().map(|c| self.apply(c)).collect())
    }

    pub fn identity(r: &Ring) -> Self {
        RingHom::from_fn(r.clone(), r.clone(), Vec::new(), |x| x.clone())
    }

    /// Projection onto the `i`-th residue field.
    pub fn residue(r: &Ring, i: usize) -> Self {
        let rr = r.clone();
        RingHom::from_fn(r.clone(), r.residue_field(i), Vec::new(), move |x| rr.project(i, x))
    }

    /// Projection of a product onto its `i`-th factor.
    pub fn component(r: &Ring, i: usize) -> Result<Self> {
        let parts = r.product_parts().ok_or(Error::RingMismatch)?;
        let target = parts.get(i).ok_or(Error::RingMismatch)?.clone();
        let rr = r.clone();
        Ok(RingHom::from_fn(r.clone(), target, Vec::new(), move |x| {
            rr.components(x)[i].clone()
        }))
    }

    /// Reduction `Z/p^e[t]/(m) -> Z/p^e'[t]/(m)` for `e' <= e`, given the target.
    pub fn reduction(source: &Ring, target: &Ring) -> Result<Self> {
        let (p, e, m) = source.galois_parts().ok_or(Error::RingMismatch)?;
        let (p2, e2, m2) = target.galois_parts().ok_or(Error::RingMismatch)?;
        let pe2 = p2.pow(e2);
        let reduced: Vec<u64> = m.iter().map(|c| c % pe2).collect();
        if p != p2 || e2 > e || reduced != m2 {
            return Err(Error::RingMismatch);
        }
        Ok(RingHom::from_fn(source.clone(), target.clone(), Vec::new(), move |x| {
            Elem::from_slots(x.slots().iter().map(|c| c % pe2).collect())
        }))
    }

    /// The structural embedding `B -> B[t]/(f)`.
    pub fn embedding(quotient: &Ring) -> Result<Self> {
        let (base, _) = quotient.quotient_parts().ok_or(Error::RingMismatch)?;
        let q = quotient.clone();
        Ok(RingHom::from_fn(base.clone(), quotient.clone(), Vec::new(), move |x| {
            q.from_blocks(std::slice::from_ref(x))
        }))
    }

    /// Extend `base_hom: B -> T` to `B[t]/(f) -> T` sending `t` to `image`.
    /// Fails unless `f` maps to a polynomial vanishing at `image`.
    pub fn extend_to_quotient(base_hom: &RingHom, quotient: &Ring, image: Elem) -> Result<Self> {
        let (base, f) = quotient.quotient_parts().ok_or(Error::RingMismatch)?;
        if base != base_hom.source() {
            return Err(Error::RingMismatch);
        }
        let target = base_hom.target().clone();
        if !poly::eval(&target, &base_hom.apply_poly(f), &image).is_zero() {
            return Err(Error::Precondition("image of t is not a root of the modulus".into()));
        }
        let (q, bh, t, img) = (quotient.clone(), base_hom.clone(), target.clone(), image.clone());
        Ok(RingHom::from_fn(quotient.clone(), target, vec![image], move |x| {
            let coeffs = Poly::new(q.blocks(x).iter().map(|c| bh.apply(c)).collect());
            poly::eval(&t, &coeffs, &img)
        }))
    }

    /// `self` followed by `next`.
    pub fn compose(&self, next: &RingHom) -> Result<Self> {
        if self.target != next.source {
            return Err(Error::RingMismatch);
        }
        let (a, b) = (self.clone(), next.clone());
        let gens = self.generator_images.iter().map(|g| next.apply(g)).collect();
        Ok(RingHom::from_fn(
            self.source.clone(),
            next.target.clone(),
            gens,
            move |x| b.apply(&a.apply(x)),
        ))
    }
}
