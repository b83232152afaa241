use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use super::EtaleExtension;
use crate::error::{Error, Result};
use crate::quadspace::{QuadraticSpace, Vector};
use crate::rings::poly::{self, Poly};
use crate::rings::Ring;
use crate::witt::{find_isotropic, reflect};

/// Default number of candidates tried per descent step.
pub const DEFAULT_BUDGET: usize = 512;

/// Vectors `v_i` over `R` whose combination is isotropic over `S`, together
/// with the value polynomial `P(t) = q(v_0 + t v_1 + ... + t^{n-1} v_{n-1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct DescentDatum {
    pub vectors: Vec<Vector>,
    pub value_poly: Poly,
    /// Number of candidates examined, including the accepted one.
    pub trials: usize,
}

/// `sum q(v_i) t^{2i} + sum_{i<j} b(v_i, v_j) t^{i+j}`.
pub fn value_polynomial(space: &QuadraticSpace, vectors: &[Vector]) -> Poly {
    let r = space.ring();
    let n = vectors.len();
    if n == 0 {
        return Poly::zero();
    }
    let mut coeffs = vec![r.zero(); 2 * n - 1];
    for i in 0..n {
        coeffs[2 * i] = r.add(&coeffs[2 * i], &space.q_unchecked(&vectors[i]));
        for j in i + 1..n {
            coeffs[i + j] = r.add(&coeffs[i + j], &space.b_unchecked(&vectors[i], &vectors[j]));
        }
    }
    Poly::new(coeffs)
}

fn acceptable(r: &Ring, p: &Poly, n: usize) -> bool {
    p.degree() == Some(2 * n - 2)
        && r.is_unit(p.leading().expect("nonzero"))
        && poly::is_separable(r, p).unwrap_or(false)
}

fn check_isotropic_unimodular(space_s: &QuadraticSpace, u: &[crate::rings::Elem]) -> Result<()> {
    if !space_s.q(u)?.is_zero() {
        return Err(Error::NotIsotropic);
    }
    if !space_s.is_unimodular(u) {
        return Err(Error::NotUnimodular);
    }
    Ok(())
}

/// Tries `u`, then random unit multiples of `u` and of reflections of `u`,
/// until the value polynomial has a unit leading coefficient, degree `2n - 2`
/// and unit discriminant. `Ok(None)` means the budget ran out.
pub fn search_descent_datum(
    space: &QuadraticSpace,
    ext: &EtaleExtension,
    u: &[crate::rings::Elem],
    rng: &mut ChaCha8Rng,
    budget: usize,
) -> Result<Option<DescentDatum>> {
    let n = ext.degree();
    let r = space.ring();
    let s = ext.ring();
    let space_s = ext.base_change(space)?;
    check_isotropic_unimodular(&space_s, u)?;
    for trial in 0..budget {
        let candidate: Vector = if trial == 0 {
            u.to_vec()
        } else {
            let base = if rng.gen::<bool>() {
                let z: Vector = (0..u.len()).map(|_| s.random_element(rng)).collect();
                reflect(&space_s, &z, u).unwrap_or_else(|_| u.to_vec())
            } else {
                u.to_vec()
            };
            let lambda = s.random_unit(rng);
            base.iter().map(|x| s.mul(&lambda, x)).collect()
        };
        let vectors = ext.split(&candidate);
        let p = value_polynomial(space, &vectors);
        if acceptable(r, &p, n) {
            return Ok(Some(DescentDatum { vectors, value_poly: p, trials: trial + 1 }));
        }
    }
    Ok(None)
}

/// Result of one descent step: `P = c f g` with `c` the leading unit of `P` and the isotropic vector `v(theta')`
/// over `S' = R[t]/(g)`.
#[derive(Clone, Debug)]
pub struct DescentStep {
    pub cofactor: Poly,
    pub next: EtaleExtension,
    pub vector: Vector,
}

pub fn descent_step(
    space: &QuadraticSpace,
    ext: &EtaleExtension,
    datum: &DescentDatum,
) -> Result<DescentStep> {
    let r = space.ring();
    let n = ext.degree();
    let (g, rem) = poly::divmod(r, &datum.value_poly, ext.modulus())?;
    if !rem.is_zero() {
        return Err(Error::InvalidDatum("value polynomial is not divisible by the modulus".into()));
    }
    if g.degree() != Some(n - 2) || !r.is_unit(g.leading().expect("nonzero")) {
        return Err(Error::InvalidDatum("cofactor is not monic of degree n - 2".into()));
    }
    let next = EtaleExtension::new(r, &g)
        .map_err(|e| Error::InvalidDatum(format!("cofactor does not define an extension: {e}")))?;
    let vector = next.combine(&datum.vectors);
    let space_next = next.base_change(space)?;
    if !space_next.is_unimodular(&vector) {
        return Err(Error::InvalidDatum("v(theta') is not unimodular".into()));
    }
    if !space_next.q_unchecked(&vector).is_zero() {
        return Err(Error::InvalidDatum("v(theta') is not isotropic".into()));
    }
    Ok(DescentStep { cofactor: next.modulus().clone(), next, vector })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub n: usize,
    pub f: Poly,
    pub g: Poly,
    pub vectors: Vec<Vector>,
}

/// The chain of factorizations produced by descent, ending in an isotropic
/// vector over the base ring.
#[derive(Clone, Debug, PartialEq)]
pub struct DescentTrace {
    pub steps: Vec<TraceStep>,
    pub vector: Vector,
    /// The search ran out and the final vector was found directly over `R`.
    pub fallback: bool,
}

impl DescentTrace {
    pub fn to_json(&self, r: &Ring) -> Value {
        let mut out: Vec<Value> = self
            .steps
            .iter()
            .map(|s| {
                json!({
                    "n": s.n,
                    "f": r.encode_poly(&s.f),
                    "g": r.encode_poly(&s.g),
                    "v": s.vectors.iter().map(|v| r.encode_vec(v)).collect::<Vec<_>>(),
                })
            })
            .collect();
        let mut last = Map::new();
        last.insert("vector".into(), r.encode_vec(&self.vector));
        if self.fallback {
            last.insert("fallback".into(), Value::Bool(true));
        }
        out.push(Value::Object(last));
        Value::Array(out)
    }

    pub fn from_json(r: &Ring, v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::InvalidDatum(m.to_string());
        let items = v.as_array().ok_or_else(|| bad("trace must be an array"))?;
        let (last, body) = items.split_last().ok_or_else(|| bad("trace is empty"))?;
        let steps = body
            .iter()
            .map(|s| {
                Ok(TraceStep {
                    n: s["n"].as_u64().ok_or_else(|| bad("step without n"))? as usize,
                    f: r.decode_poly(&s["f"])?,
                    g: r.decode_poly(&s["g"])?,
                    vectors: s["v"]
                        .as_array()
                        .ok_or_else(|| bad("step without v"))?
                        .iter()
                        .map(|x| r.decode_vec(x))
                        .collect::<Result<_>>()?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(DescentTrace {
            steps,
            vector: r.decode_vec(&last["vector"])?,
            fallback: last["fallback"].as_bool().unwrap_or(false),
        })
    }
}

/// Descends an isotropic vector over an odd-degree extension to one over
/// the base ring, recording every factorization.
pub fn springer_descend(
    space: &QuadraticSpace,
    ext: &EtaleExtension,
    u: &[crate::rings::Elem],
    rng: &mut ChaCha8Rng,
    budget: usize,
) -> Result<DescentTrace> {
    if ext.degree().is_multiple_of(2) {
        return Err(Error::Precondition("extension degree must be odd".into()));
    }
    if space.ring() != ext.base() {
        return Err(Error::RingMismatch);
    }
    check_isotropic_unimodular(&ext.base_change(space)?, u)?;
    let mut steps = Vec::new();
    let mut cur = ext.clone();
    let mut cur_u = u.to_vec();
    loop {
        let n = cur.degree();
        if n == 1 {
            let vector = cur.split(&cur_u).pop().expect("one coordinate vector");
            return Ok(DescentTrace { steps, vector, fallback: false });
        }
        let Some(datum) = search_descent_datum(space, &cur, &cur_u, rng, budget)? else {
            let vector = find_isotropic(space, rng).ok_or(Error::Anisotropic)?;
            return Ok(DescentTrace { steps, vector, fallback: true });
        };
        let step = descent_step(space, &cur, &datum)?;
        steps.push(TraceStep {
            n,
            f: cur.modulus().clone(),
            g: step.cofactor.clone(),
            vectors: datum.vectors,
        });
        cur = step.next;
        cur_u = step.vector;
    }
}

/// Re-checks a trace using only ring arithmetic: each value polynomial is
/// recomputed and compared with `f g`, the chain of moduli is followed, and
/// the final vector is checked against the last step.
pub fn verify_trace(space: &QuadraticSpace, modulus: &Poly, trace: &DescentTrace) -> Result<()> {
    let r = space.ring();
    let bad = |m: String| Error::InvalidDatum(m);
    let mut expected_f = modulus.to_monic(r).ok_or(Error::NotMonic)?;
    for (k, step) in trace.steps.iter().enumerate() {
        let n = step.n;
        if step.f != expected_f || step.f.degree() != Some(n) {
            return Err(bad(format!("step {k}: modulus does not continue the chain")));
        }
        if n % 2 == 0 || n < 3 {
            return Err(bad(format!("step {k}: degree {n} is not odd and at least 3")));
        }
        if !poly::is_separable(r, &step.f)? {
            return Err(bad(format!("step {k}: modulus is not separable")));
        }
        if step.vectors.len() != n || step.vectors.iter().any(|v| v.len() != space.rank()) {
            return Err(bad(format!("step {k}: wrong number or size of vectors")));
        }
        let p = value_polynomial(space, &step.vectors);
        if !acceptable(r, &p, n) {
            return Err(bad(format!("step {k}: value polynomial is not of degree 2n - 2 with unit discriminant")));
        }
        let lc = Poly::new(vec![p.leading().expect("nonzero").clone()]);
        if p != poly::mul(r, &lc, &poly::mul(r, &step.f, &step.g)) {
            return Err(bad(format!("step {k}: value polynomial is not c f g")));
        }
        if step.g.degree() != Some(n - 2) || !step.g.is_monic(r) {
            return Err(bad(format!("step {k}: cofactor is not monic of degree n - 2")));
        }
        let ext = EtaleExtension::new(r, &step.f)?;
        let u = ext.combine(&step.vectors);
        if !ext.base_change(space)?.is_isotropic_vector(&u) {
            return Err(bad(format!("step {k}: combination is not isotropic and unimodular")));
        }
        expected_f = step.g.clone();
    }
    if !space.is_isotropic_vector(&trace.vector) {
        return Err(bad("final vector is not isotropic and unimodular".into()));
    }
    if !trace.fallback {
        if let Some(last) = trace.steps.last() {
            if last.n != 3 {
                return Err(bad("trace stops before reaching degree 1".into()));
            }
            // g = t + c, evaluate v(t) at the root -c
            let root = r.neg(last.g.coeff_ref(0));
            let mut power = r.one();
            let mut v = vec![r.zero(); space.rank()];
            for w in &last.vectors {
                for (o, x) in v.iter_mut().zip(w) {
                    *o = r.add(o, &r.mul(&power, x));
                }
                power = r.mul(&power, &root);
            }
            if v != trace.vector {
                return Err(bad("final vector is not v(root) of the last step".into()));
            }
        } else if modulus.degree() != Some(1) {
            return Err(bad("trace has no steps for a nontrivial extension".into()));
        }
    }
    Ok(())
}
