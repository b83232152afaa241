//! JSON ring descriptors and the element encoding.
//!
//! `{"components":[{"kind":"galois","p":3,"e":2,"modulus":[0,1]},
//!   {"kind":"quotient","base":{...},"modulus":[...]}]}`
//!
//! Elements of `Z/p^e` are integers, elements of higher-degree Galois rings
//! are coefficient arrays, product elements are arrays of component
//! encodings and quotient elements are arrays of base encodings. A bare
//! integer decodes in every ring as the image of that integer.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::poly::Poly;
use super::{Elem, Kind, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingDescriptor {
    pub components: Vec<ComponentDescriptor>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ComponentDescriptor {
    Galois {
        p: u64,
        #[serde(default = "one")]
        e: u32,
        #[serde(default = "linear")]
        modulus: Vec<i64>,
    },
    Quotient {
        base: RingDescriptor,
        modulus: Vec<Value>,
    },
}

fn one() -> u32 {
    1
}

fn linear() -> Vec<i64> {
    vec![0, 1]
}

impl Ring {
    pub fn from_descriptor(d: &RingDescriptor) -> Result<Ring> {
        let parts = d
            .components
            .iter()
            .map(|c| match c {
                ComponentDescriptor::Galois { p, e, modulus } => Ring::galois(*p, *e, modulus),
                ComponentDescriptor::Quotient { base, modulus } => {
                    let base = Ring::from_descriptor(base)?;
                    let f = base.decode_poly(&Value::Array(modulus.clone()))?;
                    Ring::quotient(&base, &f)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ring::product(parts)
    }

    pub fn descriptor(&self) -> RingDescriptor {
        match &self.0.kind {
            Kind::Product { parts, .. } => RingDescriptor {
                components: parts.iter().flat_map(|p| p.descriptor().components).collect(),
            },
            Kind::Galois(g) => RingDescriptor {
                components: vec![ComponentDescriptor::Galois {
                    p: g.p,
                    e: g.e,
                    modulus: g.modulus.iter().map(|&c| c as i64).collect(),
                }],
            },
            Kind::Quotient { base, modulus } => {
                let enc = base.encode_poly(modulus);
                RingDescriptor {
                    components: vec![ComponentDescriptor::Quotient {
                        base: base.descriptor(),
                        modulus: enc.as_array().cloned().unwrap_or_default(),
                    }],
                }
            }
        }
    }

    pub fn encode(&self, x: &Elem) -> Value {
        match &self.0.kind {
            Kind::Galois(g) if g.degree() == 1 => Value::from(x.slots()[0]),
            Kind::Galois(_) => Value::Array(x.slots().iter().map(|&c| Value::from(c)).collect()),
            Kind::Product { parts, .. } => Value::Array(
                parts
                    .iter()
                    .zip(self.components(x))
                    .map(|(p, c)| p.encode(&c))
                    .collect(),
            ),
            Kind::Quotient { base, .. } => {
                Value::Array(self.blocks(x).iter().map(|b| base.encode(b)).collect())
            }
        }
    }

    pub fn decode(&self, v: &Value) -> Result<Elem> {
        if let Some(n) = v.as_i64() {
            return Ok(self.from_int(n));
        }
        let arr = v
            .as_array()
            .ok_or_else(|| Error::MalformedElement(format!("expected integer or array, got {v}")))?;
        match &self.0.kind {
            Kind::Galois(g) => {
                if arr.len() > g.degree() {
                    return Err(Error::MalformedElement("too many coefficients".into()));
                }
                let mut slots = vec![0u64; g.degree()];
                for (s, c) in slots.iter_mut().zip(arr) {
                    let n = c
                        .as_i64()
                        .ok_or_else(|| Error::MalformedElement(format!("bad coefficient {c}")))?;
                    *s = (n as i128).rem_euclid(g.pe as i128) as u64;
                }
                Ok(Elem(slots))
            }
            Kind::Product { parts, .. } => {
                if arr.len() != parts.len() {
                    return Err(Error::MalformedElement("wrong number of components".into()));
                }
                let comps = parts
                    .iter()
                    .zip(arr)
                    .map(|(p, c)| p.decode(c))
                    .collect::<Result<Vec<_>>>()?;
                Ok(self.from_components(&comps))
            }
            Kind::Quotient { base, modulus } => {
                if arr.len() > modulus.len() - 1 {
                    return Err(Error::MalformedElement("too many coefficients".into()));
                }
                let blocks = arr
                    .iter()
                    .map(|c| base.decode(c))
                    .collect::<Result<Vec<_>>>()?;
                Ok(self.from_blocks(&blocks))
            }
        }
    }

    pub fn encode_poly(&self, p: &Poly) -> Value {
        Value::Array(p.coeffs().iter().map(|c| self.encode(c)).collect())
    }

    pub fn decode_poly(&self, v: &Value) -> Result<Poly> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::MalformedElement("polynomial must be an array".into()))?;
        Ok(Poly::new(arr.iter().map(|c| self.decode(c)).collect::<Result<_>>()?))
    }

    pub fn encode_vec(&self, v: &[Elem]) -> Value {
        Value::Array(v.iter().map(|c| self.encode(c)).collect())
    }

    pub fn decode_vec(&self, v: &Value) -> Result<Vec<Elem>> {
        v.as_array()
            .ok_or_else(|| Error::MalformedElement("vector must be an array".into()))?
            .iter()
            .map(|c| self.decode(c))
            .collect()
    }
}
