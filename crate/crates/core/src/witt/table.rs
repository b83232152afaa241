use serde_json::{json, Value};

use super::witt_equivalent;
use crate::error::{Error, Result};
use crate::quadspace::QuadraticSpace;
use crate::rings::{field, Elem, Ring, DEFAULT_CAP};

/// Witt classes of a finite field with their addition and multiplication.
#[derive(Clone, Debug, PartialEq)]
pub struct WittRingTable {
    pub field_size: u128,
    /// Diagonal entries of one representative per class; class 0 is zero.
    pub representatives: Vec<Vec<Elem>>,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
}

impl WittRingTable {
    pub fn order(&self) -> usize {
        self.representatives.len()
    }

    /// Smallest `m > 0` with `m x = 0`.
    pub fn additive_order(&self, x: usize) -> usize {
        let mut acc = x;
        let mut m = 1;
        while acc != 0 {
            acc = self.add[acc][x];
            m += 1;
        }
        m
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order()).any(|x| self.additive_order(x) == self.order())
    }

    /// Every element has additive order at most 2.
    pub fn is_klein_four(&self) -> bool {
        self.order() == 4 && (0..4).all(|x| self.additive_order(x) <= 2)
    }

    pub fn to_json(&self, k: &Ring) -> Value {
        json!({
            "field_size": self.field_size,
            "representatives": self.representatives.iter().map(|r| k.encode_vec(r)).collect::<Vec<_>>(),
            "add": self.add,
            "mul": self.mul,
        })
    }
}

/// Classifies `[], <1>, <d>, <1,1>, <1,d>, <d,d>` (with `d` a nonsquare) up
/// to Witt equivalence and tabulates sums and products of the classes.
pub fn witt_ring_table(k: &Ring) -> Result<WittRingTable> {
    if !k.is_field() {
        return Err(Error::Precondition(format!("{k} is not a field")));
    }
    let size = k.cardinality().unwrap_or(u128::MAX);
    if size > DEFAULT_CAP {
        return Err(Error::CapExceeded { size, cap: DEFAULT_CAP });
    }
    let d = k
        .elements(DEFAULT_CAP)?
        .find(|x| !field::is_square(k, x))
        .expect("odd characteristic fields have nonsquares");
    let one = k.one();
    let candidates = [
        vec![],
        vec![one.clone()],
        vec![d.clone()],
        vec![one.clone(), one.clone()],
        vec![one.clone(), d.clone()],
        vec![d.clone(), d],
    ];
    let mut reps: Vec<(Vec<Elem>, QuadraticSpace)> = Vec::new();
    for c in candidates {
        let s = QuadraticSpace::diagonal(k, &c)?;
        if classify(&reps, &s)?.is_none() {
            reps.push((c, s));
        }
    }
    let table = |op: &dyn Fn(&QuadraticSpace, &QuadraticSpace) -> Result<QuadraticSpace>| {
        reps.iter()
            .map(|(_, a)| {
                reps.iter()
                    .map(|(_, b)| {
                        classify(&reps, &op(a, b)?)?
                            .ok_or_else(|| Error::Precondition("class outside the table".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
    };
    let add = table(&|a, b| a.orth_sum(b))?;
    let mul = table(&|a, b| a.tensor(b))?;
    Ok(WittRingTable {
        field_size: size,
        representatives: reps.into_iter().map(|(c, _)| c).collect(),
        add,
        mul,
    })
}

fn classify(reps: &[(Vec<Elem>, QuadraticSpace)], s: &QuadraticSpace) -> Result<Option<usize>> {
    for (i, (_, r)) in reps.iter().enumerate() {
        if witt_equivalent(s, r)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}
