//! Finite commutative rings in which 2 is a unit.
//!
//! Every ring is built from three constructors: Galois-ring quotients
//! `Z/p^e[t]/(m)` with `m` irreducible mod `p`, finite products, and
//! quotients `B[t]/(f)` of an existing ring by a monic separable polynomial.
//! Elements are flat vectors of canonical residues ("slots"); addition is
//! slotwise, multiplication recurses through the presentation.
//!
//! Since the rings are finite, the Jacobson radical is nilpotent. Units are
//! detected on the residue fields and inverted by Fermat in the residue
//! fields followed by Newton iteration through the radical.

mod descriptor;
pub mod field;
pub mod hom;
pub mod linalg;
pub mod poly;

use std::fmt;
use std::sync::{Arc, OnceLock};

pub use descriptor::{ComponentDescriptor, RingDescriptor};
pub use field::{find_irreducible, find_irreducible_cubic};
pub use hom::RingHom;
pub use poly::Poly;

use crate::error::{Error, Result};

/// Default bound on the number of elements any enumeration may visit.
pub const DEFAULT_CAP: u128 = 1_000_000;

/// A ring element as canonical slot values. The owning [`Ring`] gives the
/// slots meaning; the all-zero vector is zero in every ring.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Elem(Vec<u64>);

impl Elem {
    pub fn from_slots(slots: Vec<u64>) -> Self {
        Elem(slots)
    }

    pub fn slots(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&s| s == 0)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
struct Galois {
    p: u64,
    e: u32,
    pe: u64,
    /// Monic modulus, `modulus.len() == degree + 1`.
    modulus: Vec<u64>,
}

impl Galois {
    fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        mul_mod_monic(a, b, &self.modulus, self.pe)
    }
}

/// Product of two coefficient vectors over `Z/pe` reduced by a monic
/// `modulus` (lowest degree first).
fn mul_mod_monic(a: &[u64], b: &[u64], modulus: &[u64], pe: u64) -> Vec<u64> {
    let d = modulus.len() - 1;
    let pe = pe as u128;
    if d == 1 {
        return vec![((a[0] as u128 * b[0] as u128) % pe) as u64];
    }
    let mut acc = vec![0u128; 2 * d - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] = (acc[i + j] + x as u128 * y as u128) % pe;
        }
    }
    for k in (d..2 * d - 1).rev() {
        let c = acc[k];
        if c == 0 {
            continue;
        }
        for j in 0..d {
            let sub = c * modulus[j] as u128 % pe;
            acc[k - d + j] = (acc[k - d + j] + pe - sub) % pe;
        }
    }
    acc.truncate(d);
    acc.into_iter().map(|c| c as u64).collect()
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Kind {
    Galois(Galois),
    Product { parts: Vec<Ring>, offsets: Vec<usize> },
    Quotient { base: Ring, modulus: Poly },
}

#[derive(Clone, Debug)]
enum ResidueMap {
    Identity,
    Reduce,
    Component {
        part: usize,
        inner: usize,
    },
    Factor {
        base_residue: usize,
        factor: Poly,
        root: Option<Elem>,
        /// CRT idempotent for this factor among the factors of the modulus
        /// over the same base residue field.
        idempotent: Poly,
        /// Reduction of the modulus in that residue field.
        reduced_modulus: Poly,
    },
}

#[derive(Clone, Debug)]
struct Residue {
    /// `None` means the ring is its own residue field.
    field: Option<Ring>,
    map: ResidueMap,
}

struct Inner {
    kind: Kind,
    width: usize,
    slot_moduli: Vec<u64>,
    is_field: bool,
    residues: OnceLock<Vec<Residue>>,
    half: OnceLock<Elem>,
    /// For a quotient over a product of rings `Z/p^e`: per base slot, the
    /// modulus `p^e` and the monic modulus polynomial on that slot.
    flat_quotient: Option<Vec<(u64, Vec<u64>)>>,
}

/// Shared handle to an immutable finite ring.
#[derive(Clone)]
pub struct Ring(Arc<Inner>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({self})")
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            Kind::Galois(g) => match (g.e, g.degree()) {
                (1, 1) => write!(f, "F_{}", g.p),
                (1, d) => write!(f, "F_{}^{}", g.p, d),
                (e, 1) => write!(f, "Z/{}^{}", g.p, e),
                (e, d) => write!(f, "GR({}^{},{})", g.p, e, d),
            },
            Kind::Product { parts, .. } => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " x ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
            Kind::Quotient { base, modulus } => {
                write!(f, "({base})[t]/(deg {})", modulus.len() - 1)
            }
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

impl Ring {
    fn from_kind(kind: Kind, is_field: bool) -> Ring {
        let slot_moduli = match &kind {
            Kind::Galois(g) => vec![g.pe; g.degree()],
            Kind::Product { parts, .. } => parts
                .iter()
                .flat_map(|p| p.0.slot_moduli.iter().copied())
                .collect(),
            Kind::Quotient { base, modulus } => {
                let n = modulus.len() - 1;
                let mut v = Vec::with_capacity(n * base.width());
                for _ in 0..n {
                    v.extend_from_slice(&base.0.slot_moduli);
                }
                v
            }
        };
        let flat_quotient = match &kind {
            Kind::Quotient { base, modulus } if base.slots_independent() => Some(
                (0..base.width())
                    .map(|k| {
                        (base.0.slot_moduli[k], modulus.coeffs().iter().map(|c| c.0[k]).collect())
                    })
                    .collect(),
            ),
            _ => None,
        };
        Ring(Arc::new(Inner {
            width: slot_moduli.len(),
            slot_moduli,
            kind,
            is_field,
            residues: OnceLock::new(),
            half: OnceLock::new(),
            flat_quotient,
        }))
    }

    /// The Galois ring `Z/p^e[t]/(modulus)`; `modulus` is given lowest degree
    /// first and must have a unit leading coefficient and be irreducible mod `p`.
    pub fn galois(p: u64, e: u32, modulus: &[i64]) -> Result<Ring> {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not an odd prime")));
        }
        if e == 0 {
            return Err(Error::InvalidRing("exponent must be at least 1".into()));
        }
        let pe = p
            .checked_pow(e)
            .filter(|&pe| pe < (1 << 62))
            .ok_or_else(|| Error::InvalidRing(format!("{p}^{e} is too large")))?;
        let mut m: Vec<u64> = modulus
            .iter()
            .map(|&c| c.rem_euclid(pe as i64) as u64)
            .collect();
        while m.len() > 1 && *m.last().unwrap() == 0 {
            m.pop();
        }
        if m.len() < 2 {
            return Err(Error::InvalidRing("modulus must have degree at least 1".into()));
        }
        let lc_inv = mod_inverse(*m.last().unwrap(), pe).ok_or(Error::NotMonic)?;
        for c in m.iter_mut() {
            *c = ((*c as u128 * lc_inv as u128) % pe as u128) as u64;
        }
        let residue_modulus: Vec<u64> = m.iter().map(|c| c % p).collect();
        if residue_modulus.len() > 2 {
            let fp = Ring::from_kind(
                Kind::Galois(Galois {
                    p,
                    e: 1,
                    pe: p,
                    modulus: vec![0, 1],
                }),
                true,
            );
            let f = Poly::new(
                residue_modulus
                    .iter()
                    .map(|&c| Elem(vec![c]))
                    .collect(),
            );
            if !field::is_irreducible(&fp, &f) {
                return Err(Error::InvalidRing(
                    "modulus is reducible modulo p".to_string(),
                ));
            }
        }
        Ok(Ring::from_kind(
            Kind::Galois(Galois {
                p,
                e,
                pe,
                modulus: m,
            }),
            e == 1,
        ))
    }

    /// The prime field `F_p`.
    pub fn prime_field(p: u64) -> Result<Ring> {
        Ring::galois(p, 1, &[0, 1])
    }

    /// `Z/p^e`.
    pub fn zmod(p: u64, e: u32) -> Result<Ring> {
        Ring::galois(p, e, &[0, 1])
    }

    /// Direct product. A single factor is returned unchanged.
    pub fn product(parts: Vec<Ring>) -> Result<Ring> {
        match parts.len() {
            0 => Err(Error::InvalidRing("empty product".into())),
            1 => Ok(parts.into_iter().next().unwrap()),
            _ => {
                let mut offsets = Vec::with_capacity(parts.len() + 1);
                let mut acc = 0;
                for p in &parts {
                    offsets.push(acc);
                    acc += p.width();
                }
                offsets.push(acc);
                Ok(Ring::from_kind(Kind::Product { parts, offsets }, false))
            }
        }
    }

    /// `base[t]/(f)` for `f` monic (unit leading coefficient) and separable.
    pub fn quotient(base: &Ring, f: &Poly) -> Result<Ring> {
        let deg = f.degree().ok_or(Error::NotMonic)?;
        if deg == 0 {
            return Err(Error::InvalidRing("quotient modulus must have degree >= 1".into()));
        }
        let monic = f.to_monic(base).ok_or(Error::NotMonic)?;
        if !poly::is_separable(base, &monic)? {
            return Err(Error::NotSeparable);
        }
        let is_field = base.is_field() && field::is_irreducible(base, &monic);
        Ok(Ring::from_kind(
            Kind::Quotient {
                base: base.clone(),
                modulus: monic,
            },
            is_field,
        ))
    }

    /// Residue field `k[t]/(g)` for `g` monic irreducible over the field `k`;
    /// no checks.
    fn field_extension(k: &Ring, g: &Poly) -> Ring {
        Ring::from_kind(
            Kind::Quotient {
                base: k.clone(),
                modulus: g.clone(),
            },
            true,
        )
    }

    /// Every slot is its own component `Z/p^e`, so arithmetic is slotwise.
    fn slots_independent(&self) -> bool {
        match &self.0.kind {
            Kind::Galois(g) => g.degree() == 1,
            Kind::Product { parts, .. } => parts.iter().all(|p| p.slots_independent()),
            Kind::Quotient { .. } => false,
        }
    }

    pub fn width(&self) -> usize {
        self.0.width
    }

    pub fn slot_moduli(&self) -> &[u64] {
        &self.0.slot_moduli
    }

    pub fn is_field(&self) -> bool {
        self.0.is_field
    }

    /// Number of elements, `None` on `u128` overflow.
    pub fn cardinality(&self) -> Option<u128> {
        self.0
            .slot_moduli
            .iter()
            .try_fold(1u128, |acc, &m| acc.checked_mul(m as u128))
    }

    /// For a quotient presentation `B[t]/(f)`: the base ring and `f`.
    pub fn quotient_parts(&self) -> Option<(&Ring, &Poly)> {
        match &self.0.kind {
            Kind::Quotient { base, modulus } => Some((base, modulus)),
            _ => None,
        }
    }

    /// Factors of a product ring; `None` if this ring is not a product.
    pub fn product_parts(&self) -> Option<&[Ring]> {
        match &self.0.kind {
            Kind::Product { parts, .. } => Some(parts),
            _ => None,
        }
    }

    /// `(p, e, modulus)` for a Galois component.
    pub fn galois_parts(&self) -> Option<(u64, u32, &[u64])> {
        match &self.0.kind {
            Kind::Galois(g) => Some((g.p, g.e, &g.modulus)),
            _ => None,
        }
    }

    /// Checks that `x` is a canonical element of this ring.
    pub fn check(&self, x: &Elem) -> Result<()> {
        if x.0.len() != self.width() {
            return Err(Error::RingMismatch);
        }
        if x.0.iter().zip(&self.0.slot_moduli).any(|(v, m)| v >= m) {
            return Err(Error::MalformedElement("non-canonical slot".into()));
        }
        Ok(())
    }

    pub fn zero(&self) -> Elem {
        Elem(vec![0; self.width()])
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Elem {
        match &self.0.kind {
            Kind::Galois(g) => {
                let mut v = vec![0; g.degree()];
                v[0] = (n as i128).rem_euclid(g.pe as i128) as u64;
                Elem(v)
            }
            Kind::Product { parts, .. } => {
                Elem(parts.iter().flat_map(|p| p.from_int(n).0).collect())
            }
            Kind::Quotient { base, .. } => {
                let mut v = base.from_int(n).0;
                v.resize(self.width(), 0);
                Elem(v)
            }
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        Elem(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.0.slot_moduli)
                .map(|((&x, &y), &m)| ((x as u128 + y as u128) % m as u128) as u64)
                .collect(),
        )
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        Elem(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.0.slot_moduli)
                .map(|((&x, &y), &m)| ((x as u128 + m as u128 - y as u128) % m as u128) as u64)
                .collect(),
        )
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        Elem(
            a.0.iter()
                .zip(&self.0.slot_moduli)
                .map(|(&x, &m)| if x == 0 { 0 } else { m - x })
                .collect(),
        )
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        Elem(self.mul_slots(&a.0, &b.0))
    }

    fn mul_slots(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        match &self.0.kind {
            Kind::Galois(g) => g.mul(a, b),
            Kind::Product { parts, offsets } => {
                let mut out = Vec::with_capacity(self.width());
                for (i, p) in parts.iter().enumerate() {
                    let r = offsets[i]..offsets[i + 1];
                    out.extend(p.mul_slots(&a[r.clone()], &b[r]));
                }
                out
            }
            Kind::Quotient { .. } if self.0.flat_quotient.is_some() => {
                let slots = self.0.flat_quotient.as_ref().expect("checked");
                let w = slots.len();
                if w == 1 {
                    return mul_mod_monic(a, b, &slots[0].1, slots[0].0);
                }
                let mut out = vec![0u64; a.len()];
                for (k, (pe, modulus)) in slots.iter().enumerate() {
                    let ak: Vec<u64> = a.iter().skip(k).step_by(w).copied().collect();
                    let bk: Vec<u64> = b.iter().skip(k).step_by(w).copied().collect();
                    for (i, c) in mul_mod_monic(&ak, &bk, modulus, *pe).into_iter().enumerate() {
                        out[i * w + k] = c;
                    }
                }
                out
            }
            Kind::Quotient { base, modulus } => {
                let w = base.width();
                let n = modulus.len() - 1;
                let block = |s: &[u64], i: usize| Elem(s[i * w..(i + 1) * w].to_vec());
                let mut acc = vec![base.zero(); 2 * n - 1];
                for i in 0..n {
                    let x = block(a, i);
                    if x.is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        let y = block(b, j);
                        if y.is_zero() {
                            continue;
                        }
                        acc[i + j] = base.add(&acc[i + j], &base.mul(&x, &y));
                    }
                }
                for k in (n..2 * n - 1).rev() {
                    let c = std::mem::replace(&mut acc[k], base.zero());
                    if c.is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        let t = base.mul(&c, modulus.coeff_ref(j));
                        acc[k - n + j] = base.sub(&acc[k - n + j], &t);
                    }
                }
                acc.truncate(n);
                acc.into_iter().flat_map(|e| e.0).collect()
            }
        }
    }

    pub fn pow(&self, a: &Elem, mut exp: u128) -> Elem {
        let mut result = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(&result, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    /// Sum of an iterator of elements.
    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a Elem>) -> Elem {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    // ---- residues ----------------------------------------------------------

    fn residues(&self) -> &[Residue] {
        self.0.residues.get_or_init(|| self.compute_residues())
    }

    fn compute_residues(&self) -> Vec<Residue> {
        if self.is_field() {
            return vec![Residue {
                field: None,
                map: ResidueMap::Identity,
            }];
        }
        match &self.0.kind {
            Kind::Galois(g) => {
                let field = Ring::from_kind(
                    Kind::Galois(Galois {
                        p: g.p,
                        e: 1,
                        pe: g.p,
                        modulus: g.modulus.iter().map(|c| c % g.p).collect(),
                    }),
                    true,
                );
                vec![Residue {
                    field: Some(field),
                    map: ResidueMap::Reduce,
                }]
            }
            Kind::Product { parts, .. } => parts
                .iter()
                .enumerate()
                .flat_map(|(part, r)| {
                    (0..r.residue_count()).map(move |inner| Residue {
                        field: Some(r.residue_field(inner)),
                        map: ResidueMap::Component { part, inner },
                    })
                })
                .collect(),
            Kind::Quotient { base, modulus } => {
                let mut out = Vec::new();
                for i in 0..base.residue_count() {
                    let k = base.residue_field(i);
                    let reduced = Poly::new(
                        modulus.coeffs().iter().map(|c| base.project(i, c)).collect(),
                    );
                    let factors = field::factor(&k, &reduced);
                    for (j, g) in factors.iter().enumerate() {
                        // idempotent: (F/g) * ((F/g)^{-1} mod g)
                        let cofactor = factors
                            .iter()
                            .enumerate()
                            .filter(|&(l, _)| l != j)
                            .fold(Poly::constant(&k, k.one()), |acc, (_, h)| {
                                poly::mul(&k, &acc, h)
                            });
                        let inv = field::inverse_mod(&k, &cofactor, g)
                            .expect("factors of a separable polynomial are coprime");
                        let idempotent =
                            poly::rem(&k, &poly::mul(&k, &cofactor, &inv), &reduced);
                        let (field, root) = if g.degree() == Some(1) {
                            (k.clone(), Some(k.neg(g.coeff_ref(0))))
                        } else {
                            (Ring::field_extension(&k, g), None)
                        };
                        out.push(Residue {
                            field: Some(field),
                            map: ResidueMap::Factor {
                                base_residue: i,
                                factor: g.clone(),
                                root,
                                idempotent,
                                reduced_modulus: reduced.clone(),
                            },
                        });
                    }
                }
                out
            }
        }
    }

    /// Number of residue fields of `R / Jac(R)`.
    pub fn residue_count(&self) -> usize {
        self.residues().len()
    }

    pub fn residue_field(&self, i: usize) -> Ring {
        self.residues()[i].field.clone().unwrap_or_else(|| self.clone())
    }

    pub fn residue_fields(&self) -> Vec<Ring> {
        (0..self.residue_count()).map(|i| self.residue_field(i)).collect()
    }

    /// Sizes of the residue fields.
    pub fn residue_field_sizes(&self) -> Vec<u128> {
        self.residue_fields()
            .iter()
            .map(|k| k.cardinality().expect("residue field size fits in u128"))
            .collect()
    }

    /// Image of `x` in the `i`-th residue field.
    pub fn project(&self, i: usize, x: &Elem) -> Elem {
        let res = &self.residues()[i];
        match (&res.map, &self.0.kind) {
            (ResidueMap::Identity, _) => x.clone(),
            (ResidueMap::Reduce, Kind::Galois(g)) => Elem(x.0.iter().map(|c| c % g.p).collect()),
            (ResidueMap::Component { part, inner }, Kind::Product { parts, offsets }) => {
                let r = offsets[*part]..offsets[*part + 1];
                parts[*part].project(*inner, &Elem(x.0[r].to_vec()))
            }
            (
                ResidueMap::Factor {
                    base_residue,
                    factor,
                    root,
                    ..
                },
                Kind::Quotient { base, .. },
            ) => {
                let k = base.residue_field(*base_residue);
                let p = Poly::new(
                    self.blocks(x)
                        .iter()
                        .map(|c| base.project(*base_residue, c))
                        .collect(),
                );
                match root {
                    Some(r) => poly::eval(&k, &p, r),
                    None => {
                        let rem = poly::rem(&k, &p, factor);
                        let d = factor.degree().unwrap();
                        Elem((0..d).flat_map(|j| rem.coeff(&k, j).0).collect())
                    }
                }
            }
            _ => unreachable!("residue map does not match ring kind"),
        }
    }

    /// All residue images of `x`.
    pub fn residues_of(&self, x: &Elem) -> Vec<Elem> {
        (0..self.residue_count()).map(|i| self.project(i, x)).collect()
    }

    /// An element whose residue images are the given ones. This is a
    /// set-theoretic section of `R -> R/Jac(R)`, not a homomorphism.
    pub fn lift_residues(&self, targets: &[Elem]) -> Elem {
        assert_eq!(targets.len(), self.residue_count(), "one target per residue field");
        let residues = self.residues();
        match &self.0.kind {
            _ if matches!(residues[0].map, ResidueMap::Identity) => targets[0].clone(),
            Kind::Galois(_) => targets[0].clone(),
            Kind::Product { parts, .. } => {
                let mut out = Vec::with_capacity(self.width());
                let mut start = 0;
                for p in parts {
                    let c = p.residue_count();
                    out.extend(p.lift_residues(&targets[start..start + c]).0);
                    start += c;
                }
                Elem(out)
            }
            Kind::Quotient { base, modulus } => {
                let n = modulus.len() - 1;
                let m = base.residue_count();
                // per base residue: CRT-combined polynomial over k_i
                let mut combined: Vec<Poly> = vec![Poly::zero(); m];
                for (res, y) in residues.iter().zip(targets) {
                    let ResidueMap::Factor {
                        base_residue,
                        factor,
                        root,
                        idempotent,
                        reduced_modulus,
                    } = &res.map
                    else {
                        unreachable!()
                    };
                    let k = base.residue_field(*base_residue);
                    let yp = if root.is_some() {
                        Poly::constant(&k, y.clone())
                    } else {
                        let kw = k.width();
                        let d = factor.degree().unwrap();
                        Poly::new((0..d).map(|j| Elem(y.0[j * kw..(j + 1) * kw].to_vec())).collect())
                    };
                    let term = poly::rem(&k, &poly::mul(&k, &yp, idempotent), reduced_modulus);
                    combined[*base_residue] = poly::add(&k, &combined[*base_residue], &term);
                }
                let mut out = Vec::with_capacity(self.width());
                for c in 0..n {
                    let coeff_targets: Vec<Elem> = (0..m)
                        .map(|i| combined[i].coeff(&base.residue_field(i), c))
                        .collect();
                    out.extend(base.lift_residues(&coeff_targets).0);
                }
                Elem(out)
            }
        }
    }

    /// `x` lies in the Jacobson radical.
    pub fn in_radical(&self, x: &Elem) -> bool {
        (0..self.residue_count()).all(|i| self.project(i, x).is_zero())
    }

    pub fn is_unit(&self, x: &Elem) -> bool {
        (0..self.residue_count()).all(|i| !self.project(i, x).is_zero())
    }

    /// Multiplicative inverse, or `None` when some residue image vanishes.
    pub fn invert(&self, x: &Elem) -> Option<Elem> {
        if !self.is_unit(x) {
            return None;
        }
        // invert in each residue field by Fermat, then lift by Newton
        let inverses: Vec<Elem> = self
            .residue_fields()
            .iter()
            .enumerate()
            .map(|(i, k)| {
                let size = k.cardinality().expect("residue fields are finite");
                k.pow(&self.project(i, x), size - 2)
            })
            .collect();
        let mut y = self.lift_residues(&inverses);
        let two = self.from_int(2);
        for _ in 0..128 {
            let xy = self.mul(x, &y);
            if self.is_one(&xy) {
                return Some(y);
            }
            y = self.mul(&y, &self.sub(&two, &xy));
        }
        unreachable!("Newton inversion must converge through a nilpotent radical")
    }

    /// `1/2`, which exists in every supported ring.
    pub fn half(&self) -> Elem {
        self.0
            .half
            .get_or_init(|| self.invert(&self.from_int(2)).expect("2 is a unit"))
            .clone()
    }

    /// Split `x` of a quotient ring into its coefficient blocks over the base.
    pub fn blocks(&self, x: &Elem) -> Vec<Elem> {
        match &self.0.kind {
            Kind::Quotient { base, .. } => x
                .0
                .chunks(base.width())
                .map(|c| Elem(c.to_vec()))
                .collect(),
            _ => vec![x.clone()],
        }
    }

    /// Inverse of [`Ring::blocks`] for a quotient ring.
    pub fn from_blocks(&self, blocks: &[Elem]) -> Elem {
        let mut v: Vec<u64> = blocks.iter().flat_map(|b| b.0.iter().copied()).collect();
        v.resize(self.width(), 0);
        Elem(v)
    }

    /// Product components of `x` (a single component for non-products).
    pub fn components(&self, x: &Elem) -> Vec<Elem> {
        match &self.0.kind {
            Kind::Product { offsets, .. } => offsets
                .windows(2)
                .map(|w| Elem(x.0[w[0]..w[1]].to_vec()))
                .collect(),
            _ => vec![x.clone()],
        }
    }

    /// Reassemble a product element from its components.
    pub fn from_components(&self, parts: &[Elem]) -> Elem {
        Elem(parts.iter().flat_map(|p| p.0.iter().copied()).collect())
    }

    // ---- enumeration -------------------------------------------------------

    /// All elements in lexicographic slot order (slot 0 varies fastest),
    /// refusing rings larger than `cap`.
    pub fn elements(&self, cap: u128) -> Result<Elements> {
        let size = self.cardinality().unwrap_or(u128::MAX);
        if size > cap {
            return Err(Error::CapExceeded { size, cap });
        }
        Ok(self.elements_unbounded())
    }

    pub(crate) fn elements_unbounded(&self) -> Elements {
        Elements {
            moduli: self.0.slot_moduli.clone(),
            next: Some(vec![0; self.width()]),
        }
    }

    /// The units, in enumeration order.
    pub fn units(&self, cap: u128) -> Result<Vec<Elem>> {
        Ok(self.elements(cap)?.filter(|x| self.is_unit(x)).collect())
    }
}

impl Ring {
    /// Uniformly random element.
    pub fn random_element<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(self.0.slot_moduli.iter().map(|&m| rng.gen_range(0..m)).collect())
    }

    /// Uniformly random unit (rejection sampling).
    pub fn random_unit<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        loop {
            let x = self.random_element(rng);
            if self.is_unit(&x) {
                return x;
            }
        }
    }
}

/// The free extension `S = R[t]/(f)` for monic separable `f`, with the
/// structural map `R -> S` and the class `theta` of `t`.
pub fn build_etale_extension(r: &Ring, f: &Poly) -> Result<(Ring, RingHom, Elem)> {
    let s = Ring::quotient(r, f)?;
    let emb = RingHom::embedding(&s)?;
    let theta = if f.degree() == Some(1) {
        // S = R, theta is the root of f
        let monic = f.to_monic(r).ok_or(Error::NotMonic)?;
        s.from_blocks(&[r.neg(monic.coeff_ref(0))])
    } else {
        s.from_blocks(&[r.zero(), r.one()])
    };
    Ok((s, emb, theta))
}

/// Odometer over the slots of a ring.
pub struct Elements {
    moduli: Vec<u64>,
    next: Option<Vec<u64>>,
}

impl Iterator for Elements {
    type Item = Elem;

    fn next(&mut self) -> Option<Elem> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut carried = true;
        for (s, &m) in succ.iter_mut().zip(&self.moduli) {
            *s += 1;
            if *s < m {
                carried = false;
                break;
            }
            *s = 0;
        }
        if !carried {
            self.next = Some(succ);
        }
        Some(Elem(cur))
    }
}
