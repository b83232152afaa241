use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::descent::{springer_descend, verify_trace, DescentTrace};
use super::EtaleExtension;
use crate::error::{Error, Result};
use crate::oracle::{decide_isotropy, OracleMode};
use crate::quadspace::QuadraticSpace;
use crate::rings::{find_irreducible_cubic, Elem, Ring, RingHom};
use crate::witt::find_isotropic;

/// Deepest tower of cubic enlargements tried after a fallback.
pub const MAX_TOWER_DEPTH: usize = 2;

/// `R[x]/(h)` for a cubic `h` irreducible in every residue field, so every
/// residue field grows from `k` to `k^3`.
pub fn enlarge_residue_fields(r: &Ring) -> Result<EtaleExtension> {
    EtaleExtension::new(r, &find_irreducible_cubic(r)?)
}

/// The same extension with the base enlarged: `S (x) R~` over `R~`, with
/// the map `S -> S (x) R~`.
pub fn enlarge_extension(ext: &EtaleExtension) -> Result<(EtaleExtension, EtaleExtension, RingHom)> {
    let big = enlarge_residue_fields(ext.base())?;
    let f = big.embedding().apply_poly(ext.modulus());
    let ext_big = EtaleExtension::new(big.ring(), &f)?;
    let base_map = big.embedding().compose(ext_big.embedding())?;
    let map = RingHom::extend_to_quotient(&base_map, ext.ring(), ext_big.theta().clone())?;
    Ok((big, ext_big, map))
}

#[derive(Clone, Debug)]
pub struct TowerOutcome {
    /// Descent over the original base ring (possibly a fallback).
    pub trace: DescentTrace,
    /// Number of enlargements after which descent succeeded without
    /// fallback; `None` if it never did within [`MAX_TOWER_DEPTH`].
    pub tower_depth: Option<usize>,
}

/// Descent over `R`; on fallback, the same input is re-run over successive
/// cubic enlargements of `R` to measure how many are needed. Results over
/// enlarged rings are only reported, never returned.
pub fn descend_with_enlargement(
    space: &QuadraticSpace,
    ext: &EtaleExtension,
    u: &[Elem],
    rng: &mut ChaCha8Rng,
    budget: usize,
    max_depth: usize,
) -> Result<TowerOutcome> {
    let trace = springer_descend(space, ext, u, rng, budget)?;
    if !trace.fallback {
        return Ok(TowerOutcome { trace, tower_depth: Some(0) });
    }
    // an isotropic plane is hyperbolic: q(v(t)) = x(t) y(t) with deg x, y < n,
    // so no value polynomial is ever divisible by f over any enlargement
    if space.rank() < 3 {
        return Ok(TowerOutcome { trace, tower_depth: None });
    }
    let mut cur_space = space.clone();
    let mut cur_ext = ext.clone();
    let mut cur_u = u.to_vec();
    for depth in 1..=max_depth {
        let (big, ext_big, map) = enlarge_extension(&cur_ext)?;
        cur_space = big.base_change(&cur_space)?;
        cur_u = QuadraticSpace::map_vector(&map, &cur_u);
        cur_ext = ext_big;
        let t = springer_descend(&cur_space, &cur_ext, &cur_u, rng, budget)?;
        if !t.fallback {
            return Ok(TowerOutcome { trace, tower_depth: Some(depth) });
        }
    }
    Ok(TowerOutcome { trace, tower_depth: None })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    Oracle,
    Descent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DescentSummary {
    pub steps: usize,
    pub fallback: bool,
    pub tower_depth: Option<usize>,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArtinSpringerReport {
    pub degree: usize,
    pub base_isotropic: bool,
    pub base_oracle: OracleMode,
    pub extension_isotropic: bool,
    pub extension_oracle: OracleMode,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub descent: Option<DescentSummary>,
}

/// Decides isotropy over `R` and over `S` by the oracle and checks that
/// anisotropy is preserved. In descent mode an isotropic vector over `S` is
/// also brought down to `R` and its trace re-verified.
pub fn verify_artin_springer(
    space: &QuadraticSpace,
    ext: &EtaleExtension,
    mode: VerifyMode,
    rng: &mut ChaCha8Rng,
    budget: usize,
    cap: u128,
) -> Result<ArtinSpringerReport> {
    if ext.degree().is_multiple_of(2) {
        return Err(Error::Precondition("extension degree must be odd".into()));
    }
    let space_s = ext.base_change(space)?;
    let (base_isotropic, base_oracle) = decide_isotropy(space, cap)?;
    let (extension_isotropic, extension_oracle) = decide_isotropy(&space_s, cap)?;
    let mut verdict = if base_isotropic == extension_isotropic {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let mut descent = None;
    if mode == VerifyMode::Descent && extension_isotropic {
        let u = find_isotropic(&space_s, rng).ok_or(Error::Anisotropic)?;
        let out = descend_with_enlargement(space, ext, &u, rng, budget, MAX_TOWER_DEPTH)?;
        let verified = verify_trace(space, ext.modulus(), &out.trace).is_ok();
        if !verified {
            verdict = Verdict::Fail;
        }
        descent = Some(DescentSummary {
            steps: out.trace.steps.len(),
            fallback: out.trace.fallback,
            tower_depth: out.tower_depth,
            verified,
        });
    }
    Ok(ArtinSpringerReport {
        degree: ext.degree(),
        base_isotropic,
        base_oracle,
        extension_isotropic,
        extension_oracle,
        verdict,
        descent,
    })
}
