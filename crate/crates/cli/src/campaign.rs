use std::collections::BTreeMap;

use quadforms::oracle::{decide_isotropy, OracleMode};
use quadforms::rings::{poly, Elem, Poly, Ring, RingDescriptor};
use quadforms::springer::{verify_artin_springer, EtaleExtension, Verdict, VerifyMode};
use quadforms::{QuadraticSpace, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub rings: Vec<RingDescriptor>,
    /// Inclusive `[min, max]` ranks of the sampled forms.
    pub ranks: [usize; 2],
    /// Odd extension degrees checked against anisotropy.
    pub degrees: Vec<usize>,
    /// Even degrees run as negative controls.
    #[serde(default)]
    pub negative_degrees: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    #[serde(default)]
    pub budget: Option<usize>,
    #[serde(default = "oracle_mode")]
    pub mode: VerifyMode,
}

fn oracle_mode() -> VerifyMode {
    VerifyMode::Oracle
}

fn galois(p: u64, e: u32) -> RingDescriptor {
    Ring::zmod(p, e).expect("valid prime power").descriptor()
}

impl CampaignConfig {
    /// F_3, F_5, Z/9 and F_3 x F_5 with degrees 3 and 5, ranks 1 to 3, plus
    /// degree 2 as a negative control.
    pub fn default_campaign() -> Self {
        let mut product = galois(3, 1);
        product.components.extend(galois(5, 1).components);
        CampaignConfig {
            rings: vec![galois(3, 1), galois(5, 1), galois(3, 2), product],
            ranks: [1, 3],
            degrees: vec![3, 5],
            negative_degrees: vec![2],
            samples: 2,
            seed: 0,
            budget: None,
            mode: VerifyMode::Descent,
        }
    }

    pub fn from_value(v: Value) -> Result<Self, CliError> {
        let c: CampaignConfig = serde_json::from_value(v)
            .map_err(|e| CliError::Parse(format!("campaign file: {e}")))?;
        if c.ranks[0] == 0 || c.ranks[0] > c.ranks[1] {
            return Err(CliError::Parse("ranks must be [min, max] with 1 <= min <= max".into()));
        }
        if let Some(d) = c.degrees.iter().find(|&&d| d % 2 == 0) {
            return Err(CliError::Parse(format!("degree {d} is not odd")));
        }
        if let Some(d) = c.negative_degrees.iter().find(|&&d| d == 0 || d % 2 == 1) {
            return Err(CliError::Parse(format!("negative-control degree {d} is not even and positive")));
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DescentRecord {
    pub steps: usize,
    pub fallback: bool,
    pub tower_depth: Option<usize>,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceRecord {
    pub key: String,
    pub seed: u64,
    pub ring: String,
    pub rank: usize,
    pub degree: usize,
    pub modulus: Value,
    pub gram: Vec<Value>,
    pub base_isotropic: bool,
    pub base_oracle: OracleMode,
    pub extension_isotropic: bool,
    pub extension_oracle: OracleMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub descent: Option<DescentRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub descents: usize,
    pub fallback_rate: f64,
    pub tower_depth_histogram: BTreeMap<String, usize>,
    pub negative_controls: usize,
    pub negative_breaks: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CampaignReport {
    pub seed: u64,
    pub mode: VerifyMode,
    pub instances: Vec<InstanceRecord>,
    pub negative_controls: Vec<InstanceRecord>,
    pub summary: Summary,
}

fn random_unit_space(r: &Ring, n: usize, g: &mut ChaCha8Rng) -> QuadraticSpace {
    let d: Vec<Elem> = (0..n).map(|_| r.random_unit(g)).collect();
    let diag = QuadraticSpace::diagonal(r, &d).expect("units give a non-degenerate form");
    loop {
        let basis: Vec<Vector> = (0..n)
            .map(|_| (0..n).map(|_| r.random_element(g)).collect())
            .collect();
        if let Ok((_, s)) = diag.subspace(&basis) {
            return s;
        }
    }
}

fn random_separable(r: &Ring, n: usize, g: &mut ChaCha8Rng) -> Poly {
    loop {
        let mut c: Vec<Elem> = (0..n).map(|_| r.random_element(g)).collect();
        c.push(r.one());
        let f = Poly::new(c);
        if poly::is_separable(r, &f).unwrap_or(false) {
            return f;
        }
    }
}

struct Task {
    key: String,
    seed: u64,
    ring: Ring,
    rank: usize,
    degree: usize,
}

fn tasks(config: &CampaignConfig, rings: &[Ring], degrees: &[usize], tag: &str, master: &mut ChaCha8Rng) -> Vec<Task> {
    let mut out = Vec::new();
    for (ri, ring) in rings.iter().enumerate() {
        for rank in config.ranks[0]..=config.ranks[1] {
            for &degree in degrees {
                for sample in 0..config.samples {
                    out.push(Task {
                        key: format!("{tag}/{ri:02}/rank{rank}/deg{degree}/{sample:04}"),
                        seed: master.gen(),
                        ring: ring.clone(),
                        rank,
                        degree,
                    });
                }
            }
        }
    }
    out
}

fn run_task(task: &Task, mode: Option<VerifyMode>, budget: usize, cap: u128) -> InstanceRecord {
    let r = &task.ring;
    let mut g = ChaCha8Rng::seed_from_u64(task.seed);
    let space = random_unit_space(r, task.rank, &mut g);
    let f = random_separable(r, task.degree, &mut g);
    let mut rec = InstanceRecord {
        key: task.key.clone(),
        seed: task.seed,
        ring: r.to_string(),
        rank: task.rank,
        degree: task.degree,
        modulus: r.encode_poly(&f),
        gram: space.gram().iter().map(|row| r.encode_vec(row)).collect(),
        base_isotropic: false,
        base_oracle: OracleMode::Full,
        extension_isotropic: false,
        extension_oracle: OracleMode::Full,
        verdict: None,
        descent: None,
        error: None,
    };
    let ext = match EtaleExtension::new(r, &f) {
        Ok(e) => e,
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    match mode {
        Some(mode) => match verify_artin_springer(&space, &ext, mode, &mut g, budget, cap) {
            Ok(rep) => {
                rec.base_isotropic = rep.base_isotropic;
                rec.base_oracle = rep.base_oracle;
                rec.extension_isotropic = rep.extension_isotropic;
                rec.extension_oracle = rep.extension_oracle;
                rec.verdict = Some(rep.verdict);
                rec.descent = rep.descent.map(|d| DescentRecord {
                    steps: d.steps,
                    fallback: d.fallback,
                    tower_depth: d.tower_depth,
                    verified: d.verified,
                });
            }
            Err(e) => {
                rec.verdict = Some(Verdict::Fail);
                rec.error = Some(e.to_string());
            }
        },
        None => {
            let base = ext.base_change(&space).and_then(|s| {
                Ok((decide_isotropy(&space, cap)?, decide_isotropy(&s, cap)?))
            });
            match base {
                Ok(((bi, bm), (ei, em))) => {
                    rec.base_isotropic = bi;
                    rec.base_oracle = bm;
                    rec.extension_isotropic = ei;
                    rec.extension_oracle = em;
                }
                Err(e) => rec.error = Some(e.to_string()),
            }
        }
    }
    rec
}

/// Runs every instance of the campaign. All randomness derives from one
/// seed; each instance records its own sub-seed so it can be replayed alone.
/// Instance lines go to standard error.
pub fn run_campaign(
    config: &CampaignConfig,
    seed_override: Option<u64>,
    budget_override: usize,
    cap: u128,
) -> Result<CampaignReport, CliError> {
    let seed = seed_override.unwrap_or(config.seed);
    let budget = config.budget.unwrap_or(budget_override);
    let rings = config
        .rings
        .iter()
        .map(Ring::from_descriptor)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Parse(format!("campaign ring: {e}")))?;
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let main_tasks = tasks(config, &rings, &config.degrees, "odd", &mut master);
    let control_tasks = tasks(config, &rings, &config.negative_degrees, "even", &mut master);

    let mut instances: Vec<InstanceRecord> = main_tasks
        .iter()
        .map(|t| run_task(t, Some(config.mode), budget, cap))
        .collect();
    let mut controls: Vec<InstanceRecord> =
        control_tasks.iter().map(|t| run_task(t, None, budget, cap)).collect();
    instances.sort_by(|a, b| a.key.cmp(&b.key));
    controls.sort_by(|a, b| a.key.cmp(&b.key));

    for rec in &instances {
        let verdict = if rec.verdict == Some(Verdict::Pass) { "PASS" } else { "FAIL" };
        eprintln!("{verdict} {} {}", rec.key, rec.ring);
    }
    for rec in &controls {
        let broke = !rec.base_isotropic && rec.extension_isotropic;
        eprintln!("{} {} {}", if broke { "BREAK" } else { "HOLD" }, rec.key, rec.ring);
    }

    let pass = instances.iter().filter(|r| r.verdict == Some(Verdict::Pass)).count();
    let descents: Vec<&DescentRecord> = instances.iter().filter_map(|r| r.descent.as_ref()).collect();
    let fallbacks = descents.iter().filter(|d| d.fallback).count();
    let mut histogram = BTreeMap::new();
    for d in &descents {
        let key = d.tower_depth.map_or_else(|| "none".to_string(), |k| k.to_string());
        *histogram.entry(key).or_insert(0) += 1;
    }
    let summary = Summary {
        pass,
        fail: instances.len() - pass,
        descents: descents.len(),
        fallback_rate: if descents.is_empty() { 0.0 } else { fallbacks as f64 / descents.len() as f64 },
        tower_depth_histogram: histogram,
        negative_controls: controls.len(),
        negative_breaks: controls
            .iter()
            .filter(|r| !r.base_isotropic && r.extension_isotropic)
            .count(),
    };
    Ok(CampaignReport { seed, mode: config.mode, instances, negative_controls: controls, summary })
}
