//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

mod common;

use std::time::{Duration, Instant};

use common::*;
use quadforms::oracle::{decide_isotropy, isotropy_oracle, witt_index_oracle, OracleMode};
use quadforms::rings::{field, find_irreducible, linalg, Elem, Poly, Ring, DEFAULT_CAP};
use quadforms::springer::{
    construct_isotropic_subspace, springer_descend, unit_transfer_form, vectors_from_frame,
    verify_artin_springer, verify_trace, DescentTrace, EtaleExtension, HyperbolicFrame, Verdict,
    VerifyMode, DEFAULT_BUDGET,
};
use quadforms::witt::{
    find_isotropic, is_hyperbolic, lift_prescribed, witt_decompose, witt_equivalent,
    witt_ring_table,
};
use quadforms::{QuadraticSpace, Vector};
use rand::seq::SliceRandom;
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn selected(id: usize) -> bool {
    match std::env::var("ACCEPTANCE_ONLY") {
        Ok(list) => list.split(',').any(|x| x.trim() == id.to_string()),
        Err(_) => true,
    }
}

fn run(id: usize, name: &str, limit: Duration, body: impl FnOnce() -> Outcome) -> Option<bool> {
    if !selected(id) {
        return None;
    }
    let start = Instant::now();
    let out = body();
    let elapsed = start.elapsed();
    let pass = out.pass && elapsed <= limit;
    println!(
        "{} criterion {id:>2}: {name} ({}; {:.2}s, limit {}s)",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64(),
        limit.as_secs(),
    );
    Some(pass)
}

/// `1` and a nonsquare in every residue field, lifted in all combinations.
fn square_class_units(r: &Ring) -> Vec<Elem> {
    let per_field: Vec<Vec<Elem>> = r
        .residue_fields()
        .iter()
        .map(|k| {
            let d = k
                .elements(DEFAULT_CAP)
                .unwrap()
                .find(|x| !field::is_square(k, x))
                .unwrap();
            vec![k.one(), d]
        })
        .collect();
    let mut out = vec![Vec::new()];
    for choices in &per_field {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Elem>| {
                choices.iter().map(move |c| {
                    let mut p = prefix.clone();
                    p.push(c.clone());
                    p
                })
            })
            .collect();
    }
    out.iter().map(|t| r.lift_residues(t)).collect()
}

/// Diagonal forms of rank 1 and 2 over square-class representatives, up to
/// reordering.
fn small_diagonal_forms(r: &Ring) -> Vec<QuadraticSpace> {
    let units = square_class_units(r);
    let mut out = Vec::new();
    for (i, a) in units.iter().enumerate() {
        out.push(QuadraticSpace::diagonal(r, std::slice::from_ref(a)).unwrap());
        for b in &units[i..] {
            out.push(QuadraticSpace::diagonal(r, &[a.clone(), b.clone()]).unwrap());
        }
    }
    out
}

fn is_irreducible_everywhere(r: &Ring, f: &Poly) -> bool {
    r.residue_fields().iter().enumerate().all(|(i, k)| {
        let fk = Poly::new(f.coeffs().iter().map(|c| r.project(i, c)).collect());
        field::factor(k, &fk).len() == 1
    })
}

fn random_irreducible(r: &Ring, n: usize, g: &mut rand_chacha::ChaCha8Rng) -> Poly {
    loop {
        let f = random_separable(r, n, g);
        if is_irreducible_everywhere(r, &f) {
            return f;
        }
    }
}

fn f27() -> Ring {
    Ring::galois(3, 1, &[1, -1, 0, 1]).unwrap()
}

fn artin_springer() -> Outcome {
    let rings = [
        f(3),
        f(5),
        f9(),
        zmod(3, 2),
        zmod(3, 3),
        product(&[f(3), f(5)]),
        product(&[zmod(3, 2), f(3)]),
    ];
    let mut g = rng(1);
    let (mut checks, mut forms, mut failures, mut residue_mode) = (0, 0, 0, 0);
    for r in &rings {
        for space in small_diagonal_forms(r) {
            if decide_isotropy(&space, DEFAULT_CAP).unwrap().0 {
                continue;
            }
            forms += 1;
            for n in [3, 5] {
                let fs = [
                    find_irreducible(r, n, 1_000_000).unwrap(),
                    random_separable(r, n, &mut g),
                ];
                for f in fs {
                    let ext = EtaleExtension::new(r, &f).unwrap();
                    let rep = verify_artin_springer(
                        &space,
                        &ext,
                        VerifyMode::Oracle,
                        &mut g,
                        DEFAULT_BUDGET,
                        DEFAULT_CAP,
                    )
                    .unwrap();
                    checks += 1;
                    if rep.verdict != Verdict::Pass || rep.extension_isotropic {
                        failures += 1;
                    }
                    if rep.extension_oracle == OracleMode::Residue {
                        residue_mode += 1;
                    }
                }
            }
        }
    }
    outcome(
        failures == 0 && forms > 0,
        format!(
            "{forms} anisotropic forms, {checks} extensions checked, {failures} failures, \
             {residue_mode} decided on residue fields"
        ),
    )
}

fn odd_degree_sharpness() -> Outcome {
    let f3 = f(3);
    let space = QuadraticSpace::diagonal_ints(&f3, &[1, 1]).unwrap();
    let f9 = EtaleExtension::new(&f3, &Poly::from_ints(&f3, &[1, 0, 1])).unwrap();
    let base = isotropy_oracle(&space, DEFAULT_CAP).unwrap();
    let over = isotropy_oracle(&f9.base_change(&space).unwrap(), DEFAULT_CAP).unwrap();
    outcome(
        base.is_none() && over.is_some(),
        format!("<1,1> anisotropic over F_3: {}, isotropic over F_9: {}", base.is_none(), over.is_some()),
    )
}

fn two_dimensional_determinant() -> Outcome {
    let (mut total, mut good) = (0, 0);
    for p in [3, 5] {
        let r = f(p);
        let frame_for = |a: &Elem| HyperbolicFrame {
            pairs: vec![(ints(&r, &[1, 0, 0]), ints(&r, &[0, 1, 0]))],
            w: ints(&r, &[0, 0, 1]),
            a: a.clone(),
        };
        let elems: Vec<Elem> = r.elements(DEFAULT_CAP).unwrap().collect();
        for alpha in &elems {
            for beta in &elems {
                let disc = r.add(&r.mul(beta, beta), &r.mul(&r.from_int(4), alpha));
                if !r.is_unit(&disc) {
                    continue;
                }
                let f = Poly::new(vec![r.neg(alpha), r.neg(beta), r.one()]);
                let ext = EtaleExtension::new(&r, &f).unwrap();
                for a in elems.iter().filter(|a| r.is_unit(a)) {
                    let space = QuadraticSpace::hyperbolic(&r, 1)
                        .orth_sum(&QuadraticSpace::diagonal(&r, std::slice::from_ref(a)).unwrap())
                        .unwrap();
                    let vs = vectors_from_frame(&r, &ext, &frame_for(a), &mut rng(0));
                    let det = linalg::det(&r, &space.gram_of(&vs));
                    let expected = r.neg(&r.mul(&r.mul(a, a), &disc));
                    let iso = ext
                        .base_change(&space)
                        .unwrap()
                        .q(&ext.combine(&vs))
                        .unwrap()
                        .is_zero();
                    total += 1;
                    if det == expected && iso {
                        good += 1;
                    }
                }
            }
        }
    }
    outcome(good == total && total > 0, format!("{good}/{total} instances over F_3 and F_5"))
}

fn subspace_contract() -> Outcome {
    let rings: Vec<Ring> = small_rings();
    let mut g = rng(4);
    let (mut total, mut good) = (0, 0);
    for k in 0..500 {
        let n = [2, 3, 5][k % 3];
        let r = &rings[(k / 3) % rings.len()];
        let rank = n + 1 + g.gen_range(0..3);
        let space = random_space(r, rank, &mut g);
        let f = random_separable(r, n, &mut g);
        let ext = EtaleExtension::new(r, &f).unwrap();
        total += 1;
        let Ok(out) = construct_isotropic_subspace(&space, &ext, &mut g) else {
            continue;
        };
        let det = linalg::det(r, &space.gram_of(&out.vectors));
        let iso = ext.base_change(&space).unwrap().q(&out.combination).unwrap().is_zero();
        if out.vectors.len() == n && r.is_unit(&det) && iso {
            good += 1;
        }
    }
    outcome(good == total, format!("{good}/{total} instances"))
}

fn transfer_form() -> Outcome {
    let rings = [f(3), f(5), f9(), zmod(3, 2), product(&[f(3), f(5)])];
    let mut g = rng(5);
    let (mut total, mut good) = (0, 0);
    for r in &rings {
        let one = QuadraticSpace::diagonal(r, &[r.one()]).unwrap();
        for n in [3, 5, 7] {
            for _ in 0..20 {
                let f = random_separable(r, n, &mut g);
                let ext = EtaleExtension::new(r, &f).unwrap();
                let form = unit_transfer_form(&ext).unwrap();
                let d = witt_decompose(&form, &mut g);
                total += 1;
                if d.kernel.rank() == 1
                    && witt_equivalent(&d.kernel, &one).unwrap()
                    && witt_equivalent(&form, &one).unwrap()
                {
                    good += 1;
                }
            }
        }
    }
    outcome(good == total, format!("{good}/{total} transfer forms equivalent to <1>"))
}

fn injectivity() -> Outcome {
    let rings = [f(3), f(5), f(7), f9(), zmod(3, 2), product(&[f(3), f(5)])];
    let mut g = rng(6);
    let (mut total, mut hyperbolic_over_s, mut good) = (0, 0, 0);
    for k in 0..200 {
        let r = &rings[k % rings.len()];
        let m = 1 + g.gen_range(0..2);
        // half of the samples are hyperbolic in disguise
        let space = if k % 2 == 0 {
            let h = QuadraticSpace::hyperbolic(r, m);
            loop {
                let basis: Vec<Vector> = (0..2 * m).map(|_| random_vector(r, 2 * m, &mut g)).collect();
                if let Ok((_, s)) = h.subspace(&basis) {
                    break s;
                }
            }
        } else {
            random_space(r, 2 * m, &mut g)
        };
        let n = [3, 5][g.gen_range(0..2)];
        let f = random_separable(r, n, &mut g);
        let ext = EtaleExtension::new(r, &f).unwrap();
        total += 1;
        if is_hyperbolic(&ext.base_change(&space).unwrap()) {
            hyperbolic_over_s += 1;
            if is_hyperbolic(&space) {
                good += 1;
            }
        } else {
            good += 1;
        }
    }
    outcome(
        good == total && hyperbolic_over_s > 0,
        format!("{good}/{total} consistent, {hyperbolic_over_s} hyperbolic over the extension"),
    )
}

fn descent_round_trip() -> Outcome {
    let rings = [f(3), f(5), f9()];
    let mut g = rng(7);
    let (mut total, mut valid, mut fallbacks) = (0, 0, 0);
    for k in 0..100 {
        let r = &rings[k % 3];
        let n = [3, 5][(k / 3) % 2];
        let space = random_space(r, 3 + g.gen_range(0..2), &mut g);
        let f = random_irreducible(r, n, &mut g);
        let ext = EtaleExtension::new(r, &f).unwrap();
        let u = find_isotropic(&ext.base_change(&space).unwrap(), &mut g).unwrap();
        let trace = springer_descend(&space, &ext, &u, &mut g, DEFAULT_BUDGET).unwrap();
        let reread = DescentTrace::from_json(r, &trace.to_json(r)).unwrap();
        total += 1;
        if trace.fallback {
            fallbacks += 1;
        }
        if space.is_isotropic_vector(&trace.vector)
            && reread == trace
            && verify_trace(&space, ext.modulus(), &reread).is_ok()
        {
            valid += 1;
        }
    }
    let rate = fallbacks as f64 / total as f64;
    outcome(
        valid == total && rate < 0.5,
        format!(
            "{valid}/{total} valid traces, {} pure descents, fallback rate {rate:.2}",
            total - fallbacks
        ),
    )
}

fn witt_tables() -> Outcome {
    let fields = [(3u128, f(3)), (5, f(5)), (7, f(7)), (9, f9()), (27, f27())];
    let mut notes = Vec::new();
    let mut pass = true;
    for (q, k) in &fields {
        let t = witt_ring_table(k).unwrap();
        let shape_ok = t.order() == 4
            && if q % 4 == 3 { t.is_cyclic() && !t.is_klein_four() } else { t.is_klein_four() };
        // every table entry re-derived by the hyperbolicity oracle on A + B - C
        let reps: Vec<QuadraticSpace> = t
            .representatives
            .iter()
            .map(|d| QuadraticSpace::diagonal(k, d).unwrap())
            .collect();
        let mut oracle_ok = true;
        let mut checked = 0;
        for i in 0..4 {
            for j in 0..4 {
                let sum = reps[i].orth_sum(&reps[j]).unwrap();
                let c = &reps[t.add[i][j]];
                let test = sum.orth_sum(&c.negate()).unwrap();
                let size = q.pow(test.rank() as u32);
                if size > DEFAULT_CAP {
                    continue;
                }
                checked += 1;
                if witt_index_oracle(&test, DEFAULT_CAP).unwrap() * 2 != test.rank() {
                    oracle_ok = false;
                }
            }
        }
        pass &= shape_ok && oracle_ok;
        notes.push(format!(
            "F_{q}: {} ({checked} sums oracle-checked)",
            if t.is_cyclic() { "Z/4" } else { "Klein four" }
        ));
    }
    outcome(pass, notes.join(", "))
}

fn oracle_concordance() -> Outcome {
    let mut g = rng(9);
    let (mut iso_checks, mut index_checks, mut equiv_checks, mut mismatches) = (0, 0, 0, 0);
    for r in small_rings() {
        let size = r.cardinality().unwrap();
        let units = square_class_units(&r);
        let mut family: Vec<QuadraticSpace> = Vec::new();
        for rank in 1..=4usize {
            if size.pow(rank as u32) > DEFAULT_CAP {
                break;
            }
            // all diagonal forms over square-class representatives up to order
            let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
            for _ in 0..rank {
                combos = combos
                    .into_iter()
                    .flat_map(|c| {
                        let start = c.last().copied().unwrap_or(0);
                        (start..units.len()).map(move |i| {
                            let mut c = c.clone();
                            c.push(i);
                            c
                        })
                    })
                    .collect();
            }
            for c in combos {
                let d: Vec<Elem> = c.iter().map(|&i| units[i].clone()).collect();
                family.push(QuadraticSpace::diagonal(&r, &d).unwrap());
            }
            family.push(random_space(&r, rank, &mut g));
        }
        for s in &family {
            let oracle_iso = isotropy_oracle(s, DEFAULT_CAP).unwrap().is_some();
            iso_checks += 1;
            if find_isotropic(s, &mut g).is_some() != oracle_iso {
                mismatches += 1;
            }
            if size.pow(s.rank() as u32) <= 20_000 {
                index_checks += 1;
                if witt_decompose(s, &mut g).index != witt_index_oracle(s, DEFAULT_CAP).unwrap() {
                    mismatches += 1;
                }
            }
        }
        let small: Vec<&QuadraticSpace> = family.iter().filter(|s| s.rank() <= 2).collect();
        for a in &small {
            for b in &small {
                let test = a.orth_sum(&b.negate()).unwrap();
                if size.pow(test.rank() as u32) > 20_000 {
                    continue;
                }
                equiv_checks += 1;
                let oracle = (a.rank() + b.rank()) % 2 == 0
                    && witt_index_oracle(&test, DEFAULT_CAP).unwrap() * 2 == test.rank();
                if witt_equivalent(a, b).unwrap() != oracle {
                    mismatches += 1;
                }
            }
        }
    }
    outcome(
        mismatches == 0,
        format!(
            "{iso_checks} isotropy, {index_checks} index, {equiv_checks} equivalence checks, \
             {mismatches} mismatches"
        ),
    )
}

fn lifting() -> Outcome {
    let rings = [zmod(3, 3), product(&[zmod(3, 2), f(5)])];
    let mut g = rng(10);
    let (mut total, mut good) = (0, 0);
    for k in 0..500 {
        let r = &rings[k % 2];
        let n = 2 + g.gen_range(0..3);
        let space = random_space(r, n, &mut g);
        let v = loop {
            let v = random_vector(r, n, &mut g);
            if space.is_unimodular(&v) {
                break v;
            }
        };
        let targets: Vec<Vector> = space
            .residue_spaces()
            .iter()
            .enumerate()
            .map(|(i, (res, _))| {
                let value = res.q(&space.residue_vector(i, &v)).unwrap();
                let all = quadforms::oracle::all_vectors(res.ring(), n, DEFAULT_CAP).unwrap();
                let matches: Vec<Vector> = all
                    .into_iter()
                    .filter(|t| t.iter().any(|x| !x.is_zero()) && res.q(t).unwrap() == value)
                    .collect();
                matches.choose(&mut g).unwrap().clone()
            })
            .collect();
        total += 1;
        let Ok(u) = lift_prescribed(&space, &v, &targets) else {
            continue;
        };
        let residues_ok = targets.iter().enumerate().all(|(i, t)| &space.residue_vector(i, &u) == t);
        if space.q(&u).unwrap() == space.q(&v).unwrap() && residues_ok {
            good += 1;
        }
    }
    outcome(good == total, format!("{good}/{total} lifts"))
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        run(1, "odd-degree extensions preserve anisotropy", secs(300), artin_springer),
        run(2, "degree 2 breaks anisotropy of <1,1> over F_3", secs(60), odd_degree_sharpness),
        run(3, "rank-2 construction determinant identity", secs(1), two_dimensional_determinant),
        run(4, "isotropic subspace construction contract", secs(120), subspace_contract),
        run(5, "unit transfer form is Witt-equivalent to <1>", secs(60), transfer_form),
        run(6, "hyperbolic over odd extension implies hyperbolic", secs(60), injectivity),
        run(7, "descent round trip", secs(300), descent_round_trip),
        run(8, "Witt ring tables of finite fields", secs(300), witt_tables),
        run(9, "oracle concordance", secs(300), oracle_concordance),
        run(10, "prescribed-residue lifting", secs(60), lifting),
    ];
    let ran: Vec<bool> = results.into_iter().flatten().collect();
    let passed = ran.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", ran.len());
    if passed != ran.len() {
        std::process::exit(1);
    }
}
