mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use h3nr_core::certify::{certify, search_primes, validate, APolicy, Certificate, ConstructionParams, Verdict, Witness};
use h3nr_core::geometry::{check_condition_ii_iii, check_condition_primed, Axis, LineArrangement, PrimedVariant};
use h3nr_core::oracle::{
    arrangement_agreement, conic_agreement, conic_corpus, exceptional_prime_set, random_arrangement, random_line_function,
};
use h3nr_core::symbol::LineClass;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const L1: [i64; 3] = [1, 1, 2];
const L2: [i64; 3] = [3, 3, 1];

const C1_TIME_LIMIT: Duration = Duration::from_secs(5);
const C3_RANGE: (u64, u64) = (13, 1000);
const C3_TIME_LIMIT: Duration = Duration::from_secs(300);
const C4_INSTANCES: usize = 1000;
const C4_PRIMES: [u64; 5] = [3, 5, 7, 13, 17];
const C5_SYMBOLS: usize = 1000;
const C5_PRIMES: [u64; 3] = [3, 5, 13];
const C5_MAX_DEGREE: usize = 4;
const C6_SAMPLES: usize = 500;
const C6_PRIMES: [u64; 3] = [5, 7, 13];
const C7_SAMPLES: usize = 500;
const C7_PRIMES: [u64; 4] = [5, 7, 13, 17];
const C7_CONIC_CORPUS: [(u64, usize); 5] = [(3, 10), (5, 10), (7, 10), (11, 10), (13, 10)];
const C7_ENTRY_DEGREE: usize = 1;
const C7_CONFIRM_DEGREE: usize = 6;
const C7_REFUTE_DEGREE: usize = 2;
const SEED: u64 = 0;

fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ salt)
}

fn standard() -> ConstructionParams {
    ConstructionParams::new(13, 2, L1, L2).unwrap()
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion1() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let start = Instant::now();
    let cert = pool.install(|| certify(&standard()));
    let elapsed = start.elapsed();
    ensure(
        cert.verdict() == Verdict::Certified && elapsed < C1_TIME_LIMIT,
        format!("{} in {:.1} ms on 1 thread, limit {:?}", cert.verdict, elapsed.as_secs_f64() * 1e3, C1_TIME_LIMIT),
    )
}

fn criterion2() -> Outcome {
    let cert = certify(&standard());
    let mut bad = Vec::new();
    let mut rows = 0;
    for r in cert.conditions.condition2.iter().filter(|r| r.witness.contains_key("residue_g1")) {
        rows += 1;
        let line = r.name.trim_start_matches("condition 2 [").trim_end_matches(']');
        let (g1, g2) = (r.witness["residue_g1"] == "zero", r.witness["residue_g2"] == "zero");
        let ok = match line {
            "A_x" => g1 && g2,
            "A_y" => g2,
            "A_z" => g1,
            _ if line.starts_with("B_1,") => !g1 && g2,
            _ if line.starts_with("B_2,") => g1 && !g2,
            _ => false,
        };
        if !ok {
            bad.push(format!("{line}: g1 {} g2 {}", r.witness["residue_g1"], r.witness["residue_g2"]));
        }
    }
    ensure(rows == 19 && bad.is_empty(), format!("{rows} support lines, mismatches: {bad:?}"))
}

fn criterion3() -> Outcome {
    let start = Instant::now();
    let exceptional = exceptional_prime_set(L1, L2).map_err(|e| e.to_string())?;
    let rows = search_primes(C3_RANGE.0, C3_RANGE.1, L1, L2, APolicy::Auto).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mismatches: Vec<u64> = rows
        .iter()
        .filter(|r| r.verdict.is_certified() == exceptional.contains(r.p))
        .map(|r| r.p)
        .collect();
    let certified = rows.iter().filter(|r| r.verdict.is_certified()).count();
    ensure(
        mismatches.is_empty() && elapsed < C3_TIME_LIMIT,
        format!(
            "{} primes, {certified} certified, mismatches {mismatches:?}, {:.2} s, limit {:?}",
            rows.len(),
            elapsed.as_secs_f64(),
            C3_TIME_LIMIT
        ),
    )
}

fn criterion4() -> Outcome {
    type Check = fn(h3nr_core::PrimeField, &mut ChaCha8Rng) -> bool;
    let rules: [(&str, Check); 4] = [
        ("rule 1 line", prres1_line),
        ("rule 1 plane", prres1_plane),
        ("rule 2 line", prres2_line),
        ("rule 2 plane", prres2_plane),
    ];
    let mut parts = Vec::new();
    let mut ok = true;
    for (n, (name, check)) in rules.iter().enumerate() {
        let mut r = rng(40 + n as u64);
        let pass = (0..C4_INSTANCES).filter(|i| check(field(C4_PRIMES[i % C4_PRIMES.len()]), &mut r)).count();
        ok &= pass == C4_INSTANCES;
        parts.push(format!("{name} {pass}/{C4_INSTANCES}"));
    }
    ensure(ok, parts.join(", "))
}

fn criterion5() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for p in C5_PRIMES {
        let k = field(p);
        let mut r = rng(50 + p);
        let pass = (0..C5_SYMBOLS)
            .filter(|_| {
                let a = random_line_function(k, C5_MAX_DEGREE, &mut r);
                let b = random_line_function(k, C5_MAX_DEGREE, &mut r);
                LineClass::symbol(k, vec![a, b]).reciprocity_holds()
            })
            .count();
        ok &= pass == C5_SYMBOLS;
        parts.push(format!("p={p} {pass}/{C5_SYMBOLS}"));
    }
    ensure(ok, parts.join(", "))
}

fn primed_agree(arr: &LineArrangement) -> bool {
    check_condition_primed(arr, PrimedVariant::IiPrime) == check_condition_ii_iii(arr, Axis::X)
        && check_condition_primed(arr, PrimedVariant::IiiPrime) == check_condition_ii_iii(arr, Axis::Y)
}

fn criterion6() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for p in C6_PRIMES {
        let k = field(p);
        let mut r = rng(60 + p);
        let pass = (0..C6_SAMPLES).filter(|_| primed_agree(&random_arrangement(k, &mut r))).count();
        ok &= pass == C6_SAMPLES;
        parts.push(format!("p={p} {pass}/{C6_SAMPLES}"));
    }
    let k = field(5);
    let coeffs: Vec<[i64; 3]> = (0..27).map(|n| [1 + n % 3, 1 + n / 3 % 3, 1 + n / 9]).collect();
    let mut total = 0;
    let mut pass = 0;
    for l1 in &coeffs {
        for l2 in &coeffs {
            total += 1;
            pass += primed_agree(&LineArrangement::new(k, *l1, *l2).unwrap()) as usize;
        }
    }
    ok &= pass == total;
    parts.push(format!("p=5 exhaustive {pass}/{total}"));
    ensure(ok, parts.join(", "))
}

fn criterion7() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for p in C7_PRIMES {
        let a = arrangement_agreement(field(p), C7_SAMPLES, &mut rng(70 + p));
        ok &= a.is_full() && a.samples == C7_SAMPLES;
        parts.push(format!("p={p} {}/{}", a.agree, a.samples));
    }
    let mut corpus = Vec::new();
    for (p, n) in C7_CONIC_CORPUS {
        corpus.extend(conic_corpus(field(p), n, C7_ENTRY_DEGREE, &mut rng(700 + p)));
    }
    let c = conic_agreement(&corpus, C7_CONFIRM_DEGREE, C7_REFUTE_DEGREE);
    ok &= c.is_consistent() && c.samples == 50;
    parts.push(format!(
        "conic: {} symbols, zero {}/{} confirmed, nonzero {} with {} contradicted",
        c.samples, c.zero_confirmed, c.zero, c.nonzero, c.nonzero_contradicted
    ));
    ensure(ok, parts.join(", "))
}

/// Every witness map in the certificate, in document order.
fn slots(cert: &mut Certificate) -> Vec<&mut Witness> {
    let c = &mut cert.conditions;
    c.arrangement
        .iter_mut()
        .chain(c.structure.iter_mut())
        .chain(c.condition1.iter_mut())
        .chain(c.condition2.iter_mut())
        .chain(c.condition3.iter_mut())
        .chain(c.arason_gate.iter_mut())
        .map(|r| &mut r.witness)
        .chain(cert.witnesses.condition1.iter_mut())
        .collect()
}

fn corrupt(value: &str) -> String {
    match value.parse::<u64>() {
        Ok(n) => (n + 1).to_string(),
        Err(_) => format!("{value}?"),
    }
}

fn criterion8() -> Outcome {
    let params = standard();
    let json = certify(&params).to_json();
    let runs = (0..3).all(|_| certify(&params).to_json() == json);
    let valid = validate(&json).is_valid();
    let cert = Certificate::from_json(&json).map_err(|e| e.to_string())?;
    let mut probe = cert.clone();
    let keys: Vec<(usize, String)> = slots(&mut probe)
        .iter()
        .enumerate()
        .flat_map(|(n, w)| w.keys().map(move |k| (n, k.clone())).collect::<Vec<_>>())
        .collect();
    let mut undetected = Vec::new();
    for (n, key) in &keys {
        let mut bad = cert.clone();
        let w = &mut slots(&mut bad)[*n];
        let v = w.get_mut(key).unwrap();
        *v = corrupt(v);
        if validate(&bad.to_json()).is_valid() {
            undetected.push(format!("slot {n} key {key}"));
        }
    }
    ensure(
        runs && valid && undetected.is_empty(),
        format!(
            "reruns identical: {runs}, original valid: {valid}, {} slots corrupted, undetected {undetected:?}",
            keys.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("standard example certifies", criterion1),
        ("condition-2 case pattern", criterion2),
        ("prime search matches exceptional set", criterion3),
        ("residue-rule conformance", criterion4),
        ("reciprocity self-test", criterion5),
        ("primed condition equivalence", criterion6),
        ("oracle agreement", criterion7),
        ("determinism and soundness", criterion8),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} ({name}): PASS - {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL - {detail}", n + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
