//! Reproduction checks for the headline results, plus the built-in corpus.

use std::path::Path;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::Value;

use crate::builders::{
    build_clock_chain, build_toric, code_6_1_3_d7, code_8_1_3_d3, double_code_d6, double_to_css, embed_qudit_code,
    five_qudit_code, lift_doubled, ToricSpec,
};
use crate::code::PfCode;
use crate::io::{parse_code, parse_json, read_text, Provenance};
use crate::oracle::{homomorphism_suite, relation_suite, JwRep, DEFAULT_DIM_CAP};
use crate::pf::PfOperator;
use crate::search::{find_codes, SearchSpec, SearchStatus};

#[derive(Clone, Debug, Serialize)]
pub struct ReproCheck {
    pub id: u32,
    pub name: String,
    pub computed: String,
    pub expected: String,
    pub passed: bool,
    pub elapsed_ms: u128,
}

impl ReproCheck {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:>2}: {} | computed: {} | expected: {} | {} ms",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.computed,
            self.expected,
            self.elapsed_ms
        )
    }
}

fn timed(id: u32, name: &str, limit: Duration, f: impl FnOnce() -> Result<(String, String, bool), String>) -> ReproCheck {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    let (computed, expected, ok) = result.unwrap_or_else(|e| (format!("error: {e}"), String::new(), false));
    let in_time = elapsed <= limit;
    ReproCheck {
        id,
        name: name.to_string(),
        computed: if in_time {
            computed
        } else {
            format!("{computed} (over time limit {} s)", limit.as_secs())
        },
        expected,
        passed: ok && in_time,
        elapsed_ms: elapsed.as_millis(),
    }
}

fn e<T: std::fmt::Display>(err: T) -> String {
    err.to_string()
}

fn k_and_d(code: &PfCode) -> Result<(String, Option<u32>, Option<usize>), String> {
    let v = code.validate();
    let k = code.logical_qudits().map_err(e)?;
    let d = code.distance(None).map_err(e)?.exact();
    Ok((format!("valid={} k={:?} d={:?}", v.is_valid(), k, d), k, d))
}

pub fn criterion_1() -> ReproCheck {
    timed(1, "[[8,1,3]]_3 generators", Duration::from_secs(1), || {
        let code = code_8_1_3_d3();
        let (text, k, d) = k_and_d(&code)?;
        Ok((text, "valid=true k=Some(1) d=Some(3)".into(), code.validate().is_valid() && k == Some(1) && d == Some(3)))
    })
}

pub fn criterion_2() -> ReproCheck {
    timed(2, "D=3 exhaustive search minimality", Duration::from_secs(600), || {
        let mut small = SearchSpec::exhaustive(3, 6, 1, 3);
        let plain = find_codes(&small, true).map_err(e)?.certificate;
        small.symmetry_reduction = true;
        let reduced = find_codes(&small, true).map_err(e)?.certificate;
        let mut eight = SearchSpec::exhaustive(3, 8, 1, 3);
        eight.symmetry_reduction = true;
        eight.max_hits = Some(1);
        let found = find_codes(&eight, true).map_err(e)?.certificate;
        let hit = found.hits.first().map(|h| (h.k, h.distance));
        let ok = plain.status == SearchStatus::NoneExists
            && reduced.status == SearchStatus::NoneExists
            && found.status == SearchStatus::Found
            && hit == Some((1, 3));
        Ok((
            format!(
                "2n=6: {:?} ({} tuples), reduced {:?}; 2n=8: {:?} first hit (k,d)={:?}",
                plain.status, plain.complete_tuples, reduced.status, found.status, hit
            ),
            "2n=6: NoneExists; 2n=8: Found (1,3)".into(),
            ok,
        ))
    })
}

pub fn criterion_3() -> ReproCheck {
    timed(3, "[[6,1,3]]_7 generators", Duration::from_secs(60), || {
        let code = code_6_1_3_d7();
        let (text, k, d) = k_and_d(&code)?;
        Ok((text, "valid=true k=Some(1) d=Some(3)".into(), code.validate().is_valid() && k == Some(1) && d == Some(3)))
    })
}

pub fn criterion_4() -> ReproCheck {
    timed(4, "D=6 doubled code", Duration::from_secs(60), || {
        let code = double_code_d6(&code_8_1_3_d3()).map_err(e)?;
        let valid = code.validate().is_valid();
        let dim = code.codespace_dim().map_err(e)?;
        // (g1^-1 g2 g3 g7)^2 and (g2^-1 g3^-1 g6)^2 lifted from D=3
        let a = lift_doubled(&PfOperator::from_signed(3, 0, &[-1, 1, 1, 0, 0, 0, 1, 0]).map_err(e)?).map_err(e)?;
        let b = lift_doubled(&PfOperator::from_signed(3, 0, &[0, -1, -1, 0, 0, 1, 0, 0]).map_err(e)?).map_err(e)?;
        let c = a.commutation_exponent(&b).map_err(e)?;
        let order = (1..=6).find(|t| (c * t) % 6 == 0).unwrap();
        let logical = code.is_logical(&a).map_err(e)? && code.is_logical(&b).map_err(e)?;
        Ok((
            format!(
                "generators={} valid={valid} dim={dim} commutation={c} order={order} logical={logical}",
                code.generators().len()
            ),
            "generators=7 valid=true dim=3 order=3 logical=true".into(),
            valid && dim == 3 && order == 3 && logical && code.generators().len() == 7,
        ))
    })
}

/// Named codes checked by the corpus-wide identities.
pub fn corpus() -> Vec<(String, PfCode, Provenance)> {
    let mut out = vec![
        ("pf_8_1_3_d3".to_string(), code_8_1_3_d3(), Provenance::new("code_8_1_3_d3", &[])),
        ("pf_6_1_3_d7".to_string(), code_6_1_3_d7(), Provenance::new("code_6_1_3_d7", &[])),
        (
            "pf_8_d6_doubled".to_string(),
            double_code_d6(&code_8_1_3_d3()).expect("doubling"),
            Provenance::new("double_code_d6", &[("source", Value::from("pf_8_1_3_d3"))]),
        ),
        (
            "pf_20_five_qutrit_embedded".to_string(),
            embed_qudit_code(&five_qudit_code(3).expect("five-qudit code")).expect("embedding"),
            Provenance::new("embed_qudit_code", &[("source", Value::from("five_qudit_code(3)"))]),
        ),
    ];
    for (d, n) in [(2u64, 2usize), (3, 3), (3, 4), (5, 3)] {
        out.push((
            format!("clock_chain_d{d}_n{n}"),
            build_clock_chain(d, n).expect("chain"),
            Provenance::new("build_clock_chain", &[("D", Value::from(d)), ("n", Value::from(n))]),
        ));
    }
    for (a, b) in [(2usize, 2usize), (2, 3)] {
        let spec = ToricSpec { p: 2, l: 1, a, b };
        out.push((
            format!("toric_p2_l1_{a}x{b}"),
            build_toric(spec).expect("toric").code,
            Provenance::new(
                "build_toric",
                &[
                    ("a", Value::from(a)),
                    ("b", Value::from(b)),
                    ("l", Value::from(1)),
                    ("p", Value::from(2)),
                ],
            ),
        ));
    }
    out
}

/// |S| x dim C = D^n over the corpus, plus projector traces where the
/// Hilbert space fits. Codes in `corpus_dir` (`*.json`) are included.
pub fn criterion_5(corpus_dir: Option<&Path>) -> ReproCheck {
    timed(5, "|S| x dim C = D^n over the corpus; oracle traces", Duration::from_secs(600), || {
        let mut codes: Vec<(String, PfCode)> = corpus().into_iter().map(|(n, c, _)| (n, c)).collect();
        if let Some(dir) = corpus_dir {
            let mut paths: Vec<_> = std::fs::read_dir(dir)
                .map_err(e)?
                .filter_map(|p| p.ok().map(|p| p.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            paths.sort();
            for p in paths {
                // qudit check-matrix files live alongside the mode codes
                let text = read_text(&p).map_err(e)?;
                let value: Value = parse_json(&text).map_err(|err| format!("{}: {err}", p.display()))?;
                if value.get("num_modes").is_none() {
                    continue;
                }
                let code = parse_code(&text).map_err(|err| format!("{}: {err}", p.display()))?;
                codes.push((p.display().to_string(), code));
            }
        }
        let mut ok = true;
        let mut traced = 0;
        for (name, code) in &codes {
            let order = code.group_order().map_err(e)?;
            let dim = code.codespace_dim().map_err(e)?;
            if Some(order * dim) != (code.modulus() as u128).checked_pow(code.n() as u32) {
                return Ok((format!("{name}: {order} x {dim}"), "D^n".into(), false));
            }
            if (code.modulus() as u128).pow(code.n() as u32) <= DEFAULT_DIM_CAP as u128 {
                let rep = JwRep::new(code.modulus(), code.n()).map_err(e)?;
                let (_, tr) = rep.projector(code).map_err(e)?;
                ok &= (tr - dim as f64).abs() < 1e-6;
                traced += 1;
            }
        }
        Ok((
            format!("{} codes satisfy the identity, {traced} traces match", codes.len()),
            "all identities exact, traces within 1e-6".into(),
            ok,
        ))
    })
}

pub fn criterion_6() -> ReproCheck {
    timed(6, "five-qutrit code embedded on 20 modes", Duration::from_secs(300), || {
        let q = five_qudit_code(3).map_err(e)?;
        let qk = q.logical_qudits().map_err(e)?;
        let qd = q.distance(5).map(|(w, _)| w);
        let code = embed_qudit_code(&q).map_err(e)?;
        let (text, k, d) = k_and_d(&code)?;
        Ok((
            format!("input k={qk:?} d={qd:?}; modes={} {text}", code.num_modes()),
            "input k=1 d=3; modes=20 k=1 d=6".into(),
            qk == Some(1) && qd == Some(3) && code.num_modes() == 20 && k == Some(1) && d == Some(6),
        ))
    })
}

pub fn criterion_7() -> ReproCheck {
    timed(7, "CSS doubling of [[8,1,3]]_3", Duration::from_secs(60), || {
        let css = double_to_css(&code_8_1_3_d3()).map_err(e)?;
        let commuting = css.check_commuting().is_ok();
        let k = css.logical_qudits().map_err(e)?;
        Ok((
            format!("qudits={} k'={k:?} commuting={commuting}", css.num_qudits()),
            "qudits=8 k'=2 commuting=true".into(),
            css.num_qudits() == 8 && k == Some(2) && commuting,
        ))
    })
}

pub fn criterion_8() -> ReproCheck {
    timed(8, "toric codes D=4", Duration::from_secs(30), || {
        let t = build_toric(ToricSpec { p: 2, l: 1, a: 2, b: 2 }).map_err(e)?;
        let valid = t.code.validate().is_valid();
        let k = t.code.logical_qudits().map_err(e)?;
        let zero_sum = |ops: &[PfOperator]| {
            let m = ops[0].num_modes();
            (0..m).all(|j| ops.iter().map(|o| o.alpha()[j]).sum::<u64>() % 4 == 0)
        };
        let relations = zero_sum(&t.stars) && zero_sum(&t.plaquettes);
        let charges: Vec<u64> = t.horizontal.iter().chain(&t.vertical).map(|o| o.charge()).collect();
        let basis_charges: Vec<u64> = t.code.logical_basis().map_err(e)?.iter().map(|o| o.charge()).collect();
        let t23 = build_toric(ToricSpec { p: 2, l: 1, a: 2, b: 3 }).map_err(e)?;
        let k23 = t23.code.logical_qudits().map_err(e)?;
        let v23: Vec<u64> = t23.vertical.iter().map(|o| o.charge()).collect();
        let h23: Vec<u64> = t23.horizontal.iter().map(|o| o.charge()).collect();
        let ok = valid
            && k == Some(2)
            && relations
            && charges.iter().chain(&basis_charges).all(|&c| c == 0)
            && t23.code.validate().is_valid()
            && k23 == Some(2)
            && v23.contains(&2)
            && h23.iter().all(|&c| c == 0);
        Ok((
            format!(
                "2x2: valid={valid} k={k:?} relations={relations} charges={charges:?}; 2x3: k={k23:?} horizontal={h23:?} vertical={v23:?}"
            ),
            "2x2: k=2, relations hold, charges all 0; 2x3: k=2, a vertical charge 2".into(),
            ok,
        ))
    })
}

pub fn criterion_9() -> ReproCheck {
    timed(9, "clock chains D in {2,3,5}, n in {2,3,4}", Duration::from_secs(120), || {
        let mut bad = Vec::new();
        for d in [2u64, 3, 5] {
            for n in 2..=4usize {
                let code = build_clock_chain(d, n).map_err(e)?;
                let k = code.logical_qudits().map_err(e)?;
                let dist = code.distance(None).map_err(e)?.exact();
                let lcon = code.l_con().map_err(e)?.map(|w| w.diameter);
                if k != Some(1) || dist != Some(1) || lcon != Some(2 * n) {
                    bad.push(format!("D={d} n={n}: k={k:?} d={dist:?} l_con={lcon:?}"));
                }
            }
        }
        Ok((
            if bad.is_empty() { "all 9 chains: k=1 d=1 l_con=2n".into() } else { bad.join("; ") },
            "k=1 d=1 l_con=2n".into(),
            bad.is_empty(),
        ))
    })
}

pub fn criterion_10() -> ReproCheck {
    timed(10, "oracle relations, homomorphism, syndromes", Duration::from_secs(600), || {
        let mut worst: f64 = 0.0;
        let mut failed = Vec::new();
        for d in 2..=5u64 {
            for n in 1..=3usize {
                let lines = relation_suite(d, n)
                    .map_err(e)?
                    .into_iter()
                    .chain(homomorphism_suite(d, n, 1000, 17 * d + n as u64).map_err(e)?);
                for l in lines {
                    worst = worst.max(l.max_error);
                    if !l.passed {
                        failed.push(format!("D={d} n={n} {}", l.name));
                    }
                }
            }
        }
        let code = code_8_1_3_d3();
        let rep = JwRep::new(3, 4).map_err(e)?;
        let (p, _) = rep.projector(&code).map_err(e)?;
        let errors = weight_at_most_two(3, 8);
        let mut mismatches = 0;
        for err in &errors {
            if rep.syndrome_sim(&code, &p, err).map_err(e)? != code.syndrome(err).map_err(e)? {
                mismatches += 1;
            }
        }
        Ok((
            format!(
                "max relation error {worst:.1e}, failures {failed:?}; syndromes {}/{} agree",
                errors.len() - mismatches,
                errors.len()
            ),
            "errors < 1e-9; all syndromes agree".into(),
            failed.is_empty() && mismatches == 0,
        ))
    })
}

/// Every operator with trivial phase and support of size at most two.
pub fn weight_at_most_two(modulus: u64, num_modes: usize) -> Vec<PfOperator> {
    let mut out = vec![PfOperator::identity(modulus, num_modes).expect("identity")];
    for i in 0..num_modes {
        for a in 1..modulus {
            let mut alpha = vec![0; num_modes];
            alpha[i] = a;
            out.push(PfOperator::new(modulus, 0, alpha.clone()).expect("residues"));
            for j in i + 1..num_modes {
                for b in 1..modulus {
                    alpha[j] = b;
                    out.push(PfOperator::new(modulus, 0, alpha.clone()).expect("residues"));
                }
                alpha[j] = 0;
            }
        }
    }
    out
}

pub fn run_all(corpus_dir: Option<&Path>) -> Vec<ReproCheck> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(corpus_dir),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ]
}
