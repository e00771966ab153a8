use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use tiling_core::annihilator::{
    decide_with_stats, level_solution, verify_annihilator, AnnihilatorVerdict, AnnihilatorWitness,
    Capacity, CharacterVector, DEFAULT_MAX_TERMS,
};
use tiling_core::cyclotomic::{enumerate_minimal_tuples, DEFAULT_OMEGA_CAP};
use tiling_core::group::{convolve_periodic, l1_norm, PeriodicMap};
use tiling_core::multitile::{
    box_refute, decide_multitile_with_stats, verify_multitile, MultitileVerdict, SearchBudget,
    TorusAssignment,
};
use tiling_core::structure::{
    complement, dilation_candidate_ladder, dilation_check, find_dilation_modulus, slices,
    slicing_periodicity_check, wedge,
};
use tiling_core::{Error, RationalMod1};

use crate::problem::{parse_coeff, parse_periodic};
use crate::{json as j, Answer, CliError, GlobalOpts, Outcome, ProblemFile};

/// Largest `‖f‖₁` for which the dilation ladder's first rung fits in 64 bits.
const MAX_LADDER_L1: u64 = 40;

fn schema(path: &str, msg: impl Into<String>) -> CliError {
    CliError::Schema {
        path: path.to_string(),
        msg: msg.into(),
    }
}

fn capacity(opts: &GlobalOpts) -> Capacity {
    Capacity {
        max_terms: opts.cap_n.unwrap_or(DEFAULT_MAX_TERMS),
        omega_cap: opts.omega_cap.unwrap_or(DEFAULT_OMEGA_CAP),
    }
}

fn budget(p: &ProblemFile, opts: &GlobalOpts) -> Result<SearchBudget, CliError> {
    let base = p.budget.unwrap_or_default();
    Ok(SearchBudget::new(
        opts.max_q.unwrap_or(base.max_q),
        opts.max_box.unwrap_or(base.max_box_radius),
        opts.budget_nodes.unwrap_or(base.max_nodes),
    )?)
}

fn outcome(answer: Answer, certificate: Value, budget: Value) -> Outcome {
    Outcome {
        answer,
        certificate,
        budget,
        extra: Vec::new(),
        render: None,
    }
}

fn require<'a, T>(field: &'a Option<T>, path: &str, cmd: &str) -> Result<&'a T, CliError> {
    field
        .as_ref()
        .ok_or_else(|| schema(path, format!("{cmd} needs this field")))
}

fn zero_certificate(w: &AnnihilatorWitness<BigInt>) -> Value {
    json!({
        "character": w.character.etas().iter().map(j::rational).collect::<Vec<_>>(),
        "order": w.character.order(),
        "annihilator": j::periodic(&w.map),
        "partition": j::partition(&w.partition),
    })
}

pub(crate) fn decide_zero(p: &ProblemFile, opts: &GlobalOpts) -> Result<Outcome, CliError> {
    let cap = capacity(opts);
    let (verdict, stats) = decide_with_stats(&p.f, &cap)?;
    let budget = j::search_stats(cap.max_terms, cap.omega_cap, &stats);
    Ok(match verdict {
        AnnihilatorVerdict::Yes(w) => outcome(Answer::Yes, zero_certificate(&w), budget),
        AnnihilatorVerdict::No => outcome(Answer::No, Value::Null, budget),
    })
}

fn level_shift_precondition(p: &ProblemFile) -> Result<(), CliError> {
    if p.f.sum().is_zero() {
        return Err(Error::Unsupported(
            "f * 1 = 0, so f * a = k has no solution for any non-zero k".into(),
        )
        .into());
    }
    Ok(())
}

pub(crate) fn decide_levelshift(p: &ProblemFile, opts: &GlobalOpts) -> Result<Outcome, CliError> {
    level_shift_precondition(p)?;
    let cap = capacity(opts);
    let (verdict, stats) = decide_with_stats(&p.f, &cap)?;
    let budget = j::search_stats(cap.max_terms, cap.omega_cap, &stats);
    Ok(match verdict {
        AnnihilatorVerdict::Yes(w) => {
            let (a, k) = level_solution(&p.f, &w.map)?;
            let mut cert = zero_certificate(&w);
            cert["solution"] = j::periodic(&a);
            cert["level"] = j::int(&k);
            outcome(Answer::Yes, cert, budget)
        }
        AnnihilatorVerdict::No => outcome(Answer::No, Value::Null, budget),
    })
}

pub(crate) fn decide_multitile(p: &ProblemFile, opts: &GlobalOpts) -> Result<Outcome, CliError> {
    let g = require(&p.g, "$.g", "decide-multitile")?;
    let b = budget(p, opts)?;
    let (verdict, stats) = decide_multitile_with_stats(&p.f, g, &b)?;
    let budget = j::dovetail(&b, &stats);
    Ok(match verdict {
        MultitileVerdict::Yes(t) => Outcome {
            render: Some(t.render()),
            ..outcome(Answer::Yes, j::torus(&t), budget)
        },
        MultitileVerdict::No { radius } => outcome(Answer::No, json!({"radius": radius}), budget),
        MultitileVerdict::Unknown { reason } => Outcome {
            extra: vec![("reason", Value::String(reason))],
            ..outcome(Answer::Unknown, Value::Null, budget)
        },
    })
}

fn omega_certificate(k: usize, cap: usize) -> Result<Value, CliError> {
    let tuples: Vec<Vec<Value>> = enumerate_minimal_tuples(k, cap)?
        .iter()
        .map(|t| t.entries().iter().map(j::rational).collect())
        .collect();
    Ok(json!({"k": k, "tuples": tuples}))
}

pub(crate) fn omega(k: usize, opts: &GlobalOpts) -> Result<Outcome, CliError> {
    let cap = opts.omega_cap.unwrap_or(DEFAULT_OMEGA_CAP);
    Ok(outcome(
        Answer::Ok,
        omega_certificate(k, cap)?,
        json!({"omega_cap": cap}),
    ))
}

fn default_factors(q: u64) -> Vec<u64> {
    vec![1 + q, 1 + 2 * q, 1 + 3 * q]
}

fn dilation_results(results: &[(u64, bool)]) -> Value {
    results
        .iter()
        .map(|&(r, holds)| json!({"r": r, "holds": holds}))
        .collect()
}

pub(crate) fn dilate_check(
    p: &ProblemFile,
    q: Option<u64>,
    r: &[u64],
    ladder_len: usize,
) -> Result<Outcome, CliError> {
    let a = require(&p.a, "$.a", "dilate-check")?;
    let g = require(&p.g, "$.g", "dilate-check")?;
    if let Some(q) = q {
        let rs = if r.is_empty() {
            default_factors(q)
        } else {
            r.to_vec()
        };
        let report = dilation_check(&p.f, a, g, q, &rs)?;
        let answer = if report.all_pass() {
            Answer::Yes
        } else {
            Answer::No
        };
        let cert =
            json!({"q": q, "period": report.period, "results": dilation_results(&report.results)});
        return Ok(outcome(answer, cert, Value::Null));
    }
    if !r.is_empty() {
        return Err(CliError::Usage("--r needs --q".into()));
    }
    let l1 = l1_norm(&p.f)
        .to_u64()
        .filter(|&n| n <= MAX_LADDER_L1)
        .ok_or_else(|| Error::CapacityExceeded {
            what: "l1 norm for the dilation ladder".into(),
            needed: l1_norm(&p.f).to_u64().unwrap_or(u64::MAX),
            limit: MAX_LADDER_L1,
        })?;
    let base_q = num_integer::lcm(a.period(), g.period());
    let ladder = dilation_candidate_ladder(base_q, l1, ladder_len);
    let budget = json!({"ladder": ladder});
    match find_dilation_modulus(&p.f, a, g, &ladder)? {
        Some(q) => {
            let report = dilation_check(&p.f, a, g, q, &default_factors(q))?;
            let cert = json!({"q": q, "period": report.period, "results": dilation_results(&report.results)});
            Ok(outcome(Answer::Yes, cert, budget))
        }
        None => Ok(outcome(Answer::Unknown, Value::Null, budget)),
    }
}

fn slice_certificate(
    p: &ProblemFile,
    w: [i64; 2],
    x: Option<[i64; 2]>,
    q: Option<u64>,
) -> Result<Value, CliError> {
    let keep = |coset: i64| x.is_none_or(|x| wedge(w, x) == coset);
    let mut cert = json!({"w": w, "complement": complement(w)?});
    let entries: Vec<Value> = match &p.a {
        Some(phi) => {
            let q = q.unwrap_or(phi.period());
            cert["q"] = q.into();
            slicing_periodicity_check(&p.f, phi, w, q)?
                .into_iter()
                .filter(|s| keep(s.coset))
                .map(|s| {
                    json!({
                        "coset": s.coset,
                        "slice": j::finmap(&s.slice),
                        "convolution": j::periodic(&s.convolution),
                        "period_basis": s.period_basis,
                        "index": s.index,
                        "constant": s.constant,
                    })
                })
                .collect()
        }
        None => slices(&p.f, w)?
            .into_iter()
            .filter(|(coset, _)| keep(*coset))
            .map(|(coset, s)| json!({"coset": coset, "slice": j::finmap(&s)}))
            .collect(),
    };
    cert["slices"] = entries.into();
    Ok(cert)
}

pub(crate) fn slice(
    p: &ProblemFile,
    w: [i64; 2],
    x: Option<[i64; 2]>,
    q: Option<u64>,
) -> Result<Outcome, CliError> {
    Ok(outcome(
        Answer::Ok,
        slice_certificate(p, w, x, q)?,
        Value::Null,
    ))
}

fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value, CliError> {
    v.get(key)
        .filter(|x| !x.is_null())
        .ok_or_else(|| schema(&format!("{path}.{key}"), "missing"))
}

fn str_field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a str, CliError> {
    field(v, key, path)?
        .as_str()
        .ok_or_else(|| schema(&format!("{path}.{key}"), "expected a string"))
}

fn u64_field(v: &Value, key: &str, path: &str) -> Result<u64, CliError> {
    field(v, key, path)?
        .as_u64()
        .ok_or_else(|| schema(&format!("{path}.{key}"), "expected a non-negative integer"))
}

fn parse_torus(cert: &Value) -> Result<TorusAssignment, CliError> {
    let path = "$.certificate";
    let q = u64_field(cert, "q", path)?;
    let rows = field(cert, "bits", path)?
        .as_array()
        .ok_or_else(|| schema("$.certificate.bits", "expected an array of rows"))?;
    let mut bits = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let p = format!("$.certificate.bits[{i}]");
        let row = row
            .as_array()
            .ok_or_else(|| schema(&p, "expected an array"))?;
        let parsed = row
            .iter()
            .enumerate()
            .map(|(k, b)| match b {
                Value::Bool(b) => Ok(*b),
                Value::Number(n) if n.as_u64() == Some(0) => Ok(false),
                Value::Number(n) if n.as_u64() == Some(1) => Ok(true),
                _ => Err(schema(&format!("{p}[{k}]"), "expected 0 or 1")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        bits.push(parsed);
    }
    TorusAssignment::new(q, bits).map_err(|e| schema("$.certificate.bits", e.to_string()))
}

fn check_annihilator_certificate(p: &ProblemFile, cert: &Value) -> Result<bool, CliError> {
    let path = "$.certificate";
    let a = parse_periodic(
        &p.group,
        field(cert, "annihilator", path)?,
        "$.certificate.annihilator",
    )?;
    let at_zero = a.value_at(&vec![0; p.group.rank()]).is_one();
    let mut ok = at_zero && verify_annihilator(&p.f, &a);
    if let Some(etas) = cert.get("character").filter(|v| !v.is_null()) {
        let etas = etas
            .as_array()
            .ok_or_else(|| schema("$.certificate.character", "expected an array"))?
            .iter()
            .enumerate()
            .map(|(i, e)| {
                e.as_str()
                    .and_then(|s| s.parse::<RationalMod1>().ok())
                    .ok_or_else(|| {
                        schema(&format!("$.certificate.character[{i}]"), "expected \"a/b\"")
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        ok &= CharacterVector::new(p.group.clone(), etas)
            .map(|chi| chi.annihilates(&p.f))
            .unwrap_or(false);
    }
    Ok(ok)
}

fn check_level_solution(p: &ProblemFile, cert: &Value) -> Result<bool, CliError> {
    let path = "$.certificate";
    let a = parse_periodic(
        &p.group,
        field(cert, "solution", path)?,
        "$.certificate.solution",
    )?;
    let k = parse_coeff(field(cert, "level", path)?, "$.certificate.level")?;
    let non_constant = a.values().iter().any(|v| v != &a.values()[0]);
    let target = PeriodicMap::constant(p.group.clone(), k);
    Ok(non_constant && convolve_periodic(&p.f, &a)?.same_function(&target))
}

pub(crate) fn verify(p: &ProblemFile, doc: &Value, opts: &GlobalOpts) -> Result<Outcome, CliError> {
    let command = str_field(doc, "command", "$")?;
    let claimed = str_field(doc, "answer", "$")?;
    let cert = doc.get("certificate").unwrap_or(&Value::Null);
    let report = |ok: bool| {
        let answer = if ok { Answer::Yes } else { Answer::No };
        outcome(
            answer,
            json!({"checked": command, "claimed": claimed}),
            Value::Null,
        )
    };
    let bad_answer = || {
        schema(
            "$.answer",
            format!("{claimed:?} is not a verdict of {command}"),
        )
    };

    match command {
        "decide-zero" | "decide-levelshift" => {
            if command == "decide-levelshift" {
                level_shift_precondition(p)?;
            }
            match claimed {
                "YES" => {
                    let mut ok = check_annihilator_certificate(p, cert)?;
                    if command == "decide-levelshift" {
                        ok &= check_level_solution(p, cert)?;
                    }
                    Ok(report(ok))
                }
                "NO" => {
                    let (verdict, _) = decide_with_stats(&p.f, &capacity(opts))?;
                    Ok(report(!verdict.is_yes()))
                }
                _ => Err(bad_answer()),
            }
        }
        "decide-multitile" => {
            let g = require(&p.g, "$.g", "verify")?;
            match claimed {
                "YES" => Ok(report(verify_multitile(&p.f, g, &parse_torus(cert)?)?)),
                "NO" => {
                    let radius = u64_field(cert, "radius", "$.certificate")?;
                    let nodes = budget(p, opts)?.max_nodes;
                    Ok(report(box_refute(&p.f, g, radius, nodes)?))
                }
                "UNKNOWN" => Ok(outcome(
                    Answer::Unknown,
                    json!({"checked": command, "claimed": claimed}),
                    Value::Null,
                )),
                _ => Err(bad_answer()),
            }
        }
        "dilate-check" => {
            let a = require(&p.a, "$.a", "verify")?;
            let g = require(&p.g, "$.g", "verify")?;
            if claimed == "UNKNOWN" {
                return Ok(outcome(
                    Answer::Unknown,
                    json!({"checked": command, "claimed": claimed}),
                    Value::Null,
                ));
            }
            let q = u64_field(cert, "q", "$.certificate")?;
            let results = field(cert, "results", "$.certificate")?
                .as_array()
                .ok_or_else(|| schema("$.certificate.results", "expected an array"))?;
            let mut claimed_results = Vec::with_capacity(results.len());
            for (i, r) in results.iter().enumerate() {
                let path = format!("$.certificate.results[{i}]");
                let holds = field(r, "holds", &path)?
                    .as_bool()
                    .ok_or_else(|| schema(&format!("{path}.holds"), "expected a boolean"))?;
                claimed_results.push((u64_field(r, "r", &path)?, holds));
            }
            let rs: Vec<u64> = claimed_results.iter().map(|&(r, _)| r).collect();
            let actual = dilation_check(&p.f, a, g, q, &rs)?;
            let all = actual.all_pass();
            let consistent = actual.results == claimed_results
                && (claimed == "YES") == all
                && matches!(claimed, "YES" | "NO");
            Ok(report(consistent))
        }
        "omega" => {
            let k = u64_field(cert, "k", "$.certificate")? as usize;
            let cap = opts.omega_cap.unwrap_or(DEFAULT_OMEGA_CAP);
            Ok(report(omega_certificate(k, cap)? == *cert))
        }
        "slice" => {
            let w = pair_field(cert, "w")?;
            let q = cert.get("q").and_then(Value::as_u64);
            Ok(report(slices_match(p, w, q, cert)?))
        }
        other => Err(schema("$.command", format!("cannot verify {other:?}"))),
    }
}

fn pair_field(cert: &Value, key: &str) -> Result<[i64; 2], CliError> {
    let path = format!("$.certificate.{key}");
    let v = field(cert, key, "$.certificate")?
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| schema(&path, "expected two integers"))?;
    match (v[0].as_i64(), v[1].as_i64()) {
        (Some(a), Some(b)) => Ok([a, b]),
        _ => Err(schema(&path, "expected two integers")),
    }
}

/// Every listed slice must appear in the recomputed report. A `slice --x`
/// report lists a single coset, so a subset is accepted.
fn slices_match(
    p: &ProblemFile,
    w: [i64; 2],
    q: Option<u64>,
    cert: &Value,
) -> Result<bool, CliError> {
    let full = slice_certificate(p, w, None, q)?;
    let all = full["slices"].as_array().cloned().unwrap_or_default();
    let claimed = cert["slices"]
        .as_array()
        .ok_or_else(|| schema("$.certificate.slices", "expected an array"))?;
    Ok(claimed.iter().all(|c| all.contains(c)) && (all.is_empty() || !claimed.is_empty()))
}
