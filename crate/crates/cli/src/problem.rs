//! Problem files: JSON documents naming a group, a finitely supported `f`,
//! and optionally a periodic `g`, a periodic `a`, and a search budget.
//!
//! ```json
//! {
//!   "group": {"free_rank": 2, "torsion": []},
//!   "f": [{"elem": [0, 0], "coeff": 1}, {"elem": [1, 0], "coeff": 1}],
//!   "g": {"period": [1, 1], "values": [[1]]},
//!   "budget": {"max_q": 8, "max_box": 4, "max_nodes": 100000}
//! }
//! ```
//!
//! Coefficients are JSON integers or decimal strings (for values beyond
//! 64 bits). Periodic maps list values over `[q]^d × [N_1] × … × [N_k]`
//! either flat in row-major order or as nested arrays of that shape.

use num_bigint::BigInt;
use serde_json::Value;

use tiling_core::group::{FinMap, PeriodicMap};
use tiling_core::multitile::SearchBudget;
use tiling_core::GroupSpec;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    pub group: GroupSpec,
    pub f: FinMap<BigInt>,
    pub g: Option<PeriodicMap<BigInt>>,
    pub a: Option<PeriodicMap<BigInt>>,
    pub budget: Option<SearchBudget>,
}

fn schema(path: &str, msg: impl Into<String>) -> CliError {
    CliError::Schema {
        path: path.to_string(),
        msg: msg.into(),
    }
}

pub(crate) fn parse_json(text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Json {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, CliError> {
    let root = parse_json(text)?;
    let obj = root
        .as_object()
        .ok_or_else(|| schema("$", "expected an object"))?;
    for key in obj.keys() {
        if !["group", "f", "g", "a", "budget"].contains(&key.as_str()) {
            return Err(schema(&format!("$.{key}"), "unknown field"));
        }
    }

    let group = parse_group(
        obj.get("group")
            .ok_or_else(|| schema("$.group", "missing"))?,
    )?;
    let f = parse_finmap(
        &group,
        obj.get("f").ok_or_else(|| schema("$.f", "missing"))?,
        "$.f",
    )?;
    let g = obj
        .get("g")
        .map(|v| parse_periodic(&group, v, "$.g"))
        .transpose()?;
    let a = obj
        .get("a")
        .map(|v| parse_periodic(&group, v, "$.a"))
        .transpose()?;
    let budget = obj.get("budget").map(parse_budget).transpose()?;
    Ok(ProblemFile {
        group,
        f,
        g,
        a,
        budget,
    })
}

fn as_u64(v: &Value, path: &str) -> Result<u64, CliError> {
    v.as_u64()
        .ok_or_else(|| schema(path, "expected a non-negative integer"))
}

fn parse_group(v: &Value) -> Result<GroupSpec, CliError> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema("$.group", "expected an object"))?;
    let free_rank = as_u64(
        obj.get("free_rank")
            .ok_or_else(|| schema("$.group.free_rank", "missing"))?,
        "$.group.free_rank",
    )? as usize;
    let torsion = match obj.get("torsion") {
        None => Vec::new(),
        Some(t) => t
            .as_array()
            .ok_or_else(|| schema("$.group.torsion", "expected an array"))?
            .iter()
            .enumerate()
            .map(|(i, n)| as_u64(n, &format!("$.group.torsion[{i}]")))
            .collect::<Result<Vec<_>, _>>()?,
    };
    GroupSpec::new(free_rank, torsion).map_err(|e| schema("$.group.torsion", e.to_string()))
}

pub(crate) fn parse_coeff(v: &Value, path: &str) -> Result<BigInt, CliError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| schema(path, format!("{n} is not an integer in range"))),
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| schema(path, format!("{s:?} is not an integer"))),
        _ => Err(schema(path, "expected an integer or a decimal string")),
    }
}

fn parse_coords(group: &GroupSpec, v: &Value, path: &str) -> Result<Vec<i64>, CliError> {
    let arr = v
        .as_array()
        .ok_or_else(|| schema(path, "expected an array of integers"))?;
    if arr.len() != group.rank() {
        return Err(schema(
            path,
            format!(
                "element has {} coordinates, group {group} needs {}",
                arr.len(),
                group.rank()
            ),
        ));
    }
    arr.iter()
        .enumerate()
        .map(|(i, c)| {
            c.as_i64()
                .ok_or_else(|| schema(&format!("{path}[{i}]"), "expected an integer"))
        })
        .collect()
}

fn parse_finmap(group: &GroupSpec, v: &Value, path: &str) -> Result<FinMap<BigInt>, CliError> {
    let arr = v
        .as_array()
        .ok_or_else(|| schema(path, "expected an array of {elem, coeff} entries"))?;
    let mut pairs = Vec::with_capacity(arr.len());
    for (i, entry) in arr.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let obj = entry
            .as_object()
            .ok_or_else(|| schema(&p, "expected an object"))?;
        let elem = parse_coords(
            group,
            obj.get("elem")
                .ok_or_else(|| schema(&format!("{p}.elem"), "missing"))?,
            &format!("{p}.elem"),
        )?;
        let coeff = parse_coeff(
            obj.get("coeff")
                .ok_or_else(|| schema(&format!("{p}.coeff"), "missing"))?,
            &format!("{p}.coeff"),
        )?;
        pairs.push((elem, coeff));
    }
    FinMap::from_pairs(group.clone(), pairs).map_err(|e| schema(path, e.to_string()))
}

/// Reads a scalar period: an integer, or one integer per free coordinate (all equal).
fn parse_period(group: &GroupSpec, v: &Value, path: &str) -> Result<u64, CliError> {
    let q = match v {
        Value::Array(items) => {
            if items.len() != group.free_rank() {
                return Err(schema(
                    path,
                    format!(
                        "period lists {} entries, group has {} free coordinates",
                        items.len(),
                        group.free_rank()
                    ),
                ));
            }
            let qs = items
                .iter()
                .enumerate()
                .map(|(i, q)| as_u64(q, &format!("{path}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            match qs.split_first() {
                None => 1,
                Some((&first, rest)) => {
                    if rest.iter().any(|&q| q != first) {
                        return Err(schema(path, "only scalar periods qZ^d are supported"));
                    }
                    first
                }
            }
        }
        other => as_u64(other, path)?,
    };
    if q == 0 {
        return Err(schema(path, "period must be positive"));
    }
    Ok(q)
}

pub(crate) fn parse_periodic(
    group: &GroupSpec,
    v: &Value,
    path: &str,
) -> Result<PeriodicMap<BigInt>, CliError> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema(path, "expected an object with period and values"))?;
    let q = parse_period(
        group,
        obj.get("period")
            .ok_or_else(|| schema(&format!("{path}.period"), "missing"))?,
        &format!("{path}.period"),
    )?;
    let shape: Vec<u64> = std::iter::repeat_n(q, group.free_rank())
        .chain(group.torsion().iter().copied())
        .collect();
    let values_path = format!("{path}.values");
    let raw = obj
        .get("values")
        .ok_or_else(|| schema(&values_path, "missing"))?;
    let total: u64 = shape.iter().product();
    let mut flat = Vec::new();
    let is_flat = raw
        .as_array()
        .is_some_and(|a| a.iter().all(|x| !x.is_array()));
    if is_flat && shape.len() != 1 {
        let arr = raw.as_array().expect("checked above");
        if arr.len() as u64 != total {
            return Err(schema(
                &values_path,
                format!(
                    "expected {total} values for shape {shape:?}, got {}",
                    arr.len()
                ),
            ));
        }
        for (i, x) in arr.iter().enumerate() {
            flat.push(parse_coeff(x, &format!("{values_path}[{i}]"))?);
        }
    } else {
        collect_nested(raw, &shape, &values_path, &mut flat)?;
    }
    PeriodicMap::new(group.clone(), q, flat).map_err(|e| schema(&values_path, e.to_string()))
}

fn collect_nested(
    v: &Value,
    shape: &[u64],
    path: &str,
    out: &mut Vec<BigInt>,
) -> Result<(), CliError> {
    let Some((&n, rest)) = shape.split_first() else {
        out.push(parse_coeff(v, path)?);
        return Ok(());
    };
    let arr = v
        .as_array()
        .ok_or_else(|| schema(path, format!("expected an array of length {n}")))?;
    if arr.len() as u64 != n {
        return Err(schema(
            path,
            format!("expected {n} entries, got {}", arr.len()),
        ));
    }
    for (i, x) in arr.iter().enumerate() {
        collect_nested(x, rest, &format!("{path}[{i}]"), out)?;
    }
    Ok(())
}

fn parse_budget(v: &Value) -> Result<SearchBudget, CliError> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema("$.budget", "expected an object"))?;
    let d = SearchBudget::default();
    let get = |key: &str, default: u64| -> Result<u64, CliError> {
        obj.get(key)
            .map(|x| as_u64(x, &format!("$.budget.{key}")))
            .transpose()
            .map(|x| x.unwrap_or(default))
    };
    SearchBudget::new(
        get("max_q", d.max_q)?,
        get("max_box", d.max_box_radius)?,
        get("max_nodes", d.max_nodes)?,
    )
    .map_err(|e| schema("$.budget", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domino_on_z() {
        let p = parse_problem(
            r#"{"group":{"free_rank":1,"torsion":[]},"f":[{"elem":[0],"coeff":1},{"elem":[1],"coeff":1}]}"#,
        )
        .unwrap();
        assert_eq!(p.group, GroupSpec::free(1));
        let expect = FinMap::indicator(GroupSpec::free(1), [[0], [1]]).unwrap();
        assert_eq!(p.f, expect);
        assert!(p.g.is_none());
    }

    #[test]
    fn torsion_coordinates_are_canonicalized() {
        let p = parse_problem(
            r#"{"group":{"free_rank":0,"torsion":[3]},"f":[{"elem":[5],"coeff":1}]}"#,
        )
        .unwrap();
        let only = p.f.support().next().unwrap();
        assert_eq!(only.coords(), &[2]);
    }

    #[test]
    fn grid_must_match_period() {
        let err = parse_problem(
            r#"{"group":{"free_rank":2},"f":[{"elem":[0,0],"coeff":1}],
                "g":{"period":[2,2],"values":[[1,1,1],[1,1,1]]}}"#,
        )
        .unwrap_err();
        match err {
            CliError::Schema { path, .. } => assert_eq!(path, "$.g.values[0]"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn flat_and_nested_values_agree() {
        let nested = parse_problem(
            r#"{"group":{"free_rank":2},"f":[],"g":{"period":[2,2],"values":[[1,2],[3,4]]}}"#,
        )
        .unwrap();
        let flat = parse_problem(
            r#"{"group":{"free_rank":2},"f":[],"g":{"period":2,"values":[1,2,3,4]}}"#,
        )
        .unwrap();
        assert_eq!(nested.g, flat.g);
    }

    #[test]
    fn big_coefficients_and_errors() {
        let p = parse_problem(
            r#"{"group":{"free_rank":1},"f":[{"elem":[0],"coeff":"123456789012345678901234567890"}]}"#,
        )
        .unwrap();
        assert_eq!(p.f.len(), 1);

        let bad = parse_problem(r#"{"group":{"free_rank":1},"f":[{"elem":[0],"coeff":1.5}]}"#);
        assert!(matches!(bad, Err(CliError::Schema { ref path, .. }) if path == "$.f[0].coeff"));

        let wrong_len = parse_problem(r#"{"group":{"free_rank":2},"f":[{"elem":[0],"coeff":1}]}"#);
        assert!(
            matches!(wrong_len, Err(CliError::Schema { ref path, .. }) if path == "$.f[0].elem")
        );

        let unequal =
            parse_problem(r#"{"group":{"free_rank":2},"f":[],"g":{"period":[2,3],"values":[]}}"#);
        assert!(matches!(unequal, Err(CliError::Schema { ref path, .. }) if path == "$.g.period"));

        let syntax = parse_problem("{\"group\":\n  {");
        assert!(matches!(syntax, Err(CliError::Json { line: 2, .. })));
    }
}
