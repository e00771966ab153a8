//! Conversions from library values to the JSON written by the CLI.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use tiling_core::annihilator::{PartitionTrace, SearchStats};
use tiling_core::group::{FinMap, PeriodicMap};
use tiling_core::multitile::{DovetailStats, SearchBudget, TorusAssignment};
use tiling_core::RationalMod1;

/// Integers that fit `i64` become JSON numbers, larger ones decimal strings.
pub fn int(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(n) => Value::from(n),
        None => Value::String(v.to_string()),
    }
}

pub fn rational(r: &RationalMod1) -> Value {
    Value::String(r.to_string())
}

pub fn finmap(f: &FinMap<BigInt>) -> Value {
    f.iter()
        .map(|(x, c)| json!({"elem": x.coords(), "coeff": int(c)}))
        .collect()
}

/// Same layout as the `g` field of a problem file, with flat values.
pub fn periodic(p: &PeriodicMap<BigInt>) -> Value {
    json!({
        "period": p.period(),
        "values": p.values().iter().map(int).collect::<Vec<_>>(),
    })
}

pub fn partition(p: &PartitionTrace) -> Value {
    let classes: Vec<Value> = p
        .classes
        .iter()
        .map(|c| {
            json!({
                "elem": c.element.coords(),
                "eps": rational(&c.eps),
                "multiplicity": c.multiplicity,
            })
        })
        .collect();
    let blocks: Vec<Value> = p
        .blocks
        .iter()
        .map(|b| {
            json!({
                "counts": b.counts,
                "pattern": b.pattern.iter().map(rational).collect::<Vec<_>>(),
                "rotation": rational(&b.rotation),
            })
        })
        .collect();
    json!({"classes": classes, "blocks": blocks})
}

pub fn torus(t: &TorusAssignment) -> Value {
    let bits: Vec<Vec<u8>> = t
        .bits()
        .iter()
        .map(|row| row.iter().map(|&b| u8::from(b)).collect())
        .collect();
    json!({"q": t.q(), "bits": bits})
}

pub fn search_stats(max_terms: u64, omega_cap: usize, s: &SearchStats) -> Value {
    json!({
        "max_terms": max_terms,
        "omega_cap": omega_cap,
        "blocks_tried": s.blocks_tried,
        "systems_solved": s.systems_solved,
        "blocks_skipped": s.blocks_skipped,
    })
}

pub fn dovetail(b: &SearchBudget, s: &DovetailStats) -> Value {
    json!({
        "max_q": b.max_q,
        "max_box": b.max_box_radius,
        "max_nodes": b.max_nodes,
        "nodes_used": s.nodes_used,
        "periods_tried": s.periods_tried,
        "radii_tried": s.radii_tried,
    })
}
