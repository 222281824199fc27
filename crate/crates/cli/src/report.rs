//! Machine-readable reports. JSON goes to standard output with sorted keys
//! (serde_json maps are BTree-backed), so identical invocations produce
//! byte-identical output modulo the `elapsed_ms` field.

use serde_json::{json, Map, Value};

use symcoh_core::cohomology::{CohomologyReport, SweepCell};

pub const TOOL: &str = "symcoh";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// The envelope every subcommand prints.
pub fn envelope(command: &str, query: Value) -> Map<String, Value> {
    let mut map = Map::new();
    map.insert("tool".into(), json!(TOOL));
    map.insert("version".into(), json!(VERSION));
    map.insert("command".into(), json!(command));
    map.insert("query".into(), query);
    map
}

pub fn h_map(h: &std::collections::BTreeMap<i64, u64>) -> Value {
    Value::Object(h.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
}

/// Fold a cohomology report into an envelope.
pub fn add_cohomology(map: &mut Map<String, Value>, rep: &CohomologyReport) {
    map.insert("method".into(), json!(rep.method));
    map.insert("primes".into(), json!(rep.primes));
    map.insert("h".into(), h_map(&rep.h));
    map.insert("term_dims".into(), json!(rep.term_dims));
    map.insert("ranks".into(), json!(rep.ranks));
    map.insert("agreement".into(), json!(rep.agreement));
    map.insert("flags".into(), json!(rep.flags));
}

pub fn finish(mut map: Map<String, Value>, elapsed_ms: u64) -> Value {
    map.insert("elapsed_ms".into(), json!(elapsed_ms));
    Value::Object(map)
}

/// CSV rows for sweeps: header `m,n,i,h,method,prime`; error cells carry
/// `n/a` in the `h` column.
pub fn sweep_csv(cells: &[SweepCell], method: &str, primes: &[u64]) -> String {
    let prime_field = primes.iter().map(u64::to_string).collect::<Vec<_>>().join(";");
    let mut out = String::from("m,n,i,h,method,prime\n");
    for cell in cells {
        let h = match &cell.value {
            Ok(v) => v.to_string(),
            Err(_) => "n/a".to_string(),
        };
        out.push_str(&format!("{},{},{},{},{},{}\n", cell.m, cell.n, cell.i, h, method, prime_field));
    }
    out
}

pub fn sweep_json(cells: &[SweepCell]) -> Value {
    Value::Array(
        cells
            .iter()
            .map(|cell| {
                let mut row = Map::new();
                row.insert("m".into(), json!(cell.m));
                row.insert("n".into(), json!(cell.n));
                row.insert("i".into(), json!(cell.i));
                match &cell.value {
                    Ok(v) => {
                        row.insert("h".into(), json!(v));
                    }
                    Err(msg) => {
                        row.insert("h".into(), Value::Null);
                        row.insert("error".into(), json!(msg));
                    }
                }
                Value::Object(row)
            })
            .collect(),
    )
}
