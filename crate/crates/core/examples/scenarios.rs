//! Builds a scenario from JSON, runs it alongside a builtin, and prints the reports.

use proxilab::scenarios::{builtin, list_builtins, parse_scenarios, run_all, to_csv};
use proxilab::Result;

const SCENARIO: &str = r#"{
    "name": "square-distance",
    "space": {"norm": {"kind": "l1", "dim": 2}},
    "body": {"kind": "polytope", "dim": 2, "rows": [
        {"normal": [1, 0], "offset": 1}, {"normal": [-1, 0], "offset": 1},
        {"normal": [0, 1], "offset": 1}, {"normal": [0, -1], "offset": 1}]},
    "check": "distance",
    "params": {"x": [3, 2], "expected": 3}
}"#;

fn main() -> Result<()> {
    println!("{} builtins available", list_builtins().len());
    let mut scenarios = parse_scenarios(SCENARIO)?;
    scenarios.extend(builtin("e5"));
    let reports = run_all(&scenarios, Some(2)).into_iter().collect::<Result<Vec<_>>>()?;
    for r in &reports {
        println!("{}", serde_json::to_string(&r.body()).expect("reports serialize"));
    }
    print!("{}", to_csv(&reports));
    Ok(())
}
