// Acceptance runner: one PASS/FAIL line per criterion.
// Set ACCEPTANCE_STRICT=1 to exit non-zero when any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use molr::expected;
use molr::format::parse_records;
use molr::verify::{run, Suite, SuiteReport};

struct Outcome {
    ok: bool,
    detail: Vec<String>,
}

fn suite_outcome(r: &SuiteReport) -> Outcome {
    let mut detail = vec![format!("{} checks", r.checks.len())];
    detail.extend(r.mismatches().map(|m| format!("mismatch {}: expected {} got {}", m.cell, m.expected, m.got)));
    Outcome { ok: r.passed(), detail }
}

fn suite(s: Suite) -> Outcome {
    match run(s, usize::MAX) {
        Ok(r) => suite_outcome(&r),
        Err(e) => Outcome { ok: false, detail: vec![format!("error: {e}")] },
    }
}

fn fixtures() -> Outcome {
    let mut out = suite(Suite::Fixtures);
    // each 9x9 8-MOLS aut computation on its own clock
    for (name, text) in expected::FIXTURES.iter().filter(|(n, _)| n.starts_with("order9_t8")) {
        let m = parse_records(text).unwrap().remove(0).molr;
        let start = Instant::now();
        let a = molr::aut_order(&m);
        let dt = start.elapsed();
        out.detail.push(format!("{name} aut={a} in {dt:.2?}"));
        out.ok &= dt < Duration::from_secs(30 * 60);
    }
    out
}

fn properties() -> Outcome {
    let classes = small_classes();
    let nets = constructed_nets(&classes);
    let mut detail = Vec::new();
    let mut ok = true;
    let mut record = |name: &str, r: Result<String, String>| match r {
        Ok(msg) => detail.push(format!("{name}: {msg}")),
        Err(e) => {
            ok = false;
            detail.push(format!("{name} FAILED: {e}"));
        }
    };
    record("key invariance", key_invariance(1000, 0x5eed).map(|_| "1000 isotopisms per fixture".into()));
    record("conjugate swap", conjugate_involution(&classes).map(|_| format!("{} classes", classes.len())));
    record("aut oracle", aut_oracle(&classes).map(|c| format!("{c} classes")));
    record("orbit counting", orbit_counting(&classes).map(|c| format!("{c} cells")));
    record("net collinearity", net_collinearity(&nets).map(|_| format!("{} nets", nets.len())));
    record("round trip", round_trip(&classes).map(|_| "records and incidence".into()));
    Outcome { ok, detail }
}

fn main() {
    type Check = (u32, &'static str, Duration, fn() -> Outcome);
    let criteria: [Check; 7] = [
        (1, "n=4 full reproduction", Duration::from_secs(1), || suite(Suite::N4)),
        (2, "n=5 full reproduction", Duration::from_secs(10), || suite(Suite::N5)),
        (3, "n=6 full reproduction", Duration::from_secs(30 * 60), || suite(Suite::N6)),
        (4, "n=7 selected cells", Duration::from_secs(4 * 3600), || suite(Suite::N7Selected)),
        (5, "Galois suite", Duration::from_secs(5 * 60), || suite(Suite::Galois)),
        (6, "fixture suite", Duration::MAX, fixtures),
        (7, "property suite", Duration::from_secs(10 * 60), properties),
    ];
    let mut passed = 0;
    for (id, name, limit, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let dt = start.elapsed();
        let ok = outcome.ok && dt < limit;
        passed += ok as usize;
        let limit_text = if limit == Duration::MAX { String::new() } else { format!(" (limit {limit:?})") };
        println!("criterion {id} {}: {name} in {dt:.2?}{limit_text}", if ok { "PASS" } else { "FAIL" });
        for d in &outcome.detail {
            println!("    {d}");
        }
    }
    println!("{passed}/7 criteria passed");
    if passed < 7 && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
