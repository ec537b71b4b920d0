//! Recomputes reference tables and compares them with [`crate::expected`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::enumerate::{enumerate_cell, Filter, LevelCounts, Population};
use crate::error::Result;
use crate::expected::{self, TableKind};
use crate::format::parse_records;
use crate::galois::{cyclic_autotopism, galois_mols, stepwise_truncation};
use crate::geometry::{check_plane, complete_to_projective};
use crate::latin::{complete_square, pair_collisions};
use crate::symmetry::canonical_form;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    N4,
    N5,
    N6,
    N7Selected,
    Galois,
    Fixtures,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::N4, Suite::N5, Suite::N6, Suite::N7Selected, Suite::Galois, Suite::Fixtures];

    pub fn name(self) -> &'static str {
        match self {
            Suite::N4 => "n4",
            Suite::N5 => "n5",
            Suite::N6 => "n6",
            Suite::N7Selected => "n7-selected",
            Suite::Galois => "galois",
            Suite::Fixtures => "fixtures",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}; expected one of n4, n5, n6, n7-selected, galois, fixtures"))
    }
}

/// One compared value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub cell: String,
    pub expected: String,
    pub got: String,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.expected == self.got
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, cell: impl Into<String>, expected: impl fmt::Display, got: impl fmt::Display) {
        self.0.push(Check { cell: cell.into(), expected: expected.to_string(), got: got.to_string() });
    }
}

fn hist_string(h: &BTreeMap<u64, u64>) -> String {
    if h.is_empty() {
        return "{}".into();
    }
    let parts: Vec<String> = h.iter().map(|(a, c)| format!("{a}:{c}")).collect();
    format!("{{{}}}", parts.join(" "))
}

fn joined(v: &[u64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn compare_level(out: &mut Checks, n: usize, t: usize, k: usize, got: &LevelCounts) {
    let cell = |what: &str| format!("n={n} t={t} k={k} {what}");
    let totals: Vec<u64> = Population::ALL.iter().map(|&p| got.total(p)).collect();
    let lookup = |kind| expected::count_grid(kind, n).and_then(|g| g.cells.get(&(t, k)).cloned());
    if let Some(e) = lookup(TableKind::Isotopism) {
        out.push(cell("isotopism"), e[0], totals[0]);
    }
    if let Some(e) = lookup(TableKind::Paratopism) {
        out.push(cell("paratopism"), e[0], got.paratopism);
    }
    if let Some(e) = lookup(TableKind::Regularity) {
        out.push(cell("regularity"), joined(&e), joined(&totals[1..]));
    }
    if let Some(e) = lookup(TableKind::HomogeneousTransitive) {
        out.push(cell("homogeneous,transitive"), joined(&e), joined(&totals[1..3]));
    }
    if let Some(e) = lookup(TableKind::Stepwise) {
        out.push(cell("stepwise"), joined(&e), joined(&totals[3..5]));
    }
    let expected_h = expected::histograms(n, t, k).unwrap_or_default();
    for (i, pop) in Population::ALL.iter().enumerate() {
        out.push(cell(&format!("aut[{}]", pop.name())), hist_string(&expected_h[i]), hist_string(&got.histograms[i]));
    }
}

fn table_suite(out: &mut Checks, n: usize, cells: &[(usize, Vec<usize>)], budget: usize) -> Result<()> {
    for (t, ks) in cells {
        let kmax = *ks.iter().max().unwrap();
        let (_, table) = enumerate_cell(n, *t, kmax, Filter::None, budget)?;
        for &k in ks {
            compare_level(out, n, *t, k, &table.per_k[&k]);
        }
    }
    Ok(())
}

fn full_table(n: usize) -> Vec<(usize, Vec<usize>)> {
    let grid = expected::count_grid(TableKind::Isotopism, n).expect("table present");
    let mut ts: Vec<usize> = grid.cells.keys().map(|&(t, _)| t).collect();
    ts.dedup();
    ts.into_iter().map(|t| (t, (2..=n).collect())).collect()
}

fn galois_suite(out: &mut Checks) -> Result<()> {
    let stated: BTreeMap<usize, u64> = BTreeMap::from([(4, 288), (5, 400), (7, 1764)]);
    for n in [3, 4, 5, 7, 8] {
        let m = galois_mols(n)?;
        let g = cyclic_autotopism(n)?;
        out.push(format!("galois n={n} cyclic map stabilizes"), true, g.apply(&m)? == m);
        let chain = stepwise_truncation(&m)?;
        let transitive = chain.iter().all(|level| canonical_form(level).flags.transitive);
        out.push(format!("galois n={n} every truncation transitive"), true, transitive);
        let rec = canonical_form(&m);
        out.push(format!("galois n={n} stepwise transitive"), true, rec.flags.stepwise_transitive);
        if let Some(&a) = stated.get(&n) {
            out.push(format!("galois n={n} aut"), a, rec.aut_order);
        }
        let plane = check_plane(&complete_to_projective(&m)?);
        out.push(
            format!("galois n={n} projective completion"),
            format!("projective {}", n * n + n + 1),
            format!("{} {}", plane.class, plane.points),
        );
    }
    Ok(())
}

fn fixtures_suite(out: &mut Checks) -> Result<()> {
    for (name, text) in expected::FIXTURES {
        let recs = parse_records(text)?;
        let m = &recs[0].molr;
        out.push(format!("fixture {name} validates"), true, true);
        if *name == "rect9x10_t3" {
            let squares = m.rects().iter().map(complete_square).collect::<Result<Vec<_>>>()?;
            let last = m.k();
            let mut confined = true;
            for a in 0..squares.len() {
                for b in a + 1..squares.len() {
                    for (r1, _, r2, _) in pair_collisions(&squares[a], &squares[b])? {
                        confined &= r1 == last || r2 == last;
                    }
                }
            }
            out.push(format!("fixture {name} completion breaks orthogonality only in the last row"), true, confined);
            continue;
        }
        let rec = canonical_form(m);
        if let Some(a) = recs[0].aut {
            out.push(format!("fixture {name} aut"), a, rec.aut_order);
        }
        if *name == "order9_t6" {
            out.push(format!("fixture {name} transitive"), true, rec.flags.transitive);
        }
    }
    Ok(())
}

/// Runs one suite; `budget` caps the classes held per level.
pub fn run(suite: Suite, budget: usize) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut out = Checks::default();
    match suite {
        Suite::N4 => table_suite(&mut out, 4, &full_table(4), budget)?,
        Suite::N5 => table_suite(&mut out, 5, &full_table(5), budget)?,
        Suite::N6 => table_suite(&mut out, 6, &full_table(6), budget)?,
        Suite::N7Selected => {
            let cells = vec![(2, vec![2]), (5, (2..=7).collect()), (6, (2..=7).collect())];
            table_suite(&mut out, 7, &cells, budget)?;
        }
        Suite::Galois => galois_suite(&mut out)?,
        Suite::Fixtures => fixtures_suite(&mut out)?,
    }
    Ok(SuiteReport { suite, checks: out.0, elapsed: start.elapsed() })
}

/// `Err` on the first suite that could not be computed at all.
pub fn run_all(budget: usize) -> Result<Vec<SuiteReport>> {
    Suite::ALL.into_iter().map(|s| run(s, budget)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n4_suite_matches() {
        let r = run(Suite::N4, 1_000_000).unwrap();
        let bad: Vec<_> = r.mismatches().collect();
        assert!(bad.is_empty(), "{bad:?}");
        assert!(r.checks.len() > 20);
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
    }
}
