//! Row-by-row generation of MOLR isotopism classes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{MolrError, Result};
use crate::latin::{MolrSet, MAX_N};
use crate::symmetry::{canonical_key, canonical_parent, class_record, paratopism_key, ClassRecord, Flags};

pub const DEFAULT_BUDGET: usize = 5_000_000;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Filter {
    #[default]
    None,
    StepwiseHomogeneous,
    StepwiseTransitive,
}

impl Filter {
    pub fn admits(self, f: &Flags) -> bool {
        match self {
            Filter::None => true,
            Filter::StepwiseHomogeneous => f.stepwise_homogeneous,
            Filter::StepwiseTransitive => f.stepwise_transitive,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Filter::None => "none",
            Filter::StepwiseHomogeneous => "stepwise_homogeneous",
            Filter::StepwiseTransitive => "stepwise_transitive",
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Filter {
    type Err = MolrError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Filter::None),
            "stepwise_homogeneous" | "sH" => Ok(Filter::StepwiseHomogeneous),
            "stepwise_transitive" | "sT" => Ok(Filter::StepwiseTransitive),
            _ => Err(MolrError::Precondition(format!("unknown filter {s:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExtensionFrontier {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    /// Sorted by canonical key.
    pub classes: Vec<ClassRecord>,
    /// Filter applied at each level, starting from `k = 2`.
    pub filters: Vec<Filter>,
}

impl ExtensionFrontier {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Population {
    All,
    Homogeneous,
    Transitive,
    StepwiseHomogeneous,
    StepwiseTransitive,
}

impl Population {
    pub const ALL: [Population; 5] = [
        Population::All,
        Population::Homogeneous,
        Population::Transitive,
        Population::StepwiseHomogeneous,
        Population::StepwiseTransitive,
    ];

    pub fn contains(self, f: &Flags) -> bool {
        match self {
            Population::All => true,
            Population::Homogeneous => f.homogeneous,
            Population::Transitive => f.transitive,
            Population::StepwiseHomogeneous => f.stepwise_homogeneous,
            Population::StepwiseTransitive => f.stepwise_transitive,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Population::All => "all",
            Population::Homogeneous => "homogeneous",
            Population::Transitive => "transitive",
            Population::StepwiseHomogeneous => "stepwise_homogeneous",
            Population::StepwiseTransitive => "stepwise_transitive",
        }
    }
}

/// Class counts for one `(n, k, t)` cell.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LevelCounts {
    /// Autotopism order histogram per population, indexed like
    /// [`Population::ALL`].
    pub histograms: [BTreeMap<u64, u64>; 5],
    pub paratopism: u64,
}

impl LevelCounts {
    pub fn from_classes(classes: &[ClassRecord]) -> Self {
        let mut c = LevelCounts::default();
        for rec in classes {
            for (i, pop) in Population::ALL.iter().enumerate() {
                if pop.contains(&rec.flags) {
                    *c.histograms[i].entry(rec.aut_order).or_default() += 1;
                }
            }
        }
        let mut keys: Vec<Vec<u8>> = classes
            .par_iter()
            .map(|r| paratopism_key(&r.representative))
            .collect();
        keys.sort_unstable();
        keys.dedup();
        c.paratopism = keys.len() as u64;
        c
    }

    pub fn histogram(&self, pop: Population) -> &BTreeMap<u64, u64> {
        &self.histograms[pop as usize]
    }

    pub fn total(&self, pop: Population) -> u64 {
        self.histogram(pop).values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub n: usize,
    pub t: usize,
    pub per_k: BTreeMap<usize, LevelCounts>,
}

/// Budget from `MOLR_BUDGET`, falling back to [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> usize {
    std::env::var("MOLR_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Deterministic merge of per-parent results, in parent order.
fn merge(
    per_parent: Vec<Vec<(Vec<u8>, Vec<u8>)>>,
    level: usize,
    budget: usize,
) -> Result<Vec<(Vec<u8>, Vec<u8>)>> {
    let mut map: FxHashMap<Vec<u8>, Vec<u8>> = FxHashMap::default();
    for children in per_parent {
        for (key, cells) in children {
            map.entry(key).or_insert(cells);
        }
        if map.len() > budget {
            return Err(MolrError::BudgetExceeded { level, classes: map.len() });
        }
    }
    let mut out: Vec<_> = map.into_iter().collect();
    out.par_sort_unstable_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

fn records(
    n: usize,
    k: usize,
    t: usize,
    pending: Vec<(Vec<u8>, Vec<u8>)>,
    parents: Option<&FxHashMap<Vec<u8>, (bool, bool)>>,
    filter: Filter,
) -> Vec<ClassRecord> {
    pending
        .into_par_iter()
        .map(|(key, cells)| {
            let m = MolrSet::from_flat_unchecked(n, k, t, cells);
            // a parent missing from the previous level was filtered out
            let stepwise = match parents {
                None => (true, true),
                Some(p) => p.get(&canonical_key(&canonical_parent(&m))).copied().unwrap_or((false, false)),
            };
            let rec = class_record(&m, Some(stepwise));
            debug_assert_eq!(rec.canonical_key, key);
            rec
        })
        .filter(|r| filter.admits(&r.flags))
        .collect()
}

/// Every derangement-like second row `d` with `d[j] != forbidden[s][j]` for
/// every listed row.
fn compatible_rows(n: usize, forbidden: &[&[u8]], emit: &mut impl FnMut(&[u8])) {
    let masks: Vec<u32> = (0..n)
        .map(|j| forbidden.iter().fold(1u32 << j, |m, f| m | 1 << f[j]))
        .collect();
    let mut row = vec![0u8; n];
    fn go(j: usize, used: u32, masks: &[u32], row: &mut [u8], emit: &mut impl FnMut(&[u8])) {
        let n = row.len();
        if j == n {
            emit(row);
            return;
        }
        let mut avail = !(used | masks[j]) & ((1u32 << n) - 1);
        while avail != 0 {
            let x = avail.trailing_zeros();
            avail &= avail - 1;
            row[j] = x as u8;
            go(j + 1, used | 1 << x, masks, row, emit);
        }
    }
    go(0, 0, &masks, &mut row, emit);
}

/// The single class of `1 × n` t-MOLR.
pub fn trivial_frontier(n: usize, t: usize) -> ExtensionFrontier {
    let cells = crate::perm::identity(n).repeat(t);
    let m = MolrSet::from_flat_unchecked(n, 1, t, cells);
    ExtensionFrontier { n, k: 1, t, classes: vec![class_record(&m, None)], filters: Vec::new() }
}

fn check_n(n: usize) -> Result<()> {
    if !(2..=MAX_N).contains(&n) {
        return Err(MolrError::Precondition(format!("n = {n} outside 2..={MAX_N}")));
    }
    Ok(())
}

/// All classes of `2 × n` t-MOLR, built one rectangle at a time.
pub fn seed_classes(n: usize, t: usize) -> Result<ExtensionFrontier> {
    seed_classes_filtered(n, t, Filter::None, budget_from_env())
}

pub fn seed_classes_filtered(n: usize, t: usize, filter: Filter, budget: usize) -> Result<ExtensionFrontier> {
    check_n(n)?;
    if t == 0 {
        return Err(MolrError::Precondition("t must be at least 1".into()));
    }
    let id = crate::perm::identity(n);
    // (key, flat cells) per class with `level` rectangles
    let mut level: Vec<Vec<u8>> = vec![Vec::new()];
    for r in 1..=t {
        let per_parent: Vec<Vec<(Vec<u8>, Vec<u8>)>> = level
            .par_iter()
            .map(|cells| {
                let seconds: Vec<&[u8]> = cells.chunks(2 * n).map(|c| &c[n..]).collect();
                let mut out = Vec::new();
                let mut seen: FxHashMap<Vec<u8>, ()> = FxHashMap::default();
                compatible_rows(n, &seconds, &mut |d| {
                    let mut child = cells.clone();
                    child.extend_from_slice(&id);
                    child.extend_from_slice(d);
                    let m = MolrSet::from_flat_unchecked(n, 2, r, child);
                    let key = canonical_key(&m);
                    if seen.insert(key.clone(), ()).is_none() {
                        out.push((key, m.flat_cells()));
                    }
                });
                out
            })
            .collect();
        let merged = merge(per_parent, 2, budget)?;
        if r == t {
            let classes = records(n, 2, t, merged, None, filter);
            return Ok(ExtensionFrontier { n, k: 2, t, classes, filters: vec![filter] });
        }
        level = merged.into_iter().map(|(_, cells)| cells).collect();
    }
    unreachable!()
}

/// Backtracking over one new row per rectangle.
struct Extender {
    n: usize,
    t: usize,
    full: u32,
    /// `col[s*n + j]`: symbols already in column `j` of rectangle `s`.
    col: Vec<u32>,
    /// `pair[(a*t + b)*n + x]`: symbols `y` with `(x, y)` used by rectangles
    /// `a < b`.
    pair: Vec<u32>,
    rows: Vec<u8>,
}

impl Extender {
    fn new(m: &MolrSet) -> Self {
        let (t, k, n) = (m.t(), m.k(), m.n());
        let mut col = vec![0u32; t * n];
        let mut pair = vec![0u32; t * t * n];
        for r in 0..k {
            for s in 0..t {
                let row = m.row(s, r);
                for j in 0..n {
                    col[s * n + j] |= 1 << row[j];
                }
                for b in s + 1..t {
                    let other = m.row(b, r);
                    for j in 0..n {
                        pair[(s * t + b) * n + row[j] as usize] |= 1 << other[j];
                    }
                }
            }
        }
        Extender { n, t, full: ((1u64 << n) - 1) as u32, col, pair, rows: vec![0; t * n] }
    }

    fn options(&self, s: usize, j: usize, used: u32) -> u32 {
        let mut avail = !(self.col[s * self.n + j] | used) & self.full;
        for a in 0..s {
            let x = self.rows[a * self.n + j] as usize;
            avail &= !self.pair[(a * self.t + s) * self.n + x];
        }
        avail
    }

    fn run(&mut self, emit: &mut impl FnMut(&[u8])) {
        self.place(0, 0, 0, emit);
    }

    /// Fills rectangle `s`; `done` marks assigned columns, `used` the symbols.
    fn place(&mut self, s: usize, done: u32, used: u32, emit: &mut impl FnMut(&[u8])) {
        if done == self.full {
            if s + 1 == self.t {
                emit(&self.rows);
            } else {
                self.place(s + 1, 0, 0, emit);
            }
            return;
        }
        // most constrained open column
        let mut best = (u32::MAX, 0usize, 0u32);
        let mut open = !done & self.full;
        while open != 0 {
            let j = open.trailing_zeros() as usize;
            open &= open - 1;
            let opts = self.options(s, j, used);
            let c = opts.count_ones();
            if c < best.0 {
                best = (c, j, opts);
                if c == 0 {
                    return;
                }
            }
        }
        let (_, j, mut opts) = best;
        while opts != 0 {
            let x = opts.trailing_zeros();
            opts &= opts - 1;
            self.rows[s * self.n + j] = x as u8;
            self.place(s, done | 1 << j, used | 1 << x, emit);
        }
    }
}

/// Calls `emit` with every way to append one row to each rectangle of `m`;
/// the argument holds the `t` new rows back to back.
pub fn for_each_extension(m: &MolrSet, mut emit: impl FnMut(&[u8])) {
    if m.k() >= m.n() {
        return;
    }
    Extender::new(m).run(&mut emit);
}

fn append_rows(m: &MolrSet, rows: &[u8]) -> Vec<u8> {
    let (t, k, n) = (m.t(), m.k(), m.n());
    let mut cells = Vec::with_capacity(t * (k + 1) * n);
    for s in 0..t {
        cells.extend_from_slice(m.rect(s).cells());
        cells.extend_from_slice(&rows[s * n..(s + 1) * n]);
    }
    cells
}

pub fn extend_frontier(f: &ExtensionFrontier, filter: Filter) -> Result<ExtensionFrontier> {
    extend_frontier_with_budget(f, filter, budget_from_env())
}

pub fn extend_frontier_with_budget(f: &ExtensionFrontier, filter: Filter, budget: usize) -> Result<ExtensionFrontier> {
    if f.k >= f.n {
        return Err(MolrError::Precondition(format!("cannot extend k = {} at n = {}", f.k, f.n)));
    }
    let (n, k, t) = (f.n, f.k + 1, f.t);
    let per_parent: Vec<Vec<(Vec<u8>, Vec<u8>)>> = f
        .classes
        .par_iter()
        .map(|rec| {
            let parent = &rec.representative;
            let mut seen: FxHashMap<Vec<u8>, ()> = FxHashMap::default();
            let mut out = Vec::new();
            for_each_extension(parent, |rows| {
                let cells = append_rows(parent, rows);
                let child = MolrSet::from_flat_unchecked(n, k, t, cells);
                let key = canonical_key(&child);
                if seen.insert(key.clone(), ()).is_none() {
                    out.push((key, child.flat_cells()));
                }
            });
            out
        })
        .collect();
    let parents: FxHashMap<Vec<u8>, (bool, bool)> = f
        .classes
        .iter()
        .map(|r| (r.canonical_key.clone(), (r.flags.stepwise_homogeneous, r.flags.stepwise_transitive)))
        .collect();
    let merged = merge(per_parent, k, budget)?;
    let classes = records(n, k, t, merged, Some(&parents), filter);
    let mut filters = f.filters.clone();
    filters.push(filter);
    Ok(ExtensionFrontier { n, k, t, classes, filters })
}

/// Homogeneity and transitivity are filled in by `class_record` already;
/// this recomputes them from scratch for frontiers assembled elsewhere.
pub fn classify_frontier(f: &ExtensionFrontier) -> ExtensionFrontier {
    let classes = f
        .classes
        .par_iter()
        .map(|rec| {
            let fresh = class_record(
                &rec.representative,
                Some((rec.flags.stepwise_homogeneous, rec.flags.stepwise_transitive)),
            );
            ClassRecord { flags: fresh.flags, ..rec.clone() }
        })
        .collect();
    ExtensionFrontier { n: f.n, k: f.k, t: f.t, classes, filters: f.filters.clone() }
}

/// Frontiers for levels `2..=k` (or the trivial level when `k = 1`).
pub fn enumerate_levels(
    n: usize,
    t: usize,
    k: usize,
    filter: Filter,
    budget: usize,
    mut on_level: impl FnMut(&ExtensionFrontier),
) -> Result<ExtensionFrontier> {
    check_n(n)?;
    if k == 0 || k > n {
        return Err(MolrError::Precondition(format!("k = {k} outside 1..={n}")));
    }
    if k == 1 {
        let f = trivial_frontier(n, t);
        on_level(&f);
        return Ok(f);
    }
    let mut f = seed_classes_filtered(n, t, filter, budget)?;
    on_level(&f);
    while f.k < k {
        f = extend_frontier_with_budget(&f, filter, budget)?;
        on_level(&f);
    }
    Ok(f)
}

/// Runs the pipeline to level `k` and tabulates every level on the way.
pub fn enumerate_cell(n: usize, t: usize, k: usize, filter: Filter, budget: usize) -> Result<(ExtensionFrontier, CountTable)> {
    let mut table = CountTable { n, t, per_k: BTreeMap::new() };
    let f = enumerate_levels(n, t, k, filter, budget, |level| {
        table.per_k.insert(level.k, LevelCounts::from_classes(&level.classes));
    })?;
    Ok((f, table))
}
