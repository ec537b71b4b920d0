//! Reference tables and fixtures shipped with the crate.

use std::collections::BTreeMap;

const COUNTS: &str = include_str!("../data/counts.txt");
const HISTOGRAMS: &str = include_str!("../data/aut_histograms.txt");

/// Named fixture record files.
pub const FIXTURES: &[(&str, &str)] = &[
    ("order9_t6", include_str!("../data/fixtures/order9_t6.molr")),
    ("order8_t3", include_str!("../data/fixtures/order8_t3.molr")),
    ("rect9x10_t3", include_str!("../data/fixtures/rect9x10_t3.molr")),
    ("order9_t8_1", include_str!("../data/fixtures/order9_t8_1.molr")),
    ("order9_t8_2", include_str!("../data/fixtures/order9_t8_2.molr")),
    ("order9_t8_3", include_str!("../data/fixtures/order9_t8_3.molr")),
    ("order9_t8_4", include_str!("../data/fixtures/order9_t8_4.molr")),
    ("order9_t8_5", include_str!("../data/fixtures/order9_t8_5.molr")),
];

pub fn fixture(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

/// Which count table a grid comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TableKind {
    Isotopism,
    Paratopism,
    /// homogeneous, transitive, stepwise homogeneous, stepwise transitive
    Regularity,
    /// homogeneous, transitive
    HomogeneousTransitive,
    /// stepwise homogeneous, stepwise transitive
    Stepwise,
}

impl TableKind {
    fn tag(self) -> &'static str {
        match self {
            TableKind::Isotopism => "iso",
            TableKind::Paratopism => "para",
            TableKind::Regularity => "reg",
            TableKind::HomogeneousTransitive => "ht",
            TableKind::Stepwise => "step",
        }
    }
}

/// `cells[&(t, k)]` holds one or more numbers per table cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountGrid {
    pub n: usize,
    pub cells: BTreeMap<(usize, usize), Vec<u64>>,
}

pub fn count_grid(kind: TableKind, n: usize) -> Option<CountGrid> {
    let header = format!("{} {n}", kind.tag());
    let mut lines = COUNTS.lines().skip_while(|l| l.trim() != header);
    lines.next()?;
    let mut cells = BTreeMap::new();
    for l in lines.take_while(|l| !l.trim().is_empty()) {
        let (t, rest) = l.split_once(':').expect("row label");
        let t: usize = t.trim().parse().expect("t");
        for (i, cell) in rest.split_whitespace().enumerate() {
            let v = cell.split(',').map(|x| x.parse().expect("count")).collect();
            cells.insert((t, i + 2), v);
        }
    }
    Some(CountGrid { n, cells })
}

/// Autotopism order histograms for the populations all, homogeneous,
/// transitive, stepwise homogeneous, stepwise transitive.
pub type Histograms = [BTreeMap<u64, u64>; 5];

pub fn histograms(n: usize, t: usize, k: usize) -> Option<Histograms> {
    let header = format!("cell n={n} t={t} k={k}");
    let mut lines = HISTOGRAMS.lines().skip_while(|l| l.trim() != header);
    lines.next()?;
    let mut out: Histograms = Default::default();
    for l in lines.take_while(|l| !l.trim().is_empty()) {
        let mut words = l.split_whitespace();
        let idx = match words.next().unwrap() {
            "all" => 0,
            "H" => 1,
            "T" => 2,
            "sH" => 3,
            "sT" => 4,
            other => panic!("unknown population {other}"),
        };
        for w in words {
            let (a, c) = w.split_once(':').expect("order:count");
            out[idx].insert(a.parse().unwrap(), c.parse().unwrap());
        }
    }
    Some(out)
}

/// Every `(t, k)` with a histogram block for order `n`.
pub fn histogram_cells(n: usize) -> Vec<(usize, usize)> {
    let prefix = format!("cell n={n} ");
    HISTOGRAMS
        .lines()
        .filter_map(|l| l.strip_prefix(&prefix))
        .map(|rest| {
            let mut it = rest.split_whitespace().map(|w| w[2..].parse::<usize>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_load() {
        let iso = count_grid(TableKind::Isotopism, 6).unwrap();
        assert_eq!(iso.cells[&(3, 3)], vec![2572]);
        let reg = count_grid(TableKind::Regularity, 6).unwrap();
        assert_eq!(reg.cells[&(3, 4)], vec![62, 39, 4, 1]);
        let h = histograms(5, 2, 5).unwrap();
        assert_eq!(h[0], BTreeMap::from([(100, 1), (200, 1)]));
        assert_eq!(histograms(7, 6, 7).unwrap()[0], BTreeMap::from([(1764, 1)]));
        assert_eq!(histogram_cells(4).len(), 6);
        for (name, text) in FIXTURES {
            assert!(crate::format::parse_records(text).is_ok(), "{name}");
        }
    }
}
