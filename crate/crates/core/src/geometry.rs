//! Incidence structures built from MOLR: partial nets, projective
//! completion, Sandler deletions and the two-row graph.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{MolrError, Result};
use crate::isotopism::Isotopism;
use crate::latin::{LatinRectangle, MolrSet};
use crate::perm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LineTag {
    Row(usize),
    Column(usize),
    Symbol { rect: usize, symbol: usize },
    Infinity,
}

impl fmt::Display for LineTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineTag::Row(r) => write!(f, "row:{r}"),
            LineTag::Column(c) => write!(f, "col:{c}"),
            LineTag::Symbol { rect, symbol } => write!(f, "sym:{rect}:{symbol}"),
            LineTag::Infinity => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for LineTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |x: &str| x.parse::<usize>().map_err(|_| format!("bad index in tag {s:?}"));
        match parts.as_slice() {
            ["row", r] => Ok(LineTag::Row(num(r)?)),
            ["col", c] => Ok(LineTag::Column(num(c)?)),
            ["sym", r, x] => Ok(LineTag::Symbol { rect: num(r)?, symbol: num(x)? }),
            ["inf"] => Ok(LineTag::Infinity),
            _ => Err(format!("unknown line tag {s:?}")),
        }
    }
}

/// Where a point comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointTag {
    Cell { row: usize, col: usize },
    /// Ideal point of a parallel class: 0 rows, 1 columns, `2 + s` square `s`.
    Ideal(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceStructure {
    pub points: Vec<PointTag>,
    /// Sorted point indices.
    pub lines: Vec<Vec<usize>>,
    pub tags: Vec<LineTag>,
    /// `(n, k, t)` of the MOLR a partial net was built from.
    pub source: Option<(usize, usize, usize)>,
}

impl IncidenceStructure {
    /// Builds a structure, sorting each line and dropping lines of size < 2
    /// and repeated lines (first occurrence wins).
    pub fn new(points: Vec<PointTag>, lines: Vec<(LineTag, Vec<usize>)>) -> Result<Self> {
        let v = points.len();
        let mut seen = std::collections::HashSet::new();
        let mut out_lines = Vec::new();
        let mut tags = Vec::new();
        for (tag, mut line) in lines {
            line.sort_unstable();
            line.dedup();
            if let Some(&p) = line.iter().find(|&&p| p >= v) {
                return Err(MolrError::IndexOutOfRange { index: p, limit: v });
            }
            if line.len() < 2 || !seen.insert(line.clone()) {
                continue;
            }
            out_lines.push(line);
            tags.push(tag);
        }
        Ok(IncidenceStructure { points, lines: out_lines, tags, source: None })
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    pub fn n_lines(&self) -> usize {
        self.lines.len()
    }

    /// Lines through each point.
    pub fn point_lines(&self) -> Vec<Vec<usize>> {
        let mut pl = vec![Vec::new(); self.points.len()];
        for (i, line) in self.lines.iter().enumerate() {
            for &p in line {
                pl[p].push(i);
            }
        }
        pl
    }

    fn masks(&self) -> Vec<Vec<u64>> {
        let words = self.points.len().div_ceil(64);
        self.lines
            .iter()
            .map(|line| {
                let mut m = vec![0u64; words];
                for &p in line {
                    m[p / 64] |= 1 << (p % 64);
                }
                m
            })
            .collect()
    }

    /// Number of other points sharing at least one line with each point.
    pub fn collinearity(&self) -> Vec<usize> {
        let masks = self.masks();
        let words = self.points.len().div_ceil(64);
        self.point_lines()
            .iter()
            .map(|ls| {
                let mut acc = vec![0u64; words];
                for &l in ls {
                    for (a, m) in acc.iter_mut().zip(&masks[l]) {
                        *a |= m;
                    }
                }
                (acc.iter().map(|w| w.count_ones() as usize).sum::<usize>()).saturating_sub(1)
            })
            .collect()
    }
}

/// The partial net of a MOLR: cells are points, rows, columns and each
/// (rectangle, symbol) class are lines. Column lines of a one-row MOLR
/// are singletons and are dropped.
pub fn partial_net(m: &MolrSet) -> IncidenceStructure {
    let (n, k, t) = (m.n(), m.k(), m.t());
    let points = (0..k * n).map(|p| PointTag::Cell { row: p / n, col: p % n }).collect();
    let mut lines = Vec::with_capacity(k + n + t * n);
    for r in 0..k {
        lines.push((LineTag::Row(r), (r * n..(r + 1) * n).collect()));
    }
    for c in 0..n {
        lines.push((LineTag::Column(c), (0..k).map(|r| r * n + c).collect()));
    }
    for s in 0..t {
        let mut by_symbol = vec![Vec::with_capacity(k); n];
        for r in 0..k {
            for (c, &x) in m.row(s, r).iter().enumerate() {
                by_symbol[x as usize].push(r * n + c);
            }
        }
        for (x, line) in by_symbol.into_iter().enumerate() {
            lines.push((LineTag::Symbol { rect: s, symbol: x }, line));
        }
    }
    let mut s = IncidenceStructure::new(points, lines).expect("indices are in range");
    s.source = Some((n, k, t));
    s
}

/// Projective plane of order `n` from a complete set of `n - 1` MOLS.
pub fn complete_to_projective(m: &MolrSet) -> Result<IncidenceStructure> {
    let (n, k, t) = (m.n(), m.k(), m.t());
    if k != n || t + 1 != n {
        return Err(MolrError::NotAFullMolsSet);
    }
    let net = partial_net(m);
    let mut points = net.points.clone();
    let ideal0 = points.len();
    points.extend((0..t + 2).map(PointTag::Ideal));
    let mut lines: Vec<(LineTag, Vec<usize>)> = net
        .tags
        .iter()
        .zip(&net.lines)
        .map(|(&tag, line)| {
            let class = match tag {
                LineTag::Row(_) => 0,
                LineTag::Column(_) => 1,
                LineTag::Symbol { rect, .. } => 2 + rect,
                LineTag::Infinity => unreachable!(),
            };
            let mut l = line.clone();
            l.push(ideal0 + class);
            (tag, l)
        })
        .collect();
    lines.push((LineTag::Infinity, (ideal0..ideal0 + t + 2).collect()));
    IncidenceStructure::new(points, lines)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneClass {
    Projective,
    Affine,
    Hyperbolic,
    None,
}

impl fmt::Display for PlaneClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PlaneClass::Projective => "projective",
            PlaneClass::Affine => "affine",
            PlaneClass::Hyperbolic => "hyperbolic",
            PlaneClass::None => "none",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneReport {
    pub points: usize,
    pub lines: usize,
    /// line size -> number of lines
    pub line_sizes: BTreeMap<usize, usize>,
    pub axioms: [bool; 4],
    pub uncovered_pairs: usize,
    pub multiply_covered_pairs: usize,
    pub p1: bool,
    pub p2: bool,
    pub p3: bool,
    pub class: PlaneClass,
}

impl PlaneReport {
    pub fn is_plane(&self) -> bool {
        self.axioms.iter().all(|&a| a)
    }
}

impl fmt::Display for PlaneReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<String> = self.line_sizes.iter().map(|(s, c)| format!("{s}:{c}")).collect();
        writeln!(f, "points={} lines={} sizes={}", self.points, self.lines, sizes.join(","))?;
        let ax: Vec<String> = self.axioms.iter().map(|a| (*a as u8).to_string()).collect();
        writeln!(
            f,
            "axioms={} uncovered_pairs={} multiply_covered_pairs={}",
            ax.join(""),
            self.uncovered_pairs,
            self.multiply_covered_pairs
        )?;
        write!(f, "P1={} P2={} P3={} class={}", self.p1 as u8, self.p2 as u8, self.p3 as u8, self.class)
    }
}

fn meets(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

fn has(mask: &[u64], p: usize) -> bool {
    mask[p / 64] >> (p % 64) & 1 == 1
}

/// Plane axioms, pair coverage and parallelity of `s`.
pub fn check_plane(s: &IncidenceStructure) -> PlaneReport {
    let v = s.n_points();
    let masks = s.masks();
    let pl = s.point_lines();
    let mut line_sizes = BTreeMap::new();
    for l in &s.lines {
        *line_sizes.entry(l.len()).or_insert(0) += 1;
    }
    let ax1 = s.lines.iter().all(|l| l.len() >= 2);

    let mut cover = vec![0u32; v * v];
    for l in &s.lines {
        for (i, &a) in l.iter().enumerate() {
            for &b in &l[i + 1..] {
                cover[a * v + b] += 1;
            }
        }
    }
    let (mut uncovered, mut multiple) = (0, 0);
    for a in 0..v {
        for b in a + 1..v {
            match cover[a * v + b] {
                0 => uncovered += 1,
                1 => {}
                _ => multiple += 1,
            }
        }
    }
    let ax2 = uncovered == 0 && multiple == 0;
    let ax3 = (0..v).any(|p| masks.iter().any(|m| !has(m, p)));

    let collinear = |a: usize, b: usize, c: usize| pl[a].iter().any(|&l| has(&masks[l], b) && has(&masks[l], c));
    let ax4 = four_in_general_position(v, &collinear);

    // parallel lines through p for every non-incident (p, l)
    let mut p2 = true;
    let mut p3 = true;
    let mut any_pair = false;
    for p in 0..v {
        for (li, m) in masks.iter().enumerate() {
            if has(m, p) {
                continue;
            }
            any_pair = true;
            let parallels = pl[p].iter().filter(|&&l| l != li && !meets(&masks[l], m)).count();
            p2 &= parallels == 1;
            p3 &= parallels >= 2;
        }
    }
    p2 &= any_pair;
    p3 &= any_pair;
    let p1 = (0..masks.len()).all(|a| (a + 1..masks.len()).all(|b| meets(&masks[a], &masks[b])));

    let axioms = [ax1, ax2, ax3, ax4];
    let class = if !axioms.iter().all(|&a| a) {
        PlaneClass::None
    } else if p1 {
        PlaneClass::Projective
    } else if p2 {
        PlaneClass::Affine
    } else if p3 {
        PlaneClass::Hyperbolic
    } else {
        PlaneClass::None
    };
    PlaneReport {
        points: v,
        lines: s.n_lines(),
        line_sizes,
        axioms,
        uncovered_pairs: uncovered,
        multiply_covered_pairs: multiple,
        p1,
        p2,
        p3,
        class,
    }
}

fn four_in_general_position(v: usize, collinear: &impl Fn(usize, usize, usize) -> bool) -> bool {
    for a in 0..v {
        for b in a + 1..v {
            for c in b + 1..v {
                if collinear(a, b, c) {
                    continue;
                }
                if (c + 1..v).any(|d| !collinear(a, b, d) && !collinear(a, c, d) && !collinear(b, c, d)) {
                    return true;
                }
            }
        }
    }
    false
}

/// Which lines a Sandler-style deletion removes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SandlerSelection {
    /// Three non-concurrent lines of a projective plane.
    Classical([usize; 3]),
    /// One line that is not a row line, in a plane built from an
    /// `(n-1)`-MOLR.
    NonRow(usize),
    /// Any set of lines, no precondition.
    Lines(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SandlerResult {
    pub structure: IncidenceStructure,
    pub report: PlaneReport,
    /// `t - k` when the input was a partial net.
    pub curvature: Option<i64>,
}

/// Deletes the selected lines with all their points, then drops lines left
/// with fewer than two points.
pub fn sandler_delete(s: &IncidenceStructure, sel: &SandlerSelection) -> Result<SandlerResult> {
    let chosen: Vec<usize> = match sel {
        SandlerSelection::Classical(ls) => ls.to_vec(),
        SandlerSelection::NonRow(l) => vec![*l],
        SandlerSelection::Lines(ls) => ls.clone(),
    };
    if let Some(&l) = chosen.iter().find(|&&l| l >= s.n_lines()) {
        return Err(MolrError::IndexOutOfRange { index: l, limit: s.n_lines() });
    }
    match sel {
        SandlerSelection::Classical([a, b, c]) => {
            if a == b || b == c || a == c {
                return Err(MolrError::Precondition("the three lines must be distinct".into()));
            }
            let common = s.lines[*a].iter().any(|p| s.lines[*b].contains(p) && s.lines[*c].contains(p));
            if common {
                return Err(MolrError::ConcurrentLines);
            }
        }
        SandlerSelection::NonRow(l) => {
            if matches!(s.tags[*l], LineTag::Row(_)) {
                return Err(MolrError::LineIsARow(*l));
            }
        }
        SandlerSelection::Lines(_) => {}
    }
    let mut gone = vec![false; s.n_points()];
    for &l in &chosen {
        for &p in &s.lines[l] {
            gone[p] = true;
        }
    }
    let mut new_index = vec![usize::MAX; s.n_points()];
    let mut points = Vec::new();
    for (p, &tag) in s.points.iter().enumerate() {
        if !gone[p] {
            new_index[p] = points.len();
            points.push(tag);
        }
    }
    let lines = s
        .lines
        .iter()
        .zip(&s.tags)
        .enumerate()
        .filter(|(i, _)| !chosen.contains(i))
        .map(|(_, (line, &tag))| (tag, line.iter().filter(|&&p| !gone[p]).map(|&p| new_index[p]).collect()))
        .collect();
    let mut structure = IncidenceStructure::new(points, lines)?;
    structure.source = s.source;
    let report = check_plane(&structure);
    let curvature = s.source.map(|(_, k, t)| t as i64 - k as i64);
    Ok(SandlerResult { structure, report, curvature })
}

/// Bipartite graph on the cells of a two-row MOLR. `matchings[0]` is the
/// column matching and `matchings[s + 1]` comes from rectangle `s`;
/// `matchings[c][j]` is the bottom vertex joined to top vertex `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoRowGraph {
    pub n: usize,
    pub matchings: Vec<Vec<u8>>,
}

impl TwoRowGraph {
    /// Coloured edges `(top, bottom, colour)`.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::with_capacity(self.n * self.matchings.len());
        for (c, m) in self.matchings.iter().enumerate() {
            for (j, &b) in m.iter().enumerate() {
                out.push((j, b as usize, c));
            }
        }
        out
    }

    /// Common degree of every vertex, if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let mut top = vec![0usize; self.n];
        let mut bottom = vec![0usize; self.n];
        for (j, b, _) in self.edges() {
            top[j] += 1;
            bottom[b] += 1;
        }
        let d = top[0];
        (top.iter().chain(&bottom).all(|&x| x == d)).then_some(d)
    }

    /// The normalized MOLR the graph encodes: first rows are the identity.
    pub fn to_molr(&self) -> Result<MolrSet> {
        let n = self.n;
        let t = self.matchings.len().saturating_sub(1);
        if t == 0 || self.matchings.iter().any(|m| m.len() != n || !perm::is_permutation(m)) {
            return Err(MolrError::WrongShape("matchings must be perfect".into()));
        }
        let mut cells = Vec::with_capacity(2 * n * t);
        for m in &self.matchings[1..] {
            cells.extend(perm::identity(n));
            let mut second = vec![0u8; n];
            for (j, &b) in m.iter().enumerate() {
                second[b as usize] = j as u8;
            }
            cells.extend(second);
        }
        MolrSet::from_flat(n, 2, t, &cells)
    }
}

pub fn two_row_graph(m: &MolrSet) -> Result<TwoRowGraph> {
    if m.k() != 2 {
        return Err(MolrError::WrongShape(format!("expected 2 rows, got {}", m.k())));
    }
    let n = m.n();
    let mut matchings = vec![perm::identity(n)];
    for s in 0..m.t() {
        let pos = perm::inverse(m.row(s, 1));
        matchings.push(m.row(s, 0).iter().map(|&x| pos[x as usize]).collect());
    }
    Ok(TwoRowGraph { n, matchings })
}

/// Reserved symbol of the column matching in [`latin_square_of`].
pub fn reserved_symbol(n: usize) -> u8 {
    (n - 1) as u8
}

/// Latin square `L[top][bottom] = colour` of a `2 × n` `(n-1)`-MOLR; the
/// column matching gets the reserved symbol `n - 1`, rectangle `s` gets `s`.
pub fn latin_square_of(m: &MolrSet) -> Result<LatinRectangle> {
    let n = m.n();
    if m.k() != 2 || m.t() + 1 != n {
        return Err(MolrError::WrongShape(format!(
            "expected a 2x{n} {}-MOLR, got {}x{n} {}-MOLR",
            n - 1,
            m.k(),
            m.t()
        )));
    }
    let g = two_row_graph(m)?;
    let mut cells = vec![u8::MAX; n * n];
    for (j, b, c) in g.edges() {
        let sym = if c == 0 { reserved_symbol(n) } else { (c - 1) as u8 };
        cells[j * n + b] = sym;
    }
    LatinRectangle::from_cells(n, n, cells)
}

/// Map induced on `latin_square_of(m)` by an autotopism `g` of `m`: an
/// isotopism of the square (as a one-rectangle MOLR) and whether it has to
/// be composed with a transpose, which happens when `g` swaps the rows.
pub fn induced_square_map(m: &MolrSet, g: &Isotopism) -> Result<(Isotopism, bool)> {
    let n = m.n();
    if g.dims() != (m.t(), 2, n) {
        return Err(MolrError::DimensionMismatch("isotopism does not fit the MOLR".into()));
    }
    let mut sym = perm::identity(n);
    for (s, &p) in g.rect_perm.iter().enumerate() {
        sym[s] = p;
    }
    let swapped = g.row_perm[0] == 1;
    let map = Isotopism {
        rect_perm: vec![0],
        row_perm: g.col_perm.clone(),
        col_perm: g.col_perm.clone(),
        sym_perms: vec![sym],
    };
    Ok((map, swapped))
}

pub fn transpose(l: &LatinRectangle) -> LatinRectangle {
    let n = l.n_cols();
    let k = l.n_rows();
    let mut cells = vec![0u8; n * k];
    for r in 0..k {
        for c in 0..n {
            cells[c * k + r] = l.get(r, c);
        }
    }
    LatinRectangle::from_cells_unchecked(n, k, cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::galois_mols;

    fn all_pairs_once(s: &IncidenceStructure) -> bool {
        let v = s.n_points();
        let mut count = vec![0; v * v];
        for l in &s.lines {
            for &a in l {
                for &b in l {
                    if a < b {
                        count[a * v + b] += 1;
                    }
                }
            }
        }
        (0..v).all(|a| (a + 1..v).all(|b| count[a * v + b] == 1))
    }

    #[test]
    fn galois_net_is_affine() {
        let net = partial_net(&galois_mols(5).unwrap());
        assert_eq!((net.n_points(), net.n_lines()), (25, 30));
        assert!(all_pairs_once(&net));
        let r = check_plane(&net);
        assert_eq!(r.class, PlaneClass::Affine);
        assert!(r.p2 && !r.p1);
    }

    #[test]
    fn one_row_net_drops_columns() {
        let m = MolrSet::from_flat(4, 1, 1, &[0, 1, 2, 3]).unwrap();
        let net = partial_net(&m);
        assert_eq!(net.n_lines(), 1);
        assert_eq!(net.tags, vec![LineTag::Row(0)]);
    }

    #[test]
    fn projective_completions() {
        for (n, v) in [(3, 13), (4, 21), (5, 31), (7, 57), (8, 73)] {
            let p = complete_to_projective(&galois_mols(n).unwrap()).unwrap();
            let r = check_plane(&p);
            assert_eq!((r.points, r.lines, r.class), (v, v, PlaneClass::Projective), "n={n}");
            assert_eq!(r.line_sizes.keys().copied().collect::<Vec<_>>(), vec![n + 1]);
        }
        let m = galois_mols(5).unwrap().truncate_rows(4).unwrap();
        assert_eq!(complete_to_projective(&m), Err(MolrError::NotAFullMolsSet));
    }

    #[test]
    fn uncovered_pair_fails_axioms() {
        let s = IncidenceStructure::new(
            vec![PointTag::Ideal(0); 4],
            vec![(LineTag::Infinity, vec![0, 1]), (LineTag::Infinity, vec![2, 3])],
        )
        .unwrap();
        let r = check_plane(&s);
        assert!(!r.axioms[1]);
        assert_eq!(r.uncovered_pairs, 4);
        assert_eq!(r.class, PlaneClass::None);
    }

    #[test]
    fn sandler_classical_and_affine() {
        let p = complete_to_projective(&galois_mols(4).unwrap()).unwrap();
        let pl = p.point_lines();
        // two lines through point 0 and a third missing it
        let (a, b) = (pl[0][0], pl[0][1]);
        let c = (0..p.n_lines()).find(|&l| !p.lines[l].contains(&0)).unwrap();
        let r = sandler_delete(&p, &SandlerSelection::Classical([a, b, c])).unwrap();
        assert!(r.report.p3);
        assert_eq!(r.report.class, PlaneClass::Hyperbolic);
        let d = pl[0][2];
        assert_eq!(sandler_delete(&p, &SandlerSelection::Classical([a, b, d])), Err(MolrError::ConcurrentLines));

        let net = partial_net(&galois_mols(5).unwrap());
        let rows: Vec<usize> = (0..net.n_lines()).filter(|&l| matches!(net.tags[l], LineTag::Row(_))).collect();
        // two parallel lines leave a single parallel through points of the
        // surviving rows; two intersecting lines give P3
        let r = sandler_delete(&net, &SandlerSelection::Lines(vec![rows[0], rows[1]])).unwrap();
        assert!(r.report.is_plane());
        assert!(!r.report.p3);
        let col = (0..net.n_lines()).find(|&l| matches!(net.tags[l], LineTag::Column(_))).unwrap();
        let r = sandler_delete(&net, &SandlerSelection::Lines(vec![rows[0], col])).unwrap();
        assert_eq!(r.report.class, PlaneClass::Hyperbolic);
        assert_eq!(sandler_delete(&net, &SandlerSelection::NonRow(rows[0])), Err(MolrError::LineIsARow(rows[0])));
    }

    #[test]
    fn two_row_graph_round_trip() {
        let m = galois_mols(5).unwrap().truncate_rows(2).unwrap();
        let g = two_row_graph(&m).unwrap();
        assert_eq!(g.regular_degree(), Some(5));
        let back = g.to_molr().unwrap();
        assert_eq!(crate::canonical_key(&back), crate::canonical_key(&m));
        let l = latin_square_of(&m).unwrap();
        assert_eq!(l.n_rows(), 5);
        assert!(matches!(latin_square_of(&m.select(&[0, 1]).unwrap()), Err(MolrError::WrongShape(_))));
    }

    #[test]
    fn induced_square_maps_fix_the_square() {
        for n in [4, 5, 7] {
            let m = galois_mols(n).unwrap().truncate_rows(2).unwrap();
            let l = latin_square_of(&m).unwrap();
            let square = MolrSet::new(vec![l.clone()]).unwrap();
            let auts = crate::automorphisms(&m).unwrap();
            assert!(auts.iter().any(|g| g.row_perm[0] == 1));
            for g in &auts {
                let (map, swapped) = induced_square_map(&m, g).unwrap();
                let image = map.apply(&square).unwrap().rect(0).clone();
                let image = if swapped { transpose(&image) } else { image };
                assert_eq!(image, l, "n={n} {g:?}");
            }
        }
    }
}
