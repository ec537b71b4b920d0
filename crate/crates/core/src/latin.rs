//! Latin rectangles, sets of mutually orthogonal Latin rectangles and the
//! normal form used to seed the search.

use std::fmt;

use crate::error::{MolrError, Result};
use crate::isotopism::Isotopism;
use crate::perm;

/// Largest supported symbol count.
pub const MAX_N: usize = 16;

/// A `k × n` array over the symbols `0..n` whose rows are permutations and
/// whose columns repeat no symbol.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatinRectangle {
    k: usize,
    n: usize,
    cells: Vec<u8>,
}

impl LatinRectangle {
    pub fn new(grid: &[Vec<u8>]) -> Result<Self> {
        validate_rectangle(grid)
    }

    pub fn from_cells(k: usize, n: usize, cells: Vec<u8>) -> Result<Self> {
        if cells.len() != k * n {
            return Err(MolrError::BadDimensions(format!(
                "{} cells for a {k}x{n} grid",
                cells.len()
            )));
        }
        let grid: Vec<Vec<u8>> = cells.chunks(n.max(1)).map(|c| c.to_vec()).collect();
        validate_rectangle(&grid)
    }

    pub(crate) fn from_cells_unchecked(k: usize, n: usize, cells: Vec<u8>) -> Self {
        debug_assert_eq!(cells.len(), k * n);
        LatinRectangle { k, n, cells }
    }

    /// The `1 × n` rectangle holding the identity row.
    pub fn identity_row(n: usize) -> Self {
        LatinRectangle { k: 1, n, cells: perm::identity(n) }
    }

    pub fn n_rows(&self) -> usize {
        self.k
    }

    pub fn n_cols(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.cells[i * self.n..(i + 1) * self.n]
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.cells[i * self.n + j]
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.cells.chunks(self.n)
    }

    pub fn to_grid(&self) -> Vec<Vec<u8>> {
        self.rows().map(|r| r.to_vec()).collect()
    }
}

impl fmt::Debug for LatinRectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatinRectangle{:?}", self.to_grid())
    }
}

pub fn validate_rectangle(grid: &[Vec<u8>]) -> Result<LatinRectangle> {
    let k = grid.len();
    if k == 0 {
        return Err(MolrError::BadDimensions("no rows".into()));
    }
    let n = grid[0].len();
    if n == 0 || n > MAX_N {
        return Err(MolrError::BadDimensions(format!("{n} columns")));
    }
    if grid.iter().any(|r| r.len() != n) {
        return Err(MolrError::BadDimensions("ragged rows".into()));
    }
    if k > n {
        return Err(MolrError::BadDimensions(format!("{k} rows exceed {n} columns")));
    }
    for (i, row) in grid.iter().enumerate() {
        if !perm::is_permutation(row) {
            return Err(MolrError::RowNotPermutation(i));
        }
    }
    for j in 0..n {
        let mut seen = 0u32;
        for row in grid {
            let x = row[j];
            if seen >> x & 1 == 1 {
                return Err(MolrError::ColumnRepeat(j, x));
            }
            seen |= 1 << x;
        }
    }
    Ok(LatinRectangle { k, n, cells: grid.concat() })
}

/// First repeated ordered pair when superimposing `a` on `b`, if any.
fn repeated_pair(a: &LatinRectangle, b: &LatinRectangle) -> Option<(u8, u8)> {
    let mut used = [0u32; MAX_N];
    for (&x, &y) in a.cells.iter().zip(&b.cells) {
        if used[x as usize] >> y & 1 == 1 {
            return Some((x, y));
        }
        used[x as usize] |= 1 << y;
    }
    None
}

pub fn are_orthogonal(a: &LatinRectangle, b: &LatinRectangle) -> Result<bool> {
    if (a.k, a.n) != (b.k, b.n) {
        return Err(MolrError::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            a.k, a.n, b.k, b.n
        )));
    }
    Ok(repeated_pair(a, b).is_none())
}

/// Cells `(r1, c1, r2, c2)`, `r1*n + c1 < r2*n + c2`, where the superimposed
/// pair of `a` and `b` repeats.
pub fn pair_collisions(a: &LatinRectangle, b: &LatinRectangle) -> Result<Vec<(usize, usize, usize, usize)>> {
    if (a.k, a.n) != (b.k, b.n) {
        return Err(MolrError::DimensionMismatch(format!("{}x{} vs {}x{}", a.k, a.n, b.k, b.n)));
    }
    let n = a.n;
    let mut first = vec![usize::MAX; n * n];
    let mut out = Vec::new();
    for (i, (&x, &y)) in a.cells.iter().zip(&b.cells).enumerate() {
        let slot = &mut first[x as usize * n + y as usize];
        if *slot == usize::MAX {
            *slot = i;
        } else {
            out.push((*slot / n, *slot % n, i / n, i % n));
        }
    }
    Ok(out)
}

/// Completes an `(n-1) × n` Latin rectangle to a square: each column gets
/// the one symbol it is missing.
pub fn complete_square(r: &LatinRectangle) -> Result<LatinRectangle> {
    let (k, n) = (r.k, r.n);
    if k + 1 != n {
        return Err(MolrError::WrongShape(format!("expected {}x{n}, got {k}x{n}", n - 1)));
    }
    let mut cells = r.cells.clone();
    for j in 0..n {
        let present = (0..k).fold(0u32, |m, i| m | 1 << r.cells[i * n + j]);
        cells.push((!present).trailing_zeros() as u8);
    }
    LatinRectangle::from_cells(n, n, cells)
}

/// An ordered list of `t` pairwise orthogonal `k × n` Latin rectangles.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MolrSet {
    n: usize,
    k: usize,
    rects: Vec<LatinRectangle>,
}

impl fmt::Debug for MolrSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MolrSet(n={}, k={}, t={}) ", self.n, self.k, self.t())?;
        f.debug_list().entries(self.rects.iter().map(|r| r.to_grid())).finish()
    }
}

pub fn validate_molr(rects: Vec<LatinRectangle>) -> Result<MolrSet> {
    let first = rects
        .first()
        .ok_or_else(|| MolrError::BadDimensions("empty rectangle list".into()))?;
    let (k, n) = (first.k, first.n);
    for r in &rects {
        if (r.k, r.n) != (k, n) {
            return Err(MolrError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                r.k, r.n, k, n
            )));
        }
    }
    for i in 0..rects.len() {
        for j in i + 1..rects.len() {
            if let Some((x, y)) = repeated_pair(&rects[i], &rects[j]) {
                return Err(MolrError::NotOrthogonal(i, j, x, y));
            }
        }
    }
    Ok(MolrSet { n, k, rects })
}

impl MolrSet {
    pub fn new(rects: Vec<LatinRectangle>) -> Result<Self> {
        validate_molr(rects)
    }

    /// Builds from `t` grids of `k` rows each.
    pub fn from_grids(grids: &[Vec<Vec<u8>>]) -> Result<Self> {
        let rects = grids.iter().map(|g| validate_rectangle(g)).collect::<Result<Vec<_>>>()?;
        validate_molr(rects)
    }

    /// Cells laid out rectangle-major, then row-major.
    pub fn from_flat(n: usize, k: usize, t: usize, cells: &[u8]) -> Result<Self> {
        if cells.len() != t * k * n || t == 0 {
            return Err(MolrError::BadDimensions(format!(
                "{} cells for t={t}, k={k}, n={n}",
                cells.len()
            )));
        }
        let rects = cells
            .chunks(k * n)
            .map(|c| LatinRectangle::from_cells(k, n, c.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        validate_molr(rects)
    }

    pub(crate) fn from_flat_unchecked(n: usize, k: usize, t: usize, cells: Vec<u8>) -> Self {
        debug_assert_eq!(cells.len(), t * k * n);
        let rects = if k * n == 0 {
            Vec::new()
        } else {
            cells
                .chunks(k * n)
                .map(|c| LatinRectangle::from_cells_unchecked(k, n, c.to_vec()))
                .collect()
        };
        MolrSet { n, k, rects }
    }

    pub(crate) fn from_rects_unchecked(rects: Vec<LatinRectangle>) -> Self {
        let (k, n) = (rects[0].k, rects[0].n);
        MolrSet { n, k, rects }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.rects.len()
    }

    pub fn rects(&self) -> &[LatinRectangle] {
        &self.rects
    }

    pub fn rect(&self, s: usize) -> &LatinRectangle {
        &self.rects[s]
    }

    pub fn row(&self, s: usize, r: usize) -> &[u8] {
        self.rects[s].row(r)
    }

    pub fn cell(&self, s: usize, r: usize, j: usize) -> u8 {
        self.rects[s].get(r, j)
    }

    pub fn flat_cells(&self) -> Vec<u8> {
        self.rects.iter().flat_map(|r| r.cells.iter().copied()).collect()
    }

    /// The sub-MOLR made of the given rectangles, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<MolrSet> {
        let rects = indices
            .iter()
            .map(|&i| {
                self.rects.get(i).cloned().ok_or(MolrError::IndexOutOfRange {
                    index: i,
                    limit: self.t(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        validate_molr(rects)
    }

    /// The first `k` rows of every rectangle.
    pub fn truncate_rows(&self, k: usize) -> Result<MolrSet> {
        if k == 0 || k > self.k {
            return Err(MolrError::IndexOutOfRange { index: k, limit: self.k });
        }
        let rects = self
            .rects
            .iter()
            .map(|r| LatinRectangle::from_cells_unchecked(k, self.n, r.cells[..k * self.n].to_vec()))
            .collect();
        Ok(MolrSet { n: self.n, k, rects })
    }

    /// Drops row `r` from every rectangle.
    pub fn delete_row(&self, r: usize) -> Result<MolrSet> {
        if self.k < 2 || r >= self.k {
            return Err(MolrError::IndexOutOfRange { index: r, limit: self.k });
        }
        let n = self.n;
        let rects = self
            .rects
            .iter()
            .map(|rect| {
                let cells = rect
                    .rows()
                    .enumerate()
                    .filter(|(i, _)| *i != r)
                    .flat_map(|(_, row)| row.iter().copied())
                    .collect();
                LatinRectangle::from_cells_unchecked(self.k - 1, n, cells)
            })
            .collect();
        Ok(MolrSet { n, k: self.k - 1, rects })
    }

    pub fn is_normalized(&self) -> bool {
        let id = perm::identity(self.n);
        if self.rects.iter().any(|r| r.row(0) != id.as_slice()) {
            return false;
        }
        if self.k < 2 {
            return true;
        }
        let second_rows_decrease = self.rects.windows(2).all(|w| w[0].row(1) > w[1].row(1));
        let rows_decrease = (1..self.k - 1).all(|i| self.rects[0].row(i) > self.rects[0].row(i + 1));
        second_rows_decrease && rows_decrease
    }
}

/// Brings `m` into normal form: identity first rows, rectangles ordered by
/// decreasing second row, rows 2..k of the first rectangle decreasing.
///
/// Returns the normalized set together with the isotopism that produced it.
pub fn normalize(m: &MolrSet) -> (MolrSet, Isotopism) {
    let (t, k, n) = (m.t(), m.k(), m.n());
    // Column permutation making rectangle 0's first row the identity, then
    // per-rectangle symbol relabelling for the rest.
    let col_perm = m.row(0, 0).to_vec();
    let col_inv = perm::inverse(&col_perm);
    let relabel: Vec<Vec<u8>> = (0..t)
        .map(|s| {
            // after moving columns, first row reads row0[col_inv[y]] at column y
            let moved: Vec<u8> = (0..n).map(|y| m.row(s, 0)[col_inv[y] as usize]).collect();
            perm::inverse(&moved)
        })
        .collect();
    // rows of every rectangle after column move and relabelling
    let row_of = |s: usize, r: usize| -> Vec<u8> {
        (0..n)
            .map(|y| relabel[s][m.row(s, r)[col_inv[y] as usize] as usize])
            .collect()
    };
    let rows: Vec<Vec<Vec<u8>>> = (0..t).map(|s| (0..k).map(|r| row_of(s, r)).collect()).collect();

    let (row_order, rect_order) = if k < 2 {
        ((0..k).collect::<Vec<_>>(), (0..t).collect::<Vec<_>>())
    } else {
        // The rectangle holding the largest non-first row leads.
        let (lead, lead_row) = (0..t)
            .flat_map(|s| (1..k).map(move |r| (s, r)))
            .max_by(|&(s1, r1), &(s2, r2)| rows[s1][r1].cmp(&rows[s2][r2]))
            .unwrap();
        let _ = lead_row;
        let mut row_order: Vec<usize> = (1..k).collect();
        row_order.sort_by(|&a, &b| rows[lead][b].cmp(&rows[lead][a]));
        row_order.insert(0, 0);
        let second = row_order[1];
        let mut rect_order: Vec<usize> = (0..t).collect();
        rect_order.sort_by(|&a, &b| rows[b][second].cmp(&rows[a][second]));
        debug_assert_eq!(rect_order[0], lead);
        debug_assert!(rect_order
            .windows(2)
            .all(|w| rows[w[0]][second] != rows[w[1]][second]));
        (row_order, rect_order)
    };

    let mut rect_perm = vec![0u8; t];
    for (p, &q) in rect_order.iter().enumerate() {
        rect_perm[q] = p as u8;
    }
    let mut row_perm = vec![0u8; k];
    for (p, &r) in row_order.iter().enumerate() {
        row_perm[r] = p as u8;
    }
    let sym_perms = (0..t).map(|p| relabel[rect_order[p]].clone()).collect();
    let g = Isotopism { rect_perm, row_perm, col_perm, sym_perms };
    let out = g.apply_unchecked(m);
    debug_assert!(out.is_normalized());
    (out, g)
}

/// Exchanges the column coordinate with the symbol coordinate of rectangle
/// `coord`, viewing the set as an orthogonal array on
/// `(row, column, symbol_1, ..., symbol_t)`.
pub fn conjugate_swap(m: &MolrSet, coord: usize) -> Result<MolrSet> {
    let (t, k, n) = (m.t(), m.k(), m.n());
    if coord >= t {
        return Err(MolrError::IndexOutOfRange { index: coord, limit: t });
    }
    let mut out = vec![0u8; t * k * n];
    for r in 0..k {
        let pivot = m.row(coord, r);
        for j in 0..n {
            let c = pivot[j] as usize;
            for s in 0..t {
                let v = if s == coord { j as u8 } else { m.row(s, r)[j] };
                out[(s * k + r) * n + c] = v;
            }
        }
    }
    let conj = MolrSet::from_flat_unchecked(n, k, t, out);
    debug_assert!(validate_molr(conj.rects.clone()).is_ok());
    Ok(conj)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_is_latin(grid: &[Vec<u8>]) -> bool {
        let n = grid[0].len();
        for row in grid {
            for s in 0..n as u8 {
                if row.iter().filter(|&&x| x == s).count() != 1 {
                    return false;
                }
            }
        }
        for j in 0..n {
            for a in 0..grid.len() {
                for b in a + 1..grid.len() {
                    if grid[a][j] == grid[b][j] {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn validate_examples() {
        assert!(validate_rectangle(&[vec![0, 1, 2]]).is_ok());
        assert_eq!(
            validate_rectangle(&[vec![0, 1, 2], vec![0, 2, 1]]),
            Err(MolrError::ColumnRepeat(0, 0))
        );
        let g = vec![vec![0, 1, 2, 3], vec![3, 2, 0, 1], vec![1, 0, 3, 2]];
        assert!(brute_force_is_latin(&g));
        assert!(validate_rectangle(&g).is_ok());
        assert_eq!(
            validate_rectangle(&[vec![0, 1, 1]]),
            Err(MolrError::RowNotPermutation(0))
        );
        assert!(matches!(
            validate_rectangle(&[vec![0, 1], vec![1, 0], vec![0, 1]]),
            Err(MolrError::BadDimensions(_))
        ));
        assert!(matches!(
            validate_rectangle(&[vec![0, 1], vec![1]]),
            Err(MolrError::BadDimensions(_))
        ));
    }

    #[test]
    fn validate_matches_scan_oracle_on_all_small_grids() {
        // every 2x3 grid over 0..3
        for code in 0..3usize.pow(6) {
            let mut c = code;
            let grid: Vec<Vec<u8>> = (0..2)
                .map(|_| {
                    (0..3)
                        .map(|_| {
                            let v = (c % 3) as u8;
                            c /= 3;
                            v
                        })
                        .collect()
                })
                .collect();
            assert_eq!(validate_rectangle(&grid).is_ok(), brute_force_is_latin(&grid), "{grid:?}");
        }
    }

    fn rect(g: &[&[u8]]) -> LatinRectangle {
        validate_rectangle(&g.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn orthogonality_examples() {
        let a = rect(&[&[0, 1, 2, 3], &[1, 0, 3, 2]]);
        let b = rect(&[&[0, 1, 2, 3], &[2, 3, 0, 1]]);
        let c = rect(&[&[0, 1, 2, 3], &[3, 2, 1, 0]]);
        assert!(!are_orthogonal(&a, &a).unwrap());
        assert!(are_orthogonal(&a, &b).unwrap());
        assert!(are_orthogonal(&b, &a).unwrap());
        assert!(are_orthogonal(&c, &a).unwrap());
        let short = rect(&[&[0, 1, 2, 3]]);
        assert!(matches!(are_orthogonal(&a, &short), Err(MolrError::DimensionMismatch(_))));
    }

    #[test]
    fn validate_molr_examples() {
        let a = rect(&[&[0, 1, 2, 3], &[1, 0, 3, 2]]);
        assert_eq!(MolrSet::new(vec![a.clone()]).unwrap().t(), 1);
        assert!(matches!(
            MolrSet::new(vec![a.clone(), a.clone()]),
            Err(MolrError::NotOrthogonal(0, 1, _, _))
        ));
        assert!(MolrSet::new(vec![]).is_err());
    }

    #[test]
    fn normalize_examples() {
        let one = MolrSet::new(vec![rect(&[&[2, 0, 3, 1]])]).unwrap();
        let (norm, _) = normalize(&one);
        assert_eq!(norm.row(0, 0), &[0, 1, 2, 3]);

        let a = rect(&[&[0, 1, 2, 3], &[1, 0, 3, 2]]);
        let b = rect(&[&[0, 1, 2, 3], &[2, 3, 0, 1]]);
        let swapped = MolrSet::new(vec![a.clone(), b.clone()]).unwrap();
        let (norm, g) = normalize(&swapped);
        assert!(norm.is_normalized());
        assert_eq!(norm.rect(0), &b);
        assert_eq!(norm.rect(1), &a);
        assert_eq!(g.apply(&swapped).unwrap(), norm);
        let (again, g2) = normalize(&norm);
        assert_eq!(again, norm);
        assert!(g2.is_identity());
    }

    #[test]
    fn conjugate_swap_is_an_involution() {
        let a = rect(&[&[0, 1, 2, 3], &[1, 0, 3, 2], &[2, 3, 0, 1]]);
        let b = rect(&[&[0, 1, 2, 3], &[2, 3, 0, 1], &[3, 2, 1, 0]]);
        let m = MolrSet::new(vec![a, b]).unwrap();
        for c in 0..2 {
            let conj = conjugate_swap(&m, c).unwrap();
            assert!(validate_molr(conj.rects().to_vec()).is_ok());
            assert_eq!(conjugate_swap(&conj, c).unwrap(), m);
        }
        assert!(matches!(conjugate_swap(&m, 2), Err(MolrError::IndexOutOfRange { .. })));
    }

    #[test]
    fn conjugate_of_involution_rows_is_fixed() {
        // rows are involutions, so the row-wise inverse is the square itself
        let sq = rect(&[&[0, 1, 2, 3], &[1, 0, 3, 2], &[2, 3, 0, 1], &[3, 2, 1, 0]]);
        let m = MolrSet::new(vec![sq]).unwrap();
        assert_eq!(conjugate_swap(&m, 0).unwrap(), m);
    }
}
