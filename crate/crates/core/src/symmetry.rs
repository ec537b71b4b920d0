//! Canonical forms, autotopism groups and the regularity classifiers.
//!
//! The canonical form of a MOLR anchors on a triple (rectangle `s`, base row
//! `r0`, second row `i`). Relative to the base row, row `i` of rectangle `s`
//! is the derangement `D = A_s[r0]^-1 ∘ A_s[i]`, and every column relabelling
//! conjugating `D` to a fixed cycle form is tried. Symbol permutations are
//! forced by making every base row the identity, the remaining rows and
//! rectangles are put in increasing order, and the lexicographically least
//! cell stream wins. Only triples whose cycle type is cheapest to expand are
//! searched; the choice depends on the class alone.

use std::cmp::Ordering;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{MolrError, Result};
use crate::isotopism::Isotopism;
use crate::latin::{conjugate_swap, normalize, LatinRectangle, MolrSet};
use crate::perm;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flags {
    pub homogeneous: bool,
    pub transitive: bool,
    pub stepwise_homogeneous: bool,
    pub stepwise_transitive: bool,
}

impl Flags {
    /// `H`, `T`, `sH`, `sT` concatenated, or `-` when none is set.
    pub fn code(&self) -> String {
        let mut s = String::new();
        if self.homogeneous {
            s.push('H');
        }
        if self.transitive {
            s.push('T');
        }
        if self.stepwise_homogeneous {
            s.push_str("sH");
        }
        if self.stepwise_transitive {
            s.push_str("sT");
        }
        if s.is_empty() {
            s.push('-');
        }
        s
    }

    pub fn parse(code: &str) -> Option<Flags> {
        let mut f = Flags::default();
        if code == "-" {
            return Some(f);
        }
        let mut rest = code;
        let mut take = |tag: &str| match rest.strip_prefix(tag) {
            Some(r) => {
                rest = r;
                true
            }
            None => false,
        };
        f.homogeneous = take("H");
        f.transitive = take("T");
        f.stepwise_homogeneous = take("sH");
        f.stepwise_transitive = take("sT");
        rest.is_empty().then_some(f)
    }
}

#[derive(Debug, Clone)]
pub struct ClassRecord {
    pub canonical_key: Vec<u8>,
    pub representative: MolrSet,
    pub aut_order: u64,
    /// Generators of the autotopism group of `representative`.
    pub aut_generators: Vec<Isotopism>,
    pub rect_orbits: Vec<Vec<usize>>,
    pub flags: Flags,
}

impl ClassRecord {
    pub fn n(&self) -> usize {
        self.representative.n()
    }

    pub fn k(&self) -> usize {
        self.representative.k()
    }

    pub fn t(&self) -> usize {
        self.representative.t()
    }
}

/// One isotopism onto the current best form: `rects[p]` is the input
/// rectangle placed at slot `p`, `rows[x]` the input row placed at row `x`,
/// `cols` the column map.
#[derive(Debug, Clone)]
struct Cand {
    rects: Vec<u8>,
    rows: Vec<u8>,
    cols: Vec<u8>,
}

struct Found {
    form: Vec<u8>,
    cands: Vec<Cand>,
}

struct Search {
    t: usize,
    k: usize,
    n: usize,
    /// `d[((s*k + r0)*k + x)*n ..]` is `A_s[r0]^-1 ∘ A_s[x]`.
    d: Vec<u8>,
    best: Option<Vec<u8>>,
    cands: Vec<Cand>,
    cur: Vec<u8>,
    rows_s: Vec<u8>,
    row_order: Vec<u8>,
    second: Vec<u8>,
    rect_order: Vec<u8>,
}

impl Search {
    fn new(m: &MolrSet) -> Self {
        let (t, k, n) = (m.t(), m.k(), m.n());
        let mut d = vec![0u8; t * k * k * n];
        for s in 0..t {
            for r0 in 0..k {
                let inv = perm::inverse(m.row(s, r0));
                for x in 0..k {
                    let base = ((s * k + r0) * k + x) * n;
                    for (j, &v) in m.row(s, x).iter().enumerate() {
                        d[base + j] = inv[v as usize];
                    }
                }
            }
        }
        Search {
            t,
            k,
            n,
            d,
            best: None,
            cands: Vec::new(),
            cur: vec![0; t * k * n],
            rows_s: vec![0; k * n],
            row_order: Vec::with_capacity(k),
            second: vec![0; t * n],
            rect_order: Vec::with_capacity(t),
        }
    }

    fn dperm(&self, s: usize, r0: usize, x: usize) -> &[u8] {
        let base = ((s * self.k + r0) * self.k + x) * self.n;
        &self.d[base..base + self.n]
    }

    /// Triples sharing the cycle type that minimizes the number of
    /// candidate labellings.
    fn anchor_triples(&self) -> (Vec<u8>, Vec<(usize, usize, usize)>) {
        let mut by_type: FxHashMap<Vec<u8>, Vec<(usize, usize, usize)>> = FxHashMap::default();
        for s in 0..self.t {
            for r0 in 0..self.k {
                for i in 0..self.k {
                    if i != r0 {
                        let ct = perm::cycle_type(self.dperm(s, r0, i));
                        by_type.entry(ct).or_default().push((s, r0, i));
                    }
                }
            }
        }
        by_type
            .into_iter()
            .min_by(|(ta, va), (tb, vb)| {
                let ca = (va.len() as u64).saturating_mul(perm::centralizer_order(ta));
                let cb = (vb.len() as u64).saturating_mul(perm::centralizer_order(tb));
                ca.cmp(&cb).then_with(|| ta.cmp(tb))
            })
            .unwrap()
    }

    fn run(mut self) -> Found {
        let (ty, triples) = self.anchor_triples();
        let mut slots = Vec::with_capacity(ty.len());
        let mut start = 0u8;
        for &len in &ty {
            slots.push((start, len));
            start += len;
        }
        let n = self.n;
        for (s, r0, i) in triples {
            let cycles = cycles_of(self.dperm(s, r0, i));
            let mut c = vec![0u8; n];
            let mut used = vec![false; slots.len()];
            self.label(&cycles, 0, &slots, &mut used, &mut c, (s, r0, i));
        }
        Found { form: self.best.unwrap(), cands: self.cands }
    }

    fn label(
        &mut self,
        cycles: &[Vec<u8>],
        ci: usize,
        slots: &[(u8, u8)],
        used: &mut [bool],
        c: &mut [u8],
        triple: (usize, usize, usize),
    ) {
        if ci == cycles.len() {
            self.evaluate(triple, c);
            return;
        }
        let cyc = &cycles[ci];
        let len = cyc.len();
        for si in 0..slots.len() {
            let (start, slen) = slots[si];
            if used[si] || slen as usize != len {
                continue;
            }
            used[si] = true;
            for o in 0..len {
                for (m, &x) in cyc.iter().enumerate() {
                    c[x as usize] = start + ((m + o) % len) as u8;
                }
                self.label(cycles, ci + 1, slots, used, c, triple);
            }
            used[si] = false;
        }
    }

    fn conj_into(d: &[u8], c: &[u8], out: &mut [u8]) {
        for (j, &x) in d.iter().enumerate() {
            out[c[j] as usize] = c[x as usize];
        }
    }

    /// Compares `cur[range]` against the best form; returns `Less` once the
    /// candidate has become strictly better.
    fn check(&self, state: Ordering, lo: usize, hi: usize) -> Ordering {
        if state != Ordering::Equal {
            return state;
        }
        match &self.best {
            None => Ordering::Less,
            Some(b) => self.cur[lo..hi].cmp(&b[lo..hi]),
        }
    }

    fn evaluate(&mut self, (s, r0, i): (usize, usize, usize), c: &[u8]) {
        let (t, k, n) = (self.t, self.k, self.n);
        let block = k * n;
        let base_s = (s * k + r0) * k * n;
        for x in 0..k {
            let (lo, hi) = (base_s + x * n, base_s + (x + 1) * n);
            Self::conj_into(&self.d[lo..hi], c, &mut self.rows_s[x * n..(x + 1) * n]);
        }
        self.row_order.clear();
        self.row_order.extend((0..k as u8).filter(|&x| x as usize != r0 && x as usize != i));
        {
            let rows_s = &self.rows_s;
            self.row_order
                .sort_unstable_by(|&a, &b| rows_s[a as usize * n..][..n].cmp(&rows_s[b as usize * n..][..n]));
        }
        self.row_order.insert(0, i as u8);
        self.row_order.insert(0, r0 as u8);
        for (pos, &x) in self.row_order.iter().enumerate() {
            let x = x as usize;
            self.cur[pos * n..(pos + 1) * n].copy_from_slice(&self.rows_s[x * n..(x + 1) * n]);
        }
        let mut state = self.check(Ordering::Equal, 0, block);
        if state == Ordering::Greater {
            return;
        }
        if t > 1 {
            self.rect_order.clear();
            for q in 0..t {
                if q != s {
                    let lo = ((q * k + r0) * k + i) * n;
                    Self::conj_into(&self.d[lo..lo + n], c, &mut self.second[q * n..(q + 1) * n]);
                    self.rect_order.push(q as u8);
                }
            }
            {
                let second = &self.second;
                self.rect_order
                    .sort_unstable_by(|&a, &b| second[a as usize * n..][..n].cmp(&second[b as usize * n..][..n]));
            }
            for p in 1..t {
                let q = self.rect_order[p - 1] as usize;
                let slot = p * block;
                for pos in 0..k {
                    let x = self.row_order[pos] as usize;
                    let lo = ((q * k + r0) * k + x) * n;
                    let (dst_lo, dst_hi) = (slot + pos * n, slot + (pos + 1) * n);
                    Self::conj_into(&self.d[lo..lo + n], c, &mut self.cur[dst_lo..dst_hi]);
                    state = self.check(state, dst_lo, dst_hi);
                    if state == Ordering::Greater {
                        return;
                    }
                }
            }
        }
        let mut rects = Vec::with_capacity(t);
        rects.push(s as u8);
        if t > 1 {
            rects.extend_from_slice(&self.rect_order);
        }
        let cand = Cand { rects, rows: self.row_order.clone(), cols: c.to_vec() };
        if state == Ordering::Less {
            self.best = Some(self.cur.clone());
            self.cands.clear();
        }
        self.cands.push(cand);
    }
}

fn cycles_of(p: &[u8]) -> Vec<Vec<u8>> {
    let mut seen = vec![false; p.len()];
    let mut cycles = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cyc.push(x as u8);
            x = p[x] as usize;
        }
        cycles.push(cyc);
    }
    cycles.sort_by(|a, b| b.len().cmp(&a.len()));
    cycles
}

fn key_of(n: usize, k: usize, t: usize, form: &[u8]) -> Vec<u8> {
    let mut key = Vec::with_capacity(3 + form.len());
    key.extend_from_slice(&[n as u8, k as u8, t as u8]);
    key.extend_from_slice(form);
    key
}

fn identity_form(m: &MolrSet) -> Vec<u8> {
    let id = perm::identity(m.n());
    id.repeat(m.t())
}

impl Cand {
    /// The isotopism realizing this candidate on `m`.
    fn isotopism(&self, m: &MolrSet) -> Isotopism {
        let t = self.rects.len();
        let r0 = self.rows[0] as usize;
        let mut rect_perm = vec![0u8; t];
        for (p, &q) in self.rects.iter().enumerate() {
            rect_perm[q as usize] = p as u8;
        }
        let sym_perms = self
            .rects
            .iter()
            .map(|&q| perm::compose(&self.cols, &perm::inverse(m.row(q as usize, r0))))
            .collect();
        Isotopism { rect_perm, row_perm: perm::inverse(&self.rows), col_perm: self.cols.clone(), sym_perms }
    }
}

fn search(m: &MolrSet) -> Option<Found> {
    (m.k() >= 2).then(|| Search::new(m).run())
}

/// Canonical key: identical exactly for isotopic inputs.
pub fn canonical_key(m: &MolrSet) -> Vec<u8> {
    match search(m) {
        Some(f) => key_of(m.n(), m.k(), m.t(), &f.form),
        None => key_of(m.n(), 1, m.t(), &identity_form(m)),
    }
}

/// Order of the autotopism group of `m`.
pub fn aut_order(m: &MolrSet) -> u64 {
    match search(m) {
        Some(f) => f.cands.len() as u64,
        None => perm::factorial(m.t()).saturating_mul(perm::factorial(m.n())),
    }
}

/// Every autotopism of `m`. Not available for `k = 1`, where the group is
/// the full `S_t × S_n` action on identity rows.
pub fn automorphisms(m: &MolrSet) -> Result<Vec<Isotopism>> {
    let f = search(m).ok_or_else(|| {
        MolrError::Precondition("automorphism listing needs at least two rows".into())
    })?;
    let g0_inv = f.cands[0].isotopism(m).inverse();
    Ok(f.cands.iter().map(|c| g0_inv.compose(&c.isotopism(m))).collect())
}

pub fn rect_key(r: &LatinRectangle) -> Vec<u8> {
    canonical_key(&MolrSet::from_rects_unchecked(vec![r.clone()]))
}

pub fn is_homogeneous(m: &MolrSet) -> bool {
    if m.t() < 2 || m.k() < 2 {
        return true;
    }
    let first = rect_key(m.rect(0));
    m.rects()[1..].iter().all(|r| rect_key(r) == first)
}

pub fn is_transitive(rec: &ClassRecord) -> bool {
    rec.rect_orbits.len() == 1
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    fn blocks(mut self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut index = vec![usize::MAX; n];
        for x in 0..n {
            let r = self.find(x);
            if index[r] == usize::MAX {
                index[r] = out.len();
                out.push(Vec::new());
            }
            out[index[r]].push(x);
        }
        out
    }
}

fn orbits_from_rect_perms<'p>(t: usize, perms: impl Iterator<Item = &'p [u8]>) -> Vec<Vec<usize>> {
    let mut uf = UnionFind((0..t).collect());
    for p in perms {
        for (q, &x) in p.iter().enumerate() {
            uf.union(q, x as usize);
        }
    }
    uf.blocks()
}

/// Key, homogeneity and transitivity of one level, without generators.
fn level_info(m: &MolrSet) -> (Vec<u8>, bool, bool) {
    match search(m) {
        None => (key_of(m.n(), 1, m.t(), &identity_form(m)), true, true),
        Some(f) => {
            let key = key_of(m.n(), m.k(), m.t(), &f.form);
            // rectangle q of the input sits at slot rect_inv_j[q]; orbits of
            // Aut(m) are unions of {q : rects_0^-1 and rects_j^-1 agree}.
            let t = m.t();
            let mut uf = UnionFind((0..t).collect());
            let r0 = &f.cands[0].rects;
            for c in &f.cands[1..] {
                for p in 0..t {
                    uf.union(r0[p] as usize, c.rects[p] as usize);
                }
            }
            let transitive = uf.blocks().len() == 1;
            (key, is_homogeneous(m), transitive)
        }
    }
}

/// Lexicographically largest permutation of `0..n` with cycle type `ct`.
fn lexmax_with_cycle_type(ct: &[u8]) -> Vec<u8> {
    let n: usize = ct.iter().map(|&l| l as usize).sum();
    let mut out = vec![u8::MAX; n];
    let mut has_pre = vec![false; n];
    let mut left: Vec<u8> = ct.to_vec();
    assert!(lexmax_fill(0, &mut out, &mut has_pre, &mut left));
    out
}

fn lexmax_fill(i: usize, out: &mut [u8], has_pre: &mut [bool], left: &mut Vec<u8>) -> bool {
    let n = out.len();
    if i == n {
        return left.is_empty();
    }
    for v in (0..n).rev() {
        if has_pre[v] {
            continue;
        }
        out[i] = v as u8;
        has_pre[v] = true;
        // walk forward from v; a closed cycle must use up one remaining length
        let mut len = 1;
        let mut x = v;
        while x != i && out[x] != u8::MAX {
            x = out[x] as usize;
            len += 1;
        }
        let closed = x == i;
        let slot = if closed { left.iter().position(|&l| l as usize == len) } else { None };
        if !closed || slot.is_some() {
            let removed = slot.map(|p| left.swap_remove(p));
            if packable(out, has_pre, left) && lexmax_fill(i + 1, out, has_pre, left) {
                return true;
            }
            if let Some(l) = removed {
                left.push(l);
            }
        }
        has_pre[v] = false;
        out[i] = u8::MAX;
    }
    false
}

/// Whether the open chains of a partial permutation fit into the remaining
/// cycle lengths.
fn packable(out: &[u8], has_pre: &[bool], left: &[u8]) -> bool {
    let n = out.len();
    let mut chains = Vec::new();
    for a in 0..n {
        if has_pre[a] || out[a] == u8::MAX {
            continue;
        }
        let mut len = 1;
        let mut x = a;
        while out[x] != u8::MAX {
            x = out[x] as usize;
            len += 1;
        }
        chains.push(len);
    }
    chains.sort_unstable_by(|a, b| b.cmp(a));
    let mut bins: Vec<usize> = left.iter().map(|&l| l as usize).collect();
    fn fit(chains: &[usize], bins: &mut [usize]) -> bool {
        let Some((&c, rest)) = chains.split_first() else { return true };
        for b in 0..bins.len() {
            if bins[b] >= c && !bins[..b].contains(&bins[b]) {
                bins[b] -= c;
                let ok = fit(rest, bins);
                bins[b] += c;
                if ok {
                    return true;
                }
            }
        }
        false
    }
    fit(&chains, &mut bins)
}

/// Row of `m` that comes last in the lexicographically largest normalized
/// form, reading cells row by row across all rectangles. Deleting it gives
/// the canonical parent one level down.
pub fn canonical_parent_row(m: &MolrSet) -> Option<usize> {
    let (t, k, n) = (m.t(), m.k(), m.n());
    if k < 2 {
        return None;
    }
    let search = Search::new(m);
    let mut by_type: FxHashMap<Vec<u8>, Vec<(usize, usize, usize)>> = FxHashMap::default();
    for s in 0..t {
        for r0 in 0..k {
            for i in (0..k).filter(|&i| i != r0) {
                by_type.entry(perm::cycle_type(search.dperm(s, r0, i))).or_default().push((s, r0, i));
            }
        }
    }
    let (target, triples) = by_type
        .into_iter()
        .map(|(ct, v)| (lexmax_with_cycle_type(&ct), v))
        .max_by(|a, b| a.0.cmp(&b.0))
        .unwrap();
    let target_cycles = cycles_of(&target);
    let conj = |d: &[u8], c: &[u8]| -> Vec<u8> {
        let mut out = vec![0u8; n];
        Search::conj_into(d, c, &mut out);
        out
    };
    let mut best: Option<(Vec<u8>, usize)> = None;
    for (s, r0, i) in triples {
        let cycles = cycles_of(search.dperm(s, r0, i));
        let mut labellings = Vec::new();
        label_onto(&cycles, &target_cycles, 0, &mut vec![false; target_cycles.len()], &mut vec![0; n], &mut labellings);
        for c in labellings {
            let mut rest: Vec<(Vec<u8>, usize)> = (0..k)
                .filter(|&x| x != r0 && x != i)
                .map(|x| (conj(search.dperm(s, r0, x), &c), x))
                .collect();
            rest.sort_unstable_by(|a, b| b.cmp(a));
            let mut others: Vec<(Vec<u8>, usize)> =
                (0..t).filter(|&q| q != s).map(|q| (conj(search.dperm(q, r0, i), &c), q)).collect();
            others.sort_unstable_by(|a, b| b.cmp(a));
            let rows: Vec<usize> = std::iter::once(i).chain(rest.iter().map(|r| r.1)).collect();
            let rects: Vec<usize> = std::iter::once(s).chain(others.iter().map(|o| o.1)).collect();
            let mut stream = Vec::with_capacity(t * (k - 1) * n);
            for &x in &rows {
                for &q in &rects {
                    stream.extend(conj(search.dperm(q, r0, x), &c));
                }
            }
            if best.as_ref().map_or(true, |b| stream > b.0) {
                best = Some((stream, *rows.last().unwrap()));
            }
        }
    }
    best.map(|b| b.1)
}

/// Every column labelling `c` with `c ∘ d ∘ c^-1` equal to the permutation
/// whose cycles are `target`.
fn label_onto(
    cycles: &[Vec<u8>],
    target: &[Vec<u8>],
    ci: usize,
    used: &mut [bool],
    c: &mut [u8],
    out: &mut Vec<Vec<u8>>,
) {
    if ci == cycles.len() {
        out.push(c.to_vec());
        return;
    }
    let cyc = &cycles[ci];
    let len = cyc.len();
    for ti in 0..target.len() {
        if used[ti] || target[ti].len() != len {
            continue;
        }
        used[ti] = true;
        for o in 0..len {
            for (p, &x) in cyc.iter().enumerate() {
                c[x as usize] = target[ti][(p + o) % len];
            }
            label_onto(cycles, target, ci + 1, used, c, out);
        }
        used[ti] = false;
    }
}

/// Stepwise homogeneity and transitivity: the property holds at `m` and at
/// every level of its canonical parent chain.
pub fn stepwise_flags(m: &MolrSet) -> (bool, bool) {
    let (_, h, tr) = level_info(m);
    stepwise_from(m, h, tr)
}

fn stepwise_from(m: &MolrSet, h: bool, tr: bool) -> (bool, bool) {
    if m.k() <= 2 || (!h && !tr) {
        return (h, tr);
    }
    let (ph, pt) = stepwise_flags(&canonical_parent(m));
    (h && ph, tr && pt)
}

pub(crate) fn canonical_parent(m: &MolrSet) -> MolrSet {
    let r = canonical_parent_row(m).expect("k >= 2");
    m.delete_row(r).expect("k >= 2")
}

/// Compact `(rect, row, col)` images of an autotopism; symbols are forced.
fn compact(g: &Isotopism) -> Vec<u8> {
    let mut v = Vec::with_capacity(g.rect_perm.len() + g.row_perm.len() + g.col_perm.len());
    v.extend_from_slice(&g.rect_perm);
    v.extend_from_slice(&g.row_perm);
    v.extend_from_slice(&g.col_perm);
    v
}

fn compact_compose(a: &[u8], b: &[u8], t: usize, k: usize) -> Vec<u8> {
    b.iter()
        .enumerate()
        .map(|(i, &x)| {
            let off = if i < t { 0 } else if i < t + k { t } else { t + k };
            a[off + x as usize]
        })
        .collect()
}

fn closure_size(gens: &[Vec<u8>], t: usize, k: usize, n: usize, limit: usize) -> FxHashSet<Vec<u8>> {
    let mut id = perm::identity(t);
    id.extend(perm::identity(k));
    id.extend(perm::identity(n));
    let mut seen = FxHashSet::default();
    seen.insert(id.clone());
    let mut queue = vec![id];
    while let Some(e) = queue.pop() {
        for g in gens {
            let x = compact_compose(g, &e, t, k);
            if seen.insert(x.clone()) {
                queue.push(x);
                if seen.len() > limit {
                    return seen;
                }
            }
        }
    }
    seen
}

/// Greedy generating set: walk the group, adding each element not yet in
/// the generated subgroup.
fn pick_generators(elements: &[Isotopism], t: usize, k: usize, n: usize) -> Vec<Isotopism> {
    let order = elements.len();
    let mut gens: Vec<Isotopism> = Vec::new();
    let mut compact_gens: Vec<Vec<u8>> = Vec::new();
    let mut span = closure_size(&[], t, k, n, order);
    for g in elements {
        if span.len() == order {
            break;
        }
        let c = compact(g);
        if span.contains(&c) {
            continue;
        }
        compact_gens.push(c);
        gens.push(g.clone());
        span = closure_size(&compact_gens, t, k, n, order);
    }
    debug_assert_eq!(span.len(), order);
    gens
}

fn k1_record(m: &MolrSet) -> ClassRecord {
    let (t, n) = (m.t(), m.n());
    let rep = MolrSet::from_flat_unchecked(n, 1, t, identity_form(m));
    let mut gens = Vec::new();
    let cycle = |len: usize| -> Vec<u8> { (0..len).map(|i| ((i + 1) % len) as u8).collect() };
    let swap = |len: usize| -> Vec<u8> {
        let mut p = perm::identity(len);
        p.swap(0, 1);
        p
    };
    let mut push = |rect_perm: Vec<u8>, col_perm: Vec<u8>| {
        let sym_perms = vec![col_perm.clone(); t];
        gens.push(Isotopism { rect_perm, row_perm: vec![0], col_perm, sym_perms });
    };
    if t >= 2 {
        push(swap(t), perm::identity(n));
        if t >= 3 {
            push(cycle(t), perm::identity(n));
        }
    }
    if n >= 2 {
        push(perm::identity(t), swap(n));
        if n >= 3 {
            push(perm::identity(t), cycle(n));
        }
    }
    ClassRecord {
        canonical_key: key_of(n, 1, t, rep.flat_cells().as_slice()),
        representative: rep,
        aut_order: perm::factorial(t).saturating_mul(perm::factorial(n)),
        aut_generators: gens,
        rect_orbits: vec![(0..t).collect()],
        flags: Flags { homogeneous: true, transitive: true, stepwise_homogeneous: true, stepwise_transitive: true },
    }
}

/// Full class record; stepwise flags are taken from `stepwise` when given
/// and otherwise computed along the canonical parent chain.
pub(crate) fn class_record(m: &MolrSet, stepwise: Option<(bool, bool)>) -> ClassRecord {
    if m.k() == 1 {
        return k1_record(m);
    }
    let (t, k, n) = (m.t(), m.k(), m.n());
    let found = Search::new(m).run();
    let form = MolrSet::from_flat_unchecked(n, k, t, found.form.clone());
    let (rep, w) = normalize(&form);
    // h_j maps m onto rep; Aut(rep) = { h_j ∘ h_0^-1 }.
    let hs: Vec<Isotopism> = found.cands.iter().map(|c| w.compose(&c.isotopism(m))).collect();
    let h0_inv = hs[0].inverse();
    let elements: Vec<Isotopism> = hs.iter().map(|h| h.compose(&h0_inv)).collect();
    debug_assert!(elements.iter().all(|g| g.apply_unchecked(&rep) == rep));
    let rect_orbits = orbits_from_rect_perms(t, elements.iter().map(|g| g.rect_perm.as_slice()));
    let aut_generators = pick_generators(&elements, t, k, n);
    let homogeneous = is_homogeneous(m);
    let transitive = rect_orbits.len() == 1;
    let (sh, st) = match stepwise {
        Some(f) => f,
        None => stepwise_from(m, homogeneous, transitive),
    };
    ClassRecord {
        canonical_key: key_of(n, k, t, &found.form),
        representative: rep,
        aut_order: found.cands.len() as u64,
        aut_generators,
        rect_orbits,
        flags: Flags {
            homogeneous,
            transitive,
            stepwise_homogeneous: sh && homogeneous,
            stepwise_transitive: st && transitive,
        },
    }
}

pub fn canonical_form(m: &MolrSet) -> ClassRecord {
    class_record(m, None)
}

/// Minimum canonical key over the identity and all column/symbol conjugates.
pub fn paratopism_key(m: &MolrSet) -> Vec<u8> {
    let mut best = canonical_key(m);
    for c in 0..m.t() {
        let conj = conjugate_swap(m, c).expect("coordinate in range");
        let key = canonical_key(&conj);
        if key < best {
            best = key;
        }
    }
    best
}

fn rect_cycle(rect_perm: &[u8], start: usize) -> Vec<usize> {
    let mut orbit = vec![start];
    let mut x = rect_perm[start] as usize;
    while x != start {
        orbit.push(x);
        x = rect_perm[x] as usize;
    }
    orbit
}

/// The MOLR formed by the orbit of rectangle `start` of the representative
/// under `g`.
pub fn rect_orbit_of(rec: &ClassRecord, g: &Isotopism, start: usize) -> Result<MolrSet> {
    let rep = &rec.representative;
    if start >= rep.t() {
        return Err(MolrError::IndexOutOfRange { index: start, limit: rep.t() });
    }
    if g.dims() != (rep.t(), rep.k(), rep.n()) || !g.is_valid() || g.apply_unchecked(rep) != *rep {
        return Err(MolrError::NotAnAutotopism);
    }
    rep.select(&rect_cycle(&g.rect_perm, start))
}

/// Whether `a` is isotopic to the orbit of one rectangle of `b` under some
/// autotopism of `b`.
pub fn is_orbit_of(a: &MolrSet, b: &MolrSet) -> Result<bool> {
    if (a.k(), a.n()) != (b.k(), b.n()) {
        return Err(MolrError::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            a.k(),
            a.n(),
            b.k(),
            b.n()
        )));
    }
    if a.t() > b.t() {
        return Ok(false);
    }
    if b.k() == 1 {
        // every cycle length up to t occurs in S_t
        return Ok(true);
    }
    let target = canonical_key(a);
    let mut tried: FxHashSet<Vec<usize>> = FxHashSet::default();
    for g in automorphisms(b)? {
        for start in 0..b.t() {
            let mut orbit = rect_cycle(&g.rect_perm, start);
            if orbit.len() != a.t() {
                continue;
            }
            orbit.sort_unstable();
            if tried.insert(orbit.clone()) && canonical_key(&b.select(&orbit)?) == target {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latin::validate_rectangle;

    fn molr(grids: &[&[&[u8]]]) -> MolrSet {
        let rects = grids
            .iter()
            .map(|g| validate_rectangle(&g.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap())
            .collect();
        MolrSet::new(rects).unwrap()
    }

    #[test]
    fn flags_code_round_trip() {
        for bits in 0..16u8 {
            let f = Flags {
                homogeneous: bits & 1 != 0,
                transitive: bits & 2 != 0,
                stepwise_homogeneous: bits & 4 != 0,
                stepwise_transitive: bits & 8 != 0,
            };
            assert_eq!(Flags::parse(&f.code()), Some(f));
        }
        assert_eq!(Flags::parse("X"), None);
        assert_eq!(Flags::parse("TH"), None);
    }

    #[test]
    fn column_swap_keeps_key() {
        let m = molr(&[&[&[0, 1, 2, 3], &[1, 0, 3, 2]], &[&[0, 1, 2, 3], &[2, 3, 0, 1]]]);
        let mut g = Isotopism::identity(2, 2, 4);
        g.col_perm = vec![1, 0, 2, 3];
        let moved = g.apply(&m).unwrap();
        assert_eq!(canonical_key(&moved), canonical_key(&m));
        assert_eq!(canonical_form(&normalize(&moved).0).canonical_key, canonical_key(&m));
    }

    #[test]
    fn k1_record_shape() {
        let m = molr(&[&[&[2, 0, 1]], &[&[1, 2, 0]]]);
        let rec = canonical_form(&m);
        assert_eq!(rec.aut_order, 12);
        assert!(is_transitive(&rec));
        for g in &rec.aut_generators {
            assert_eq!(g.apply(&rec.representative).unwrap(), rec.representative);
        }
    }

    #[test]
    fn automorphisms_fix_the_input() {
        let m = molr(&[&[&[0, 1, 2, 3], &[1, 0, 3, 2], &[2, 3, 0, 1]], &[&[0, 1, 2, 3], &[2, 3, 0, 1], &[3, 2, 1, 0]]]);
        let auts = automorphisms(&m).unwrap();
        assert_eq!(auts.len() as u64, aut_order(&m));
        for g in &auts {
            assert_eq!(g.apply(&m).unwrap(), m);
        }
        let rec = canonical_form(&m);
        for g in &rec.aut_generators {
            assert_eq!(g.apply(&rec.representative).unwrap(), rec.representative);
        }
        assert!(rec.representative.is_normalized());
    }

    #[test]
    fn orbit_of_identity_is_single_rectangle() {
        let m = molr(&[&[&[0, 1, 2, 3], &[1, 0, 3, 2]], &[&[0, 1, 2, 3], &[2, 3, 0, 1]]]);
        let rec = canonical_form(&m);
        let id = Isotopism::identity(2, 2, 4);
        let orbit = rect_orbit_of(&rec, &id, 1).unwrap();
        assert_eq!(orbit.t(), 1);
        assert_eq!(orbit.rect(0), rec.representative.rect(1));
        let mut bad = id.clone();
        bad.col_perm = vec![0, 1, 3, 2];
        if bad.apply(&rec.representative).unwrap() != rec.representative {
            assert_eq!(rect_orbit_of(&rec, &bad, 0), Err(MolrError::NotAnAutotopism));
        }
        assert!(is_orbit_of(&orbit, &rec.representative).unwrap());
    }

    #[test]
    fn lexmax_cycle_type_matches_brute_force() {
        for n in 1..=7 {
            let mut best: FxHashMap<Vec<u8>, Vec<u8>> = FxHashMap::default();
            perm::for_each_permutation(n, |p| {
                let e = best.entry(perm::cycle_type(p)).or_insert_with(|| p.to_vec());
                if p > e.as_slice() {
                    *e = p.to_vec();
                }
            });
            for (ct, p) in best {
                assert_eq!(lexmax_with_cycle_type(&ct), p, "{ct:?}");
            }
        }
    }
}
