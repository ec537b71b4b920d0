// Independent brute-force oracles shared by the property tests and the
// acceptance runner. Nothing here calls the search code in `symmetry`.
#![allow(dead_code)]

use molr::enumerate::{enumerate_levels, Filter};
use molr::expected;
use molr::format::{parse_incidence, parse_records, write_incidence, write_records, MolrRecord};
use molr::galois::{galois_mols, stepwise_truncation};
use molr::geometry::partial_net;
use molr::{canonical_key, conjugate_swap, ClassRecord, Isotopism, MolrSet};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn random_perm(rng: &mut impl Rng, n: usize) -> Vec<u8> {
    let mut p: Vec<u8> = (0..n as u8).collect();
    p.shuffle(rng);
    p
}

pub fn random_isotopism(rng: &mut impl Rng, t: usize, k: usize, n: usize) -> Isotopism {
    let sym = (0..t).map(|_| random_perm(rng, n)).collect();
    Isotopism::new(random_perm(rng, t), random_perm(rng, k), random_perm(rng, n), sym).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut p: Vec<u8> = (0..n as u8).collect();
    fn rec(p: &mut Vec<u8>, i: usize, out: &mut Vec<Vec<u8>>) {
        if i == p.len() {
            out.push(p.clone());
            return;
        }
        for j in i..p.len() {
            p.swap(i, j);
            rec(p, i + 1, out);
            p.swap(i, j);
        }
    }
    rec(&mut p, 0, &mut out);
    out
}

/// Autotopism count by running over every rectangle, row and column
/// permutation; the symbol maps are then forced cell by cell.
pub fn brute_force_aut(m: &MolrSet) -> u64 {
    let (t, k, n) = (m.t(), m.k(), m.n());
    let rps = permutations(t);
    let rows = permutations(k);
    let cols = permutations(n);
    let mut count = 0;
    for rp in &rps {
        for rw in &rows {
            'col: for cp in &cols {
                for q in 0..t {
                    let target = rp[q] as usize;
                    let mut map = [u8::MAX; 32];
                    let mut hit = 0u32;
                    for r in 0..k {
                        for j in 0..n {
                            let x = m.cell(q, r, j) as usize;
                            let y = m.cell(target, rw[r] as usize, cp[j] as usize);
                            if map[x] == u8::MAX {
                                if hit >> y & 1 == 1 {
                                    continue 'col;
                                }
                                map[x] = y;
                                hit |= 1 << y;
                            } else if map[x] != y {
                                continue 'col;
                            }
                        }
                    }
                }
                count += 1;
            }
        }
    }
    count
}

/// Number of t-tuples of pairwise orthogonal k x n Latin rectangles whose
/// first rows are all the identity.
pub fn count_identity_first_rows(n: usize, k: usize, t: usize) -> u64 {
    struct S {
        n: usize,
        k: usize,
        t: usize,
        cells: Vec<u8>,
        col_used: Vec<u32>,
        row_used: Vec<u32>,
        pair_used: Vec<bool>,
    }
    fn idx(s: &S, q: usize, r: usize, j: usize) -> usize {
        (q * s.k + r) * s.n + j
    }
    fn rec(s: &mut S, pos: usize) -> u64 {
        let per_row = s.t * s.n;
        let r = 1 + pos / per_row;
        if r == s.k {
            return 1;
        }
        let q = (pos % per_row) / s.n;
        let j = pos % s.n;
        let mut total = 0;
        for x in 0..s.n as u8 {
            let bit = 1u32 << x;
            if s.col_used[q * s.n + j] & bit != 0 || s.row_used[q * s.k + r] & bit != 0 {
                continue;
            }
            let mut ok = true;
            let mut pairs = Vec::new();
            for p in 0..q {
                let y = s.cells[idx(s, p, r, j)] as usize;
                let slot = (p * s.t + q) * s.n * s.n + y * s.n + x as usize;
                if s.pair_used[slot] {
                    ok = false;
                    break;
                }
                pairs.push(slot);
            }
            if !ok {
                continue;
            }
            for &sl in &pairs {
                s.pair_used[sl] = true;
            }
            let c = idx(s, q, r, j);
            s.cells[c] = x;
            s.col_used[q * s.n + j] |= bit;
            s.row_used[q * s.k + r] |= bit;
            total += rec(s, pos + 1);
            s.col_used[q * s.n + j] &= !bit;
            s.row_used[q * s.k + r] &= !bit;
            for &sl in &pairs {
                s.pair_used[sl] = false;
            }
        }
        total
    }
    let mut s = S {
        n,
        k,
        t,
        cells: vec![0; t * k * n],
        col_used: vec![0; t * n],
        row_used: vec![0; t * k],
        pair_used: vec![false; t * t * n * n],
    };
    for q in 0..t {
        for j in 0..n {
            s.cells[(q * k) * n + j] = j as u8;
            s.col_used[q * n + j] |= 1 << j;
        }
        s.row_used[q * k] = (1 << n) - 1;
    }
    for p in 0..t {
        for q in p + 1..t {
            for j in 0..n {
                s.pair_used[(p * t + q) * n * n + j * n + j] = true;
            }
        }
    }
    rec(&mut s, 0)
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Every class for `3 <= n <= 5`, `1 <= t < n`, `2 <= k <= n`.
pub fn small_classes() -> Vec<ClassRecord> {
    let mut out = Vec::new();
    for n in 3..=5 {
        for t in 1..n {
            enumerate_levels(n, t, n, Filter::None, usize::MAX, |f| out.extend(f.classes.iter().cloned())).unwrap();
        }
    }
    out
}

pub fn key_invariance(rounds: usize, seed: u64) -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(seed);
    for (name, text) in expected::FIXTURES {
        let m = parse_records(text).unwrap().remove(0).molr;
        let key = canonical_key(&m);
        for i in 0..rounds {
            let g = random_isotopism(&mut rng, m.t(), m.k(), m.n());
            if canonical_key(&g.apply(&m).unwrap()) != key {
                return Err(format!("{name}: key changed under isotopism #{i} {g:?}"));
            }
        }
    }
    Ok(())
}

pub fn conjugate_involution(classes: &[ClassRecord]) -> Result<(), String> {
    for rec in classes {
        let m = &rec.representative;
        for c in 0..m.t() {
            let once = conjugate_swap(m, c).map_err(|e| e.to_string())?;
            if conjugate_swap(&once, c).map_err(|e| e.to_string())? != *m {
                return Err(format!("swap {c} is not an involution on {m:?}"));
            }
        }
    }
    Ok(())
}

pub fn aut_oracle(classes: &[ClassRecord]) -> Result<usize, String> {
    let mut checked = 0;
    for rec in classes.iter().filter(|r| r.n() <= 4 || (r.n() == 5 && r.k() == 5 && r.t() <= 2)) {
        let brute = brute_force_aut(&rec.representative);
        if brute != rec.aut_order {
            return Err(format!("aut {} vs brute force {brute} for {:?}", rec.aut_order, rec.representative));
        }
        checked += 1;
    }
    Ok(checked)
}

/// Orbit-stabilizer: the classes of each (n, k, t) account for exactly the
/// sets whose first rows are the identity.
pub fn orbit_counting(classes: &[ClassRecord]) -> Result<usize, String> {
    let mut sums: std::collections::BTreeMap<(usize, usize, usize), u64> = Default::default();
    for rec in classes {
        let (n, k, t) = (rec.n(), rec.k(), rec.t());
        *sums.entry((n, k, t)).or_default() += factorial(t) * factorial(k) * factorial(n) / rec.aut_order;
    }
    for (&(n, k, t), &sum) in &sums {
        let direct = count_identity_first_rows(n, k, t);
        if direct != sum {
            return Err(format!("n={n} k={k} t={t}: orbit sum {sum}, direct count {direct}"));
        }
    }
    Ok(sums.len())
}

pub fn net_collinearity(sets: &[MolrSet]) -> Result<(), String> {
    for m in sets {
        let (n, k, t) = (m.n(), m.k(), m.t());
        let want = (n - 1) + (k - 1) + t * (k - 1);
        if let Some(bad) = partial_net(m).collinearity().into_iter().find(|&c| c != want) {
            return Err(format!("n={n} k={k} t={t}: a point sees {bad} others, expected {want}"));
        }
    }
    Ok(())
}

/// Every class with `n <= 7` reachable cheaply, plus the Galois chains.
pub fn constructed_nets(classes: &[ClassRecord]) -> Vec<MolrSet> {
    let mut out: Vec<MolrSet> = classes.iter().filter(|r| r.k() >= 2).map(|r| r.representative.clone()).collect();
    for n in [3, 4, 5, 7] {
        out.extend(stepwise_truncation(&galois_mols(n).unwrap()).unwrap());
    }
    out
}

pub fn round_trip(classes: &[ClassRecord]) -> Result<(), String> {
    let recs: Vec<MolrRecord> = classes.iter().map(MolrRecord::from_class).collect();
    let text = write_records(&recs);
    let back = parse_records(&text).map_err(|e| e.to_string())?;
    if back != recs || write_records(&back) != text {
        return Err("record file did not round-trip".into());
    }
    for rec in classes.iter().filter(|r| r.k() >= 2).take(50) {
        let net = partial_net(&rec.representative);
        let text = write_incidence(&net);
        let again = write_incidence(&parse_incidence(&text).map_err(|e| e.to_string())?);
        if again != text {
            return Err("incidence file did not round-trip".into());
        }
    }
    Ok(())
}
