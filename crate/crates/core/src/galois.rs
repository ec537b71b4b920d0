//! Small Galois fields and the classical complete sets of MOLS.

use crate::error::{MolrError, Result};
use crate::isotopism::Isotopism;
use crate::latin::MolrSet;
use crate::perm;

/// Addition and multiplication tables of GF(n). Elements are polynomial
/// coefficient vectors over GF(p) read as base-`p` integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldTable {
    pub order: usize,
    pub characteristic: usize,
    pub add: Vec<u8>,
    pub mul: Vec<u8>,
    pub generator: u8,
    /// `powers[0] = 0`, `powers[i] = generator^(i-1)`.
    pub powers: Vec<u8>,
}

/// Reduction polynomials `y^r = -(c_0 + c_1 y + ...)`, low coefficients first.
fn modulus(n: usize) -> Option<(usize, Vec<u8>)> {
    match n {
        2 | 3 | 5 | 7 | 11 | 13 => Some((n, vec![0, 1])),
        4 => Some((2, vec![1, 1, 1])),
        8 => Some((2, vec![1, 1, 0, 1])),
        9 => Some((3, vec![1, 0, 1])),
        _ => None,
    }
}

fn prime_power(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let p = (2..=n).find(|d| n % d == 0).unwrap();
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    m == 1
}

impl FieldTable {
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.order + b as usize]
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.order + b as usize]
    }

    pub fn neg(&self, a: u8) -> u8 {
        (0..self.order as u8).find(|&b| self.add(a, b) == 0).unwrap()
    }

    pub fn inv(&self, a: u8) -> Option<u8> {
        (1..self.order as u8).find(|&b| self.mul(a, b) == 1)
    }

    pub fn multiplicative_order(&self, a: u8) -> Option<usize> {
        if a == 0 {
            return None;
        }
        let mut x = a;
        for e in 1..self.order {
            if x == 1 {
                return Some(e);
            }
            x = self.mul(x, a);
        }
        None
    }
}

pub fn field(n: usize) -> Result<FieldTable> {
    if !prime_power(n) {
        return Err(MolrError::NotAPrimePower(n));
    }
    let (p, poly) = modulus(n)
        .ok_or_else(|| MolrError::Precondition(format!("GF({n}) is not tabulated")))?;
    let r = poly.len() - 1;
    let digits = |mut x: usize| -> Vec<usize> {
        (0..r)
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    };
    let pack = |v: &[usize]| -> u8 { v.iter().rev().fold(0, |acc, &d| acc * p + d) as u8 };
    let mut add = vec![0u8; n * n];
    let mut mul = vec![0u8; n * n];
    for a in 0..n {
        let da = digits(a);
        for b in 0..n {
            let db = digits(b);
            let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            add[a * n + b] = pack(&sum);
            let mut prod = vec![0usize; 2 * r];
            for (i, x) in da.iter().enumerate() {
                for (j, y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            for deg in (r..2 * r).rev() {
                let c = prod[deg];
                if c != 0 {
                    prod[deg] = 0;
                    for (i, &m) in poly[..r].iter().enumerate() {
                        let sub = c * m as usize % p;
                        prod[deg - r + i] = (prod[deg - r + i] + p - sub) % p;
                    }
                }
            }
            mul[a * n + b] = pack(&prod[..r]);
        }
    }
    let mut f = FieldTable { order: n, characteristic: p, add, mul, generator: 0, powers: Vec::new() };
    f.generator = (1..n as u8)
        .find(|&a| f.multiplicative_order(a) == Some(n - 1))
        .expect("multiplicative group is cyclic");
    let mut powers = vec![0u8, 1];
    let mut x = 1u8;
    for _ in 2..n {
        x = f.mul(x, f.generator);
        powers.push(x);
    }
    f.powers = powers;
    Ok(f)
}

/// The `n - 1` squares `L_k(i, j) = a_i + a_k a_j`, `k = 1..n-1`, with rows
/// and columns indexed along `powers`.
pub fn galois_mols(n: usize) -> Result<MolrSet> {
    if n < 3 {
        return if prime_power(n) { Err(MolrError::NTooSmall(n)) } else { Err(MolrError::NotAPrimePower(n)) };
    }
    let f = field(n)?;
    let a = &f.powers;
    let mut cells = Vec::with_capacity((n - 1) * n * n);
    for k in 1..n {
        for i in 0..n {
            for j in 0..n {
                cells.push(f.add(a[i], f.mul(a[k], a[j])));
            }
        }
    }
    MolrSet::from_flat(n, n, n - 1, &cells)
}

/// Autotopism of [`galois_mols`] sending `L_k` to `L_{k+1}` and column `j`
/// to the column indexed by `x^-1 a_j`; rows and symbols are fixed.
pub fn cyclic_autotopism(n: usize) -> Result<Isotopism> {
    if n < 3 {
        return Err(MolrError::NTooSmall(n));
    }
    let t = n - 1;
    let rect_perm = (0..t).map(|q| ((q + 1) % t) as u8).collect();
    let mut col_perm = perm::identity(n);
    for j in 1..n {
        col_perm[j] = if j == 1 { (n - 1) as u8 } else { (j - 1) as u8 };
    }
    Ok(Isotopism { rect_perm, row_perm: perm::identity(n), col_perm, sym_perms: vec![perm::identity(n); t] })
}

/// Truncations of a Galois MOLS to `k = n, n-1, ..., 2` rows. The cyclic
/// autotopism fixes every row, so it survives each truncation and acts
/// transitively on the rectangles at every level; this is checked.
pub fn stepwise_truncation(m: &MolrSet) -> Result<Vec<MolrSet>> {
    let n = m.n();
    if n < 3 || m.k() != n || m.t() != n - 1 {
        return Err(MolrError::NotGaloisConstruction);
    }
    let g = cyclic_autotopism(n)?;
    let mut chain = Vec::with_capacity(n - 1);
    for k in (2..=n).rev() {
        let level = m.truncate_rows(k)?;
        let mut gk = g.clone();
        gk.row_perm.truncate(k);
        if gk.apply(&level)? != level || gk.rect_order() != n - 1 {
            return Err(MolrError::NotGaloisConstruction);
        }
        chain.push(level);
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(f: &FieldTable) {
        let n = f.order as u8;
        for a in 0..n {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.mul(a, 0), 0);
            if a != 0 {
                assert!(f.inv(a).is_some());
            }
            for b in 0..n {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..n {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn axioms_hold_for_every_supported_order() {
        for n in [2, 3, 4, 5, 7, 8, 9] {
            let f = field(n).unwrap();
            check_axioms(&f);
            assert_eq!(f.multiplicative_order(f.generator), Some(n - 1));
            let mut sorted = f.powers.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, perm::identity(n));
        }
    }

    #[test]
    fn field_examples() {
        assert_eq!(field(5).unwrap().generator, 2);
        let f4 = field(4).unwrap();
        assert!((0..4).all(|y| f4.add(y, y) == 0));
        assert_eq!(field(6), Err(MolrError::NotAPrimePower(6)));
        assert_eq!(galois_mols(2), Err(MolrError::NTooSmall(2)));
        assert_eq!(galois_mols(10), Err(MolrError::NotAPrimePower(10)));
    }

    #[test]
    fn cyclic_map_is_an_autotopism() {
        for n in [3, 4, 5, 7, 8, 9] {
            let m = galois_mols(n).unwrap();
            let g = cyclic_autotopism(n).unwrap();
            assert_eq!(g.apply(&m).unwrap(), m);
            assert_eq!(perm::cycle_type(&g.rect_perm), vec![(n - 1) as u8]);
            assert_eq!(perm::cycle_type(&g.col_perm), vec![(n - 1) as u8, 1]);
            let chain = stepwise_truncation(&m).unwrap();
            assert_eq!(chain.len(), n - 1);
            assert_eq!(chain.last().unwrap().k(), 2);
        }
    }

    #[test]
    fn truncation_rejects_other_sets() {
        let m = galois_mols(5).unwrap();
        assert_eq!(stepwise_truncation(&m.truncate_rows(3).unwrap()), Err(MolrError::NotGaloisConstruction));
        let mut g = Isotopism::identity(4, 5, 5);
        g.col_perm = vec![1, 0, 2, 3, 4];
        let moved = g.apply(&m).unwrap();
        assert_eq!(stepwise_truncation(&moved), Err(MolrError::NotGaloisConstruction));
    }
}
