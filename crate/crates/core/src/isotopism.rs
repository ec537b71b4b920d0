use crate::error::{MolrError, Result};
use crate::latin::MolrSet;
use crate::perm;

/// An element of `S_t × S_k × S_n × (S_n)^t`.
///
/// Applying it sends cell `(r, j)` of input rectangle `q` to cell
/// `(row_perm[r], col_perm[j])` of output slot `rect_perm[q]`, relabelling
/// the symbol with `sym_perms[rect_perm[q]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isotopism {
    pub rect_perm: Vec<u8>,
    pub row_perm: Vec<u8>,
    pub col_perm: Vec<u8>,
    /// One symbol permutation per output slot.
    pub sym_perms: Vec<Vec<u8>>,
}

impl Isotopism {
    pub fn identity(t: usize, k: usize, n: usize) -> Self {
        Isotopism {
            rect_perm: perm::identity(t),
            row_perm: perm::identity(k),
            col_perm: perm::identity(n),
            sym_perms: vec![perm::identity(n); t],
        }
    }

    pub fn new(
        rect_perm: Vec<u8>,
        row_perm: Vec<u8>,
        col_perm: Vec<u8>,
        sym_perms: Vec<Vec<u8>>,
    ) -> Result<Self> {
        let g = Isotopism { rect_perm, row_perm, col_perm, sym_perms };
        if !g.is_valid() {
            return Err(MolrError::BadDimensions(
                "isotopism components must be bijections of matching size".into(),
            ));
        }
        Ok(g)
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.rect_perm.len(), self.row_perm.len(), self.col_perm.len())
    }

    pub fn is_valid(&self) -> bool {
        let n = self.col_perm.len();
        perm::is_permutation(&self.rect_perm)
            && perm::is_permutation(&self.row_perm)
            && perm::is_permutation(&self.col_perm)
            && self.sym_perms.len() == self.rect_perm.len()
            && self.sym_perms.iter().all(|s| s.len() == n && perm::is_permutation(s))
    }

    pub fn is_identity(&self) -> bool {
        perm::is_identity(&self.rect_perm)
            && perm::is_identity(&self.row_perm)
            && perm::is_identity(&self.col_perm)
            && self.sym_perms.iter().all(|s| perm::is_identity(s))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isotopism) -> Isotopism {
        let rect_inv = perm::inverse(&self.rect_perm);
        let sym_perms = (0..self.rect_perm.len())
            .map(|p| {
                let q = rect_inv[p] as usize;
                perm::compose(&self.sym_perms[p], &other.sym_perms[q])
            })
            .collect();
        Isotopism {
            rect_perm: perm::compose(&self.rect_perm, &other.rect_perm),
            row_perm: perm::compose(&self.row_perm, &other.row_perm),
            col_perm: perm::compose(&self.col_perm, &other.col_perm),
            sym_perms,
        }
    }

    pub fn inverse(&self) -> Isotopism {
        let sym_perms = (0..self.rect_perm.len())
            .map(|q| perm::inverse(&self.sym_perms[self.rect_perm[q] as usize]))
            .collect();
        Isotopism {
            rect_perm: perm::inverse(&self.rect_perm),
            row_perm: perm::inverse(&self.row_perm),
            col_perm: perm::inverse(&self.col_perm),
            sym_perms,
        }
    }

    pub fn apply(&self, m: &MolrSet) -> Result<MolrSet> {
        if self.dims() != (m.t(), m.k(), m.n()) {
            return Err(MolrError::DimensionMismatch(format!(
                "isotopism is {:?}, MOLR is {:?}",
                self.dims(),
                (m.t(), m.k(), m.n())
            )));
        }
        Ok(self.apply_unchecked(m))
    }

    pub(crate) fn apply_unchecked(&self, m: &MolrSet) -> MolrSet {
        let (t, k, n) = (m.t(), m.k(), m.n());
        let mut out = vec![0u8; t * k * n];
        for q in 0..t {
            let p = self.rect_perm[q] as usize;
            let sym = &self.sym_perms[p];
            for r in 0..k {
                let row = m.row(q, r);
                let base = (p * k + self.row_perm[r] as usize) * n;
                for (j, &x) in row.iter().enumerate() {
                    out[base + self.col_perm[j] as usize] = sym[x as usize];
                }
            }
        }
        MolrSet::from_flat_unchecked(n, k, t, out)
    }

    /// Raises the isotopism to the given power.
    pub fn pow(&self, e: usize) -> Isotopism {
        let (t, k, n) = self.dims();
        let mut acc = Isotopism::identity(t, k, n);
        for _ in 0..e {
            acc = self.compose(&acc);
        }
        acc
    }

    /// Order of the induced permutation on rectangles.
    pub fn rect_order(&self) -> usize {
        let ct = perm::cycle_type(&self.rect_perm);
        ct.iter().fold(1usize, |acc, &l| lcm(acc, l as usize))
    }
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}
