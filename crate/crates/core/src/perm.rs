//! Small helpers for permutations stored as `&[u8]` maps `i -> p[i]`.

pub fn identity(n: usize) -> Vec<u8> {
    (0..n as u8).collect()
}

pub fn is_permutation(p: &[u8]) -> bool {
    let n = p.len();
    let mut seen = 0u64;
    for &x in p {
        let x = x as usize;
        if x >= n || seen >> x & 1 == 1 {
            return false;
        }
        seen |= 1 << x;
    }
    true
}

pub fn inverse(p: &[u8]) -> Vec<u8> {
    let mut inv = vec![0u8; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u8;
    }
    inv
}

/// `(a ∘ b)(i) = a[b[i]]`
pub fn compose(a: &[u8], b: &[u8]) -> Vec<u8> {
    b.iter().map(|&x| a[x as usize]).collect()
}

pub fn is_identity(p: &[u8]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i == x as usize)
}

/// Cycle lengths sorted in decreasing order.
pub fn cycle_type(p: &[u8]) -> Vec<u8> {
    let mut seen = 0u64;
    let mut lens = Vec::new();
    for start in 0..p.len() {
        if seen >> start & 1 == 1 {
            continue;
        }
        let mut len = 0u8;
        let mut x = start;
        while seen >> x & 1 == 0 {
            seen |= 1 << x;
            x = p[x] as usize;
            len += 1;
        }
        lens.push(len);
    }
    lens.sort_unstable_by(|a, b| b.cmp(a));
    lens
}

/// Order of the centralizer of a permutation with the given cycle type.
pub fn centralizer_order(cycle_type: &[u8]) -> u64 {
    let mut order = 1u64;
    let mut i = 0;
    while i < cycle_type.len() {
        let len = cycle_type[i];
        let mut mult = 0u64;
        while i < cycle_type.len() && cycle_type[i] == len {
            mult += 1;
            i += 1;
            order = order.saturating_mul(len as u64).saturating_mul(mult);
        }
    }
    order
}

/// Heap's algorithm over all permutations of `0..n`, calling `f` on each.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[u8])) {
    let mut p = identity(n);
    let mut c = vec![0usize; n];
    f(&p);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}
