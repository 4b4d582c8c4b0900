//! Brute-force oracles shared by the integration tests. They deliberately
//! avoid the library's enumeration and canonical forms.

#![allow(dead_code)]

/// A poset on `0..n` as one up-set mask per point.
pub type UpSets = Vec<u32>;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, left: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..left.len() {
            let x = left.remove(i);
            prefix.push(x);
            go(prefix, left, out);
            prefix.pop();
            left.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (0..n).collect(), &mut out);
    out
}

/// Lexicographically least relabelled up-set vector.
fn canonical(up: &UpSets, perms: &[Vec<usize>]) -> UpSets {
    let n = up.len();
    perms
        .iter()
        .map(|p| {
            let mut moved = vec![0u32; n];
            for x in 0..n {
                let mut m = 0u32;
                for (y, &py) in p.iter().enumerate() {
                    if up[x] >> y & 1 == 1 {
                        m |= 1 << py;
                    }
                }
                moved[p[x]] = m;
            }
            moved
        })
        .min()
        .expect("at least one permutation")
}

/// One poset per isomorphism class. Every poset has a linear extension, so
/// relations with `i < j` only cover every class.
pub fn posets(n: usize) -> Vec<UpSets> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let perms = permutations(n);
    let mut seen = std::collections::BTreeSet::new();
    for bits in 0u32..1 << pairs.len() {
        let mut up: UpSets = (0..n).map(|x| 1 << x).collect();
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if bits >> k & 1 == 1 {
                up[i] |= 1 << j;
            }
        }
        let transitive = (0..n).all(|x| {
            (0..n)
                .filter(|&y| up[x] >> y & 1 == 1)
                .all(|y| up[y] & !up[x] == 0)
        });
        if transitive {
            seen.insert(canonical(&up, &perms));
        }
    }
    seen.into_iter().collect()
}

/// Every subset closed upward, found by testing each subset.
pub fn upper_sets(up: &UpSets) -> Vec<u64> {
    let n = up.len();
    (0u64..1 << n)
        .filter(|&s| (0..n).all(|x| s >> x & 1 == 0 || u64::from(up[x]) & !s == 0))
        .collect()
}

/// Up-set vector of a library order, for comparison with [`posets`].
pub fn up_sets_of(order: &qfs_core::SpecOrder) -> UpSets {
    (0..order.len())
        .map(|x| order.up(x).bits() as u32)
        .collect()
}

pub fn canonical_of(up: &UpSets) -> UpSets {
    canonical(up, &permutations(up.len()))
}
