//! Instance corpora: every poset up to isomorphism, seeded random spaces and
//! the named catalogue.

use std::path::PathBuf;

use itertools::Itertools;
use qfs_core::space::default_labels;
use qfs_core::{FiniteSpace, SpecOrder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Default cap on exhaustive enumeration (5040 permutations per canonical form).
pub const DEFAULT_POSET_CAP: usize = 7;

/// Hard cap: a canonical code is an `n × n` bit matrix in one `u64`.
pub const POSET_CODE_LIMIT: usize = 8;

/// Names the directory used to cache enumerated posets.
pub const CACHE_ENV: &str = "QFS_CACHE_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("exhaustive enumeration of {n} points is above the cap of {cap}")]
    OverCap { n: usize, cap: usize },
    #[error("edge density {0} is not in [0, 1]")]
    Density(f64),
    #[error("{0}")]
    Core(#[from] qfs_core::Error),
}

type Result<T> = std::result::Result<T, CorpusError>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Exhaustive { n: usize, index: usize },
    Random { seed: u64, n: usize, density: f64 },
    Named { name: String },
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub provenance: Provenance,
    pub space: FiniteSpace,
}

impl Entry {
    pub fn name(&self) -> String {
        match &self.provenance {
            Provenance::Exhaustive { n, index } => format!("poset-{n}-{index}"),
            Provenance::Random { seed, n, .. } => format!("random-{seed}-{n}"),
            Provenance::Named { name } => name.clone(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub entries: Vec<Entry>,
}

impl Corpus {
    /// Every poset with `1..=max` points, one per isomorphism class.
    pub fn exhaustive(max: usize, cap: usize) -> Result<Self> {
        let mut entries = Vec::new();
        for n in 1..=max {
            for (index, order) in enumerate_posets(n, cap)?.into_iter().enumerate() {
                entries.push(Entry {
                    provenance: Provenance::Exhaustive { n, index },
                    space: FiniteSpace::from_order(default_labels(n), order)?,
                });
            }
        }
        Ok(Corpus { entries })
    }

    /// `count` random spaces; instance `i` uses seed `seed + i`, a size in
    /// `1..=max` and a density drawn from that seed.
    pub fn random(count: usize, seed: u64, max: usize) -> Result<Self> {
        let entries = (0..count as u64)
            .map(|i| {
                let s = seed.wrapping_add(i);
                let mut rng = ChaCha8Rng::seed_from_u64(s ^ 0x5eed);
                let n = rng.gen_range(1..=max.max(1));
                let density = f64::from(rng.gen_range(0u32..=10)) / 10.0;
                Ok(Entry {
                    provenance: Provenance::Random {
                        seed: s,
                        n,
                        density,
                    },
                    space: random_space(s, n, density)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Corpus { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn extend(&mut self, other: Corpus) {
        self.entries.extend(other.entries);
    }
}

/// Random DAG on `0..n` (edge `i → j`, `i < j`, with probability `density`),
/// closed transitively, with the up-set topology.
pub fn random_space(seed: u64, n: usize, density: f64) -> Result<FiniteSpace> {
    if !(0.0..=1.0).contains(&density) {
        return Err(CorpusError::Density(density));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((i, j));
            }
        }
    }
    Ok(FiniteSpace::from_order(
        default_labels(n),
        SpecOrder::from_relation(n, pairs)?,
    )?)
}

/// Row-major strict order matrix under `perm` (old index ↦ new index), read
/// as a binary number with the first cell most significant.
fn code_under(order: &SpecOrder, perm: &[usize]) -> u64 {
    let n = order.len();
    let mut code = 0u64;
    for (x, y) in order.pairs() {
        if x != y {
            let cell = perm[x] * n + perm[y];
            code |= 1 << (n * n - 1 - cell);
        }
    }
    code
}

/// Least code over all relabellings; equal exactly for isomorphic posets.
pub fn canonical_code(order: &SpecOrder) -> u64 {
    let n = order.len();
    (0..n)
        .permutations(n)
        .map(|p| code_under(order, &p))
        .min()
        .unwrap_or(0)
}

pub fn decode(n: usize, code: u64) -> SpecOrder {
    let pairs = (0..n)
        .cartesian_product(0..n)
        .filter(|&(x, y)| code >> (n * n - 1 - (x * n + y)) & 1 == 1);
    SpecOrder::from_relation(n, pairs).expect("codes hold partial orders")
}

/// Canonical codes of all posets on `n` points, ascending. Each poset on
/// `n` points arises from one on `n - 1` points by adding a maximal point
/// above a lower set.
pub fn poset_codes(n: usize, cap: usize) -> Result<Vec<u64>> {
    let cap = cap.min(POSET_CODE_LIMIT);
    if n > cap {
        return Err(CorpusError::OverCap { n, cap });
    }
    if n == 0 {
        return Ok(vec![0]);
    }
    if let Some(codes) = read_cache(n) {
        return Ok(codes);
    }
    let smaller = poset_codes(n - 1, cap)?;
    let mut codes = Vec::new();
    for &c in &smaller {
        let base = decode(n - 1, c);
        let top = n - 1;
        for upper in base.upper_sets()? {
            let lower = upper.complement(n - 1);
            let pairs = base
                .pairs()
                .into_iter()
                .chain(lower.iter().map(|x| (x, top)));
            codes.push(canonical_code(&SpecOrder::from_relation(n, pairs)?));
        }
    }
    codes.sort_unstable();
    codes.dedup();
    write_cache(n, &codes);
    Ok(codes)
}

/// One representative per isomorphism class, in canonical-code order.
pub fn enumerate_posets(n: usize, cap: usize) -> Result<Vec<SpecOrder>> {
    Ok(poset_codes(n, cap)?
        .into_iter()
        .map(|c| decode(n, c))
        .collect())
}

fn cache_file(n: usize) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_ENV)?;
    Some(PathBuf::from(dir).join(format!("posets-{n}.json")))
}

#[derive(Serialize, Deserialize)]
struct CachedCodes {
    n: usize,
    codes: Vec<u64>,
}

fn read_cache(n: usize) -> Option<Vec<u64>> {
    let text = std::fs::read_to_string(cache_file(n)?).ok()?;
    let cached: CachedCodes = serde_json::from_str(&text).ok()?;
    let sound = cached.n == n
        && cached.codes.windows(2).all(|w| w[0] < w[1])
        && cached
            .codes
            .iter()
            .all(|&c| canonical_code(&decode(n, c)) == c);
    sound.then_some(cached.codes)
}

/// Best effort: a cache that cannot be written is simply not used.
fn write_cache(n: usize, codes: &[u64]) {
    let Some(path) = cache_file(n) else {
        return;
    };
    if let Some(dir) = path.parent() {
        let _ = std::fs::create_dir_all(dir);
    }
    let cached = CachedCodes {
        n,
        codes: codes.to_vec(),
    };
    let _ = std::fs::write(
        path,
        serde_json::to_string(&cached).expect("codes serialize"),
    );
}
