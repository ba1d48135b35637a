//! Pareto dominance, non-dominated sorting into layers, and an exact
//! brute-force oracle for the maximum size of a set of mutually
//! incomparable solutions.

use crate::error::{Error, Result};
use crate::genotype::Bitstring;
use crate::objectives::{evaluate, FitnessVector, ProblemDescriptor};

/// Largest string length the exhaustive antichain oracle accepts by default.
pub const DEFAULT_EXHAUSTION_LIMIT: usize = 16;

fn check_lengths(u: &[u32], v: &[u32]) -> Result<()> {
    if u.len() != v.len() || u.is_empty() {
        return Err(Error::invalid_parameter(format!(
            "fitness vectors must have equal positive lengths, got {} and {}",
            u.len(),
            v.len()
        )));
    }
    Ok(())
}

/// `u` weakly dominates `v`: at least as large in every objective.
pub fn weakly_dominates(u: &[u32], v: &[u32]) -> Result<bool> {
    check_lengths(u, v)?;
    Ok(weakly_dominates_unchecked(u, v))
}

/// `u` dominates `v`: weakly dominates with one strict inequality.
pub fn dominates(u: &[u32], v: &[u32]) -> Result<bool> {
    check_lengths(u, v)?;
    Ok(weakly_dominates_unchecked(u, v) && u != v)
}

#[inline]
pub(crate) fn weakly_dominates_unchecked(u: &[u32], v: &[u32]) -> bool {
    u.iter().zip(v).all(|(a, b)| a >= b)
}

#[inline]
pub(crate) fn dominates_unchecked(u: &[u32], v: &[u32]) -> bool {
    weakly_dominates_unchecked(u, v) && u != v
}

/// A partition of population indices into non-dominated layers
/// F^1, F^2, ... over a multiset of fitness vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerPartition {
    layers: Vec<Vec<usize>>,
}

impl LayerPartition {
    /// The layers, outermost (non-dominated) first. Indices within a layer
    /// are ascending.
    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    pub fn total(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }
}

/// Partitions a non-empty multiset of fitness vectors into non-dominated
/// layers (fast non-dominated sort with dominance counts).
pub fn nondominated_sort(fitnesses: &[FitnessVector]) -> Result<LayerPartition> {
    if fitnesses.is_empty() {
        return Err(Error::invalid_parameter("cannot sort an empty population"));
    }
    let m = fitnesses[0].len();
    if m == 0 || fitnesses.iter().any(|f| f.len() != m) {
        return Err(Error::invalid_parameter(
            "all fitness vectors must share one positive objective count",
        ));
    }

    let n = fitnesses.len();
    let mut dominated_by = vec![0usize; n];
    let mut dominates_list: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if dominates_unchecked(&fitnesses[i], &fitnesses[j]) {
                dominates_list[i].push(j);
                dominated_by[j] += 1;
            } else if dominates_unchecked(&fitnesses[j], &fitnesses[i]) {
                dominates_list[j].push(i);
                dominated_by[i] += 1;
            }
        }
    }

    let mut layers = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominates_list[i] {
                dominated_by[j] -= 1;
                if dominated_by[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        layers.push(std::mem::replace(&mut current, next));
    }
    Ok(LayerPartition { layers })
}

/// Reference peel-off sort: repeatedly removes the non-dominated members.
/// Quadratic per layer; kept as an independent oracle for the fast sort.
pub fn naive_nondominated_sort(fitnesses: &[FitnessVector]) -> Result<LayerPartition> {
    if fitnesses.is_empty() {
        return Err(Error::invalid_parameter("cannot sort an empty population"));
    }
    let mut remaining: Vec<usize> = (0..fitnesses.len()).collect();
    let mut layers = Vec::new();
    while !remaining.is_empty() {
        let layer: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| {
                !remaining
                    .iter()
                    .any(|&j| dominates_unchecked(&fitnesses[j], &fitnesses[i]))
            })
            .collect();
        remaining.retain(|i| !layer.contains(i));
        layers.push(layer);
    }
    Ok(LayerPartition { layers })
}

/// The unique 1-based index `i*` with fewer than `mu` members in layers
/// before it and at least `mu` members up to and including it.
pub fn critical_index(layers: &LayerPartition, mu: usize) -> Result<usize> {
    if mu == 0 {
        return Err(Error::invalid_parameter("mu must be positive"));
    }
    if layers.total() < mu {
        return Err(Error::invalid_state(format!(
            "layers hold {} members, fewer than mu={mu}",
            layers.total()
        )));
    }
    let mut cumulative = 0;
    for (idx, layer) in layers.layers.iter().enumerate() {
        cumulative += layer.len();
        if cumulative >= mu {
            return Ok(idx + 1);
        }
    }
    unreachable!("total size was checked against mu");
}

/// Exact maximum cardinality of a set of mutually incomparable solutions,
/// computed by exhausting the search space (default length cap
/// [`DEFAULT_EXHAUSTION_LIMIT`]).
pub fn max_antichain_size(d: &ProblemDescriptor) -> Result<usize> {
    max_antichain_size_with_limit(d, DEFAULT_EXHAUSTION_LIMIT)
}

/// As [`max_antichain_size`] with an explicit cap on the string length.
pub fn max_antichain_size_with_limit(d: &ProblemDescriptor, n_limit: usize) -> Result<usize> {
    if d.n() > n_limit {
        return Err(Error::capacity(format!(
            "antichain oracle requires n <= {n_limit}, got n = {}",
            d.n()
        )));
    }

    // Distinct fitness vectors: solutions sharing a vector are mutually
    // comparable, so the antichain question lives on the image of f.
    let mut image = std::collections::BTreeSet::new();
    for v in 0..(1u64 << d.n()) {
        let mut x = Bitstring::zeros(d.n());
        for i in 0..d.n() {
            if v >> i & 1 == 1 {
                x.set(i, true);
            }
        }
        image.insert(evaluate(&x, d).expect("descriptor and length are valid"));
    }
    let vectors: Vec<FitnessVector> = image.into_iter().collect();
    Ok(max_antichain_of_vectors(&vectors))
}

/// Branch-and-bound maximum antichain over distinct fitness vectors.
fn max_antichain_of_vectors(vectors: &[FitnessVector]) -> usize {
    let n = vectors.len();
    if n == 0 {
        return 0;
    }

    // Sort by coordinate sum: dominance strictly increases the sum, so
    // equal-sum vectors are always incomparable and the largest sum level
    // seeds the lower bound.
    let mut order: Vec<usize> = (0..n).collect();
    let sums: Vec<u64> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| u64::from(x)).sum())
        .collect();
    order.sort_by_key(|&i| sums[i]);
    let sorted: Vec<&FitnessVector> = order.iter().map(|&i| &vectors[i]).collect();

    let words = n.div_ceil(64);
    let mut comparable = vec![vec![0u64; words]; n];
    for i in 0..n {
        for j in i + 1..n {
            let c = weakly_dominates_unchecked(sorted[i], sorted[j])
                || weakly_dominates_unchecked(sorted[j], sorted[i]);
            if c {
                comparable[i][j / 64] |= 1 << (j % 64);
                comparable[j][i / 64] |= 1 << (i % 64);
            }
        }
    }

    let mut best = {
        let mut level_counts = std::collections::BTreeMap::new();
        for s in &sums {
            *level_counts.entry(*s).or_insert(0usize) += 1;
        }
        level_counts.values().copied().max().unwrap_or(0)
    };

    let mut candidates = vec![u64::MAX; words];
    let tail = n % 64;
    if tail != 0 {
        candidates[words - 1] = (1u64 << tail) - 1;
    }
    extend_antichain(&comparable, &mut candidates, 0, 0, &mut best);
    best
}

fn popcount(set: &[u64]) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

fn extend_antichain(
    comparable: &[Vec<u64>],
    candidates: &mut [u64],
    start: usize,
    size: usize,
    best: &mut usize,
) {
    if size + popcount(&candidates[..]) <= *best {
        return;
    }
    let words = candidates.len();
    let mut i = start;
    while i < comparable.len() {
        let (w, b) = (i / 64, i % 64);
        if candidates[w] >> b & 1 == 1 {
            // Branch 1: take vertex i, dropping everything comparable to it.
            let mut next: Vec<u64> = (0..words)
                .map(|k| candidates[k] & !comparable[i][k])
                .collect();
            next[w] &= !(1u64.wrapping_shl(b as u32) | ((1u64 << b) - 1));
            // Clear indices <= i from the new candidate set.
            for word in next.iter_mut().take(w) {
                *word = 0;
            }
            if size + 1 > *best {
                *best = size + 1;
            }
            extend_antichain(comparable, &mut next, i + 1, size + 1, best);

            // Branch 2: skip vertex i.
            candidates[w] &= !(1 << b);
            if size + popcount(&candidates[..]) <= *best {
                return;
            }
        }
        i += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::ProblemKind;
    use crate::rng::RandomStream;

    #[test]
    fn weak_dominance_examples() {
        assert!(weakly_dominates(&[3, 1], &[3, 1]).unwrap());
        assert!(weakly_dominates(&[3, 1], &[2, 1]).unwrap());
        assert!(!weakly_dominates(&[3, 1], &[2, 2]).unwrap());
        assert!(weakly_dominates(&[3, 1], &[3]).is_err());
    }

    #[test]
    fn strict_dominance_examples() {
        assert!(!dominates(&[3, 1], &[3, 1]).unwrap());
        assert!(dominates(&[4, 0], &[3, 0]).unwrap());
        assert!(!dominates(&[4, 0], &[0, 4]).unwrap());
        assert!(!dominates(&[0, 4], &[4, 0]).unwrap());
    }

    #[test]
    fn sort_examples() {
        let single = nondominated_sort(&[vec![2, 2]]).unwrap();
        assert_eq!(single.layers(), &[vec![0]]);

        let layers = nondominated_sort(&[vec![4, 0], vec![0, 4], vec![3, 0]]).unwrap();
        assert_eq!(layers.layers(), &[vec![0, 1], vec![2]]);

        let dup = nondominated_sort(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(dup.layers(), &[vec![0, 1]]);

        assert!(nondominated_sort(&[]).is_err());
    }

    #[test]
    fn layer_partition_invariants_on_random_multisets() {
        let mut rng = RandomStream::new(99);
        for _ in 0..50 {
            let n = 1 + rng.index(60);
            let m = 2 + rng.index(3);
            let fitnesses: Vec<FitnessVector> = (0..n)
                .map(|_| (0..m).map(|_| rng.index(5) as u32).collect())
                .collect();
            let partition = nondominated_sort(&fitnesses).unwrap();

            assert_eq!(partition.total(), n);
            let oracle = naive_nondominated_sort(&fitnesses).unwrap();
            assert_eq!(partition, oracle);

            // Every member of layer i > 1 is dominated by someone in layer
            // i-1 and by nobody in its own or later layers.
            let layers = partition.layers();
            for (li, layer) in layers.iter().enumerate() {
                for &i in layer {
                    if li > 0 {
                        assert!(layers[li - 1]
                            .iter()
                            .any(|&j| dominates_unchecked(&fitnesses[j], &fitnesses[i])));
                    }
                    for later in &layers[li..] {
                        assert!(!later
                            .iter()
                            .any(|&j| dominates_unchecked(&fitnesses[j], &fitnesses[i])));
                    }
                }
            }
        }
    }

    #[test]
    fn transitivity_on_random_triples() {
        let mut rng = RandomStream::new(4);
        let mut checked = 0;
        while checked < 1000 {
            let m = 2 + rng.index(3);
            let gen = |rng: &mut RandomStream| -> FitnessVector {
                (0..m).map(|_| rng.index(4) as u32).collect()
            };
            let (u, v, w) = (gen(&mut rng), gen(&mut rng), gen(&mut rng));
            if dominates(&u, &v).unwrap() && dominates(&v, &w).unwrap() {
                assert!(dominates(&u, &w).unwrap(), "{u:?} {v:?} {w:?}");
                checked += 1;
            } else {
                checked += 1;
            }
        }
    }

    #[test]
    fn critical_index_examples() {
        let layers = LayerPartition {
            layers: vec![vec![0, 1, 2], vec![3, 4, 5, 6], vec![7, 8, 9, 10, 11]],
        };
        assert_eq!(critical_index(&layers, 6).unwrap(), 2);

        let layers = LayerPartition {
            layers: vec![(0..10).collect()],
        };
        assert_eq!(critical_index(&layers, 10).unwrap(), 1);

        let layers = LayerPartition {
            layers: vec![(0..5).collect(), (5..10).collect()],
        };
        assert_eq!(critical_index(&layers, 5).unwrap(), 1);
        assert!(critical_index(&layers, 11).is_err());
        assert!(critical_index(&layers, 0).is_err());
    }

    #[test]
    fn antichain_oracle_values() {
        let cocz = ProblemDescriptor::new(ProblemKind::Cocz, 2, 4).unwrap();
        assert_eq!(max_antichain_size(&cocz).unwrap(), 3);

        let cocz = ProblemDescriptor::new(ProblemKind::Cocz, 4, 4).unwrap();
        assert_eq!(max_antichain_size(&cocz).unwrap(), 4);

        let lotz = ProblemDescriptor::new(ProblemKind::Lotz, 4, 4).unwrap();
        let size = max_antichain_size(&lotz).unwrap();
        assert!(size <= 27, "antichain {size} exceeds the (2n/m+1)^(m-1) bound");
    }

    #[test]
    fn antichain_budget_enforced() {
        let d = ProblemDescriptor::new(ProblemKind::Omm, 2, 20).unwrap();
        assert!(matches!(
            max_antichain_size_with_limit(&d, 16),
            Err(Error::Capacity(_))
        ));
    }

    /// Cross-check the branch-and-bound against a plain subset exhaustion
    /// on tiny images.
    #[test]
    fn antichain_matches_subset_exhaustion() {
        let mut rng = RandomStream::new(21);
        for _ in 0..30 {
            let count = 1 + rng.index(14);
            let vectors: Vec<FitnessVector> = {
                let mut set = std::collections::BTreeSet::new();
                for _ in 0..count {
                    set.insert(vec![rng.index(4) as u32, rng.index(4) as u32]);
                }
                set.into_iter().collect()
            };
            let n = vectors.len();
            let mut brute = 0usize;
            for mask in 0u32..(1 << n) {
                let chosen: Vec<usize> =
                    (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                let ok = chosen.iter().enumerate().all(|(a, &i)| {
                    chosen.iter().skip(a + 1).all(|&j| {
                        !weakly_dominates_unchecked(&vectors[i], &vectors[j])
                            && !weakly_dominates_unchecked(&vectors[j], &vectors[i])
                    })
                });
                if ok {
                    brute = brute.max(chosen.len());
                }
            }
            assert_eq!(max_antichain_of_vectors(&vectors), brute);
        }
    }
}
