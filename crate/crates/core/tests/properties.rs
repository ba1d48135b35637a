//! Property tests for the geometric and combinatorial invariants the
//! optimizer relies on.

use proptest::collection::vec;
use proptest::prelude::*;

use nsga3_core::dominance::{naive_nondominated_sort, nondominated_sort};
use nsga3_core::genotype::Bitstring;
use nsga3_core::normalization::normalize;
use nsga3_core::objectives::{evaluate, ProblemDescriptor, ProblemKind};
use nsga3_core::refpoints::{
    nearest_simplex_lattice_point, ray_distance, AssociationMode, Associator, Composition,
};
use nsga3_core::rng::RandomStream;
use nsga3_core::variation::standard_bit_mutation;

fn fitness_multiset(max_len: usize, m: usize, max_v: u32) -> impl Strategy<Value = Vec<Vec<u32>>> {
    vec(vec(0..=max_v, m), 1..=max_len)
}

proptest! {
    /// The fast sort and the peel-off oracle agree on arbitrary multisets.
    #[test]
    fn fast_sort_matches_naive_oracle(fitnesses in fitness_multiset(60, 3, 5)) {
        let fast = nondominated_sort(&fitnesses).unwrap();
        let naive = naive_nondominated_sort(&fitnesses).unwrap();
        prop_assert_eq!(fast, naive);
    }

    /// Sorting is a function of the multiset: permuting the input permutes
    /// the indices but preserves the per-member layer assignment.
    #[test]
    fn sort_is_permutation_invariant(
        fitnesses in fitness_multiset(30, 2, 4),
        shift in 0usize..30,
    ) {
        let n = fitnesses.len();
        let rotated: Vec<Vec<u32>> =
            (0..n).map(|i| fitnesses[(i + shift) % n].clone()).collect();

        let layer_of = |sorted: nsga3_core::LayerPartition, count: usize| {
            let mut assignment = vec![0usize; count];
            for (li, layer) in sorted.layers().iter().enumerate() {
                for &i in layer {
                    assignment[i] = li;
                }
            }
            assignment
        };
        let base = layer_of(nondominated_sort(&fitnesses).unwrap(), n);
        let moved = layer_of(nondominated_sort(&rotated).unwrap(), n);
        for i in 0..n {
            prop_assert_eq!(base[(i + shift) % n], moved[i]);
        }
    }

    /// Exhaustive and lattice association agree, including tie-breaks.
    #[test]
    fn association_modes_agree(
        m in 2usize..=4,
        p in 1u32..=24,
        raw in vec(0.0f64..1.0, 4),
        seed in any::<u64>(),
    ) {
        let v = &raw[..m];
        let exhaustive = Associator::new(m, p, AssociationMode::Exhaustive).unwrap();
        let lattice = Associator::new(m, p, AssociationMode::lattice_default()).unwrap();
        let (ce, de) = exhaustive.associate(v).unwrap();
        let (cl, dl) = lattice.associate(v).unwrap();
        prop_assert_eq!(&ce, &cl, "v = {:?} seed = {}", v, seed);
        prop_assert_eq!(de.to_bits(), dl.to_bits());
        prop_assert!(de >= 0.0);
    }

    /// The simplex rounding keeps every scaled coordinate within 1/p.
    #[test]
    fn lattice_rounding_error_bound(
        p in 1u32..=50,
        raw in vec(0.0f64..1.0, 4),
        m in 2usize..=4,
    ) {
        let v = &raw[..m];
        let total: f64 = v.iter().sum();
        prop_assume!(total > 1e-9);
        let c = nearest_simplex_lattice_point(v, p).unwrap();
        prop_assert_eq!(c.numerators().iter().sum::<u32>(), p);
        for (x, &a) in v.iter().zip(c.numerators()) {
            let err = (x / total - f64::from(a) / f64::from(p)).abs();
            prop_assert!(err <= 1.0 / f64::from(p) + 1e-12, "err = {}", err);
        }
    }

    /// Scaling a vector moves it along its ray, so its association and the
    /// zero ray distance of on-ray points are scale-free.
    #[test]
    fn ray_distance_is_homogeneous(
        a in vec(0u32..=6, 3),
        scale in 0.1f64..5.0,
        raw in vec(0.01f64..1.0, 3),
    ) {
        let p: u32 = a.iter().sum();
        prop_assume!(p > 0);
        let r = Composition::new(a, p).unwrap();
        let d1 = ray_distance(&raw, &r).unwrap();
        let scaled: Vec<f64> = raw.iter().map(|x| x * scale).collect();
        let d2 = ray_distance(&scaled, &r).unwrap();
        prop_assert!((d2 - d1 * scale).abs() <= 1e-9 * d1.max(1.0) * scale.max(1.0));

        // A point on the ray itself has distance ~0.
        let on_ray: Vec<f64> = r.coords().iter().map(|x| x * scale).collect();
        prop_assert!(ray_distance(&on_ray, &r).unwrap() < 1e-12);
    }

    /// Weak dominance is preserved by any positive-denominator affine
    /// normalization.
    #[test]
    fn normalization_preserves_weak_dominance(
        u in vec(0u32..=9, 3),
        w in vec(0u32..=9, 3),
        y_min in vec(0.0f64..1.0, 3),
        spread in vec(0.5f64..4.0, 3),
    ) {
        let y_nad: Vec<f64> = y_min.iter().zip(&spread).map(|(a, b)| a + b).collect();
        let nu = normalize(&u, &y_min, &y_nad);
        let nw = normalize(&w, &y_min, &y_nad);
        let raw = u.iter().zip(&w).all(|(a, b)| a >= b);
        let scaled = nu.iter().zip(&nw).all(|(a, b)| a >= b);
        prop_assert_eq!(raw, scaled);
    }

    /// Mutation output length equals input length and rate 0 / 1 are
    /// identity / complement.
    #[test]
    fn mutation_edge_rates(bits in "[01]{1,40}", seed in any::<u64>()) {
        let parent = Bitstring::from_binary_str(&bits).unwrap();
        let mut rng = RandomStream::new(seed);
        let same = standard_bit_mutation(&parent, 0.0, &mut rng).unwrap();
        prop_assert_eq!(&same, &parent);
        let flipped = standard_bit_mutation(&parent, 1.0, &mut rng).unwrap();
        prop_assert_eq!(flipped.len(), parent.len());
        for i in 0..parent.len() {
            prop_assert_eq!(flipped.get(i), !parent.get(i));
        }
    }

    /// Every evaluation stays within [0, f_max] on arbitrary strings, for
    /// every family.
    #[test]
    fn evaluations_stay_in_range(bits in "[01]{12}", kind_idx in 0usize..4) {
        let kind = [ProblemKind::Lotz, ProblemKind::Omm, ProblemKind::Cocz, ProblemKind::Omm3][kind_idx];
        let m = if kind == ProblemKind::Omm3 { 3 } else { 2 };
        let d = ProblemDescriptor::new(kind, m, 12).unwrap();
        let x = Bitstring::from_binary_str(&bits).unwrap();
        let f = evaluate(&x, &d).unwrap();
        prop_assert_eq!(f.len(), m);
        prop_assert!(f.iter().all(|&v| v <= d.f_max()));
    }
}

/// Per-bit flip frequencies at rate 1/n stay near 1/n (chi-square-style
/// tolerance on each bit).
#[test]
fn mutation_per_bit_distribution() {
    let n = 16;
    let trials = 60_000u32;
    let mut rng = RandomStream::new(123);
    let zero = Bitstring::zeros(n);
    let mut flips = vec![0u32; n];
    for _ in 0..trials {
        let child = standard_bit_mutation(&zero, 1.0 / n as f64, &mut rng).unwrap();
        for (i, slot) in flips.iter_mut().enumerate() {
            *slot += u32::from(child.get(i));
        }
    }
    let expected = f64::from(trials) / n as f64;
    // 4-sigma band per bit: sigma^2 = trials * q * (1 - q).
    let sigma = (f64::from(trials) * (1.0 / n as f64) * (1.0 - 1.0 / n as f64)).sqrt();
    for (i, &count) in flips.iter().enumerate() {
        let deviation = (f64::from(count) - expected).abs();
        assert!(
            deviation < 4.0 * sigma,
            "bit {i}: {count} flips vs expected {expected:.1} (sigma {sigma:.1})"
        );
    }
}
