//! Variation and parent-selection operators: uniform initialization,
//! uniform parent selection and standard bit mutation.

use crate::error::{Error, Result};
use crate::genotype::Bitstring;
use crate::rng::RandomStream;

/// Standard bit mutation: returns a copy of `parent` in which every bit was
/// flipped independently with probability `rate`.
///
/// Flips are realized as one Bernoulli draw per bit, in index order, so the
/// per-bit distribution is auditable directly from the draw sequence.
pub fn standard_bit_mutation(
    parent: &Bitstring,
    rate: f64,
    rng: &mut RandomStream,
) -> Result<Bitstring> {
    if !(0.0..=1.0).contains(&rate) || rate.is_nan() {
        return Err(Error::invalid_parameter(format!(
            "mutation rate must lie in [0, 1], got {rate}"
        )));
    }
    let mut child = parent.clone();
    for i in 0..parent.len() {
        if rng.bernoulli(rate) {
            child.flip(i);
        }
    }
    Ok(child)
}

/// Picks one member of `population` uniformly at random.
pub fn uniform_parent_selection<'a>(
    population: &'a [Bitstring],
    rng: &mut RandomStream,
) -> Result<&'a Bitstring> {
    if population.is_empty() {
        return Err(Error::invalid_state("cannot select a parent from an empty population"));
    }
    Ok(&population[rng.index(population.len())])
}

/// Samples `mu` bitstrings of length `n`, every bit an independent fair coin.
pub fn random_population(mu: usize, n: usize, rng: &mut RandomStream) -> Result<Vec<Bitstring>> {
    if mu == 0 || n == 0 {
        return Err(Error::invalid_parameter(format!(
            "population size and string length must be positive, got mu={mu}, n={n}"
        )));
    }
    let mut population = Vec::with_capacity(mu);
    for _ in 0..mu {
        let mut s = Bitstring::zeros(n);
        for i in 0..n {
            if rng.coin() {
                s.set(i, true);
            }
        }
        population.push(s);
    }
    Ok(population)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_zero_is_identity() {
        let mut rng = RandomStream::new(1);
        let p = Bitstring::from_binary_str("1101").unwrap();
        assert_eq!(standard_bit_mutation(&p, 0.0, &mut rng).unwrap(), p);
    }

    #[test]
    fn rate_one_is_complement() {
        let mut rng = RandomStream::new(1);
        let p = Bitstring::from_binary_str("1101").unwrap();
        let c = standard_bit_mutation(&p, 1.0, &mut rng).unwrap();
        assert_eq!(c.to_string(), "0010");
    }

    #[test]
    fn invalid_rate_rejected() {
        let mut rng = RandomStream::new(1);
        let p = Bitstring::zeros(4);
        assert!(standard_bit_mutation(&p, -0.1, &mut rng).is_err());
        assert!(standard_bit_mutation(&p, 1.5, &mut rng).is_err());
    }

    #[test]
    fn parent_is_unmodified() {
        let mut rng = RandomStream::new(2);
        let p = Bitstring::ones(32);
        let _ = standard_bit_mutation(&p, 0.5, &mut rng).unwrap();
        assert_eq!(p, Bitstring::ones(32));
    }

    #[test]
    fn expected_flip_count_at_rate_one_over_n() {
        // Binomial(20, 1/20) has mean 1; over 1e5 trials the sample mean
        // must land within 0.05 of it.
        let n = 20;
        let mut rng = RandomStream::new(7);
        let zero = Bitstring::zeros(n);
        let trials = 100_000;
        let mut flips = 0u64;
        for _ in 0..trials {
            let child = standard_bit_mutation(&zero, 1.0 / n as f64, &mut rng).unwrap();
            flips += u64::from(child.count_ones());
        }
        let mean = flips as f64 / trials as f64;
        assert!((mean - 1.0).abs() < 0.05, "sample mean {mean}");
    }

    #[test]
    fn uniform_selection_frequencies() {
        let mut rng = RandomStream::new(11);
        let population: Vec<_> = (0..4)
            .map(|i| {
                let mut s = Bitstring::zeros(4);
                s.set(i, true);
                s
            })
            .collect();
        let draws = 100_000;
        let mut counts = [0usize; 4];
        for _ in 0..draws {
            let picked = uniform_parent_selection(&population, &mut rng).unwrap();
            let idx = (0..4).find(|&i| picked.get(i)).unwrap();
            counts[idx] += 1;
        }
        for &c in &counts {
            assert!((c as f64 / draws as f64 - 0.25).abs() < 0.01);
        }
    }

    #[test]
    fn singleton_population_always_selected() {
        let mut rng = RandomStream::new(5);
        let population = vec![Bitstring::from_binary_str("101").unwrap()];
        for _ in 0..10 {
            assert_eq!(
                uniform_parent_selection(&population, &mut rng).unwrap(),
                &population[0]
            );
        }
    }

    #[test]
    fn empty_population_is_an_error() {
        let mut rng = RandomStream::new(5);
        assert!(uniform_parent_selection(&[], &mut rng).is_err());
    }

    #[test]
    fn selection_is_deterministic_under_seed() {
        let population: Vec<_> = vec![
            Bitstring::from_binary_str("00").unwrap(),
            Bitstring::from_binary_str("01").unwrap(),
            Bitstring::from_binary_str("10").unwrap(),
        ];
        let run = |seed| {
            let mut rng = RandomStream::new(seed);
            (0..50)
                .map(|_| uniform_parent_selection(&population, &mut rng).unwrap().clone())
                .collect::<Vec<_>>()
        };
        assert_eq!(run(9), run(9));
    }

    #[test]
    fn random_population_shape_and_determinism() {
        let mut a = RandomStream::new(3);
        let mut b = RandomStream::new(3);
        let pa = random_population(100, 20, &mut a).unwrap();
        let pb = random_population(100, 20, &mut b).unwrap();
        assert_eq!(pa, pb);
        assert_eq!(pa.len(), 100);
        assert!(pa.iter().all(|s| s.len() == 20));

        // Binomial(2000, 1/2): total ones within 1000 +- 100 (about 3 sigma).
        let ones: u32 = pa.iter().map(Bitstring::count_ones).sum();
        assert!((ones as i64 - 1000).abs() < 100, "total ones {ones}");
    }

    #[test]
    fn random_population_rejects_degenerate_sizes() {
        let mut rng = RandomStream::new(1);
        assert!(random_population(0, 4, &mut rng).is_err());
        assert!(random_population(4, 0, &mut rng).is_err());
    }
}
