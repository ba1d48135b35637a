//! The benchmark families: m-LOTZ, m-OMM, m-COCZ and the three-objective
//! OneMinMax variant, together with their Pareto-optimality predicates and
//! Pareto-front enumeration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genotype::Bitstring;

/// Raw objective values, one non-negative integer per objective.
pub type FitnessVector = Vec<u32>;

/// Default cap on the number of Pareto-front fitness vectors the
/// enumeration in [`pareto_front_fitness_set`] will materialize.
pub const DEFAULT_FRONT_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    /// Leading ones / trailing zeros per block.
    Lotz,
    /// Ones / zeros per block.
    Omm,
    /// Ones in the first half plus ones / zeros per second-half block.
    Cocz,
    /// Three objectives: zeros overall, ones in the first half, ones in
    /// the second half.
    Omm3,
}

impl ProblemKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProblemKind::Lotz => "lotz",
            ProblemKind::Omm => "omm",
            ProblemKind::Cocz => "cocz",
            ProblemKind::Omm3 => "omm3",
        }
    }
}

impl std::fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lotz" => Ok(ProblemKind::Lotz),
            "omm" => Ok(ProblemKind::Omm),
            "cocz" => Ok(ProblemKind::Cocz),
            "omm3" | "3omm" | "3-omm" => Ok(ProblemKind::Omm3),
            other => Err(Error::invalid_parameter(format!(
                "unknown problem kind '{other}' (expected lotz, omm, cocz or omm3)"
            ))),
        }
    }
}

/// A validated benchmark instance: problem family, objective count `m` and
/// string length `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDescriptor")]
pub struct ProblemDescriptor {
    kind: ProblemKind,
    m: usize,
    n: usize,
}

#[derive(Deserialize)]
struct RawDescriptor {
    kind: ProblemKind,
    m: usize,
    n: usize,
}

impl TryFrom<RawDescriptor> for ProblemDescriptor {
    type Error = Error;

    fn try_from(raw: RawDescriptor) -> Result<Self> {
        ProblemDescriptor::new(raw.kind, raw.m, raw.n)
    }
}

impl ProblemDescriptor {
    pub fn new(kind: ProblemKind, m: usize, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid_parameter("problem size n must be positive"));
        }
        match kind {
            ProblemKind::Lotz | ProblemKind::Omm => {
                if m < 2 || m % 2 != 0 {
                    return Err(Error::invalid_parameter(format!(
                        "{kind} requires an even objective count m >= 2, got m={m}"
                    )));
                }
                if n % (m / 2) != 0 {
                    return Err(Error::invalid_parameter(format!(
                        "{kind} requires n divisible by m/2, got n={n}, m={m}"
                    )));
                }
            }
            ProblemKind::Cocz => {
                if m < 2 || m % 2 != 0 {
                    return Err(Error::invalid_parameter(format!(
                        "cocz requires an even objective count m >= 2, got m={m}"
                    )));
                }
                if n % m != 0 {
                    return Err(Error::invalid_parameter(format!(
                        "cocz requires n divisible by m, got n={n}, m={m}"
                    )));
                }
            }
            ProblemKind::Omm3 => {
                if m != 3 {
                    return Err(Error::invalid_parameter(format!(
                        "omm3 has exactly 3 objectives, got m={m}"
                    )));
                }
                if n % 2 != 0 {
                    return Err(Error::invalid_parameter(format!(
                        "omm3 requires an even problem size, got n={n}"
                    )));
                }
            }
        }
        Ok(Self { kind, m, n })
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Maximum value any objective attains over the whole search space.
    pub fn f_max(&self) -> u32 {
        match self.kind {
            ProblemKind::Lotz | ProblemKind::Omm => (2 * self.n / self.m) as u32,
            ProblemKind::Cocz => (self.n / 2 + self.n / self.m) as u32,
            ProblemKind::Omm3 => self.n as u32,
        }
    }

    /// Length of one conflicting block: `2n/m` for LOTZ/OMM, `n/m` for the
    /// second-half blocks of COCZ, `n/2` for the halves of OMM3.
    pub fn block_size(&self) -> usize {
        match self.kind {
            ProblemKind::Lotz | ProblemKind::Omm => 2 * self.n / self.m,
            ProblemKind::Cocz => self.n / self.m,
            ProblemKind::Omm3 => self.n / 2,
        }
    }
}

fn check_length(x: &Bitstring, d: &ProblemDescriptor) -> Result<()> {
    if x.len() != d.n {
        return Err(Error::invalid_parameter(format!(
            "bitstring length {} does not match problem size {}",
            x.len(),
            d.n
        )));
    }
    Ok(())
}

/// Leading ones of the index range `[start, start + len)`.
fn leading_ones(x: &Bitstring, start: usize, len: usize) -> u32 {
    let mut count = 0;
    for i in start..start + len {
        if !x.get(i) {
            break;
        }
        count += 1;
    }
    count
}

/// Trailing zeros of the index range `[start, start + len)`.
fn trailing_zeros(x: &Bitstring, start: usize, len: usize) -> u32 {
    let mut count = 0;
    for i in (start..start + len).rev() {
        if x.get(i) {
            break;
        }
        count += 1;
    }
    count
}

/// Evaluates the instance's objective vector on `x`.
pub fn evaluate(x: &Bitstring, d: &ProblemDescriptor) -> Result<FitnessVector> {
    check_length(x, d)?;
    let mut f = Vec::with_capacity(d.m);
    match d.kind {
        ProblemKind::Lotz => {
            let block = d.block_size();
            for b in 0..d.m / 2 {
                let start = b * block;
                f.push(leading_ones(x, start, block));
                f.push(trailing_zeros(x, start, block));
            }
        }
        ProblemKind::Omm => {
            let block = d.block_size();
            for b in 0..d.m / 2 {
                let start = b * block;
                let ones = x.count_ones_in(start, start + block);
                f.push(ones);
                f.push(block as u32 - ones);
            }
        }
        ProblemKind::Cocz => {
            let half_ones = x.count_ones_in(0, d.n / 2);
            let block = d.block_size();
            for b in 0..d.m / 2 {
                let start = d.n / 2 + b * block;
                let ones = x.count_ones_in(start, start + block);
                f.push(half_ones + ones);
                f.push(half_ones + block as u32 - ones);
            }
        }
        ProblemKind::Omm3 => {
            let first = x.count_ones_in(0, d.n / 2);
            let second = x.count_ones_in(d.n / 2, d.n);
            f.push(d.n as u32 - first - second);
            f.push(first);
            f.push(second);
        }
    }
    Ok(f)
}

/// Whether `x` is Pareto-optimal for the instance.
pub fn is_pareto_optimal(x: &Bitstring, d: &ProblemDescriptor) -> Result<bool> {
    check_length(x, d)?;
    match d.kind {
        ProblemKind::Lotz => {
            // Pareto-optimal iff every block has the shape 1^i 0^(block-i),
            // i.e. leading ones and trailing zeros cover the block.
            let block = d.block_size();
            for b in 0..d.m / 2 {
                let start = b * block;
                let lo = leading_ones(x, start, block);
                let tz = trailing_zeros(x, start, block);
                if (lo + tz) as usize != block {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        ProblemKind::Omm | ProblemKind::Omm3 => Ok(true),
        ProblemKind::Cocz => Ok(x.count_ones_in(0, d.n / 2) as usize == d.n / 2),
    }
}

/// Closed-form cardinality of the set of Pareto-optimal fitness vectors.
pub fn front_cardinality(d: &ProblemDescriptor) -> Result<u128> {
    let pow = |base: u128, exp: u32| -> Result<u128> {
        base.checked_pow(exp)
            .ok_or_else(|| Error::capacity("Pareto-front cardinality overflows u128"))
    };
    match d.kind {
        ProblemKind::Lotz | ProblemKind::Omm | ProblemKind::Cocz => {
            pow(d.block_size() as u128 + 1, (d.m / 2) as u32)
        }
        ProblemKind::Omm3 => pow(d.n as u128 / 2 + 1, 2),
    }
}

/// Enumerates the exact set of Pareto-optimal fitness vectors, in
/// lexicographic order, under the default materialization budget.
pub fn pareto_front_fitness_set(d: &ProblemDescriptor) -> Result<Vec<FitnessVector>> {
    pareto_front_fitness_set_with_budget(d, DEFAULT_FRONT_BUDGET)
}

/// As [`pareto_front_fitness_set`] with an explicit budget cap.
pub fn pareto_front_fitness_set_with_budget(
    d: &ProblemDescriptor,
    budget: u128,
) -> Result<Vec<FitnessVector>> {
    let size = front_cardinality(d)?;
    if size > budget {
        return Err(Error::capacity(format!(
            "Pareto front has {size} fitness vectors, exceeding the budget of {budget}"
        )));
    }
    let mut out = Vec::with_capacity(size as usize);
    match d.kind {
        ProblemKind::Lotz | ProblemKind::Omm => {
            let block = d.block_size() as u32;
            enumerate_pair_sums(d.m / 2, block, 0, &mut Vec::with_capacity(d.m), &mut out);
        }
        ProblemKind::Cocz => {
            let block = d.block_size() as u32;
            let base = (d.n / 2) as u32;
            enumerate_pair_sums(d.m / 2, block, base, &mut Vec::with_capacity(d.m), &mut out);
        }
        ProblemKind::Omm3 => {
            let half = (d.n / 2) as u32;
            for a in 0..=half {
                for b in 0..=half {
                    out.push(vec![d.n as u32 - a - b, a, b]);
                }
            }
            out.sort();
        }
    }
    debug_assert_eq!(out.len() as u128, size);
    Ok(out)
}

/// Cartesian product of per-block pairs `(base + i, base + block - i)`,
/// emitted in lexicographic order.
fn enumerate_pair_sums(
    blocks: usize,
    block: u32,
    base: u32,
    prefix: &mut Vec<u32>,
    out: &mut Vec<FitnessVector>,
) {
    if blocks == 0 {
        out.push(prefix.clone());
        return;
    }
    for i in 0..=block {
        prefix.push(base + i);
        prefix.push(base + block - i);
        enumerate_pair_sums(blocks - 1, block, base, prefix, out);
        prefix.pop();
        prefix.pop();
    }
}
