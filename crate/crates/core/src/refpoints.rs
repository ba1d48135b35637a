//! Structured reference points on the unit simplex, perpendicular ray
//! distances, and the association of normalized fitness vectors to
//! reference points with deterministic tie-breaking.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on how many reference points may be materialized at once.
pub const DEFAULT_MATERIALIZATION_BUDGET: u64 = 1_000_000;

/// Relative tolerance under which two ray distances count as tied; ties
/// break to the lexicographically smallest composition so association is
/// identical across platforms.
pub const RAY_TIE_RELATIVE_TOLERANCE: f64 = 1e-12;

/// A weak composition: `m` non-negative numerators summing to the division
/// count `p`, denoting the reference point `(a_1/p, ..., a_m/p)`.
///
/// The derived ordering is lexicographic on the numerators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Composition {
    a: Vec<u32>,
    p: u32,
}

impl Composition {
    pub fn new(a: Vec<u32>, p: u32) -> Result<Self> {
        if a.is_empty() || p == 0 {
            return Err(Error::invalid_parameter(
                "a composition needs m >= 1 numerators and p >= 1 divisions",
            ));
        }
        let sum: u64 = a.iter().map(|&x| u64::from(x)).sum();
        if sum != u64::from(p) {
            return Err(Error::invalid_parameter(format!(
                "composition numerators sum to {sum}, expected p = {p}"
            )));
        }
        Ok(Self { a, p })
    }

    pub fn numerators(&self) -> &[u32] {
        &self.a
    }

    pub fn divisions(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// The point `(a_1/p, ..., a_m/p)` on the unit simplex.
    pub fn coords(&self) -> Vec<f64> {
        self.a
            .iter()
            .map(|&x| f64::from(x) / f64::from(self.p))
            .collect()
    }

    /// The lexicographically smallest composition `(0, ..., 0, p)`,
    /// the degenerate association target of the zero vector.
    pub fn lex_smallest(m: usize, p: u32) -> Self {
        let mut a = vec![0u32; m];
        a[m - 1] = p;
        Self { a, p }
    }

    fn unit(&self) -> Vec<f64> {
        let coords = self.coords();
        let norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
        coords.into_iter().map(|x| x / norm).collect()
    }
}

/// Number of reference points for `m` objectives and `p` divisions:
/// the weak composition count `C(p + m - 1, m - 1)`.
pub fn reference_point_count(m: usize, p: u32) -> BigUint {
    debug_assert!(m >= 1 && p >= 1);
    // C(p + m - 1, m - 1) built incrementally so every division is exact.
    let mut result = BigUint::from(1u32);
    for k in 1..m as u64 {
        result = result * BigUint::from(u64::from(p) + k) / BigUint::from(k);
    }
    result
}

/// Materializes every weak composition of `p` over `m` parts, in
/// lexicographic order, under the default budget.
pub fn generate_reference_points(m: usize, p: u32) -> Result<Vec<Composition>> {
    generate_reference_points_with_budget(m, p, DEFAULT_MATERIALIZATION_BUDGET)
}

/// As [`generate_reference_points`] with an explicit budget.
pub fn generate_reference_points_with_budget(
    m: usize,
    p: u32,
    budget: u64,
) -> Result<Vec<Composition>> {
    if m == 0 || p == 0 {
        return Err(Error::invalid_parameter(
            "reference points need m >= 1 and p >= 1",
        ));
    }
    let count = reference_point_count(m, p);
    if count > BigUint::from(budget) {
        return Err(Error::capacity(format!(
            "|R_p| = {count} reference points exceed the materialization budget of {budget}"
        )));
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(m);
    fill_compositions(m, p, &mut prefix, &mut out);
    debug_assert_eq!(BigUint::from(out.len() as u64), count);
    Ok(out)
}

fn fill_compositions(m: usize, p: u32, prefix: &mut Vec<u32>, out: &mut Vec<Composition>) {
    let remaining: u32 = p - prefix.iter().sum::<u32>();
    if prefix.len() == m - 1 {
        prefix.push(remaining);
        out.push(Composition {
            a: prefix.clone(),
            p,
        });
        prefix.pop();
        return;
    }
    for v in 0..=remaining {
        prefix.push(v);
        fill_compositions(m, p, prefix, out);
        prefix.pop();
    }
}

/// Perpendicular distance from `v` to the ray through the origin and the
/// reference point of `r`: `|v - (v . r_hat) r_hat|`.
pub fn ray_distance(v: &[f64], r: &Composition) -> Result<f64> {
    if v.len() != r.dim() {
        return Err(Error::invalid_parameter(format!(
            "vector dimension {} does not match composition dimension {}",
            v.len(),
            r.dim()
        )));
    }
    Ok(ray_distance_to_unit(v, &r.unit()))
}

#[inline]
pub(crate) fn ray_distance_to_unit(v: &[f64], unit: &[f64]) -> f64 {
    let dot: f64 = v.iter().zip(unit).map(|(a, b)| a * b).sum();
    v.iter()
        .zip(unit)
        .map(|(a, b)| {
            let residual = a - dot * b;
            residual * residual
        })
        .sum::<f64>()
        .sqrt()
}

/// Whether `d` ties with the smaller distance `d_min` under the relative
/// tolerance used for association.
#[inline]
fn ties_with_min(d: f64, d_min: f64) -> bool {
    d * (1.0 - RAY_TIE_RELATIVE_TOLERANCE) <= d_min
}

/// The simplex lattice point obtained by flooring the scaled vector and
/// incrementing trailing coordinates until the numerators sum to `p`.
/// The result satisfies `|v_i / sum(v) - a_i / p| <= 1/p` in every
/// coordinate.
pub fn nearest_simplex_lattice_point(v: &[f64], p: u32) -> Result<Composition> {
    if v.is_empty() || p == 0 {
        return Err(Error::invalid_parameter(
            "lattice rounding needs a non-empty vector and p >= 1",
        ));
    }
    if v.iter().any(|&x| x < 0.0 || x.is_nan()) {
        return Err(Error::invalid_parameter(
            "lattice rounding needs non-negative entries",
        ));
    }
    let total: f64 = v.iter().sum();
    if total <= 0.0 {
        return Err(Error::invalid_parameter(
            "cannot round the zero vector onto the simplex",
        ));
    }

    let m = v.len();
    let floors: Vec<u32> = v
        .iter()
        .map(|&x| (((x / total) * f64::from(p)).floor() as u32).min(p))
        .collect();
    let sum: u64 = floors.iter().map(|&b| u64::from(b)).sum();
    // sum <= p and sum + m > p, so splitting at `cut` keeps the total at p:
    // coordinates up to `cut` keep their floor, the rest are incremented.
    let cut = (sum + m as u64).saturating_sub(u64::from(p)).min(m as u64) as usize;
    let a: Vec<u32> = floors
        .iter()
        .enumerate()
        .map(|(i, &b)| if i < cut { b } else { b + 1 })
        .collect();
    Composition::new(a, p)
}

/// How a normalized fitness vector finds its reference point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssociationMode {
    /// Scan the full materialized lattice.
    Exhaustive,
    /// Scan only compositions within the given L-infinity numerator radius
    /// of the rounded lattice point.
    Lattice { radius: u32 },
}

impl AssociationMode {
    /// Lattice search with the default radius. Radius 1 is not always
    /// enough: for m = 4 the angular nearest point occasionally sits two
    /// numerator steps from the rounding construction, so the default is 2.
    pub fn lattice_default() -> Self {
        AssociationMode::Lattice { radius: 2 }
    }
}

/// Reusable association context for one `(m, p, mode)` triple. Exhaustive
/// mode materializes the lattice (and its unit rays) once.
#[derive(Debug, Clone)]
pub struct Associator {
    m: usize,
    p: u32,
    mode: AssociationMode,
    catalog: Option<Vec<(Composition, Vec<f64>)>>,
}

impl Associator {
    pub fn new(m: usize, p: u32, mode: AssociationMode) -> Result<Self> {
        Self::with_budget(m, p, mode, DEFAULT_MATERIALIZATION_BUDGET)
    }

    pub fn with_budget(m: usize, p: u32, mode: AssociationMode, budget: u64) -> Result<Self> {
        if m == 0 || p == 0 {
            return Err(Error::invalid_parameter("association needs m >= 1 and p >= 1"));
        }
        let catalog = match mode {
            AssociationMode::Exhaustive => Some(
                generate_reference_points_with_budget(m, p, budget)?
                    .into_iter()
                    .map(|c| {
                        let unit = c.unit();
                        (c, unit)
                    })
                    .collect(),
            ),
            AssociationMode::Lattice { .. } => None,
        };
        Ok(Self { m, p, mode, catalog })
    }

    pub fn mode(&self) -> AssociationMode {
        self.mode
    }

    /// The materialized lattice, when the mode keeps one.
    pub fn catalog(&self) -> Option<impl Iterator<Item = &Composition>> {
        self.catalog
            .as_ref()
            .map(|c| c.iter().map(|(comp, _)| comp))
    }

    /// Associates `v` to the composition minimizing the perpendicular ray
    /// distance. Distance ties within [`RAY_TIE_RELATIVE_TOLERANCE`] break
    /// to the lexicographically smallest composition; the zero vector maps
    /// to the lexicographically smallest composition outright.
    pub fn associate(&self, v: &[f64]) -> Result<(Composition, f64)> {
        if v.len() != self.m {
            return Err(Error::invalid_parameter(format!(
                "vector dimension {} does not match m = {}",
                v.len(),
                self.m
            )));
        }
        if v.iter().any(|&x| x < 0.0 || x.is_nan()) {
            return Err(Error::invalid_parameter(
                "association needs non-negative entries",
            ));
        }
        if v.iter().all(|&x| x == 0.0) {
            return Ok((Composition::lex_smallest(self.m, self.p), 0.0));
        }

        match (&self.catalog, self.mode) {
            (Some(catalog), _) => {
                let mut best = f64::INFINITY;
                let distances: Vec<f64> = catalog
                    .iter()
                    .map(|(_, unit)| {
                        let d = ray_distance_to_unit(v, unit);
                        if d < best {
                            best = d;
                        }
                        d
                    })
                    .collect();
                // The catalog is in lexicographic order, so the first tie
                // is the lexicographically smallest.
                let idx = distances
                    .iter()
                    .position(|&d| ties_with_min(d, best))
                    .expect("the minimum itself always ties");
                Ok((catalog[idx].0.clone(), distances[idx]))
            }
            (None, AssociationMode::Lattice { radius }) => {
                let base = nearest_simplex_lattice_point(v, self.p)?;
                let candidates = lattice_neighborhood(&base, radius);
                let mut best = f64::INFINITY;
                let distances: Vec<f64> = candidates
                    .iter()
                    .map(|c| {
                        let d = ray_distance_to_unit(v, &c.unit());
                        if d < best {
                            best = d;
                        }
                        d
                    })
                    .collect();
                let idx = distances
                    .iter()
                    .position(|&d| ties_with_min(d, best))
                    .expect("the neighborhood always contains the base point");
                Ok((candidates[idx].clone(), distances[idx]))
            }
            (None, AssociationMode::Exhaustive) => unreachable!("exhaustive mode keeps a catalog"),
        }
    }
}

/// One-shot association; see [`Associator::associate`].
pub fn associate(
    v: &[f64],
    m: usize,
    p: u32,
    mode: AssociationMode,
) -> Result<(Composition, f64)> {
    Associator::new(m, p, mode)?.associate(v)
}

/// All compositions within the given L-infinity numerator radius of
/// `base`, in lexicographic order (`base` itself included).
fn lattice_neighborhood(base: &Composition, radius: u32) -> Vec<Composition> {
    let m = base.dim();
    let p = base.p;
    let r = i64::from(radius);
    let mut out = Vec::new();
    let mut offsets = vec![0i64; m];

    fn rec(
        base: &[u32],
        p: u32,
        r: i64,
        i: usize,
        offsets: &mut Vec<i64>,
        out: &mut Vec<Composition>,
    ) {
        if i == base.len() {
            let mut a = Vec::with_capacity(base.len());
            let mut sum: i64 = 0;
            for (b, d) in base.iter().zip(offsets.iter()) {
                let v = i64::from(*b) + d;
                if v < 0 {
                    return;
                }
                sum += v;
                a.push(v as u32);
            }
            if sum == i64::from(p) {
                out.push(Composition {
                    a,
                    p,
                });
            }
            return;
        }
        for d in -r..=r {
            offsets[i] = d;
            rec(base, p, r, i + 1, offsets, out);
        }
        offsets[i] = 0;
    }

    rec(base.numerators(), p, r, 0, &mut offsets, &mut out);
    out.sort();
    out
}

/// Association of population members (by index within the joint
/// population) to their reference point and recorded ray distance.
pub type AssociationTable = Vec<Option<(Composition, f64)>>;
