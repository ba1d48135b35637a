//! Objective normalization: persistent ideal/max trackers, extreme points
//! by achievement scalarization, hyperplane intercepts and the Nadir
//! estimate with its fallback cascade.

use crate::error::{Error, Result};
use crate::objectives::FitnessVector;

/// Normalized objective values, one real per objective.
pub type NormalizedFitness = Vec<f64>;

/// Off-axis weight of the achievement scalarization function.
pub const ASF_OFF_AXIS_WEIGHT: f64 = 1e-6;

/// Relative pivot threshold under which the intercept solve is treated as
/// singular.
pub const SINGULARITY_TOLERANCE: f64 = 1e-9;

/// Persistent normalization state: running ideal point, running first-layer
/// maxima and the extreme-point archive. Sentinel values (the initial
/// "minus infinity" archive entry and infinite trackers) are represented as
/// absent rather than as floating infinities.
#[derive(Debug, Clone)]
pub struct NormalizationState {
    m: usize,
    eps_nad: f64,
    y_min: Option<Vec<f64>>,
    y_max: Option<Vec<f64>>,
    extreme_archive: Vec<FitnessVector>,
}

impl NormalizationState {
    pub fn new(m: usize, eps_nad: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid_parameter("objective count must be positive"));
        }
        if !(eps_nad > 0.0) {
            return Err(Error::invalid_parameter(format!(
                "eps_nad must be positive, got {eps_nad}"
            )));
        }
        Ok(Self {
            m,
            eps_nad,
            y_min: None,
            y_max: None,
            extreme_archive: Vec::new(),
        })
    }

    pub fn objective_count(&self) -> usize {
        self.m
    }

    pub fn eps_nad(&self) -> f64 {
        self.eps_nad
    }

    /// Running componentwise minimum over all joined populations so far.
    pub fn y_min(&self) -> Option<&[f64]> {
        self.y_min.as_deref()
    }

    /// Running componentwise maximum over all first layers so far.
    pub fn y_max(&self) -> Option<&[f64]> {
        self.y_max.as_deref()
    }

    /// The extreme points archived from the previous generation.
    pub fn archive(&self) -> &[FitnessVector] {
        &self.extreme_archive
    }
}

/// Advances the running minima over the whole joint population and the
/// running maxima over the first layer.
pub fn update_trackers(
    state: &mut NormalizationState,
    joint: &[FitnessVector],
    first_layer: &[FitnessVector],
) -> Result<()> {
    if joint.is_empty() || first_layer.is_empty() {
        return Err(Error::invalid_state(
            "tracker update requires a non-empty joint population and first layer",
        ));
    }
    let m = state.m;
    if joint.iter().chain(first_layer).any(|f| f.len() != m) {
        return Err(Error::invalid_parameter(
            "fitness vectors do not match the configured objective count",
        ));
    }

    let y_min = state.y_min.get_or_insert_with(|| vec![f64::INFINITY; m]);
    for f in joint {
        for (slot, &v) in y_min.iter_mut().zip(f) {
            *slot = slot.min(f64::from(v));
        }
    }
    let y_max = state.y_max.get_or_insert_with(|| vec![f64::NEG_INFINITY; m]);
    for f in first_layer {
        for (slot, &v) in y_max.iter_mut().zip(f) {
            *slot = slot.max(f64::from(v));
        }
    }
    Ok(())
}

/// Achievement scalarization of `y` on axis `j`: the weighted maximum of
/// the translated objectives, with weight 1 on axis `j` and
/// [`ASF_OFF_AXIS_WEIGHT`] elsewhere.
fn asf(y: &[u32], y_min: &[f64], axis: usize) -> f64 {
    y.iter()
        .zip(y_min)
        .enumerate()
        .map(|(i, (&v, &z))| {
            let w = if i == axis { 1.0 } else { ASF_OFF_AXIS_WEIGHT };
            (f64::from(v) - z) / w
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Picks one extreme point per objective axis from the candidate fitness
/// vectors (the current selection pool united with the previous archive),
/// minimizing the achievement scalarization on that axis. ASF ties break
/// to the lexicographically smallest fitness vector.
pub fn extreme_points(
    candidates: &[FitnessVector],
    y_min: &[f64],
) -> Result<Vec<FitnessVector>> {
    if candidates.is_empty() {
        return Err(Error::invalid_state(
            "no extreme-point candidates besides sentinels",
        ));
    }
    let m = y_min.len();
    if candidates.iter().any(|f| f.len() != m) {
        return Err(Error::invalid_parameter(
            "extreme-point candidates do not match the objective count",
        ));
    }

    // Candidate sets are fitness-vector sets; scanning the deduplicated
    // vectors in ascending order makes the lexicographic tie rule fall out
    // of a strict comparison.
    let distinct: std::collections::BTreeSet<&FitnessVector> = candidates.iter().collect();
    let ordered: Vec<&FitnessVector> = distinct.into_iter().collect();

    let mut extremes = Vec::with_capacity(m);
    for axis in 0..m {
        let mut best = f64::INFINITY;
        let mut pick = 0usize;
        for (idx, cand) in ordered.iter().enumerate() {
            let value = asf(cand, y_min, axis);
            if value < best {
                best = value;
                pick = idx;
            }
        }
        extremes.push(ordered[pick].clone());
    }
    Ok(extremes)
}

/// Solves for the axis intercepts of the hyperplane through the `m`
/// extreme points. Returns `None` when the points are linearly dependent
/// (relative pivot below [`SINGULARITY_TOLERANCE`]) or some intercept is
/// not finite.
pub fn hyperplane_intercepts(extremes: &[FitnessVector]) -> Option<Vec<f64>> {
    let m = extremes.len();
    if m == 0 || extremes.iter().any(|e| e.len() != m) {
        return None;
    }

    // Solve E a = 1 for the hyperplane normal; the intercept on axis j is
    // then 1 / a_j.
    let mut a = vec![vec![0.0f64; m + 1]; m];
    let mut scale = 0.0f64;
    for (row, e) in a.iter_mut().zip(extremes) {
        for (j, &v) in e.iter().enumerate() {
            row[j] = f64::from(v);
            scale = scale.max(row[j].abs());
        }
        row[m] = 1.0;
    }
    if scale == 0.0 {
        return None;
    }

    for col in 0..m {
        let pivot_row = (col..m)
            .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
            .expect("column range is non-empty");
        if a[pivot_row][col].abs() < SINGULARITY_TOLERANCE * scale {
            return None;
        }
        a.swap(col, pivot_row);
        for row in 0..m {
            if row != col {
                let factor = a[row][col] / a[col][col];
                for k in col..=m {
                    a[row][k] -= factor * a[col][k];
                }
            }
        }
    }

    let normal: Vec<f64> = (0..m).map(|j| a[j][m] / a[j][j]).collect();
    let norm_scale = normal.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let mut intercepts = Vec::with_capacity(m);
    for &aj in &normal {
        if aj.abs() < 1e-12 * norm_scale || aj == 0.0 {
            return None;
        }
        intercepts.push(1.0 / aj);
    }
    Some(intercepts)
}

/// The Nadir estimate cascade: intercepts are accepted only when every
/// axis passes the threshold window, otherwise all axes fall back to the
/// first-layer maxima; afterwards any axis still below
/// `y_min + eps_nad` is replaced by the maximum over all layers.
///
/// Returns the estimate together with the intercept-acceptance flag.
pub fn nadir_estimate(
    state: &NormalizationState,
    intercepts: Option<&[f64]>,
    first_layer: &[FitnessVector],
    all_layers: &[FitnessVector],
) -> Result<(Vec<f64>, bool)> {
    let m = state.m;
    let (y_min, y_max) = match (state.y_min(), state.y_max()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::invalid_state(
                "nadir estimation requires updated trackers",
            ))
        }
    };
    if first_layer.is_empty() || all_layers.is_empty() {
        return Err(Error::invalid_state(
            "nadir estimation requires non-empty layers",
        ));
    }

    let column_max = |rows: &[FitnessVector], j: usize| -> f64 {
        rows.iter()
            .map(|f| f64::from(f[j]))
            .fold(f64::NEG_INFINITY, f64::max)
    };

    let mut y_nad = vec![0.0f64; m];
    let mut valid = false;
    if let Some(intercepts) = intercepts {
        valid = true;
        for j in 0..m {
            if intercepts[j] >= state.eps_nad && intercepts[j] <= y_max[j] {
                y_nad[j] = intercepts[j];
            } else {
                valid = false;
                break;
            }
        }
    }
    if !valid {
        for (j, slot) in y_nad.iter_mut().enumerate() {
            *slot = column_max(first_layer, j);
        }
    }
    for (j, slot) in y_nad.iter_mut().enumerate() {
        if *slot < y_min[j] + state.eps_nad {
            *slot = column_max(all_layers, j);
        }
    }
    Ok((y_nad, valid))
}

/// Componentwise affine normalization of one fitness vector. A zero
/// denominator is replaced by 1, mapping every current member of that
/// objective to 0.
pub fn normalize(f_x: &[u32], y_min: &[f64], y_nad: &[f64]) -> NormalizedFitness {
    debug_assert_eq!(f_x.len(), y_min.len());
    debug_assert_eq!(f_x.len(), y_nad.len());
    f_x.iter()
        .zip(y_min.iter().zip(y_nad))
        .map(|(&v, (&lo, &hi))| {
            let denom = if hi - lo == 0.0 { 1.0 } else { hi - lo };
            (f64::from(v) - lo) / denom
        })
        .collect()
}

/// Per-generation outputs of the normalization procedure.
#[derive(Debug, Clone)]
pub struct GenerationNormalization {
    pub y_min: Vec<f64>,
    pub y_max: Vec<f64>,
    pub y_nad: Vec<f64>,
    pub valid_intercepts: bool,
    pub extremes: Vec<FitnessVector>,
}

/// Runs one full normalization pass: tracker update, extreme points (the
/// selection pool united with the previous archive), intercepts and the
/// Nadir cascade. Archives the new extreme points in `state`.
pub fn run_normalization(
    state: &mut NormalizationState,
    joint: &[FitnessVector],
    first_layer: &[FitnessVector],
    selection_pool: &[FitnessVector],
) -> Result<GenerationNormalization> {
    update_trackers(state, joint, first_layer)?;

    let mut candidates: Vec<FitnessVector> = selection_pool.to_vec();
    candidates.extend(state.extreme_archive.iter().cloned());
    let y_min_now = state.y_min().expect("trackers were just updated").to_vec();
    let extremes = extreme_points(&candidates, &y_min_now)?;
    state.extreme_archive = extremes.clone();

    let intercepts = hyperplane_intercepts(&extremes);
    // The union of all layers is exactly the joint population.
    let (y_nad, valid_intercepts) =
        nadir_estimate(state, intercepts.as_deref(), first_layer, joint)?;

    Ok(GenerationNormalization {
        y_min: y_min_now,
        y_max: state.y_max().expect("trackers were just updated").to_vec(),
        y_nad,
        valid_intercepts,
        extremes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trackers_follow_min_and_first_layer_max() {
        let mut state = NormalizationState::new(2, 1.0).unwrap();
        let joint = vec![vec![2u32, 3], vec![4, 1]];
        update_trackers(&mut state, &joint, &joint).unwrap();
        assert_eq!(state.y_min().unwrap(), &[2.0, 1.0]);
        assert_eq!(state.y_max().unwrap(), &[4.0, 3.0]);

        // Dominated data never relaxes the trackers.
        let worse = vec![vec![3u32, 2]];
        update_trackers(&mut state, &worse, &worse).unwrap();
        assert_eq!(state.y_min().unwrap(), &[2.0, 1.0]);
        assert_eq!(state.y_max().unwrap(), &[4.0, 3.0]);

        // y_max only follows the first layer, not the whole joint set.
        let joint = vec![vec![9u32, 9], vec![5, 5]];
        let first = vec![vec![5u32, 5]];
        update_trackers(&mut state, &joint, &first).unwrap();
        assert_eq!(state.y_min().unwrap(), &[2.0, 1.0]);
        assert_eq!(state.y_max().unwrap(), &[5.0, 5.0]);
    }

    #[test]
    fn tracker_update_rejects_empty_inputs() {
        let mut state = NormalizationState::new(2, 1.0).unwrap();
        assert!(update_trackers(&mut state, &[], &[]).is_err());
    }

    #[test]
    fn extreme_points_worked_example() {
        let candidates = vec![vec![2u32, 0, 0], vec![0, 4, 0], vec![0, 0, 2]];
        let e = extreme_points(&candidates, &[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(e[0], vec![2, 0, 0]);
        assert_eq!(e[1], vec![0, 4, 0]);
        assert_eq!(e[2], vec![0, 0, 2]);
    }

    #[test]
    fn single_candidate_is_every_extreme() {
        let candidates = vec![vec![3u32, 1]];
        let e = extreme_points(&candidates, &[0.0, 0.0]).unwrap();
        assert_eq!(e, vec![vec![3, 1], vec![3, 1]]);
    }

    #[test]
    fn extreme_tie_breaks_lexicographically() {
        // Both candidates score identically on every axis after translation
        // by their shared coordinates; the smaller vector must win.
        let candidates = vec![vec![1u32, 0], vec![0, 1]];
        let e = extreme_points(&candidates, &[0.0, 0.0]).unwrap();
        // Axis 0: ASF((1,0)) = max(1, 0/1e-6) = 1; ASF((0,1)) = max(0, 1e6) = 1e6.
        assert_eq!(e[0], vec![1, 0]);
        assert_eq!(e[1], vec![0, 1]);

        let dup = vec![vec![2u32, 2], vec![2, 2]];
        let e = extreme_points(&dup, &[0.0, 0.0]).unwrap();
        assert_eq!(e[0], vec![2, 2]);
    }

    #[test]
    fn empty_candidates_is_an_error() {
        assert!(extreme_points(&[], &[0.0, 0.0]).is_err());
    }

    #[test]
    fn intercepts_worked_examples() {
        // Plane -x1 + 4 x2 + 3 x3 = 8: first-axis intercept is -8.
        let e = vec![vec![2u32, 1, 2], vec![1, 0, 3], vec![0, 2, 0]];
        let i = hyperplane_intercepts(&e).unwrap();
        assert!((i[0] - -8.0).abs() < 1e-9, "{i:?}");
        assert!((i[1] - 2.0).abs() < 1e-9);
        assert!((i[2] - 8.0 / 3.0).abs() < 1e-9);

        // Plane 2 x1 + x2 + 2 x3 = 4: intercepts (2, 4, 2).
        let e = vec![vec![2u32, 0, 0], vec![0, 4, 0], vec![0, 0, 2]];
        let i = hyperplane_intercepts(&e).unwrap();
        assert!((i[0] - 2.0).abs() < 1e-9);
        assert!((i[1] - 4.0).abs() < 1e-9);
        assert!((i[2] - 2.0).abs() < 1e-9);

        // A duplicated row is singular.
        let e = vec![vec![1u32, 2, 3], vec![1, 2, 3], vec![0, 1, 0]];
        assert!(hyperplane_intercepts(&e).is_none());
    }

    fn state_with(y_min: &[f64], y_max: &[f64], eps: f64) -> NormalizationState {
        let mut s = NormalizationState::new(y_min.len(), eps).unwrap();
        s.y_min = Some(y_min.to_vec());
        s.y_max = Some(y_max.to_vec());
        s
    }

    #[test]
    fn nadir_accepts_valid_intercepts() {
        let state = state_with(&[0.0, 0.0, 0.0], &[2.0, 4.0, 2.0], 2.0);
        let first = vec![vec![2u32, 0, 0], vec![0, 4, 0], vec![0, 0, 2]];
        let (y_nad, valid) =
            nadir_estimate(&state, Some(&[2.0, 4.0, 2.0]), &first, &first).unwrap();
        assert!(valid);
        assert_eq!(y_nad, vec![2.0, 4.0, 2.0]);
    }

    #[test]
    fn nadir_falls_back_on_negative_intercept() {
        let state = state_with(&[0.0, 0.0, 0.0], &[2.0, 4.0, 3.0], 1.0);
        let first = vec![vec![2u32, 1, 2], vec![1, 0, 3], vec![0, 2, 0]];
        let (y_nad, valid) =
            nadir_estimate(&state, Some(&[-8.0, 2.0, 8.0 / 3.0]), &first, &first).unwrap();
        assert!(!valid);
        // First-layer maxima per axis: (2, 2, 3).
        assert_eq!(y_nad, vec![2.0, 2.0, 3.0]);
    }

    #[test]
    fn nadir_floor_pulls_in_all_layers() {
        // Fallback maxima sit below y_min + eps, so the final loop replaces
        // them with the maxima over every layer.
        let state = state_with(&[0.0, 0.0], &[1.0, 1.0], 5.0);
        let first = vec![vec![1u32, 1]];
        let all = vec![vec![1u32, 1], vec![4, 0]];
        let (y_nad, valid) = nadir_estimate(&state, None, &first, &all).unwrap();
        assert!(!valid);
        assert_eq!(y_nad, vec![4.0, 1.0]);
    }

    #[test]
    fn nadir_requires_updated_trackers() {
        let state = NormalizationState::new(2, 1.0).unwrap();
        let first = vec![vec![1u32, 1]];
        assert!(nadir_estimate(&state, None, &first, &first).is_err());
    }

    #[test]
    fn normalize_arithmetic() {
        assert_eq!(
            normalize(&[1, 0], &[1.0, 0.0], &[5.0, 4.0]),
            vec![0.0, 0.0]
        );
        assert_eq!(
            normalize(&[5, 4], &[1.0, 0.0], &[5.0, 4.0]),
            vec![1.0, 1.0]
        );
        assert_eq!(
            normalize(&[3, 1], &[1.0, 0.0], &[5.0, 4.0]),
            vec![0.5, 0.25]
        );
        // Zero denominator: every member sits at the minimum, maps to 0.
        assert_eq!(normalize(&[2, 7], &[2.0, 0.0], &[2.0, 7.0]), vec![0.0, 1.0]);
    }

    #[test]
    fn run_normalization_is_deterministic() {
        let joint = vec![vec![2u32, 3], vec![4, 1], vec![1, 1], vec![3, 3]];
        let first = vec![vec![4u32, 1], vec![3, 3], vec![2, 3]];
        let pool = first.clone();

        let run = || {
            let mut state = NormalizationState::new(2, 4.0).unwrap();
            let g1 = run_normalization(&mut state, &joint, &first, &pool).unwrap();
            let g2 = run_normalization(&mut state, &joint, &first, &pool).unwrap();
            (g1.y_nad, g2.y_nad, g2.valid_intercepts)
        };
        let (a1, a2, v) = run();
        let (b1, b2, w) = run();
        assert_eq!(a1, b1);
        assert_eq!(a2, b2);
        assert_eq!(v, w);
    }
}
