//! Stand-alone empirical verification of the guarantees behind the
//! parameterization: the arcsine identity, the angle lower bound, the
//! same-reference and survival properties, and the antichain bounds.
//!
//! The suite's configurations are pinned in a versioned manifest; reports
//! carry the manifest hash so results are comparable across machines.
//! Checks that deliberately break a precondition are informational: the
//! guarantees are one-directional, so violations there are reported but
//! never asserted.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::engine::{CheckSet, Engine, RunConfig};
use crate::error::{Error, Result};
use crate::objectives::{ProblemDescriptor, ProblemKind};
use crate::rng::RandomStream;

pub const VERIFY_REPORT_SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrigCase {
    pub grid: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AngleCase {
    pub m: usize,
    pub f_max: u32,
    pub trials: u64,
    pub seed: u64,
}

/// One audited run family: a configuration, its seeds and how many
/// generations each seed is driven.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunAuditCase {
    pub label: String,
    pub problem: ProblemDescriptor,
    pub mu: usize,
    pub divisions: u32,
    pub eps_nad: f64,
    pub seeds: Vec<u64>,
    pub generations: u64,
    pub informational: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundRelation {
    AtMost,
    Exactly,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AntichainCase {
    pub problem: ProblemDescriptor,
    pub relation: BoundRelation,
    pub bound: u64,
}

/// The pinned suite configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyManifest {
    pub version: u32,
    pub trig: TrigCase,
    pub angle: Vec<AngleCase>,
    pub same_reference: Vec<RunAuditCase>,
    pub survival: Vec<RunAuditCase>,
    pub antichain: Vec<AntichainCase>,
}

/// Result of one check: pass/fail plus the counters behind the verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub informational: bool,
    pub samples: u64,
    pub violations: u64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub manifest_version: u32,
    pub manifest_sha256: String,
    pub all_passed: bool,
    pub checks: Vec<CheckReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteSelection {
    All,
    Trig,
    Angle,
    SameReference,
    Survival,
    Antichain,
}

impl std::str::FromStr for SuiteSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "all" => Ok(SuiteSelection::All),
            "trig" => Ok(SuiteSelection::Trig),
            "angle" => Ok(SuiteSelection::Angle),
            "same-reference" | "same_reference" => Ok(SuiteSelection::SameReference),
            "survival" => Ok(SuiteSelection::Survival),
            "antichain" => Ok(SuiteSelection::Antichain),
            other => Err(Error::invalid_parameter(format!(
                "unknown suite '{other}' (expected all, trig, angle, same-reference, survival or antichain)"
            ))),
        }
    }
}

fn descriptor(kind: ProblemKind, m: usize, n: usize) -> ProblemDescriptor {
    ProblemDescriptor::new(kind, m, n).expect("manifest instances are valid")
}

/// The pinned default suite.
pub fn default_manifest() -> VerifyManifest {
    let seeds: Vec<u64> = (1..=5).collect();

    let theorem_case = |label: &str, kind: ProblemKind, m: usize, n: usize, generations: u64| {
        let problem = descriptor(kind, m, n);
        let (mu, divisions, eps_nad) =
            crate::engine::derive_theorem_parameters(&problem).expect("desk-scale parameters");
        RunAuditCase {
            label: label.to_string(),
            problem,
            mu,
            divisions,
            eps_nad,
            seeds: seeds.clone(),
            generations,
            informational: false,
        }
    };

    let mut same_reference = vec![
        theorem_case("same-reference/omm-m2-n8", ProblemKind::Omm, 2, 8, 200),
        theorem_case("same-reference/lotz-m2-n8", ProblemKind::Lotz, 2, 8, 200),
        theorem_case("same-reference/cocz-m2-n8", ProblemKind::Cocz, 2, 8, 200),
        theorem_case("same-reference/omm3-n8", ProblemKind::Omm3, 3, 8, 200),
    ];
    // Under-provisioned control: far too few divisions. Violations may
    // appear and are only reported.
    let mut control = theorem_case("same-reference/control-omm-m2-n8-p2", ProblemKind::Omm, 2, 8, 200);
    control.divisions = 2;
    control.informational = true;
    same_reference.push(control);

    let mut survival = vec![
        theorem_case("survival/lotz-m2-n10", ProblemKind::Lotz, 2, 10, 500),
        theorem_case("survival/cocz-m2-n8", ProblemKind::Cocz, 2, 8, 200),
    ];
    let mut control = theorem_case("survival/control-lotz-m2-n8-mu1", ProblemKind::Lotz, 2, 8, 200);
    control.mu = 1;
    control.informational = true;
    survival.push(control);

    VerifyManifest {
        version: MANIFEST_VERSION,
        trig: TrigCase { grid: 1_000_000 },
        angle: {
            let mut cases = Vec::new();
            for (i, &m) in [2usize, 3, 4].iter().enumerate() {
                for (j, &f_max) in [1u32, 5, 20].iter().enumerate() {
                    cases.push(AngleCase {
                        m,
                        f_max,
                        trials: 100_000,
                        seed: 1_000 + (i * 3 + j) as u64,
                    });
                }
            }
            cases
        },
        same_reference,
        survival,
        antichain: vec![
            AntichainCase {
                problem: descriptor(ProblemKind::Lotz, 4, 4),
                relation: BoundRelation::AtMost,
                bound: 27,
            },
            AntichainCase {
                problem: descriptor(ProblemKind::Cocz, 2, 4),
                relation: BoundRelation::Exactly,
                bound: 3,
            },
            AntichainCase {
                problem: descriptor(ProblemKind::Cocz, 4, 8),
                relation: BoundRelation::Exactly,
                bound: 9,
            },
            AntichainCase {
                problem: descriptor(ProblemKind::Cocz, 4, 4),
                relation: BoundRelation::Exactly,
                bound: 4,
            },
            AntichainCase {
                problem: descriptor(ProblemKind::Lotz, 2, 6),
                relation: BoundRelation::AtMost,
                bound: 7,
            },
        ],
    }
}

/// SHA-256 of the manifest's canonical JSON form.
pub fn manifest_sha256(manifest: &VerifyManifest) -> String {
    let json = serde_json::to_string(manifest).expect("manifest serializes");
    let digest = Sha256::digest(json.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Evaluates both sides of `2 asin(x/2) < asin(x)` on a uniform grid over
/// `(0, 1]` and reports the minimal margin.
pub fn check_trig_identity(grid: u64) -> CheckReport {
    let mut violations = 0u64;
    let mut min_margin = f64::INFINITY;
    for k in 1..=grid {
        let x = k as f64 / grid as f64;
        let margin = x.asin() - 2.0 * (x / 2.0).asin();
        if margin <= 0.0 {
            violations += 1;
        }
        min_margin = min_margin.min(margin);
    }
    CheckReport {
        name: "trig/arcsine-doubling".to_string(),
        passed: violations == 0,
        informational: false,
        samples: grid,
        violations,
        detail: format!("min margin {min_margin:.3e} on a {grid}-point grid over (0, 1]"),
    }
}

/// Sine of the angle between two non-null vectors, via the Gram
/// determinant (stable for small angles).
fn sin_angle(v: &[f64], w: &[f64]) -> f64 {
    let vv: f64 = v.iter().map(|a| a * a).sum();
    let ww: f64 = w.iter().map(|a| a * a).sum();
    let vw: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
    ((vv * ww - vw * vw).max(0.0)).sqrt() / (vv.sqrt() * ww.sqrt())
}

/// Samples vector pairs satisfying the two-coordinate-shift hypothesis and
/// asserts the sine lower bound on each. The shifted coordinates are drawn
/// from their feasible subranges directly, which matches rejecting and
/// resampling infeasible draws.
pub fn check_angle_lower_bound(case: &AngleCase) -> CheckReport {
    let m = case.m;
    let inv = 1.0 / f64::from(case.f_max);
    let bound = 1.0 / ((m as f64).sqrt() * f64::from(case.f_max));
    let mut rng = RandomStream::new(case.seed);

    let mut violations = 0u64;
    let mut min_sin = f64::INFINITY;
    for _ in 0..case.trials {
        let i = rng.index(m);
        let mut j = rng.index(m - 1);
        if j >= i {
            j += 1;
        }
        let mut v: Vec<f64> = (0..m).map(|_| rng.real()).collect();
        v[i] = rng.real() * (1.0 - inv);
        v[j] = inv + rng.real() * (1.0 - inv);
        let l1 = inv + rng.real() * (1.0 - inv - v[i]);
        let l2 = inv + rng.real() * (v[j] - inv);
        let mut w: Vec<f64> = (0..m).map(|_| rng.real()).collect();
        w[i] = v[i] + l1;
        w[j] = v[j] - l2;

        let s = sin_angle(&v, &w);
        min_sin = min_sin.min(s);
        if s < bound {
            violations += 1;
        }
    }
    CheckReport {
        name: format!("angle/m{}-fmax{}", case.m, case.f_max),
        passed: violations == 0,
        informational: false,
        samples: case.trials,
        violations,
        detail: format!("min sin {min_sin:.6} against bound {bound:.6}"),
    }
}

fn run_audit(case: &RunAuditCase, checks: CheckSet) -> Result<CheckReport> {
    let mut violations = 0u64;
    let mut generations = 0u64;
    for &seed in &case.seeds {
        let config = RunConfig {
            problem: case.problem,
            mu: case.mu,
            divisions: case.divisions,
            eps_nad: case.eps_nad,
            seed,
            max_generations: case.generations.max(1),
            checks,
            strict_checks: false,
            association: crate::engine::AssociationChoice::Auto,
            faithful_selection: false,
            trace: false,
            selection_audit: false,
        };
        let mut engine = Engine::new(config)?;
        for _ in 0..case.generations {
            engine.step()?;
        }
        violations += engine.violations().len() as u64;
        generations += case.generations;
    }
    Ok(CheckReport {
        name: case.label.clone(),
        passed: case.informational || violations == 0,
        informational: case.informational,
        samples: generations,
        violations,
        detail: format!(
            "{} seeds x {} generations (mu={}, p={}, eps_nad={})",
            case.seeds.len(),
            case.generations,
            case.mu,
            case.divisions,
            case.eps_nad
        ),
    })
}

/// Audits that first-layer members sharing a reference point always share
/// a fitness vector, generation by generation.
pub fn check_same_reference_property(case: &RunAuditCase) -> Result<CheckReport> {
    run_audit(
        case,
        CheckSet {
            same_reference: true,
            ..CheckSet::none()
        },
    )
}

/// Audits that every first-layer fitness vector survives into the next
/// population, generation by generation.
pub fn check_survival_property(case: &RunAuditCase) -> Result<CheckReport> {
    run_audit(
        case,
        CheckSet {
            survival: true,
            ..CheckSet::none()
        },
    )
}

/// Compares the exhaustive antichain oracle against the closed-form
/// bounds.
pub fn check_antichain_bounds(cases: &[AntichainCase]) -> Result<CheckReport> {
    let mut violations = 0u64;
    let mut details = Vec::new();
    for case in cases {
        let size = crate::dominance::max_antichain_size(&case.problem)? as u64;
        let ok = match case.relation {
            BoundRelation::AtMost => size <= case.bound,
            BoundRelation::Exactly => size == case.bound,
        };
        if !ok {
            violations += 1;
        }
        details.push(format!(
            "{}-m{}-n{}: {} {} {}",
            case.problem.kind(),
            case.problem.m(),
            case.problem.n(),
            size,
            match case.relation {
                BoundRelation::AtMost => "<=",
                BoundRelation::Exactly => "==",
            },
            case.bound
        ));
    }
    Ok(CheckReport {
        name: "antichain/oracle-bounds".to_string(),
        passed: violations == 0,
        informational: false,
        samples: cases.len() as u64,
        violations,
        detail: details.join("; "),
    })
}

enum Task {
    Trig(TrigCase),
    Angle(AngleCase),
    SameReference(RunAuditCase),
    Survival(RunAuditCase),
    Antichain(Vec<AntichainCase>),
}

fn run_task(task: &Task) -> Result<CheckReport> {
    match task {
        Task::Trig(case) => Ok(check_trig_identity(case.grid)),
        Task::Angle(case) => Ok(check_angle_lower_bound(case)),
        Task::SameReference(case) => check_same_reference_property(case),
        Task::Survival(case) => check_survival_property(case),
        Task::Antichain(cases) => check_antichain_bounds(cases),
    }
}

/// Runs the selected checks of the manifest concurrently and aggregates
/// the report. Informational checks never fail the suite.
pub fn run_suite(manifest: &VerifyManifest, selection: SuiteSelection) -> Result<VerifyReport> {
    let want = |s: SuiteSelection| selection == SuiteSelection::All || selection == s;

    let mut tasks: Vec<Task> = Vec::new();
    if want(SuiteSelection::Trig) {
        tasks.push(Task::Trig(manifest.trig.clone()));
    }
    if want(SuiteSelection::Angle) {
        tasks.extend(manifest.angle.iter().cloned().map(Task::Angle));
    }
    if want(SuiteSelection::SameReference) {
        tasks.extend(
            manifest
                .same_reference
                .iter()
                .cloned()
                .map(Task::SameReference),
        );
    }
    if want(SuiteSelection::Survival) {
        tasks.extend(manifest.survival.iter().cloned().map(Task::Survival));
    }
    if want(SuiteSelection::Antichain) {
        tasks.push(Task::Antichain(manifest.antichain.clone()));
    }

    let checks: Vec<CheckReport> = tasks
        .par_iter()
        .map(run_task)
        .collect::<Result<Vec<_>>>()?;

    Ok(VerifyReport {
        schema_version: VERIFY_REPORT_SCHEMA_VERSION,
        manifest_version: manifest.version,
        manifest_sha256: manifest_sha256(manifest),
        all_passed: checks.iter().all(|c| c.passed),
        checks,
    })
}
