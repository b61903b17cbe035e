//! Cross-checks of the engine against the printed bases, tables and closed
//! forms, plus the security and fidelity anchors.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::{matched_basis, paper_fixture, FixtureTag, Outcome};
use crate::engine::{enumerate_tree, pair_for_attempt, AttemptPlan, Strategy};
use crate::error::Result;
use crate::exec::{try_map_ordered, Execution};
use crate::formulas::{chi_from_concurrence, closed_form_success, maf_sqt, ClosedFormVariant};
use crate::maf::{average_fidelity, bob_pauli_mixture, eavesdropper_overlap, DensityMatrix2, MafPlan};
use crate::state::{initial_family, InfoState};
use crate::tables::{printed_state, table_row_probability, TABLE_ROWS};

/// Table rows whose printed spectator state disagrees with both the
/// engine and the row's own printed probability.
pub const KNOWN_STATE_MISPRINTS: [&str; 4] = ["B00", "B03", "B30", "B33"];

/// Expected size of the as-printed three-repetition discrepancy at `C = 1`.
pub const PRINTED_EQ4_OFFSET_AT_ONE: f64 = 1.0 / 96.0;

const SEED: u64 = 0x5eed_7e1e;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    /// A known disagreement with the printed source, reproduced as expected.
    ExpectedDiscrepancy,
    Fail,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::ExpectedDiscrepancy => "EXPECTED",
            CheckStatus::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: CheckStatus,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub detail: String,
    /// Items (row labels etc.) that did not match.
    pub flagged: Vec<String>,
}

impl CheckResult {
    fn within(name: &'static str, max_deviation: f64, tolerance: f64, detail: String) -> Self {
        let status = if max_deviation <= tolerance { CheckStatus::Pass } else { CheckStatus::Fail };
        CheckResult { name, status, max_deviation, tolerance, detail, flagged: Vec::new() }
    }

    fn failed(name: &'static str, err: impl fmt::Display) -> Self {
        CheckResult {
            name,
            status: CheckStatus::Fail,
            max_deviation: f64::NAN,
            tolerance: f64::NAN,
            detail: format!("error: {err}"),
            flagged: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    /// True iff no check failed; expected discrepancies do not count.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "[{:<8}] {:<28} max_dev={:.3e} tol={:.0e}  {}",
                c.status.to_string(),
                c.name,
                c.max_deviation,
                c.tolerance,
                c.detail
            )?;
            if !c.flagged.is_empty() {
                writeln!(f, "           flagged: {}", c.flagged.join(", "))?;
            }
        }
        let failed = self.checks.iter().filter(|c| c.status == CheckStatus::Fail).count();
        let expected = self.checks.iter().filter(|c| c.status == CheckStatus::ExpectedDiscrepancy).count();
        write!(f, "{} checks, {failed} failed, {expected} expected discrepancies", self.checks.len())
    }
}

/// `1 - |<x|y>|^2 / (|x|^2 |y|^2)`: zero iff the vectors are the same ray.
pub fn ray_distance(x: &[Complex64], y: &[Complex64]) -> f64 {
    let nx: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    let ny: f64 = y.iter().map(|z| z.norm_sqr()).sum();
    let overlap: Complex64 = x.iter().zip(y).map(|(p, q)| p.conj() * q).sum();
    (1.0 - overlap.norm_sqr() / (nx * ny)).abs()
}

/// Haar-uniform information state.
pub fn random_info<R: Rng + ?Sized>(rng: &mut R) -> InfoState {
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    InfoState::from_bloch((2.0 * u - 1.0).clamp(-1.0, 1.0).acos(), 2.0 * PI * v)
}

/// `count` angles strictly inside `(0, pi/4)`.
fn interior_chis(count: usize) -> Vec<f64> {
    (1..=count).map(|i| FRAC_PI_4 * i as f64 / (count + 1) as f64).collect()
}

fn check_fixtures() -> Result<CheckResult> {
    let mut worst: f64 = 0.0;
    let mut flagged = BTreeSet::new();
    let chis = interior_chis(50);
    for &chi in &chis {
        let root = initial_family(chi)?;
        for tag in FixtureTag::ALL {
            let fixture = paper_fixture(tag, chi)?;
            let family = match tag.history() {
                [] => root,
                [n] => {
                    let primary = matched_basis(&root, pair_for_attempt(0).0, &[])?;
                    root.project_pair(primary.pair, &primary.vectors[*n as usize])?
                }
                _ => unreachable!("fixtures cover the first two attempts"),
            };
            let engine = matched_basis(&family, fixture.pair, tag.history())?;
            let indicated = engine.indicated_success(None)?;
            for (n, &is_success) in indicated.iter().enumerate() {
                let d = ray_distance(&fixture.vectors[n], &engine.vectors[n]);
                worst = worst.max(d);
                let pattern_ok = is_success == fixture.outcomes[n].is_success()
                    && (!is_success || engine.outcomes[n] == fixture.outcomes[n]);
                if d > 1e-10 || !pattern_ok {
                    flagged.insert(format!("{tag}:{}", fixture.label(n)));
                }
            }
        }
    }
    let mut r = CheckResult::within(
        "basis fixtures",
        worst,
        1e-10,
        format!("3 printed bases x {} angles, vectors and success pattern", chis.len()),
    );
    if !flagged.is_empty() {
        r.status = CheckStatus::Fail;
        r.flagged = flagged.into_iter().collect();
    }
    Ok(r)
}

struct TableSample {
    chi: f64,
    info: InfoState,
}

fn table_samples(count: usize) -> Vec<TableSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..count)
        .map(|_| TableSample { chi: rng.random_range(0.1..FRAC_PI_4 - 0.01), info: random_info(&mut rng) })
        .collect()
}

fn check_tables() -> Result<(CheckResult, CheckResult)> {
    let plan = AttemptPlan::continue_gbsm(2)?;
    let mut prob_dev: f64 = 0.0;
    let mut prob_flagged = BTreeSet::new();
    let mut state_dev: f64 = 0.0;
    let mut state_flagged = BTreeSet::new();
    let samples = table_samples(20);
    for s in &samples {
        let tree = enumerate_tree(s.chi, &s.info, plan)?;
        for row in TABLE_ROWS {
            let record = tree.find(row.history).expect("every printed history is reachable");
            let p = table_row_probability(row.table, row.label, s.chi, &s.info)?;
            let d = (p - record.conditional_probability).abs();
            prob_dev = prob_dev.max(d);
            if d > 1e-10 || row.success != record.status.is_success() {
                prob_flagged.insert(row.label.to_string());
            }
            let printed = printed_state(row.table, row.label, s.chi, &s.info)?;
            let actual = record.residual.instantiate(&s.info);
            let d = ray_distance(&printed, &actual);
            if d > 1e-10 {
                state_flagged.insert(row.label.to_string());
            } else {
                state_dev = state_dev.max(d);
            }
        }
    }
    let mut probs = CheckResult::within(
        "table probabilities",
        prob_dev,
        1e-10,
        format!("{} rows x {} samples, conditional probability and success flag", TABLE_ROWS.len(), samples.len()),
    );
    if !prob_flagged.is_empty() {
        probs.status = CheckStatus::Fail;
        probs.flagged = prob_flagged.into_iter().collect();
    }

    let expected: BTreeSet<String> = KNOWN_STATE_MISPRINTS.iter().map(|s| s.to_string()).collect();
    let status = if state_flagged.is_empty() {
        CheckStatus::Pass
    } else if state_flagged == expected {
        CheckStatus::ExpectedDiscrepancy
    } else {
        CheckStatus::Fail
    };
    let detail = if state_flagged.is_empty() {
        "all printed states match up to normalization and phase".to_string()
    } else {
        format!(
            "{} printed states contradict the engine and their own printed probability; max_dev over matching rows",
            state_flagged.len()
        )
    };
    let states = CheckResult {
        name: "table states",
        status,
        max_deviation: state_dev,
        tolerance: 1e-10,
        detail,
        flagged: state_flagged.into_iter().collect(),
    };
    Ok((probs, states))
}

fn eq_grid() -> Vec<f64> {
    (1..=50).map(|i| i as f64 / 50.0).collect()
}

fn closed_form_checks(exec: Execution) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let infos: Vec<InfoState> = (0..10).map(|_| random_info(&mut rng)).collect();
    let plan = AttemptPlan::continue_gbsm(3)?;
    let grid = eq_grid();
    // deviations[m] for corrected forms, plus the printed variant at m = 3
    let per_point = try_map_ordered(&grid, exec, |&c| -> Result<[f64; 5]> {
        let chi = chi_from_concurrence(c)?;
        let mut dev = [0.0f64; 5];
        for info in &infos {
            let tree = enumerate_tree(chi, info, plan)?;
            for (m, d) in dev.iter_mut().take(4).enumerate() {
                let cf = closed_form_success(m, c, ClosedFormVariant::CorrectedNesting)?;
                *d = d.max((tree.cumulative_success[m] - cf).abs());
            }
            let printed = closed_form_success(3, c, ClosedFormVariant::AsPrinted)?;
            dev[4] = dev[4].max((tree.cumulative_success[3] - printed).abs());
        }
        Ok(dev)
    })?;
    let worst = |k: usize| per_point.iter().map(|d| d[k]).fold(0.0, f64::max);
    let detail = format!("{} concurrences x {} information states", grid.len(), infos.len());

    let mut out = vec![
        CheckResult::within("closed form, no repetition", worst(0), 1e-12, detail.clone()),
        CheckResult::within("closed form, 1 repetition", worst(1), 1e-10, detail.clone()),
        CheckResult::within("closed form, 2 repetitions", worst(2), 1e-10, detail.clone()),
        CheckResult::within("closed form, 3 (corrected)", worst(3), 1e-10, detail),
    ];

    let at_one = enumerate_tree(FRAC_PI_4, &infos[0], plan)?.cumulative_success;
    let anchors = [0.5, 0.75, 0.875, 0.9375];
    let anchor_dev = at_one.iter().zip(anchors).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    out.push(CheckResult::within(
        "anchors at C = 1",
        anchor_dev,
        1e-12,
        "cumulative success 0.5, 0.75, 0.875, 0.9375".into(),
    ));

    let printed_at_one = closed_form_success(3, 1.0, ClosedFormVariant::AsPrinted)?;
    let deviation = (at_one[3] - printed_at_one).abs();
    let status = if (deviation - PRINTED_EQ4_OFFSET_AT_ONE).abs() < 1e-9 {
        CheckStatus::ExpectedDiscrepancy
    } else {
        CheckStatus::Fail
    };
    out.push(CheckResult {
        name: "closed form, 3 (printed)",
        status,
        max_deviation: worst(4),
        tolerance: 1e-10,
        detail: format!(
            "as printed the last denominator gives {printed_at_one:.6} at C = 1, deviation {deviation:.7} from the enumerated 0.9375"
        ),
        flagged: vec!["three-repetition form as printed".into()],
    });
    Ok(out)
}

fn check_leaf_counts() -> Result<CheckResult> {
    let mut worst = 0usize;
    let mut detail = String::new();
    for chi in [0.3, 0.6] {
        let tree = enumerate_tree(chi, &InfoState::from_bloch(0.9, 0.1), AttemptPlan::continue_gbsm(3)?)?;
        let got = tree.success_counts();
        for (g, want) in got.iter().zip([2usize, 4, 8, 16]) {
            worst = worst.max(g.abs_diff(want));
        }
        detail = format!("success leaves per attempt {got:?}");
    }
    Ok(CheckResult::within("success-leaf counts", worst as f64, 0.0, detail))
}

fn check_security() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let half = DensityMatrix2::maximally_mixed();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let info = random_info(&mut rng);
        worst = worst.max(bob_pauli_mixture(&info).max_abs_diff(&half));
        worst = worst.max((eavesdropper_overlap(&info) - 0.5).abs());
    }
    CheckResult::within("security identity", worst, 1e-14, "Pauli mixture = I/2 and overlap = 1/2, 100 states".into())
}

fn check_maf_anchor(exec: Execution) -> Result<CheckResult> {
    let plan = MafPlan::new(0, Strategy::MeBellFinal)?;
    let grid: Vec<f64> = (1..=20).map(|i| i as f64 / 20.0).collect();
    let devs = try_map_ordered(&grid, exec, |&c| -> Result<f64> {
        Ok((average_fidelity(chi_from_concurrence(c)?, plan)? - maf_sqt(c)).abs())
    })?;
    Ok(CheckResult::within(
        "maf anchor (2+C)/3",
        devs.into_iter().fold(0.0, f64::max),
        1e-8,
        "ME basis with no repetition, 20 concurrences".into(),
    ))
}

fn check_physical_success_only() -> Result<CheckResult> {
    // at C = 1 every outcome is exact even where a failure is announced
    let tree = enumerate_tree(FRAC_PI_4, &InfoState::from_bloch(1.3, 0.4), AttemptPlan::continue_gbsm(3)?)?;
    let announced: Vec<usize> = tree.success_counts();
    let exact = tree
        .records()
        .filter(|r| r.status.is_success())
        .all(|r| matches!(crate::basis::classify_residual(&r.residual), Ok(Outcome::Success(c)) if c == r.correction));
    Ok(CheckResult::within(
        "announced successes exact",
        if exact { 0.0 } else { 1.0 },
        0.0,
        format!("C = 1 announced successes per attempt {announced:?}"),
    ))
}

/// Runs every cross-check. Errors inside a check are reported as failures.
pub fn run_verification(exec: Execution) -> VerifyReport {
    let mut checks = Vec::new();
    checks.push(check_fixtures().unwrap_or_else(|e| CheckResult::failed("basis fixtures", e)));
    match check_tables() {
        Ok((p, s)) => {
            checks.push(p);
            checks.push(s);
        }
        Err(e) => checks.push(CheckResult::failed("tables", e)),
    }
    match closed_form_checks(exec) {
        Ok(c) => checks.extend(c),
        Err(e) => checks.push(CheckResult::failed("closed forms", e)),
    }
    checks.push(check_leaf_counts().unwrap_or_else(|e| CheckResult::failed("success-leaf counts", e)));
    checks.push(check_physical_success_only().unwrap_or_else(|e| CheckResult::failed("announced successes exact", e)));
    checks.push(check_security());
    checks.push(check_maf_anchor(exec).unwrap_or_else(|e| CheckResult::failed("maf anchor (2+C)/3", e)));
    VerifyReport { checks }
}
