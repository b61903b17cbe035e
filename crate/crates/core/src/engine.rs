//! The repeated-measurement protocol.
//!
//! Alice measures pair (1,2) first and then alternates (1,3), (1,2), ...
//! Each attempt uses the matched basis of the current family. Announced
//! successes end the branch; announced failures are measured again until
//! the attempt budget is spent, after which the branch is truncated.
//!
//! Outcome probabilities are exact: a child family is kept unnormalized, so
//! its squared norm is the probability of its whole history.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::{matched_basis, me_bell_basis, structural_correction, Outcome};
use crate::error::{Error, Result};
use crate::exec::{try_map_ordered, Execution};
use crate::state::{
    check_chi, initial_family, InfoState, Ket2, LinearFamilyState, PauliCorrection, Qubit, QubitPair, Residual,
};

/// Hard cap on the number of repeated attempts.
pub const DEPTH_CAP: usize = 10;

/// Sectors of the matched basis are balanced only at `chi = pi/4`. There the
/// announced-success vector is taken from the same history evaluated at this
/// angle, i.e. the protocol is continued from below. At depth 10 the
/// magnitude ratios reach `tan(chi)^(2*3^10)`, which stays representable here.
const REFERENCE_CHI: f64 = FRAC_PI_4 - 1e-3;

/// Trials per Monte Carlo chunk. Chunk `i` draws from
/// `ChaCha8Rng::seed_from_u64(seed)` on stream `i`.
pub const MC_CHUNK: u64 = 1 << 15;

/// What Alice does in the last allowed attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Keep using the matched generalized basis.
    ContinueGbsm,
    /// Switch to the maximally entangled Bell basis.
    MeBellFinal,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "continue" => Ok(Strategy::ContinueGbsm),
            "me-final" => Ok(Strategy::MeBellFinal),
            other => Err(Error::Lookup(format!("unknown strategy {other:?}"))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::ContinueGbsm => "continue",
            Strategy::MeBellFinal => "me-final",
        })
    }
}

/// Attempt budget: the primary attempt (index 0) plus `max_attempts` repeats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AttemptPlan {
    max_attempts: usize,
    strategy: Strategy,
}

impl AttemptPlan {
    pub fn new(max_attempts: usize, strategy: Strategy) -> Result<Self> {
        if max_attempts > DEPTH_CAP {
            return Err(Error::Domain(format!("m = {max_attempts} exceeds the cap of {DEPTH_CAP}")));
        }
        Ok(AttemptPlan { max_attempts, strategy })
    }

    pub fn continue_gbsm(max_attempts: usize) -> Result<Self> {
        Self::new(max_attempts, Strategy::ContinueGbsm)
    }

    pub fn max_attempts(&self) -> usize {
        self.max_attempts
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }
}

/// Measured pair and spectator for attempt `k`.
pub fn pair_for_attempt(k: usize) -> (QubitPair, Qubit) {
    if k.is_multiple_of(2) {
        (QubitPair::from_labels(1, 2).expect("static pair"), Qubit::THREE)
    } else {
        (QubitPair::from_labels(1, 3).expect("static pair"), Qubit::TWO)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchStatus {
    /// Announced success; Bob applies the correction and holds `|I>` exactly.
    Success(PauliCorrection),
    /// Announced failure; measured again in the next attempt.
    Failure,
    /// Failure in the last allowed attempt; delivered with the best structural correction.
    Truncated,
}

impl BranchStatus {
    pub fn is_success(self) -> bool {
        matches!(self, BranchStatus::Success(_))
    }

    pub fn is_leaf(self) -> bool {
        !matches!(self, BranchStatus::Failure)
    }
}

/// One outcome of one attempt.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchRecord {
    /// Outcome labels, primary attempt first.
    pub history: Vec<u8>,
    pub attempt: usize,
    /// Index of the parent in the previous level.
    pub parent: Option<usize>,
    /// Indices of the four children in the next level, for expanded failures.
    pub children: Option<[usize; 4]>,
    pub pair: QubitPair,
    pub spectator: Qubit,
    pub vector: Ket2,
    /// Collapsed, unnormalized child family.
    pub family: LinearFamilyState,
    /// State left on the spectator, linear in `(a, b)`.
    pub residual: Residual,
    pub status: BranchStatus,
    /// Correction Bob applies: exact for successes, structural otherwise.
    pub correction: PauliCorrection,
    pub conditional_probability: f64,
    pub path_probability: f64,
    pub fidelity_after_correction: f64,
}

impl BranchRecord {
    pub fn label(&self) -> String {
        let (last, prefix) = self.history.split_last().expect("non-empty history");
        crate::basis::history_label(prefix, *last as usize)
    }
}

/// Exact enumeration of all measurement histories up to the attempt budget.
#[derive(Debug, Clone)]
pub struct OutcomeTree {
    pub chi: f64,
    pub info: InfoState,
    pub plan: AttemptPlan,
    pub root: LinearFamilyState,
    /// `levels[k]` holds the outcomes of attempt `k`.
    pub levels: Vec<Vec<BranchRecord>>,
    /// `cumulative_success[k]`: probability of success in attempts `0..=k`.
    pub cumulative_success: Vec<f64>,
}

impl OutcomeTree {
    pub fn cumulative_success(&self, k: usize) -> Result<f64> {
        self.cumulative_success.get(k).copied().ok_or_else(|| {
            Error::Domain(format!("attempt {k} beyond the enumerated depth {}", self.levels.len() - 1))
        })
    }

    pub fn records(&self) -> impl Iterator<Item = &BranchRecord> {
        self.levels.iter().flatten()
    }

    pub fn leaves(&self) -> impl Iterator<Item = &BranchRecord> {
        self.records().filter(|r| r.status.is_leaf())
    }

    pub fn find(&self, history: &[u8]) -> Option<&BranchRecord> {
        self.levels.get(history.len().checked_sub(1)?)?.iter().find(|r| r.history == history)
    }

    pub fn success_counts(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.iter().filter(|r| r.status.is_success()).count()).collect()
    }

    pub fn failure_counts(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.iter().filter(|r| !r.status.is_success()).count()).collect()
    }

    /// Sum of path probabilities over success and truncated leaves.
    pub fn leaf_mass(&self) -> f64 {
        self.leaves().map(|r| r.path_probability).sum()
    }
}

struct Child {
    vector: Ket2,
    family: LinearFamilyState,
    reference: Option<LinearFamilyState>,
    residual: Residual,
    status: BranchStatus,
    correction: PauliCorrection,
}

/// Measures attempt `attempt` on `family`, returning the four outcomes.
fn expand(
    family: &LinearFamilyState,
    reference: Option<&LinearFamilyState>,
    history: &[u8],
    attempt: usize,
    plan: &AttemptPlan,
) -> Result<[Child; 4]> {
    let (pair, _) = pair_for_attempt(attempt);
    let last = attempt == plan.max_attempts;
    let use_me = last && plan.strategy == Strategy::MeBellFinal;
    let basis = if use_me {
        me_bell_basis(family, pair, history)?
    } else {
        matched_basis(family, pair, history)?
    };
    let ref_basis = match (use_me, reference) {
        (false, Some(r)) => Some(matched_basis(r, pair, history)?),
        _ => None,
    };
    let indicated = basis.indicated_success(ref_basis.as_ref())?;

    let mut out = Vec::with_capacity(4);
    for (n, &is_success) in indicated.iter().enumerate() {
        let vector = basis.vectors[n];
        let child = family.project_pair(pair, &vector)?;
        let child_ref = match &ref_basis {
            Some(rb) => Some(reference.expect("reference basis implies reference").project_pair(pair, &rb.vectors[n])?),
            None => None,
        };
        let residual = family.residual_after(pair, &vector);
        let (status, correction) = if is_success {
            match basis.outcomes[n] {
                Outcome::Success(c) => (BranchStatus::Success(c), c),
                Outcome::Failure => {
                    return Err(Error::StructureViolation(format!(
                        "outcome {} announced as success but residual is not exact",
                        basis.label(n)
                    )))
                }
            }
        } else if last {
            (BranchStatus::Truncated, structural_correction(&residual))
        } else {
            (BranchStatus::Failure, structural_correction(&residual))
        };
        out.push(Child { vector, family: child, reference: child_ref, residual, status, correction });
    }
    Ok(out.try_into().unwrap_or_else(|_| unreachable!("four children")))
}

fn start(chi: f64) -> Result<(LinearFamilyState, Option<LinearFamilyState>)> {
    check_chi(chi)?;
    if chi == 0.0 {
        return Err(Error::DegenerateResource("chi = 0: the resource is a product state".into()));
    }
    let root = initial_family(chi)?;
    let reference = if chi > REFERENCE_CHI { Some(initial_family(REFERENCE_CHI)?) } else { None };
    Ok((root, reference))
}

/// Enumerates every history of the protocol up to `plan.max_attempts`.
pub fn enumerate_tree(chi: f64, info: &InfoState, plan: AttemptPlan) -> Result<OutcomeTree> {
    let (root, root_ref) = start(chi)?;
    let root_prob = root.branch_probability(info);

    // (family, reference, parent index, history, path probability)
    let mut frontier = vec![(root, root_ref, None::<usize>, Vec::<u8>::new(), root_prob)];
    let mut levels: Vec<Vec<BranchRecord>> = Vec::new();
    let mut cumulative = Vec::new();
    let mut succeeded = 0.0;

    for attempt in 0..=plan.max_attempts {
        let (pair, spectator) = pair_for_attempt(attempt);
        let mut level = Vec::with_capacity(frontier.len() * 4);
        let mut next = Vec::new();
        for (family, reference, parent, history, parent_prob) in &frontier {
            let children = expand(family, reference.as_ref(), history, attempt, &plan)?;
            let first = level.len();
            for (n, child) in children.into_iter().enumerate() {
                let mut h = history.clone();
                h.push(n as u8);
                let path_probability = child.family.branch_probability(info);
                let fidelity = child
                    .family
                    .apply_correction(spectator, child.correction)
                    .fidelity_to_info(info, spectator)?;
                if child.status.is_success() {
                    succeeded += path_probability;
                }
                if child.status == BranchStatus::Failure {
                    next.push((child.family, child.reference, Some(first + n), h.clone(), path_probability));
                }
                level.push(BranchRecord {
                    history: h,
                    attempt,
                    parent: *parent,
                    children: None,
                    pair,
                    spectator,
                    vector: child.vector,
                    family: child.family,
                    residual: child.residual,
                    status: child.status,
                    correction: child.correction,
                    conditional_probability: path_probability / parent_prob,
                    path_probability,
                    fidelity_after_correction: fidelity,
                });
            }
            if let (Some(p), Some(prev)) = (parent, levels.last_mut()) {
                let prev: &mut Vec<BranchRecord> = prev;
                prev[*p].children = Some([first, first + 1, first + 2, first + 3]);
            }
        }
        levels.push(level);
        cumulative.push(succeeded);
        frontier = next;
    }

    Ok(OutcomeTree { chi, info: *info, plan, root, levels, cumulative_success: cumulative })
}

/// Inverse-CDF draw over four weights in label order.
fn pick(u: f64, weights: &[f64; 4]) -> usize {
    let total: f64 = weights.iter().sum();
    let target = u * total;
    let mut acc = 0.0;
    for (n, w) in weights.iter().enumerate() {
        acc += w;
        if target < acc {
            return n;
        }
    }
    weights.iter().rposition(|w| *w > 0.0).unwrap_or(3)
}

/// One sampled trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub history: Vec<u8>,
    pub success: bool,
    pub attempts_used: usize,
    pub correction: PauliCorrection,
    pub final_residual: Residual,
    /// Fidelity of Bob's qubit after the correction.
    pub fidelity: f64,
}

/// Samples one trajectory, computing bases on the fly. Each attempt consumes
/// exactly one `f64` from `rng`.
pub fn sample_run<R: Rng + ?Sized>(chi: f64, info: &InfoState, plan: AttemptPlan, rng: &mut R) -> Result<RunResult> {
    let (mut family, mut reference) = start(chi)?;
    let mut history = Vec::new();
    for attempt in 0..=plan.max_attempts {
        let (_, spectator) = pair_for_attempt(attempt);
        let children = expand(&family, reference.as_ref(), &history, attempt, &plan)?;
        let weights = std::array::from_fn(|n| children[n].family.branch_probability(info));
        let n = pick(rng.random::<f64>(), &weights);
        history.push(n as u8);
        let [c0, c1, c2, c3] = children;
        let chosen = [c0, c1, c2, c3].into_iter().nth(n).expect("n < 4");
        if chosen.status.is_leaf() {
            let fidelity = chosen
                .family
                .apply_correction(spectator, chosen.correction)
                .fidelity_to_info(info, spectator)?;
            return Ok(RunResult {
                history,
                success: chosen.status.is_success(),
                attempts_used: attempt + 1,
                correction: chosen.correction,
                final_residual: chosen.residual,
                fidelity,
            });
        }
        family = chosen.family;
        reference = chosen.reference;
    }
    unreachable!("the last attempt always ends the branch")
}

/// Draws leaves of a precomputed tree with the same arithmetic as [`sample_run`].
pub struct TreeSampler<'a> {
    tree: &'a OutcomeTree,
}

impl<'a> TreeSampler<'a> {
    pub fn new(tree: &'a OutcomeTree) -> Self {
        TreeSampler { tree }
    }

    /// Returns `(attempt, index)` of the sampled leaf.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, usize) {
        let levels = &self.tree.levels;
        let mut candidates = [0, 1, 2, 3];
        let mut attempt = 0;
        loop {
            let level = &levels[attempt];
            let weights = candidates.map(|i| level[i].path_probability);
            let chosen = candidates[pick(rng.random::<f64>(), &weights)];
            match level[chosen].children {
                Some(next) if !level[chosen].status.is_leaf() => {
                    candidates = next;
                    attempt += 1;
                }
                _ => return (attempt, chosen),
            }
        }
    }

    pub fn record(&self, leaf: (usize, usize)) -> &'a BranchRecord {
        &self.tree.levels[leaf.0][leaf.1]
    }
}

/// Monte Carlo estimate of the success probability.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub trials: u64,
    pub successes: u64,
    pub success_rate: f64,
    /// Binomial standard error `sqrt(p(1-p)/n)`.
    pub standard_error: f64,
    /// Successes by the attempt in which they occurred.
    pub successes_by_attempt: Vec<u64>,
    pub truncated: u64,
}

pub(crate) fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

fn chunks(trials: u64) -> Vec<(u64, u64)> {
    (0..trials.div_ceil(MC_CHUNK))
        .map(|i| (i, MC_CHUNK.min(trials - i * MC_CHUNK)))
        .collect()
}

/// Sampled leaves for `trials` independent runs, in trial order.
pub fn sample_leaves(tree: &OutcomeTree, trials: u64, seed: u64, exec: Execution) -> Vec<(usize, usize)> {
    let sampler = TreeSampler::new(tree);
    let per_chunk = try_map_ordered(&chunks(trials), exec, |&(chunk, count)| {
        let mut rng = chunk_rng(seed, chunk);
        Ok::<_, Error>((0..count).map(|_| sampler.sample(&mut rng)).collect::<Vec<_>>())
    })
    .expect("sampling is infallible");
    per_chunk.into_iter().flatten().collect()
}

/// Runs `trials` seeded trajectories and tallies successes.
pub fn monte_carlo(
    chi: f64,
    info: &InfoState,
    plan: AttemptPlan,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<Estimate> {
    if trials == 0 {
        return Err(Error::Domain("monte carlo needs at least one trial".into()));
    }
    let tree = enumerate_tree(chi, info, plan)?;
    let sampler = TreeSampler::new(&tree);
    let depth = plan.max_attempts + 1;
    let tallies = try_map_ordered(&chunks(trials), exec, |&(chunk, count)| {
        let mut rng = chunk_rng(seed, chunk);
        let mut by_attempt = vec![0u64; depth];
        let mut truncated = 0u64;
        for _ in 0..count {
            let leaf = sampler.sample(&mut rng);
            if sampler.record(leaf).status.is_success() {
                by_attempt[leaf.0] += 1;
            } else {
                truncated += 1;
            }
        }
        Ok::<_, Error>((by_attempt, truncated))
    })?;

    let mut successes_by_attempt = vec![0u64; depth];
    let mut truncated = 0;
    for (by_attempt, t) in tallies {
        for (acc, x) in successes_by_attempt.iter_mut().zip(by_attempt) {
            *acc += x;
        }
        truncated += t;
    }
    let successes: u64 = successes_by_attempt.iter().sum();
    let p = successes as f64 / trials as f64;
    Ok(Estimate {
        trials,
        successes,
        success_rate: p,
        standard_error: (p * (1.0 - p) / trials as f64).sqrt(),
        successes_by_attempt,
        truncated,
    })
}

/// Cumulative success per attempt `0..=m` for each resource angle, in input order.
pub fn success_sweep(chis: &[f64], m: usize, exec: Execution) -> Result<Vec<Vec<f64>>> {
    let plan = AttemptPlan::continue_gbsm(m)?;
    // cumulative success does not depend on the input state
    let info = InfoState::from_bloch(0.0, 0.0);
    try_map_ordered(chis, exec, |&chi| Ok(enumerate_tree(chi, &info, plan)?.cumulative_success))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_PI_6;

    fn info() -> InfoState {
        InfoState::from_bloch(1.234, 0.77)
    }

    #[test]
    fn pairs_alternate() {
        assert_eq!(pair_for_attempt(0), (QubitPair::from_labels(1, 2).unwrap(), Qubit::THREE));
        assert_eq!(pair_for_attempt(1), (QubitPair::from_labels(1, 3).unwrap(), Qubit::TWO));
        assert_eq!(pair_for_attempt(2), (QubitPair::from_labels(1, 2).unwrap(), Qubit::THREE));
    }

    #[test]
    fn plan_cap() {
        assert!(AttemptPlan::continue_gbsm(DEPTH_CAP).is_ok());
        assert!(matches!(AttemptPlan::continue_gbsm(DEPTH_CAP + 1), Err(Error::Domain(_))));
        assert_eq!("me-final".parse::<Strategy>().unwrap(), Strategy::MeBellFinal);
        assert!("sometimes".parse::<Strategy>().is_err());
    }

    #[test]
    fn max_entanglement_halves_failure_each_attempt() {
        let tree = enumerate_tree(FRAC_PI_4, &info(), AttemptPlan::continue_gbsm(3).unwrap()).unwrap();
        for (got, want) in tree.cumulative_success.iter().zip([0.5, 0.75, 0.875, 0.9375]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
        // announced failures at pi/4 still deliver the state exactly
        for leaf in tree.leaves() {
            assert_abs_diff_eq!(leaf.fidelity_after_correction, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn primary_attempt_at_pi_over_6() {
        let tree = enumerate_tree(FRAC_PI_6, &info(), AttemptPlan::continue_gbsm(0).unwrap()).unwrap();
        assert_abs_diff_eq!(tree.cumulative_success(0).unwrap(), 3.0 / 8.0, epsilon = 1e-15);
        assert!(matches!(tree.cumulative_success(1), Err(Error::Domain(_))));
    }

    #[test]
    fn tree_shape_and_mass() {
        let tree = enumerate_tree(0.4, &info(), AttemptPlan::continue_gbsm(3).unwrap()).unwrap();
        assert_eq!(tree.success_counts(), vec![2, 4, 8, 16]);
        assert_eq!(tree.failure_counts(), vec![2, 4, 8, 16]);
        assert_eq!(tree.levels.iter().map(Vec::len).collect::<Vec<_>>(), vec![4, 8, 16, 32]);
        assert_abs_diff_eq!(tree.leaf_mass(), 1.0, epsilon = 1e-12);
        let b030 = tree.find(&[0, 3, 0]).unwrap();
        assert_eq!(b030.label(), "B030");
        assert_eq!(b030.status, BranchStatus::Success(PauliCorrection::Identity));
        let parent = &tree.levels[1][b030.parent.unwrap()];
        assert_eq!(parent.history, vec![0, 3]);
        assert_eq!(parent.children.unwrap().map(|i| tree.levels[2][i].history.clone())[0], vec![0, 3, 0]);
    }

    #[test]
    fn degenerate_resource_rejected() {
        let plan = AttemptPlan::continue_gbsm(2).unwrap();
        assert!(matches!(enumerate_tree(0.0, &info(), plan), Err(Error::DegenerateResource(_))));
        let mut rng = chunk_rng(1, 0);
        assert!(matches!(sample_run(0.0, &info(), plan, &mut rng), Err(Error::DegenerateResource(_))));
    }

    #[test]
    fn sample_run_is_deterministic() {
        let plan = AttemptPlan::continue_gbsm(4).unwrap();
        let a = sample_run(0.3, &info(), plan, &mut chunk_rng(7, 0)).unwrap();
        let b = sample_run(0.3, &info(), plan, &mut chunk_rng(7, 0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn on_the_fly_and_tree_sampling_agree() {
        let plan = AttemptPlan::continue_gbsm(3).unwrap();
        let chi = 0.45;
        let tree = enumerate_tree(chi, &info(), plan).unwrap();
        let sampler = TreeSampler::new(&tree);
        let mut r1 = chunk_rng(99, 3);
        let mut r2 = chunk_rng(99, 3);
        for _ in 0..500 {
            let run = sample_run(chi, &info(), plan, &mut r1).unwrap();
            let leaf = sampler.record(sampler.sample(&mut r2));
            assert_eq!(run.history, leaf.history);
            assert_eq!(run.success, leaf.status.is_success());
        }
    }

    #[test]
    fn basis_state_info_always_delivered() {
        let info = InfoState::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        let plan = AttemptPlan::continue_gbsm(3).unwrap();
        let mut rng = chunk_rng(42, 0);
        for _ in 0..200 {
            let run = sample_run(0.3, &info, plan, &mut rng).unwrap();
            assert_abs_diff_eq!(run.fidelity, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn single_trial_rate() {
        let plan = AttemptPlan::continue_gbsm(1).unwrap();
        let est = monte_carlo(0.5, &info(), plan, 1, 3, Execution::Sequential).unwrap();
        assert!(est.success_rate == 0.0 || est.success_rate == 1.0);
        assert!(matches!(monte_carlo(0.5, &info(), plan, 0, 3, Execution::Sequential), Err(Error::Domain(_))));
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let plan = AttemptPlan::continue_gbsm(2).unwrap();
        let a = monte_carlo(0.5, &info(), plan, 100_000, 11, Execution::Sequential).unwrap();
        let b = monte_carlo(0.5, &info(), plan, 100_000, 11, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.successes_by_attempt.iter().sum::<u64>() + a.truncated, 100_000);
    }

    #[test]
    fn pick_respects_label_order() {
        assert_eq!(pick(0.0, &[0.0, 0.5, 0.5, 0.0]), 1);
        assert_eq!(pick(0.5, &[0.25, 0.25, 0.25, 0.25]), 2);
        assert_eq!(pick(0.999_999_999_999, &[0.2, 0.8, 0.0, 0.0]), 1);
    }
}
