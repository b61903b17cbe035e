//! Haar-averaged fidelity of the whole protocol and the Pauli-twirl
//! security identity.
//!
//! Each leaf contributes `p F = |<I| U r>|^2` for its unnormalized residual
//! `r` and correction `U`. With `a = cos(theta/2)`, `b = e^{i phi} sin(theta/2)`
//! every leaf term is independent of `phi`, so the Haar average is a 1-D
//! Gauss-Legendre integral over `u = cos(theta)`.

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::engine::{enumerate_tree, AttemptPlan, OutcomeTree, Strategy};
use crate::error::{Error, Result};
use crate::exec::{try_map_ordered, Execution};
use crate::formulas::chi_from_concurrence;
use crate::state::{InfoState, PauliCorrection, Residual};

pub const DEFAULT_ORDER: usize = 128;
pub const CHECK_ORDER: usize = 256;
pub const CONVERGENCE_TOL: f64 = 1e-9;

/// Attempt budget and terminal strategy for a fidelity average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MafPlan {
    plan: AttemptPlan,
}

impl MafPlan {
    pub fn new(m: usize, strategy: Strategy) -> Result<Self> {
        Ok(MafPlan { plan: AttemptPlan::new(m, strategy)? })
    }

    pub fn m(&self) -> usize {
        self.plan.max_attempts()
    }

    pub fn strategy(&self) -> Strategy {
        self.plan.strategy()
    }

    pub fn attempt_plan(&self) -> AttemptPlan {
        self.plan
    }
}

/// Leaf residuals already multiplied by their corrections.
fn corrected_leaves(tree: &OutcomeTree) -> Vec<Residual> {
    tree.leaves().map(|r| r.residual.apply(r.correction)).collect()
}

fn info_at(u: f64) -> InfoState {
    let a = ((1.0 + u) / 2.0).max(0.0).sqrt();
    let b = ((1.0 - u) / 2.0).max(0.0).sqrt();
    InfoState::renormalized(Complex64::new(a, 0.0), Complex64::new(b, 0.0)).expect("unit vector")
}

/// Protocol fidelity for one input state: sum over leaves of `p F`.
pub fn state_fidelity(tree: &OutcomeTree, info: &InfoState) -> f64 {
    tree.leaves().map(|r| r.residual.apply(r.correction).weighted_fidelity(info)).sum()
}

fn integrate(leaves: &[Residual], order: usize) -> Result<f64> {
    let rule = GaussLegendre::new(order).map_err(|e| Error::Domain(format!("quadrature order {order}: {e}")))?;
    Ok(0.5 * rule.integrate(-1.0, 1.0, |u| {
        let info = info_at(u);
        leaves.iter().map(|r| r.weighted_fidelity(&info)).sum::<f64>()
    }))
}

/// Haar-averaged fidelity with a fixed quadrature order.
pub fn average_fidelity_with_order(chi: f64, plan: MafPlan, order: usize) -> Result<f64> {
    // The tree structure does not depend on the input state.
    let tree = enumerate_tree(chi, &InfoState::from_bloch(0.0, 0.0), plan.attempt_plan())?;
    integrate(&corrected_leaves(&tree), order)
}

/// Haar-averaged fidelity at the default order, checked against [`CHECK_ORDER`].
pub fn average_fidelity(chi: f64, plan: MafPlan) -> Result<f64> {
    let tree = enumerate_tree(chi, &InfoState::from_bloch(0.0, 0.0), plan.attempt_plan())?;
    let leaves = corrected_leaves(&tree);
    let low = integrate(&leaves, DEFAULT_ORDER)?;
    let high = integrate(&leaves, CHECK_ORDER)?;
    let delta = (low - high).abs();
    if delta >= CONVERGENCE_TOL {
        return Err(Error::Quadrature { low: DEFAULT_ORDER, high: CHECK_ORDER, delta });
    }
    Ok(low)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MafRow {
    pub concurrence: f64,
    pub m: usize,
    pub strategy: Strategy,
    pub maf: f64,
}

/// One row per `(grid point, plan)`, grid-major, plans in the given order.
pub fn maf_sweep(grid: &[f64], plans: &[MafPlan], exec: Execution) -> Result<Vec<MafRow>> {
    let jobs: Vec<(f64, MafPlan)> = grid.iter().flat_map(|&c| plans.iter().map(move |&p| (c, p))).collect();
    try_map_ordered(&jobs, exec, |&(c, plan)| {
        if !(c > 0.0 && c <= 1.0) {
            return Err(Error::Domain(format!("concurrence {c} outside (0, 1]")));
        }
        let maf = average_fidelity(chi_from_concurrence(c)?, plan)?;
        Ok(MafRow { concurrence: c, m: plan.m(), strategy: plan.strategy(), maf })
    })
}

/// Validated single-qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2 {
    m: [[Complex64; 2]; 2],
}

impl DensityMatrix2 {
    const TOL: f64 = 1e-12;

    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let herm = (m[0][1] - m[1][0].conj()).norm().max(m[0][0].im.abs()).max(m[1][1].im.abs());
        if herm > Self::TOL {
            return Err(Error::Contract(format!("matrix not hermitian (off by {herm:e})")));
        }
        let trace = m[0][0].re + m[1][1].re;
        if (trace - 1.0).abs() > Self::TOL {
            return Err(Error::Contract(format!("trace {trace} != 1")));
        }
        let rho = DensityMatrix2 { m };
        let (lo, _) = rho.eigenvalues();
        if lo < -Self::TOL {
            return Err(Error::Contract(format!("negative eigenvalue {lo}")));
        }
        Ok(rho)
    }

    pub fn pure(ket: &[Complex64; 2]) -> Result<Self> {
        Self::new([[ket[0] * ket[0].conj(), ket[0] * ket[1].conj()], [ket[1] * ket[0].conj(), ket[1] * ket[1].conj()]])
    }

    pub fn maximally_mixed() -> Self {
        let h = Complex64::new(0.5, 0.0);
        let z = Complex64::new(0.0, 0.0);
        DensityMatrix2 { m: [[h, z], [z, h]] }
    }

    pub fn entries(&self) -> &[[Complex64; 2]; 2] {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0].re + self.m[1][1].re
    }

    /// `Tr[self * other]`, real for hermitian operands.
    pub fn overlap(&self, other: &DensityMatrix2) -> f64 {
        let mut t = Complex64::new(0.0, 0.0);
        for i in 0..2 {
            for k in 0..2 {
                t += self.m[i][k] * other.m[k][i];
            }
        }
        t.re
    }

    pub fn purity(&self) -> f64 {
        self.overlap(self)
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let t = self.trace();
        let d = self.m[0][0].re - self.m[1][1].re;
        let r = (d * d + 4.0 * self.m[0][1].norm_sqr()).sqrt();
        ((t - r) / 2.0, (t + r) / 2.0)
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix2) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for k in 0..2 {
                d = d.max((self.m[i][k] - other.m[i][k]).norm());
            }
        }
        d
    }
}

/// Equal mixture of the four Pauli images of `|I>`.
pub fn bob_pauli_mixture(info: &InfoState) -> DensityMatrix2 {
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for p in PauliCorrection::ALL {
        let v = p.apply(&info.ket());
        for i in 0..2 {
            for k in 0..2 {
                m[i][k] += 0.25 * v[i] * v[k].conj();
            }
        }
    }
    DensityMatrix2::new(m).expect("a mixture of pure states is a density matrix")
}

/// `Tr[rho_Bob |I><I|]`.
pub fn eavesdropper_overlap(info: &InfoState) -> f64 {
    let rho_i = DensityMatrix2::pure(&info.ket()).expect("normalized info");
    bob_pauli_mixture(info).overlap(&rho_i)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapEstimate {
    pub samples: u64,
    pub mean: f64,
    pub standard_error: f64,
}

/// Mean of `|<psi|I>|^2` over Haar-random pure `psi`.
pub fn haar_overlap_estimate(info: &InfoState, samples: u64, seed: u64) -> Result<OverlapEstimate> {
    if samples < 2 {
        return Err(Error::Domain("need at least two samples".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = info.ket();
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        let mut g = [0.0f64; 4];
        for x in g.iter_mut() {
            *x = StandardNormal.sample(&mut rng);
        }
        let psi = [Complex64::new(g[0], g[1]), Complex64::new(g[2], g[3])];
        let norm = psi[0].norm_sqr() + psi[1].norm_sqr();
        let f = (psi[0].conj() * target[0] + psi[1].conj() * target[1]).norm_sqr() / norm;
        sum += f;
        sum_sq += f * f;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean) * n / (n - 1.0);
    Ok(OverlapEstimate { samples, mean, standard_error: (var.max(0.0) / n).sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn me_final_single_attempt_is_standard_teleportation() {
        for c in [0.1, 0.5, 0.9] {
            let chi = chi_from_concurrence(c).unwrap();
            let f = average_fidelity(chi, MafPlan::new(0, Strategy::MeBellFinal).unwrap()).unwrap();
            assert_abs_diff_eq!(f, (2.0 + c) / 3.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn continue_single_attempt() {
        let chi = chi_from_concurrence(0.5).unwrap();
        let f = average_fidelity(chi, MafPlan::new(0, Strategy::ContinueGbsm).unwrap()).unwrap();
        assert_abs_diff_eq!(f, 2.0 / 3.0 + 0.25 / 3.0, epsilon = 1e-10);
    }

    #[test]
    fn maximal_entanglement_is_perfect() {
        for strategy in [Strategy::ContinueGbsm, Strategy::MeBellFinal] {
            let f = average_fidelity(FRAC_PI_4, MafPlan::new(2, strategy).unwrap()).unwrap();
            assert_abs_diff_eq!(f, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn degenerate_resource() {
        let plan = MafPlan::new(1, Strategy::MeBellFinal).unwrap();
        assert!(matches!(average_fidelity(0.0, plan), Err(Error::DegenerateResource(_))));
    }

    #[test]
    fn sweep_shape() {
        let plans = [MafPlan::new(1, Strategy::ContinueGbsm).unwrap(), MafPlan::new(1, Strategy::MeBellFinal).unwrap()];
        let rows = maf_sweep(&[0.3, 0.6, 1.0], &plans, Execution::Parallel).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[3].concurrence, 0.6);
        assert_eq!(rows[3].strategy, Strategy::MeBellFinal);
        assert!(maf_sweep(&[0.0], &plans, Execution::Sequential).is_err());
    }

    #[test]
    fn pauli_twirl() {
        let info = InfoState::from_bloch(0.0, 0.0);
        let rho = bob_pauli_mixture(&info);
        assert!(rho.max_abs_diff(&DensityMatrix2::maximally_mixed()) < 1e-15);
        assert_abs_diff_eq!(rho.purity(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(eavesdropper_overlap(&info), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn density_matrix_validation() {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        assert!(DensityMatrix2::new([[one, z], [z, one]]).is_err());
        assert!(DensityMatrix2::new([[Complex64::new(1.5, 0.0), z], [z, Complex64::new(-0.5, 0.0)]]).is_err());
        assert!(DensityMatrix2::new([[Complex64::new(0.5, 0.0), one], [z, Complex64::new(0.5, 0.0)]]).is_err());
    }

    #[test]
    fn haar_overlap_is_half() {
        let est = haar_overlap_estimate(&InfoState::from_bloch(1.1, 0.4), 100_000, 5).unwrap();
        assert!((est.mean - 0.5).abs() < 3.0 * est.standard_error);
    }
}
