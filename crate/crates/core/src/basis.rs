//! Generalized Bell bases for pair measurements.
//!
//! Every family the protocol reaches has the form
//! `sum_jk c_jk g_jk |jk>_pair |s_jk>_spectator` with `c_jk` either `a` or `b`
//! (see [`SectorDecomposition`]). The pair kets split into the sectors
//! `{00, 11}` and `{01, 10}`, each holding one `a` term and one `b` term.
//! Within a sector the matched basis contains
//!
//! * a "plus" vector `hi|p> + lo|q>` (label 0 or 2), and
//! * a "minus" vector `lo|p> - hi|q>` (label 1 or 3),
//!
//! with `hi >= lo` the two geometric magnitudes. Exactly one of them swaps
//! the magnitudes so the projected `a` and `b` amplitudes become equal; that
//! outcome leaves the information state up to a Pauli and is a success.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{
    Ket2, LinearFamilyState, PauliCorrection, QubitPair, Residual, Qubit, ALGEBRAIC_TOL, ZERO,
};

/// Relative tolerance used to decide success. Looser than [`ALGEBRAIC_TOL`]
/// to absorb rounding at depth >= 4.
pub const CLASSIFY_TOL: f64 = 1e-10;

/// Result of one outcome of a pair measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success(PauliCorrection),
    Failure,
}

impl Outcome {
    pub fn is_success(self) -> bool {
        matches!(self, Outcome::Success(_))
    }
}

/// Which secret amplitude multiplies a pair ket.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Carrier {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorEntry {
    pub factor: Complex64,
    pub carrier: Carrier,
    pub spectator_bit: usize,
}

/// Per pair-ket factorization of a family, indexed by `jk = 2j + k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorDecomposition {
    pub pair: QubitPair,
    pub entries: [SectorEntry; 4],
}

/// The two sectors as `(first ket, second ket, label of the plus vector)`.
const SECTORS: [(usize, usize, usize); 2] = [(0b00, 0b11, 0), (0b01, 0b10, 2)];

/// Splits a family into `(carrier, factor, spectator ket)` per pair ket.
pub fn decompose(family: &LinearFamilyState, pair: QubitPair) -> Result<SectorDecomposition> {
    let tol2 = ALGEBRAIC_TOL * ALGEBRAIC_TOL;
    let mut entries = [SectorEntry { factor: ZERO, carrier: Carrier::A, spectator_bit: 0 }; 4];
    for (jk, entry) in entries.iter_mut().enumerate() {
        let col = |x: &[Complex64; 8]| [x[pair.index(jk, 0)], x[pair.index(jk, 1)]];
        let ca = col(family.a_part());
        let cb = col(family.b_part());
        let na = ca[0].norm_sqr() + ca[1].norm_sqr();
        let nb = cb[0].norm_sqr() + cb[1].norm_sqr();
        let big = na.max(nb);
        if big == 0.0 {
            return Err(Error::DegenerateResource(format!(
                "pair ket {jk:02b} on {pair} carries no amplitude"
            )));
        }
        if na.min(nb) > tol2 * big {
            return Err(Error::StructureViolation(format!(
                "both carriers present on pair ket {jk:02b} of {pair}"
            )));
        }
        let (carrier, partner) = if na >= nb { (Carrier::A, ca) } else { (Carrier::B, cb) };
        let s = if partner[0].norm_sqr() >= partner[1].norm_sqr() { 0 } else { 1 };
        if partner[1 - s].norm_sqr() > tol2 * big {
            return Err(Error::StructureViolation(format!(
                "spectator partner of pair ket {jk:02b} is not a computational ket"
            )));
        }
        *entry = SectorEntry { factor: partner[s], carrier, spectator_bit: s };
    }
    for (p, q, _) in SECTORS {
        if entries[p].carrier == entries[q].carrier {
            return Err(Error::StructureViolation(format!(
                "sector {{{p:02b},{q:02b}}} of {pair} has a single carrier"
            )));
        }
    }
    Ok(SectorDecomposition { pair, entries })
}

/// Which vector of a sector swaps the geometric magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectorOrientation {
    SuccessOnPlus,
    SuccessOnMinus,
    /// Equal magnitudes (maximal entanglement): both vectors are exact.
    Balanced,
    /// Not a matched basis (e.g. the maximally entangled basis on a
    /// non-maximally entangled family).
    Unmatched,
}

/// Four orthonormal pair vectors with their outcome classification.
#[derive(Debug, Clone, PartialEq)]
pub struct PairBasis {
    pub pair: QubitPair,
    /// Outcome digits recorded before this measurement.
    pub history: Vec<u8>,
    pub vectors: [Ket2; 4],
    /// Physical classification: success iff the residual is exact up to a Pauli.
    pub outcomes: [Outcome; 4],
    /// Per sector `{00,11}`, `{01,10}`.
    pub orientation: [SectorOrientation; 2],
}

impl PairBasis {
    /// Label in the `B^(history n)` scheme, e.g. `B031`.
    pub fn label(&self, n: usize) -> String {
        history_label(&self.history, n)
    }

    pub fn success_count(&self) -> usize {
        self.outcomes.iter().filter(|o| o.is_success()).count()
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let g: Complex64 = (0..4).map(|k| self.vectors[i][k].conj() * self.vectors[j][k]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - want).norm());
            }
        }
        worst
    }

    /// Outcomes the protocol announces as success: the magnitude-swapping
    /// vector of each sector. A balanced sector takes its orientation from
    /// `reference`, the same history evaluated at an angle below `pi/4`.
    pub fn indicated_success(&self, reference: Option<&PairBasis>) -> Result<[bool; 4]> {
        let mut out = [false; 4];
        for (sector, (_, _, plus)) in SECTORS.iter().enumerate() {
            let mut orientation = self.orientation[sector];
            if orientation == SectorOrientation::Balanced {
                orientation = reference.map_or(orientation, |r| r.orientation[sector]);
            }
            match orientation {
                SectorOrientation::SuccessOnPlus => out[*plus] = true,
                SectorOrientation::SuccessOnMinus => out[plus + 1] = true,
                SectorOrientation::Balanced => {
                    return Err(Error::StructureViolation(
                        "balanced sector without a reference orientation".into(),
                    ))
                }
                SectorOrientation::Unmatched => {
                    out[*plus] = self.outcomes[*plus].is_success();
                    out[plus + 1] = self.outcomes[plus + 1].is_success();
                }
            }
        }
        Ok(out)
    }
}

pub fn history_label(history: &[u8], n: usize) -> String {
    let mut s = String::from("B");
    for d in history {
        s.push(char::from(b'0' + d));
    }
    s.push(char::from(b'0' + n as u8));
    s
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn sector_pair(p: usize, q: usize, hi: f64, lo: f64) -> (Ket2, Ket2) {
    let n = hi.hypot(lo);
    let mut plus = [ZERO; 4];
    let mut minus = [ZERO; 4];
    plus[p] = real(hi / n);
    plus[q] = real(lo / n);
    minus[p] = real(lo / n);
    minus[q] = real(-hi / n);
    (plus, minus)
}

fn classify_children(family: &LinearFamilyState, pair: QubitPair, vectors: &[Ket2; 4]) -> Result<[Outcome; 4]> {
    let mut outcomes = [Outcome::Failure; 4];
    for (o, v) in outcomes.iter_mut().zip(vectors) {
        *o = classify_residual(&family.residual_after(pair, v))?;
    }
    Ok(outcomes)
}

/// The matched basis for measuring `pair` on `family`. Depends only on the
/// geometric factors, never on the secret amplitudes.
pub fn matched_basis(family: &LinearFamilyState, pair: QubitPair, history: &[u8]) -> Result<PairBasis> {
    let d = decompose(family, pair)?;
    let mut vectors = [[ZERO; 4]; 4];
    let mut orientation = [SectorOrientation::Balanced; 2];
    for (sector, (p, q, label)) in SECTORS.into_iter().enumerate() {
        let gp = d.entries[p].factor.norm();
        let gq = d.entries[q].factor.norm();
        if gp == 0.0 || gq == 0.0 {
            return Err(Error::DegenerateResource(format!("zero geometric factor in sector of {pair}")));
        }
        // the success vector is proportional to (|g_q|, ±|g_p|)
        orientation[sector] = if (gp - gq).abs() <= CLASSIFY_TOL * gp.max(gq) {
            SectorOrientation::Balanced
        } else if gq > gp {
            SectorOrientation::SuccessOnPlus
        } else {
            SectorOrientation::SuccessOnMinus
        };
        let (plus, minus) = sector_pair(p, q, gp.max(gq), gp.min(gq));
        vectors[label] = plus;
        vectors[label + 1] = minus;
    }
    let outcomes = classify_children(family, pair, &vectors)?;
    Ok(PairBasis { pair, history: history.to_vec(), vectors, outcomes, orientation })
}

/// `(|00> ± |11>)/√2, (|01> ± |10>)/√2`.
pub fn me_bell_vectors() -> [Ket2; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (p0, m0) = sector_pair(0b00, 0b11, h, h);
    let (p1, m1) = sector_pair(0b01, 0b10, h, h);
    [p0, m0, p1, m1]
}

/// The maximally entangled Bell basis, classified against `family`.
pub fn me_bell_basis(family: &LinearFamilyState, pair: QubitPair, history: &[u8]) -> Result<PairBasis> {
    let vectors = me_bell_vectors();
    let outcomes = classify_children(family, pair, &vectors)?;
    let orientation = [SectorOrientation::Unmatched; 2];
    Ok(PairBasis { pair, history: history.to_vec(), vectors, outcomes, orientation })
}

/// Decides whether a child family delivers the information state exactly,
/// using only the geometric residual.
pub fn classify(child: &LinearFamilyState, spectator: Qubit) -> Result<Outcome> {
    classify_residual(&child.spectator_residual(spectator)?)
}

/// Success iff the residual is `a|s> ± b|s̄>` up to an overall factor.
pub fn classify_residual(r: &Residual) -> Result<Outcome> {
    let na = r.a_part[0].norm_sqr() + r.a_part[1].norm_sqr();
    let nb = r.b_part[0].norm_sqr() + r.b_part[1].norm_sqr();
    if na == 0.0 && nb == 0.0 {
        return Err(Error::UndefinedBranch("zero-probability outcome".into()));
    }
    if na == 0.0 || nb == 0.0 {
        return Ok(Outcome::Failure);
    }
    let tol2 = CLASSIFY_TOL * CLASSIFY_TOL;
    let dominant = |v: &[Complex64; 2], n: f64| {
        let s = if v[0].norm_sqr() >= v[1].norm_sqr() { 0 } else { 1 };
        (s, v[1 - s].norm_sqr() <= tol2 * n)
    };
    let (sa, pure_a) = dominant(&r.a_part, na);
    let (sb, pure_b) = dominant(&r.b_part, nb);
    if !(pure_a && pure_b) || sa == sb {
        return Ok(Outcome::Failure);
    }
    let (ma, mb) = (na.sqrt(), nb.sqrt());
    if (ma - mb).abs() > CLASSIFY_TOL * ma.max(mb) {
        return Ok(Outcome::Failure);
    }
    let ratio = r.b_part[sb] / r.a_part[sa];
    let ratio = ratio / ratio.norm();
    let sign_plus = if (ratio - 1.0).norm() <= CLASSIFY_TOL {
        true
    } else if (ratio + 1.0).norm() <= CLASSIFY_TOL {
        false
    } else {
        return Ok(Outcome::Failure);
    };
    let corr = match (sa, sign_plus) {
        (0, true) => PauliCorrection::Identity,
        (0, false) => PauliCorrection::Z,
        (_, true) => PauliCorrection::X,
        (_, false) => PauliCorrection::ZX,
    };
    Ok(Outcome::Success(corr))
}

/// Pauli that best restores a distorted residual: it moves the `a` carrier
/// to `|0>` and aligns the relative sign of the two carriers.
pub fn structural_correction(r: &Residual) -> PauliCorrection {
    let na = r.a_part[0].norm_sqr() + r.a_part[1].norm_sqr();
    let flip = if na > 0.0 {
        r.a_part[1].norm_sqr() > r.a_part[0].norm_sqr()
    } else {
        r.b_part[0].norm_sqr() > r.b_part[1].norm_sqr()
    };
    let flipped = if flip { r.apply(PauliCorrection::X) } else { *r };
    let cross = flipped.a_part[0] * flipped.b_part[1].conj();
    match (flip, cross.re < 0.0) {
        (false, false) => PauliCorrection::Identity,
        (false, true) => PauliCorrection::Z,
        (true, false) => PauliCorrection::X,
        (true, true) => PauliCorrection::ZX,
    }
}

/// The bases printed explicitly for the primary and first repeated attempts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixtureTag {
    /// Pair (1,2) on the initial state.
    Primary,
    /// Pair (1,3) after primary outcome 0.
    After0,
    /// Pair (1,3) after primary outcome 3.
    After3,
}

impl FixtureTag {
    pub const ALL: [FixtureTag; 3] = [FixtureTag::Primary, FixtureTag::After0, FixtureTag::After3];

    pub fn history(self) -> &'static [u8] {
        match self {
            FixtureTag::Primary => &[],
            FixtureTag::After0 => &[0],
            FixtureTag::After3 => &[3],
        }
    }
}

impl FromStr for FixtureTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "primary" => Ok(FixtureTag::Primary),
            "after-0" => Ok(FixtureTag::After0),
            "after-3" => Ok(FixtureTag::After3),
            other => Err(Error::Lookup(format!("unknown fixture tag {other:?}"))),
        }
    }
}

impl fmt::Display for FixtureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FixtureTag::Primary => "primary",
            FixtureTag::After0 => "after-0",
            FixtureTag::After3 => "after-3",
        })
    }
}

/// The basis as printed, evaluated at `chi`, with the printed success pattern.
pub fn paper_fixture(tag: FixtureTag, chi: f64) -> Result<PairBasis> {
    crate::state::check_chi(chi)?;
    let (s, c) = chi.sin_cos();
    let y6 = (c.powi(6) + s.powi(6)).sqrt();
    let ket = |k00: f64, k01: f64, k10: f64, k11: f64| [real(k00), real(k01), real(k10), real(k11)];
    let (pair, vectors) = match tag {
        FixtureTag::Primary => (
            QubitPair::from_labels(1, 2)?,
            [ket(c, 0.0, 0.0, s), ket(s, 0.0, 0.0, -c), ket(0.0, c, s, 0.0), ket(0.0, s, -c, 0.0)],
        ),
        FixtureTag::After0 => (
            QubitPair::from_labels(1, 3)?,
            [
                ket(c.powi(3) / y6, 0.0, 0.0, s.powi(3) / y6),
                ket(s.powi(3) / y6, 0.0, 0.0, -c.powi(3) / y6),
                ket(0.0, c, s, 0.0),
                ket(0.0, s, -c, 0.0),
            ],
        ),
        FixtureTag::After3 => (
            QubitPair::from_labels(1, 3)?,
            [
                ket(c, 0.0, 0.0, s),
                ket(s, 0.0, 0.0, -c),
                ket(0.0, c.powi(3) / y6, s.powi(3) / y6, 0.0),
                ket(0.0, s.powi(3) / y6, -c.powi(3) / y6, 0.0),
            ],
        ),
    };
    let outcomes = [
        Outcome::Failure,
        Outcome::Success(PauliCorrection::Z),
        Outcome::Success(PauliCorrection::X),
        Outcome::Failure,
    ];
    let orientation = [SectorOrientation::SuccessOnMinus, SectorOrientation::SuccessOnPlus];
    Ok(PairBasis { pair, history: tag.history().to_vec(), vectors, outcomes, orientation })
}
