//! Exact statevector algebra for the three-qubit teleportation register.
//!
//! The register holds the information qubit (1) and the two resource qubits
//! (2, 3). Kets are ordered big-endian, `|q1 q2 q3>`, so basis index
//! `4*q1 + 2*q2 + q3`.
//!
//! Because Alice never knows the secret amplitudes `(a, b)`, every state the
//! protocol touches is stored as a [`LinearFamilyState`]: two fixed vectors
//! `A`, `B` such that the physical (unnormalized) state is `a*A + b*B`.
//! Measurement bases are computed from `A` and `B` alone.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for exact algebraic identities.
pub const ALGEBRAIC_TOL: f64 = 1e-12;

pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
#[cfg(test)]
pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Eight amplitudes of a three-qubit ket.
pub type Ket3 = [Complex64; 8];
/// Four amplitudes of a two-qubit ket, indexed `2*first + second`.
pub type Ket2 = [Complex64; 4];
/// Two amplitudes of a single qubit.
pub type Ket1 = [Complex64; 2];

/// One of the three register qubits, labelled 1..=3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Qubit(u8);

impl Qubit {
    pub const ONE: Qubit = Qubit(1);
    pub const TWO: Qubit = Qubit(2);
    pub const THREE: Qubit = Qubit(3);

    pub fn new(label: u8) -> Result<Self> {
        if (1..=3).contains(&label) {
            Ok(Qubit(label))
        } else {
            Err(Error::Domain(format!("qubit label {label} not in 1..=3")))
        }
    }

    pub fn label(self) -> u8 {
        self.0
    }

    fn shift(self) -> usize {
        3 - self.0 as usize
    }
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An ordered pair of distinct qubits. The first qubit is the high bit of the
/// two-qubit ket index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QubitPair {
    first: Qubit,
    second: Qubit,
}

impl QubitPair {
    pub fn new(first: Qubit, second: Qubit) -> Result<Self> {
        if first == second {
            return Err(Error::Domain(format!(
                "measured pair needs two distinct qubits, got ({first}, {second})"
            )));
        }
        Ok(QubitPair { first, second })
    }

    pub fn from_labels(first: u8, second: u8) -> Result<Self> {
        Self::new(Qubit::new(first)?, Qubit::new(second)?)
    }

    pub fn first(self) -> Qubit {
        self.first
    }

    pub fn second(self) -> Qubit {
        self.second
    }

    /// The qubit not in the pair.
    pub fn spectator(self) -> Qubit {
        Qubit(6 - self.first.0 - self.second.0)
    }

    /// Register index of `|jk>_pair |t>_spectator`, where `jk` is the pair-ket
    /// index `2*j + k`.
    pub(crate) fn index(self, pair_ket: usize, spectator_bit: usize) -> usize {
        let j = pair_ket >> 1;
        let k = pair_ket & 1;
        (j << self.first.shift()) | (k << self.second.shift()) | (spectator_bit << self.spectator().shift())
    }
}

impl fmt::Display for QubitPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.first, self.second)
    }
}

/// The secret one-qubit state `a|0> + b|1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfoState {
    a: Complex64,
    b: Complex64,
}

impl InfoState {
    /// Requires `|a|^2 + |b|^2 = 1` within [`ALGEBRAIC_TOL`].
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let norm = a.norm_sqr() + b.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(Error::Domain(format!(
                "information state not normalized: |a|^2+|b|^2 = {norm}"
            )));
        }
        Ok(InfoState { a, b })
    }

    /// Rescales `(a, b)` to unit norm.
    pub fn renormalized(a: Complex64, b: Complex64) -> Result<Self> {
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Domain("cannot renormalize a zero vector".into()));
        }
        Ok(InfoState { a: a / norm, b: b / norm })
    }

    /// Bloch-sphere parameterization `a = cos(theta/2)`, `b = e^{i phi} sin(theta/2)`.
    pub fn from_bloch(theta: f64, phi: f64) -> Self {
        InfoState {
            a: Complex64::new((theta / 2.0).cos(), 0.0),
            b: Complex64::from_polar((theta / 2.0).sin(), phi),
        }
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    /// `|a|^2`.
    pub fn weight_a(&self) -> f64 {
        self.a.norm_sqr()
    }

    /// `|b|^2`.
    pub fn weight_b(&self) -> f64 {
        self.b.norm_sqr()
    }

    pub fn ket(&self) -> Ket1 {
        [self.a, self.b]
    }
}

/// The resource `cos(chi)|00> + sin(chi)|11>` with `chi` in `[0, pi/4]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResourceSpec {
    chi: f64,
}

impl ResourceSpec {
    pub fn new(chi: f64) -> Result<Self> {
        check_chi(chi)?;
        Ok(ResourceSpec { chi })
    }

    pub fn from_concurrence(concurrence: f64) -> Result<Self> {
        Self::new(crate::formulas::chi_from_concurrence(concurrence)?)
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    /// `sin(2 chi)`.
    pub fn concurrence(&self) -> f64 {
        (2.0 * self.chi).sin()
    }
}

pub(crate) fn check_chi(chi: f64) -> Result<()> {
    // a few ulps of slack so that pi/4 computed by arcsin(1)/2 is accepted
    if chi.is_finite() && (0.0..=std::f64::consts::FRAC_PI_4 + 4.0 * f64::EPSILON).contains(&chi) {
        Ok(())
    } else {
        Err(Error::Domain(format!("chi = {chi} outside [0, pi/4]")))
    }
}

/// Bob's corrections `U^(n) = {I, sigma_z, sigma_x, sigma_z sigma_x}`, in label order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliCorrection {
    Identity,
    Z,
    X,
    /// `sigma_z sigma_x`: X is applied first, then Z.
    ZX,
}

impl PauliCorrection {
    pub const ALL: [PauliCorrection; 4] = [
        PauliCorrection::Identity,
        PauliCorrection::Z,
        PauliCorrection::X,
        PauliCorrection::ZX,
    ];

    /// Position `n` in `U^(n)`.
    pub fn index(self) -> usize {
        match self {
            PauliCorrection::Identity => 0,
            PauliCorrection::Z => 1,
            PauliCorrection::X => 2,
            PauliCorrection::ZX => 3,
        }
    }

    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let m = |x: f64| Complex64::new(x, 0.0);
        match self {
            PauliCorrection::Identity => [[m(1.0), m(0.0)], [m(0.0), m(1.0)]],
            PauliCorrection::Z => [[m(1.0), m(0.0)], [m(0.0), m(-1.0)]],
            PauliCorrection::X => [[m(0.0), m(1.0)], [m(1.0), m(0.0)]],
            PauliCorrection::ZX => [[m(0.0), m(1.0)], [m(-1.0), m(0.0)]],
        }
    }

    pub fn apply(self, v: &Ket1) -> Ket1 {
        let m = self.matrix();
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn name(self) -> &'static str {
        match self {
            PauliCorrection::Identity => "I",
            PauliCorrection::Z => "Z",
            PauliCorrection::X => "X",
            PauliCorrection::ZX => "ZX",
        }
    }
}

impl fmt::Display for PauliCorrection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Single-qubit state left on the spectator, linear in `(a, b)`:
/// `a * a_part + b * b_part`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub a_part: Ket1,
    pub b_part: Ket1,
}

impl Residual {
    pub fn instantiate(&self, info: &InfoState) -> Ket1 {
        [
            info.a * self.a_part[0] + info.b * self.b_part[0],
            info.a * self.a_part[1] + info.b * self.b_part[1],
        ]
    }

    pub fn apply(&self, corr: PauliCorrection) -> Residual {
        Residual { a_part: corr.apply(&self.a_part), b_part: corr.apply(&self.b_part) }
    }

    /// Squared norm of the instantiated residual, i.e. the path probability
    /// when the residual comes from an unnormalized child.
    pub fn norm_sqr(&self, info: &InfoState) -> f64 {
        let v = self.instantiate(info);
        v[0].norm_sqr() + v[1].norm_sqr()
    }

    /// `|<I| r>|^2` without normalizing `r`; equals probability times fidelity.
    pub fn weighted_fidelity(&self, info: &InfoState) -> f64 {
        let v = self.instantiate(info);
        (info.a.conj() * v[0] + info.b.conj() * v[1]).norm_sqr()
    }

    /// The 2x2 map `(a, b) -> residual`, columns `a_part`, `b_part`.
    pub fn as_matrix(&self) -> [[Complex64; 2]; 2] {
        [[self.a_part[0], self.b_part[0]], [self.a_part[1], self.b_part[1]]]
    }
}

/// Unnormalized three-qubit state `a*A + b*B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFamilyState {
    a: Ket3,
    b: Ket3,
}

/// `(a|0> + b|1>)_1 (cos chi |00> + sin chi |11>)_23`.
pub fn initial_family(chi: f64) -> Result<LinearFamilyState> {
    check_chi(chi)?;
    let (s, c) = chi.sin_cos();
    let mut a = [ZERO; 8];
    let mut b = [ZERO; 8];
    a[0b000] = Complex64::new(c, 0.0);
    a[0b011] = Complex64::new(s, 0.0);
    b[0b100] = Complex64::new(c, 0.0);
    b[0b111] = Complex64::new(s, 0.0);
    Ok(LinearFamilyState { a, b })
}

impl LinearFamilyState {
    pub fn from_parts(a: Ket3, b: Ket3) -> Self {
        LinearFamilyState { a, b }
    }

    pub fn a_part(&self) -> &Ket3 {
        &self.a
    }

    pub fn b_part(&self) -> &Ket3 {
        &self.b
    }

    /// `a*A + b*B`, not normalized.
    pub fn instantiate(&self, info: &InfoState) -> Ket3 {
        let mut out = [ZERO; 8];
        for (o, (x, y)) in out.iter_mut().zip(self.a.iter().zip(&self.b)) {
            *o = info.a * x + info.b * y;
        }
        out
    }

    /// `||a*A + b*B||^2`.
    pub fn branch_probability(&self, info: &InfoState) -> f64 {
        self.instantiate(info).iter().map(|z| z.norm_sqr()).sum()
    }

    /// True if no computational ket carries weight in both `A` and `B`.
    pub fn supports_disjoint(&self) -> bool {
        self.a.iter().zip(&self.b).all(|(x, y)| *x == ZERO || *y == ZERO)
    }

    /// Collapse `pair` onto `vector`: applies `|v><v|` on the pair to `A` and
    /// `B` independently. The child stays on the full register.
    pub fn project_pair(&self, pair: QubitPair, vector: &Ket2) -> Result<LinearFamilyState> {
        let norm: f64 = vector.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(Error::Contract(format!(
                "measurement vector not normalized: squared norm {norm}"
            )));
        }
        let project = |x: &Ket3| {
            let mut out = [ZERO; 8];
            for t in 0..2 {
                let overlap: Complex64 =
                    (0..4).map(|jk| vector[jk].conj() * x[pair.index(jk, t)]).sum();
                for jk in 0..4 {
                    out[pair.index(jk, t)] = vector[jk] * overlap;
                }
            }
            out
        };
        Ok(LinearFamilyState { a: project(&self.a), b: project(&self.b) })
    }

    /// `<v|_pair` applied to the family: the spectator residual left when the
    /// pair is found in `vector`.
    pub fn residual_after(&self, pair: QubitPair, vector: &Ket2) -> Residual {
        let contract = |x: &Ket3| {
            let mut r = [ZERO; 2];
            for (t, rt) in r.iter_mut().enumerate() {
                *rt = (0..4).map(|jk| vector[jk].conj() * x[pair.index(jk, t)]).sum();
            }
            r
        };
        Residual { a_part: contract(&self.a), b_part: contract(&self.b) }
    }

    /// Applies a Pauli to one qubit's tensor factor of both `A` and `B`.
    pub fn apply_correction(&self, qubit: Qubit, corr: PauliCorrection) -> LinearFamilyState {
        let m = corr.matrix();
        let shift = qubit.shift();
        let apply = |x: &Ket3| {
            let mut out = [ZERO; 8];
            for (idx, o) in out.iter_mut().enumerate() {
                let bit = (idx >> shift) & 1;
                let base = idx & !(1 << shift);
                *o = m[bit][0] * x[base] + m[bit][1] * x[base | (1 << shift)];
            }
            out
        };
        LinearFamilyState { a: apply(&self.a), b: apply(&self.b) }
    }

    /// `<I| rho_spectator |I>` for the normalized reduced state of `spectator`.
    pub fn fidelity_to_info(&self, info: &InfoState, spectator: Qubit) -> Result<f64> {
        let psi = self.instantiate(info);
        let others: Vec<Qubit> = [Qubit::ONE, Qubit::TWO, Qubit::THREE]
            .into_iter()
            .filter(|q| *q != spectator)
            .collect();
        let pair = QubitPair::new(others[0], others[1])?;
        let mut rho = [[ZERO; 2]; 2];
        for (s, row) in rho.iter_mut().enumerate() {
            for (t, entry) in row.iter_mut().enumerate() {
                *entry = (0..4).map(|jk| psi[pair.index(jk, s)] * psi[pair.index(jk, t)].conj()).sum();
            }
        }
        let trace = rho[0][0].re + rho[1][1].re;
        if !(trace > 0.0 && trace.is_finite()) {
            return Err(Error::UndefinedBranch("family has zero norm".into()));
        }
        let i = info.ket();
        let mut num = ZERO;
        for s in 0..2 {
            for t in 0..2 {
                num += i[s].conj() * rho[s][t] * i[t];
            }
        }
        Ok((num.re / trace).clamp(0.0, 1.0))
    }

    /// Reads the spectator residual off a collapsed child `|v>_pair ⊗ r`.
    ///
    /// The pair vector is recovered from the heaviest column, so the returned
    /// residual is defined up to one global phase shared by both parts.
    pub fn spectator_residual(&self, spectator: Qubit) -> Result<Residual> {
        let pair = pair_excluding(spectator);
        let column = |x: &Ket3, t: usize| -> Ket2 { std::array::from_fn(|jk| x[pair.index(jk, t)]) };
        let columns = [column(&self.a, 0), column(&self.a, 1), column(&self.b, 0), column(&self.b, 1)];
        let norm2 = |v: &Ket2| v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let (best, best_norm2) = columns
            .iter()
            .map(norm2)
            .enumerate()
            .fold((0, 0.0), |acc, (i, n)| if n > acc.1 { (i, n) } else { acc });
        if best_norm2 == 0.0 {
            return Err(Error::UndefinedBranch("family has zero norm".into()));
        }
        let scale = best_norm2.sqrt();
        let v: Ket2 = std::array::from_fn(|jk| columns[best][jk] / scale);
        let residual = self.residual_after(pair, &v);

        // product check: family must equal v ⊗ residual
        let mut err = 0.0;
        let mut total = 0.0;
        for (x, r) in [(&self.a, &residual.a_part), (&self.b, &residual.b_part)] {
            for t in 0..2 {
                for jk in 0..4 {
                    let z = x[pair.index(jk, t)];
                    err += (z - v[jk] * r[t]).norm_sqr();
                    total += z.norm_sqr();
                }
            }
        }
        if err > 1e-20 * total {
            return Err(Error::StructureViolation(format!(
                "family is not a product of a pair state and a spectator state (rel. err {:e})",
                (err / total).sqrt()
            )));
        }
        Ok(residual)
    }
}

pub(crate) fn pair_excluding(spectator: Qubit) -> QubitPair {
    match spectator.label() {
        1 => QubitPair { first: Qubit::TWO, second: Qubit::THREE },
        2 => QubitPair { first: Qubit::ONE, second: Qubit::THREE },
        _ => QubitPair { first: Qubit::ONE, second: Qubit::TWO },
    }
}

/// Compares two vectors up to one unit-modulus factor, aligned on the
/// largest-magnitude amplitude of `x`.
pub fn equal_up_to_phase(x: &[Complex64], y: &[Complex64], tol: f64) -> bool {
    if x.len() != y.len() {
        return false;
    }
    let (k, xk) = x
        .iter()
        .enumerate()
        .fold((0, 0.0), |acc, (i, z)| if z.norm() > acc.1 { (i, z.norm()) } else { acc });
    if xk == 0.0 {
        return y.iter().all(|z| z.norm() <= tol);
    }
    let ratio = y[k] / x[k];
    if ratio.norm() == 0.0 {
        return false;
    }
    let phase = ratio / ratio.norm();
    x.iter().zip(y).all(|(p, q)| (q - phase * p).norm() <= tol)
}

/// Whether `x` and `y` describe the same ray, i.e. agree after normalization
/// and phase alignment. `tol` bounds `1 - |<x|y>|^2 / (|x|^2 |y|^2)`.
pub fn same_ray(x: &[Complex64], y: &[Complex64], tol: f64) -> bool {
    let nx: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    let ny: f64 = y.iter().map(|z| z.norm_sqr()).sum();
    if nx == 0.0 || ny == 0.0 {
        return nx == ny;
    }
    let overlap: Complex64 = x.iter().zip(y).map(|(p, q)| p.conj() * q).sum();
    (1.0 - overlap.norm_sqr() / (nx * ny)).abs() <= tol
}
