//! Two photons in the bosonic Fock sector.
//!
//! A state is a table of coefficients over unordered mode pairs `{m1 <= m2}`.
//! Each coefficient multiplies the *normalized* Fock state of that pair: one
//! photon in each of `m1` and `m2`, or two photons in `m1` when the modes
//! coincide. With this convention `sum |c|^2 = 1` is the only normalization
//! condition; the `sqrt2` of `a_m^dag a_m^dag |0> = sqrt2 |2_m>` is handled
//! internally during evolution.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::mode::{is_reachable, mode_at, reachable_mode_count, Coin, Direction, ModeLabel};
use crate::transform::ModeMatrix;
use crate::{Amplitude, Polarization};

/// Tolerance on `sum |c|^2 = 1` for two-photon states.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Unordered pair of modes stored with `first <= second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairKey {
    first: ModeLabel,
    second: ModeLabel,
}

impl PairKey {
    pub fn new(a: ModeLabel, b: ModeLabel) -> Self {
        if a <= b {
            PairKey {
                first: a,
                second: b,
            }
        } else {
            PairKey {
                first: b,
                second: a,
            }
        }
    }

    pub fn first(&self) -> ModeLabel {
        self.first
    }

    pub fn second(&self) -> ModeLabel {
        self.second
    }

    pub fn is_doubly_occupied(&self) -> bool {
        self.first == self.second
    }

    /// Detection sites as `(larger, smaller)`.
    pub fn sites(&self) -> (i64, i64) {
        let (a, b) = (self.first.q, self.second.q);
        (a.max(b), a.min(b))
    }
}

impl fmt::Display for PairKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.first, self.second)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellKind {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PsiPlus,
        BellKind::PsiMinus,
        BellKind::PhiPlus,
        BellKind::PhiMinus,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BellKind::PsiPlus => "psi+",
            BellKind::PsiMinus => "psi-",
            BellKind::PhiPlus => "phi+",
            BellKind::PhiMinus => "phi-",
        }
    }

    /// The two separable components `(pol_h, pol_v)` and the relative sign.
    pub fn components(self) -> [(Polarization, Polarization); 2] {
        use Polarization::{X, Y};
        match self {
            BellKind::PsiPlus | BellKind::PsiMinus => [(X, Y), (Y, X)],
            BellKind::PhiPlus | BellKind::PhiMinus => [(X, X), (Y, Y)],
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            BellKind::PsiPlus | BellKind::PhiPlus => 1.0,
            BellKind::PsiMinus | BellKind::PhiMinus => -1.0,
        }
    }
}

/// The eight two-photon inputs: one photon enters along `h`, the other
/// along `v`, both on site 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TwoPhotonInput {
    /// Polarization of the `h` photon, then of the `v` photon.
    Separable(Polarization, Polarization),
    Bell(BellKind),
}

impl TwoPhotonInput {
    pub const ALL: [TwoPhotonInput; 8] = [
        TwoPhotonInput::Separable(Polarization::X, Polarization::X),
        TwoPhotonInput::Separable(Polarization::X, Polarization::Y),
        TwoPhotonInput::Separable(Polarization::Y, Polarization::Y),
        TwoPhotonInput::Separable(Polarization::Y, Polarization::X),
        TwoPhotonInput::Bell(BellKind::PsiPlus),
        TwoPhotonInput::Bell(BellKind::PsiMinus),
        TwoPhotonInput::Bell(BellKind::PhiPlus),
        TwoPhotonInput::Bell(BellKind::PhiMinus),
    ];

    pub fn label(&self) -> String {
        match self {
            TwoPhotonInput::Separable(a, b) => format!("{}{}", a.symbol(), b.symbol()),
            TwoPhotonInput::Bell(kind) => kind.label().to_string(),
        }
    }

    /// Weighted `(coefficient, h-photon face, v-photon face)` terms, each a
    /// product of two creation operators on distinct modes.
    pub fn terms(&self) -> Vec<(f64, Coin, Coin)> {
        let face = |dir, pol| Coin::new(dir, pol);
        match *self {
            TwoPhotonInput::Separable(a, b) => {
                vec![(1.0, face(Direction::H, a), face(Direction::V, b))]
            }
            TwoPhotonInput::Bell(kind) => {
                let [(a1, b1), (a2, b2)] = kind.components();
                vec![
                    (
                        FRAC_1_SQRT_2,
                        face(Direction::H, a1),
                        face(Direction::V, b1),
                    ),
                    (
                        kind.sign() * FRAC_1_SQRT_2,
                        face(Direction::H, a2),
                        face(Direction::V, b2),
                    ),
                ]
            }
        }
    }

    pub fn state(&self) -> TwoPhotonState {
        match *self {
            TwoPhotonInput::Separable(a, b) => separable_input(a, b),
            TwoPhotonInput::Bell(kind) => bell_input(kind),
        }
    }
}

impl fmt::Display for TwoPhotonInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `s` after `n` further steps; same as [`TwoPhotonState::evolve`].
pub fn evolve_two_photon(s: &TwoPhotonState, n: usize) -> TwoPhotonState {
    s.evolve(n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhotonState {
    n: usize,
    amplitudes: BTreeMap<PairKey, Amplitude>,
}

/// One photon in `(0, h, pol_h)` and one in `(0, v, pol_v)`.
pub fn separable_input(pol_h: Polarization, pol_v: Polarization) -> TwoPhotonState {
    let key = PairKey::new(
        ModeLabel::new(0, Direction::H, pol_h),
        ModeLabel::new(0, Direction::V, pol_v),
    );
    TwoPhotonState {
        n: 0,
        amplitudes: BTreeMap::from([(key, Amplitude::new(1.0, 0.0))]),
    }
}

pub fn bell_input(kind: BellKind) -> TwoPhotonState {
    let mut amplitudes = BTreeMap::new();
    for (w, a, b) in TwoPhotonInput::Bell(kind).terms() {
        let key = PairKey::new(ModeLabel::at(0, a), ModeLabel::at(0, b));
        *amplitudes.entry(key).or_insert_with(Amplitude::default) += w;
    }
    TwoPhotonState { n: 0, amplitudes }
}

impl TwoPhotonState {
    pub fn new(n: usize, amplitudes: BTreeMap<PairKey, Amplitude>) -> Result<Self> {
        let s = Self::from_raw(n, amplitudes)?;
        let norm_sqr = s.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(s)
    }

    /// Reachability is checked, normalization is not.
    pub fn from_raw(n: usize, amplitudes: BTreeMap<PairKey, Amplitude>) -> Result<Self> {
        for key in amplitudes.keys() {
            for m in [key.first, key.second] {
                if !is_reachable(n, m.q) {
                    return Err(Error::UnreachableMode { n, q: m.q });
                }
            }
        }
        Ok(TwoPhotonState { n, amplitudes })
    }

    pub fn steps(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &BTreeMap<PairKey, Amplitude> {
        &self.amplitudes
    }

    pub fn amplitude(&self, a: ModeLabel, b: ModeLabel) -> Amplitude {
        self.amplitudes
            .get(&PairKey::new(a, b))
            .copied()
            .unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|c| c.norm_sqr()).sum()
    }

    /// Modes carrying at least one photon in some component, ascending.
    pub fn support_modes(&self) -> Vec<ModeLabel> {
        let mut modes: Vec<_> = self
            .amplitudes
            .keys()
            .flat_map(|k| [k.first, k.second])
            .collect();
        modes.sort();
        modes.dedup();
        modes
    }

    /// Evolves both photons through `steps` steps of the walk by rewriting
    /// every creation operator through the single-particle matrix.
    pub fn evolve(&self, steps: usize) -> TwoPhotonState {
        let inputs = self.support_modes();
        let matrix = ModeMatrix::for_inputs(self.n, &inputs, steps)
            .expect("stored modes are reachable by construction");
        let pairs = self.amplitudes.iter().map(|(key, c)| {
            let u = matrix
                .column(&key.first)
                .expect("column built for every input");
            let w = matrix
                .column(&key.second)
                .expect("column built for every input");
            (*c, key.is_doubly_occupied(), u, w)
        });
        let amplitudes = lift_pairs(matrix.output_step(), pairs);
        TwoPhotonState {
            n: matrix.output_step(),
            amplitudes,
        }
    }

    /// Polarization- and direction-insensitive joint detection statistics.
    pub fn joint_probability(&self) -> JointDistribution {
        let mut table = BTreeMap::new();
        for (key, c) in &self.amplitudes {
            *table.entry(key.sites()).or_insert(0.0) += c.norm_sqr();
        }
        JointDistribution { n: self.n, table }
    }

    /// Joint statistics with polarization-resolving detectors (direction is
    /// still summed over).
    pub fn joint_probability_resolved(&self) -> BTreeMap<(Detector, Detector), f64> {
        let mut table = BTreeMap::new();
        for (key, c) in &self.amplitudes {
            let a = Detector {
                q: key.first.q,
                pol: key.first.pol,
            };
            let b = Detector {
                q: key.second.q,
                pol: key.second.pol,
            };
            let k = if a >= b { (a, b) } else { (b, a) };
            *table.entry(k).or_insert(0.0) += c.norm_sqr();
        }
        table
    }

    pub fn marginal_at_least_one(&self) -> BTreeMap<i64, f64> {
        self.joint_probability().marginal_at_least_one()
    }

    pub fn correlation(&self, q1: i64, q2: i64) -> f64 {
        self.joint_probability().correlation(q1, q2)
    }

    /// First-quantized wavefunction `psi(m1, m2)` over the support modes:
    /// `c` on the diagonal, `c/sqrt2` on both off-diagonal entries.
    pub fn symmetric_matrix(&self) -> (Vec<ModeLabel>, DMatrix<Amplitude>) {
        let modes = self.support_modes();
        let index = |m: &ModeLabel| modes.binary_search(m).expect("support mode");
        let d = modes.len();
        let mut psi = DMatrix::from_element(d, d, Amplitude::default());
        for (key, c) in &self.amplitudes {
            let (i, j) = (index(&key.first), index(&key.second));
            if i == j {
                psi[(i, i)] += c;
            } else {
                psi[(i, j)] += c * FRAC_1_SQRT_2;
                psi[(j, i)] += c * FRAC_1_SQRT_2;
            }
        }
        (modes, psi)
    }

    /// Number of singular values of [`Self::symmetric_matrix`] above
    /// `rel_tol` times the largest one.
    pub fn schmidt_rank(&self, rel_tol: f64) -> usize {
        let (_, psi) = self.symmetric_matrix();
        if psi.is_empty() {
            return 0;
        }
        let sv = psi.singular_values();
        let max = sv.iter().copied().fold(0.0, f64::max);
        sv.iter().filter(|s| **s > rel_tol * max).count()
    }

    /// True when the first-quantized amplitude is not of the form
    /// `phi(m1) phi(m2)`, i.e. the symmetric matrix has rank above one.
    ///
    /// The rank is invariant under the walk (`psi -> U psi U^T`), so a
    /// separable input `a_A^dag a_B^dag |0>` with `A != B` has rank two at
    /// every step, and a Bell input rank four.
    pub fn is_entangled(&self, rel_tol: f64) -> bool {
        self.schmidt_rank(rel_tol) > 1
    }
}

/// Polarization-resolving detector at a site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Detector {
    pub q: i64,
    pub pol: Polarization,
}

/// `P(q1, q2)` keyed by `(q1, q2)` with `q1 >= q2`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    n: usize,
    table: BTreeMap<(i64, i64), f64>,
}

impl JointDistribution {
    pub fn steps(&self) -> usize {
        self.n
    }

    /// Symmetric lookup; zero for pairs never populated.
    pub fn get(&self, q1: i64, q2: i64) -> f64 {
        self.table
            .get(&(q1.max(q2), q1.min(q2)))
            .copied()
            .unwrap_or(0.0)
    }

    /// Entries with `q1 >= q2` in ascending key order.
    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), f64)> + '_ {
        self.table.iter().map(|(k, v)| (*k, *v))
    }

    pub fn total(&self) -> f64 {
        self.table.values().sum()
    }

    /// `P(q1) = sum_{q2} P(q1, q2)`, the coincident term counted once.
    pub fn marginal_at_least_one(&self) -> BTreeMap<i64, f64> {
        let mut margin = BTreeMap::new();
        for (&(a, b), &p) in &self.table {
            *margin.entry(a).or_insert(0.0) += p;
            if a != b {
                *margin.entry(b).or_insert(0.0) += p;
            }
        }
        margin
    }

    /// `sigma = P(q1, q2) - P(q1) P(q2)`.
    pub fn correlation(&self, q1: i64, q2: i64) -> f64 {
        let margin = self.marginal_at_least_one();
        let p = |q| margin.get(&q).copied().unwrap_or(0.0);
        self.get(q1, q2) - p(q1) * p(q2)
    }

    /// Largest `|sigma|` over all pairs of populated sites.
    pub fn max_abs_correlation(&self) -> f64 {
        let margin = self.marginal_at_least_one();
        let sites: Vec<i64> = margin.keys().copied().collect();
        let mut worst = 0.0f64;
        for &a in &sites {
            for &b in &sites {
                worst = worst.max((self.get(a, b) - margin[&a] * margin[&b]).abs());
            }
        }
        worst
    }

    /// All sites carrying probability, ascending.
    pub fn sites(&self) -> Vec<i64> {
        self.marginal_at_least_one().keys().copied().collect()
    }
}

/// Expands products of two rewritten creation operators into canonical pair
/// coefficients.
///
/// Each item is `(c, coincident, u, w)`: the input coefficient, whether the
/// input pair is a doubly occupied mode, and the dense output columns of its
/// two modes at step `out_step`. Summation order is fixed, so results are
/// bitwise reproducible.
pub(crate) fn lift_pairs<'a>(
    out_step: usize,
    pairs: impl IntoIterator<Item = (Amplitude, bool, &'a [Amplitude], &'a [Amplitude])>,
) -> BTreeMap<PairKey, Amplitude> {
    let dim = reachable_mode_count(out_step);
    let tri = |i: usize, j: usize| i * (2 * dim - i + 1) / 2 + (j - i);
    let mut acc = vec![Amplitude::default(); dim * (dim + 1) / 2];
    let nonzero = |col: &[Amplitude]| -> Vec<usize> {
        col.iter()
            .enumerate()
            .filter(|(_, c)| **c != Amplitude::default())
            .map(|(i, _)| i)
            .collect()
    };
    for (c, coincident, u, w) in pairs {
        // Normalized |2_m> is a_m^dag a_m^dag |0> / sqrt2.
        let weight = if coincident { c * FRAC_1_SQRT_2 } else { c };
        let nz_w = nonzero(w);
        for a in nonzero(u) {
            let ua = weight * u[a];
            for &b in &nz_w {
                let term = ua * w[b];
                if a == b {
                    acc[tri(a, a)] += term * SQRT_2;
                } else {
                    acc[tri(a.min(b), a.max(b))] += term;
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    for i in 0..dim {
        for j in i..dim {
            let c = acc[tri(i, j)];
            if c != Amplitude::default() {
                let key = PairKey {
                    first: mode_at(i, out_step).expect("in range"),
                    second: mode_at(j, out_step).expect("in range"),
                };
                out.insert(key, c);
            }
        }
    }
    out
}
