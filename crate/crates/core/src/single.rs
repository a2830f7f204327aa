//! Exact single-photon walk.
//!
//! One step is the half-wave plate followed by the polarizing beam splitter:
//!
//! ```text
//! |q,h,x> -> (|q+1,h,x> + |q-1,v,y>)/sqrt2
//! |q,h,y> -> (|q+1,h,x> - |q-1,v,y>)/sqrt2
//! |q,v,x> -> (|q-1,v,x> + |q+1,h,y>)/sqrt2
//! |q,v,y> -> (|q-1,v,x> - |q+1,h,y>)/sqrt2
//! ```
//!
//! No amplitude is ever pruned.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};
use crate::mode::{is_reachable, Coin, Direction, ModeLabel, Polarization};
use crate::Amplitude;

/// Tolerance on `sum |c|^2 = 1` for validated states.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Largest step count for which [`classical_binomial`] is evaluated with
/// exact integer arithmetic.
pub const EXACT_BINOMIAL_MAX_STEPS: usize = 64;

/// Coin state at a single site: amplitudes over `hx, hy, vx, vy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinState([Amplitude; 4]);

impl CoinState {
    pub fn new(coefficients: [Amplitude; 4]) -> Result<Self> {
        let norm_sqr: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(CoinState(coefficients))
    }

    pub fn basis(coin: Coin) -> Self {
        let mut c = [Amplitude::new(0.0, 0.0); 4];
        c[coin.index()] = Amplitude::new(1.0, 0.0);
        CoinState(c)
    }

    /// `(|a> + sign |b>)/sqrt2` for two distinct faces.
    pub fn equal_superposition(a: Coin, b: Coin, sign: f64) -> Self {
        assert_ne!(a, b, "superposition needs two distinct faces");
        let mut c = [Amplitude::new(0.0, 0.0); 4];
        c[a.index()] = Amplitude::new(FRAC_1_SQRT_2, 0.0);
        c[b.index()] = Amplitude::new(sign.signum() * FRAC_1_SQRT_2, 0.0);
        CoinState(c)
    }

    pub fn coefficients(&self) -> &[Amplitude; 4] {
        &self.0
    }

    pub fn coefficient(&self, coin: Coin) -> Amplitude {
        self.0[coin.index()]
    }

    /// The walker state at step 0 with this coin on site 0.
    pub fn to_state(&self) -> SinglePhotonState {
        let amplitudes = Coin::ALL
            .iter()
            .filter(|c| self.0[c.index()] != Amplitude::new(0.0, 0.0))
            .map(|&c| (ModeLabel::at(0, c), self.0[c.index()]))
            .collect();
        SinglePhotonState { n: 0, amplitudes }
    }
}

/// Sparse single-photon state after `n` steps.
#[derive(Debug, Clone, PartialEq)]
pub struct SinglePhotonState {
    n: usize,
    amplitudes: BTreeMap<ModeLabel, Amplitude>,
}

impl SinglePhotonState {
    /// Validated constructor: every mode must be reachable and the state
    /// normalized.
    pub fn new(n: usize, amplitudes: BTreeMap<ModeLabel, Amplitude>) -> Result<Self> {
        let s = Self::from_raw(n, amplitudes)?;
        let norm_sqr = s.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(s)
    }

    /// Checks reachability only. Used for unnormalized vectors such as
    /// linear combinations and approximate states.
    pub fn from_raw(n: usize, amplitudes: BTreeMap<ModeLabel, Amplitude>) -> Result<Self> {
        if let Some(m) = amplitudes.keys().find(|m| !is_reachable(n, m.q)) {
            return Err(Error::UnreachableMode { n, q: m.q });
        }
        Ok(SinglePhotonState { n, amplitudes })
    }

    pub fn empty(n: usize) -> Self {
        SinglePhotonState {
            n,
            amplitudes: BTreeMap::new(),
        }
    }

    /// `|0, 0, coin>`.
    pub fn basis(coin: Coin) -> Self {
        CoinState::basis(coin).to_state()
    }

    /// A single basis mode at step `n`.
    pub fn basis_at(mode: ModeLabel, n: usize) -> Result<Self> {
        Self::from_raw(n, BTreeMap::from([(mode, Amplitude::new(1.0, 0.0))]))
    }

    pub fn steps(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &BTreeMap<ModeLabel, Amplitude> {
        &self.amplitudes
    }

    pub fn amplitude(&self, m: &ModeLabel) -> Amplitude {
        self.amplitudes.get(m).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn scaled(&self, factor: Amplitude) -> Self {
        SinglePhotonState {
            n: self.n,
            amplitudes: self
                .amplitudes
                .iter()
                .map(|(m, c)| (*m, c * factor))
                .collect(),
        }
    }

    /// Sum of two states at the same step.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        if other.n != self.n {
            return Err(Error::StepMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut amplitudes = self.amplitudes.clone();
        for (m, c) in &other.amplitudes {
            *amplitudes.entry(*m).or_default() += c;
        }
        Ok(SinglePhotonState {
            n: self.n,
            amplitudes,
        })
    }

    /// One walk step: half-wave plate, then polarizing beam splitter.
    pub fn step(&self) -> Self {
        let mut next: BTreeMap<ModeLabel, Amplitude> = BTreeMap::new();
        for (m, &c) in &self.amplitudes {
            let half = c * FRAC_1_SQRT_2;
            // Hadamard on polarization: x -> (x + y), y -> (x - y).
            let (to_x, to_y) = match m.pol {
                Polarization::X => (half, half),
                Polarization::Y => (half, -half),
            };
            for (pol, amp) in [(Polarization::X, to_x), (Polarization::Y, to_y)] {
                let out = beam_splitter(m.dir, pol);
                let target = ModeLabel::new(m.q + out.dir.displacement(), out.dir, out.pol);
                *next.entry(target).or_default() += amp;
            }
        }
        SinglePhotonState {
            n: self.n + 1,
            amplitudes: next,
        }
    }

    /// `steps` applications of [`Self::step`].
    pub fn evolve(&self, steps: usize) -> Self {
        (0..steps).fold(self.clone(), |s, _| s.step())
    }

    /// Detection probability per site, summed over the four coin faces.
    pub fn position_distribution(&self) -> BTreeMap<i64, f64> {
        let mut p = BTreeMap::new();
        for (m, c) in &self.amplitudes {
            *p.entry(m.q).or_insert(0.0) += c.norm_sqr();
        }
        p
    }

    /// Image under `h <-> v`, `q -> -q`.
    pub fn mirrored(&self) -> Self {
        SinglePhotonState {
            n: self.n,
            amplitudes: self
                .amplitudes
                .iter()
                .map(|(m, c)| (m.mirrored(), *c))
                .collect(),
        }
    }
}

/// Beam-splitter output face: x-polarized light keeps its direction,
/// y-polarized light is reflected into the other arm.
fn beam_splitter(dir: Direction, pol: Polarization) -> Coin {
    match pol {
        Polarization::X => Coin::new(dir, pol),
        Polarization::Y => Coin::new(dir.flipped(), pol),
    }
}

/// Exact `C(n, k)` for `n <= 64`.
pub fn binomial_coefficient(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// Probability that a classical walker taking `n` fair `+-1` steps ends at
/// site `q`.
pub fn classical_binomial(n: usize, q: i64) -> Result<f64> {
    if (n as i64 + q).rem_euclid(2) != 0 {
        return Err(Error::OddParity { n, q });
    }
    if !is_reachable(n, q) {
        return Err(Error::UnreachableMode { n, q });
    }
    let k = ((n as i64 + q) / 2) as u64;
    if n <= EXACT_BINOMIAL_MAX_STEPS {
        let numerator = binomial_coefficient(n as u64, k);
        // 2^n is a power of two, so the division below is exact apart from
        // the single rounding of the numerator.
        Ok(numerator as f64 / 2f64.powi(n as i32))
    } else {
        let ln = ln_factorial(n as u64)
            - ln_factorial(k)
            - ln_factorial(n as u64 - k)
            - n as f64 * std::f64::consts::LN_2;
        Ok(ln.exp())
    }
}
