//! Product coherent-state inputs.
//!
//! Linear optics maps a product of coherent states onto another product of
//! coherent states whose amplitudes transform exactly like single-photon
//! amplitudes. Single-detection probabilities are taken in the weak-field
//! limit, where the chance of a click at a site is proportional to the mean
//! photon number there, so the normalized distribution is independent of the
//! overall field strength.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::golden::{CoherentRow, TABLE_II, TABLE_SITES};
use crate::mode::{is_reachable, Coin, ModeLabel};
use crate::transform::ModeMatrix;
use crate::Amplitude;

#[derive(Debug, Clone, PartialEq)]
pub struct CoherentField {
    n: usize,
    amplitudes: BTreeMap<ModeLabel, Amplitude>,
}

impl CoherentField {
    pub fn new(n: usize, amplitudes: BTreeMap<ModeLabel, Amplitude>) -> Result<Self> {
        if let Some(m) = amplitudes.keys().find(|m| !is_reachable(n, m.q)) {
            return Err(Error::UnreachableMode { n, q: m.q });
        }
        Ok(CoherentField { n, amplitudes })
    }

    /// `|alpha>` in `(0, h, x)` and `|beta>` in `(0, v, y)`.
    pub fn hx_vy(alpha: Amplitude, beta: Amplitude) -> Self {
        let amplitudes = BTreeMap::from([
            (ModeLabel::at(0, Coin::HX), alpha),
            (ModeLabel::at(0, Coin::VY), beta),
        ]);
        CoherentField { n: 0, amplitudes }
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

    /// Total mean photon number `sum |alpha_m|^2`.
    pub fn mean_photon_number(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// Mean photon number per site.
    pub fn site_means(&self) -> BTreeMap<i64, f64> {
        let mut means = BTreeMap::new();
        for (m, a) in &self.amplitudes {
            *means.entry(m.q).or_insert(0.0) += a.norm_sqr();
        }
        means
    }

    pub fn scaled(&self, factor: f64) -> Self {
        CoherentField {
            n: self.n,
            amplitudes: self
                .amplitudes
                .iter()
                .map(|(m, a)| (*m, a * factor))
                .collect(),
        }
    }

    pub fn evolve(&self, steps: usize) -> CoherentField {
        let inputs: Vec<_> = self.amplitudes.keys().copied().collect();
        let matrix = ModeMatrix::for_inputs(self.n, &inputs, steps)
            .expect("stored modes are reachable by construction");
        let amplitudes = matrix
            .apply(&self.amplitudes)
            .expect("columns built for all inputs");
        CoherentField {
            n: matrix.output_step(),
            amplitudes,
        }
    }

    /// Average photon number at each site divided by the total.
    pub fn normalized_detection(&self) -> Result<BTreeMap<i64, f64>> {
        let total = self.mean_photon_number();
        if total == 0.0 {
            return Err(Error::ZeroField);
        }
        Ok(self
            .site_means()
            .into_iter()
            .map(|(q, mu)| (q, mu / total))
            .collect())
    }

    /// Click statistics of the output field, scaled so that the input
    /// amplitudes are multiplied by `weak_amplitude`.
    ///
    /// Photon counts at different sites of a product coherent state are
    /// independent Poisson variables, so the joint click probability of two
    /// distinct sites factorizes and `sigma` vanishes identically.
    pub fn joint_detection(&self, q1: i64, q2: i64, weak_amplitude: f64) -> CoherentJoint {
        let means = self.site_means();
        let scale = weak_amplitude * weak_amplitude;
        let mu = |q: i64| means.get(&q).copied().unwrap_or(0.0) * scale;
        let click = |q: i64| -(-mu(q)).exp_m1();
        let (p1, p2) = (click(q1), click(q2));
        let joint = if q1 == q2 {
            // Two or more photons at the same site.
            let m = mu(q1);
            -(-m).exp_m1() - m * (-m).exp()
        } else {
            p1 * p2
        };
        let sigma = if q1 == q2 { joint - p1 * p2 } else { 0.0 };
        CoherentJoint {
            p1,
            p2,
            joint,
            sigma,
        }
    }
}

/// Detection statistics for a pair of sites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentJoint {
    pub p1: f64,
    pub p2: f64,
    pub joint: f64,
    pub sigma: f64,
}

pub fn evolve_coherent(field: &CoherentField, steps: usize) -> CoherentField {
    field.evolve(steps)
}

pub fn normalized_detection(field: &CoherentField) -> Result<BTreeMap<i64, f64>> {
    field.normalized_detection()
}

pub fn coherent_joint_detection(
    field: &CoherentField,
    q1: i64,
    q2: i64,
    weak_amplitude: f64,
) -> CoherentJoint {
    field.joint_detection(q1, q2, weak_amplitude)
}

/// Computed against printed values for one weak-field row.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentRowReport {
    pub label: &'static str,
    pub computed: [f64; 6],
    pub expected: [f64; 6],
    pub max_deviation: f64,
}

fn row_report(row: &CoherentRow) -> Result<CoherentRowReport> {
    let field = CoherentField::hx_vy(
        Amplitude::new(row.alpha, 0.0),
        Amplitude::new(row.beta, 0.0),
    )
    .evolve(crate::golden::TABLE_STEPS);
    let p = field.normalized_detection()?;
    let mut computed = [0.0; 6];
    let mut expected = [0.0; 6];
    for (i, q) in TABLE_SITES.iter().enumerate() {
        computed[i] = p.get(q).copied().unwrap_or(0.0);
        expected[i] = row.probability(*q).expect("table site");
    }
    let max_deviation = computed
        .iter()
        .zip(&expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(CoherentRowReport {
        label: row.label,
        computed,
        expected,
        max_deviation,
    })
}

/// All four weak-field rows after five steps.
pub fn weak_field_report() -> Vec<CoherentRowReport> {
    TABLE_II
        .iter()
        .map(|row| row_report(row).expect("nonzero rows"))
        .collect()
}
