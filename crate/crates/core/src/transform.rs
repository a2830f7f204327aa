//! The n-step single-particle matrix.
//!
//! Column `m_in` holds the amplitudes of `evolve(|m_in>, n)` over the
//! reachable modes at the output step, in canonical order. The Heisenberg
//! form used for operator bookkeeping, `a_in = sum_out conj(U[out, in]) a_out`,
//! is the conjugate transpose of this matrix.
//!
//! Only inputs that are actually fed are stored, so the matrix is an isometry
//! onto its image rather than a square unitary: the unused input ports carry
//! vacuum.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::golden::HEISENBERG_FIVE_STEP;
use crate::mode::{
    is_reachable, mode_at, mode_index, reachable_mode_count, reachable_modes, Coin, ModeLabel,
};
use crate::single::SinglePhotonState;
use crate::Amplitude;

#[derive(Debug, Clone, PartialEq)]
pub struct ModeMatrix {
    start: usize,
    steps: usize,
    inputs: Vec<ModeLabel>,
    columns: Vec<Vec<Amplitude>>,
}

/// The `steps`-step matrix for the four coin faces on site 0 at step 0.
pub fn build_mode_matrix(steps: usize) -> ModeMatrix {
    let inputs: Vec<_> = Coin::ALL.iter().map(|&c| ModeLabel::at(0, c)).collect();
    ModeMatrix::for_inputs(0, &inputs, steps).expect("origin modes are reachable at step 0")
}

impl ModeMatrix {
    /// Columns for the given input modes, which must be reachable at step
    /// `start`. Columns are evolved independently in parallel.
    pub fn for_inputs(start: usize, inputs: &[ModeLabel], steps: usize) -> Result<Self> {
        if let Some(m) = inputs.iter().find(|m| !is_reachable(start, m.q)) {
            return Err(Error::UnreachableMode { n: start, q: m.q });
        }
        let out_step = start + steps;
        let dim = reachable_mode_count(out_step);
        let columns = inputs
            .par_iter()
            .map(|m| {
                let evolved = SinglePhotonState::basis_at(*m, start)?.evolve(steps);
                let mut column = vec![Amplitude::default(); dim];
                for (out, c) in evolved.amplitudes() {
                    column[mode_index(out, out_step)?] = *c;
                }
                Ok(column)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ModeMatrix {
            start,
            steps,
            inputs: inputs.to_vec(),
            columns,
        })
    }

    /// Every reachable mode at step `start` as an input.
    pub fn full(start: usize, steps: usize) -> Self {
        let inputs: Vec<_> = reachable_modes(start).collect();
        Self::for_inputs(start, &inputs, steps).expect("reachable inputs")
    }

    pub fn start_step(&self) -> usize {
        self.start
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn output_step(&self) -> usize {
        self.start + self.steps
    }

    pub fn inputs(&self) -> &[ModeLabel] {
        &self.inputs
    }

    pub fn output_modes(&self) -> impl Iterator<Item = ModeLabel> {
        reachable_modes(self.output_step())
    }

    pub fn output_dimension(&self) -> usize {
        reachable_mode_count(self.output_step())
    }

    pub fn output_mode(&self, index: usize) -> ModeLabel {
        mode_at(index, self.output_step()).expect("index inside the output basis")
    }

    /// Dense column for `m_in`, indexed by output mode index.
    pub fn column(&self, m_in: &ModeLabel) -> Option<&[Amplitude]> {
        let i = self.inputs.iter().position(|m| m == m_in)?;
        Some(&self.columns[i])
    }

    /// Sparse view of a column as a single-photon state.
    pub fn column_state(&self, m_in: &ModeLabel) -> Option<SinglePhotonState> {
        let column = self.column(m_in)?;
        let out_step = self.output_step();
        let amplitudes = column
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Amplitude::default())
            .map(|(i, c)| (mode_at(i, out_step).expect("in range"), *c))
            .collect();
        SinglePhotonState::from_raw(out_step, amplitudes).ok()
    }

    /// `U[m_out, m_in]`; zero for unreachable outputs or unknown inputs.
    pub fn entry(&self, m_out: &ModeLabel, m_in: &ModeLabel) -> Amplitude {
        let Some(column) = self.column(m_in) else {
            return Amplitude::default();
        };
        mode_index(m_out, self.output_step())
            .map(|i| column[i])
            .unwrap_or_default()
    }

    /// Coefficient of `a_out` in the expansion of the input operator `a_in`.
    pub fn heisenberg_coefficient(&self, m_in: &ModeLabel, m_out: &ModeLabel) -> Amplitude {
        self.entry(m_out, m_in).conj()
    }

    /// Applies the matrix to an input amplitude vector over `inputs`.
    /// Returns amplitudes over output modes in canonical order.
    pub fn apply(
        &self,
        input: &BTreeMap<ModeLabel, Amplitude>,
    ) -> Result<BTreeMap<ModeLabel, Amplitude>> {
        let mut out = vec![Amplitude::default(); self.output_dimension()];
        for (m, a) in input {
            let column = self.column(m).ok_or(Error::UnreachableMode {
                n: self.start,
                q: m.q,
            })?;
            for (o, u) in out.iter_mut().zip(column) {
                *o += u * a;
            }
        }
        Ok(out
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c != Amplitude::default())
            .map(|(i, c)| (self.output_mode(i), c))
            .collect())
    }

    /// Largest entry of `|M^H M - I|` over the stored inputs.
    pub fn isometry_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.columns.iter().enumerate() {
            for (j, b) in self.columns.iter().enumerate() {
                let dot: Amplitude = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    #[cfg(test)]
    fn perturb(&mut self, m_out: &ModeLabel, m_in: &ModeLabel, delta: f64) {
        let i = self.inputs.iter().position(|m| m == m_in).unwrap();
        let j = mode_index(m_out, self.output_step()).unwrap();
        self.columns[i][j] += delta;
    }
}

/// Deviation of a five-step matrix from the printed operator expansions.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisenbergReport {
    /// Max absolute deviation per input operator, in `hx, hy, vx, vy` order.
    pub per_input: [f64; 4],
    pub max_deviation: f64,
}

/// Compares every listed coefficient of the five-step expansion, and checks
/// that unlisted reachable modes carry zero, against `matrix`.
pub fn verify_heisenberg_table(matrix: &ModeMatrix) -> Result<HeisenbergReport> {
    if matrix.output_step() != 5 || matrix.start_step() != 0 {
        return Err(Error::StepMismatch {
            left: matrix.output_step(),
            right: 5,
        });
    }
    let unit = 1.0 / (4.0 * 2f64.sqrt());
    let mut per_input = [0.0f64; 4];
    for (coin, terms) in HEISENBERG_FIVE_STEP.iter() {
        let m_in = ModeLabel::at(0, *coin);
        if matrix.column(&m_in).is_none() {
            return Err(Error::UnreachableMode { n: 0, q: 0 });
        }
        let expected: BTreeMap<ModeLabel, f64> = terms
            .iter()
            .map(|t| (ModeLabel::at(t.q, t.coin), f64::from(t.coefficient) * unit))
            .collect();
        let worst = matrix
            .output_modes()
            .map(|m_out| {
                let want = expected.get(&m_out).copied().unwrap_or(0.0);
                (matrix.heisenberg_coefficient(&m_in, &m_out) - want).norm()
            })
            .fold(0.0, f64::max);
        per_input[coin.index()] = worst;
    }
    let max_deviation = per_input.iter().copied().fold(0.0, f64::max);
    Ok(HeisenbergReport {
        per_input,
        max_deviation,
    })
}
