//! Reference values for five-step regression checks.
//!
//! Two-photon tables store `128 * P(q1, q2)` with rows indexed by `q2` and
//! columns by `q1`, both over [`TABLE_SITES`]. Single-particle coefficients
//! are stored as integers in units of `1/(4 sqrt2)`.

use crate::mode::Coin;
use crate::two_photon::{BellKind, TwoPhotonInput};
use crate::Polarization::{X, Y};

/// Step count of every golden table.
pub const TABLE_STEPS: usize = 5;

/// Scale applied to the printed two-photon probabilities.
pub const TABLE_SCALE: f64 = 128.0;

/// Sites reachable after five steps, ascending.
pub const TABLE_SITES: [i64; 6] = [-5, -3, -1, 1, 3, 5];

#[derive(Debug, Clone, Copy)]
pub struct JointTable {
    pub label: &'static str,
    pub input: TwoPhotonInput,
    /// `scaled[row][col] = 128 * P(q1 = TABLE_SITES[col], q2 = TABLE_SITES[row])`.
    pub scaled: [[f64; 6]; 6],
    /// `128 * P(q1)` for at least one photon at `q1`.
    pub margins: [f64; 6],
}

impl JointTable {
    pub fn probability(&self, q1: i64, q2: i64) -> Option<f64> {
        let col = TABLE_SITES.iter().position(|&q| q == q1)?;
        let row = TABLE_SITES.iter().position(|&q| q == q2)?;
        Some(self.scaled[row][col] / TABLE_SCALE)
    }

    pub fn margin(&self, q1: i64) -> Option<f64> {
        let col = TABLE_SITES.iter().position(|&q| q == q1)?;
        Some(self.margins[col] / TABLE_SCALE)
    }
}

/// Separable Fock inputs after five steps.
pub const TABLE_I: [JointTable; 4] = [
    JointTable {
        label: "I(a)",
        input: TwoPhotonInput::Separable(X, X),
        scaled: [
            [0.25, 1.5, 2.0, 2.0, 1.5, 0.5],
            [1.5, 4.25, 18.0, 10.0, 16.5, 1.5],
            [2.0, 18.0, 6.0, 20.0, 10.0, 2.0],
            [2.0, 10.0, 20.0, 6.0, 18.0, 2.0],
            [1.5, 16.5, 10.0, 18.0, 4.25, 1.5],
            [0.5, 1.5, 2.0, 2.0, 1.5, 0.25],
        ],
        margins: [7.75, 51.75, 58.0, 58.0, 51.75, 7.75],
    },
    JointTable {
        label: "I(b)",
        input: TwoPhotonInput::Separable(X, Y),
        scaled: [
            [0.25, 1.0, 3.0, 3.0, 0.5, 0.0],
            [1.0, 1.25, 7.0, 9.0, 4.0, 0.5],
            [3.0, 7.0, 8.0, 32.0, 5.0, 1.0],
            [3.0, 9.0, 32.0, 10.0, 29.0, 3.0],
            [0.5, 4.0, 5.0, 29.0, 7.25, 3.0],
            [0.0, 0.5, 1.0, 3.0, 3.0, 0.25],
        ],
        margins: [7.75, 22.75, 56.0, 86.0, 48.75, 7.75],
    },
    JointTable {
        label: "I(c)",
        input: TwoPhotonInput::Separable(Y, Y),
        scaled: [
            [0.25, 1.5, 2.0, 2.0, 1.5, 0.5],
            [1.5, 2.25, 6.0, 6.0, 4.5, 1.5],
            [2.0, 6.0, 12.0, 56.0, 6.0, 2.0],
            [2.0, 6.0, 56.0, 12.0, 6.0, 2.0],
            [1.5, 4.5, 6.0, 6.0, 2.25, 1.5],
            [0.5, 1.5, 2.0, 2.0, 1.5, 0.25],
        ],
        margins: [7.75, 21.75, 84.0, 84.0, 21.75, 7.75],
    },
    JointTable {
        label: "I(d)",
        input: TwoPhotonInput::Separable(Y, X),
        scaled: [
            [0.25, 3.0, 3.0, 1.0, 0.5, 0.0],
            [3.0, 7.25, 29.0, 5.0, 4.0, 0.5],
            [3.0, 29.0, 10.0, 32.0, 9.0, 3.0],
            [1.0, 5.0, 32.0, 8.0, 7.0, 3.0],
            [0.5, 4.0, 9.0, 7.0, 1.25, 1.0],
            [0.0, 0.5, 3.0, 3.0, 1.0, 0.25],
        ],
        margins: [7.75, 48.75, 86.0, 56.0, 22.75, 7.75],
    },
];

/// Bell inputs after five steps.
pub const TABLE_III: [JointTable; 4] = [
    JointTable {
        label: "III(a)",
        input: TwoPhotonInput::Bell(BellKind::PsiPlus),
        scaled: [
            [0.0, 1.0, 3.0, 3.0, 1.0, 0.0],
            [1.0, 4.0, 15.0, 7.0, 8.0, 1.0],
            [3.0, 15.0, 9.0, 34.0, 7.0, 3.0],
            [3.0, 7.0, 34.0, 9.0, 15.0, 3.0],
            [1.0, 8.0, 7.0, 15.0, 4.0, 1.0],
            [0.0, 1.0, 3.0, 3.0, 1.0, 0.0],
        ],
        margins: [8.0, 36.0, 71.0, 71.0, 36.0, 8.0],
    },
    JointTable {
        label: "III(b)",
        input: TwoPhotonInput::Bell(BellKind::PsiMinus),
        scaled: [
            [0.5, 3.0, 3.0, 1.0, 0.0, 0.0],
            [3.0, 4.5, 21.0, 7.0, 0.0, 0.0],
            [3.0, 21.0, 9.0, 30.0, 7.0, 1.0],
            [1.0, 7.0, 30.0, 9.0, 21.0, 3.0],
            [0.0, 0.0, 7.0, 21.0, 4.5, 3.0],
            [0.0, 0.0, 1.0, 3.0, 3.0, 0.5],
        ],
        margins: [7.5, 35.5, 71.0, 71.0, 35.5, 7.5],
    },
    JointTable {
        label: "III(c)",
        input: TwoPhotonInput::Bell(BellKind::PhiPlus),
        scaled: [
            [0.0, 0.0, 1.0, 3.0, 3.0, 1.0],
            [0.0, 2.0, 7.0, 9.0, 17.0, 3.0],
            [1.0, 7.0, 9.0, 42.0, 9.0, 3.0],
            [3.0, 9.0, 42.0, 9.0, 7.0, 1.0],
            [3.0, 17.0, 9.0, 7.0, 2.0, 0.0],
            [1.0, 3.0, 3.0, 1.0, 0.0, 0.0],
        ],
        margins: [8.0, 38.0, 71.0, 71.0, 38.0, 8.0],
    },
    JointTable {
        label: "III(d)",
        input: TwoPhotonInput::Bell(BellKind::PhiMinus),
        scaled: [
            [0.5, 3.0, 3.0, 1.0, 0.0, 0.0],
            [3.0, 4.5, 17.0, 7.0, 4.0, 0.0],
            [3.0, 17.0, 9.0, 34.0, 7.0, 1.0],
            [1.0, 7.0, 34.0, 9.0, 17.0, 3.0],
            [0.0, 4.0, 7.0, 17.0, 4.5, 3.0],
            [0.0, 0.0, 1.0, 3.0, 3.0, 0.5],
        ],
        margins: [7.5, 35.5, 71.0, 71.0, 35.5, 7.5],
    },
];

/// One weak-field coherent row: input amplitudes in units of `f` and the
/// normalized detection probabilities as `(numerator, denominator)`.
#[derive(Debug, Clone, Copy)]
pub struct CoherentRow {
    pub label: &'static str,
    pub alpha: f64,
    pub beta: f64,
    pub probabilities: [(u32, u32); 6],
}

impl CoherentRow {
    pub fn probability(&self, q: i64) -> Option<f64> {
        let i = TABLE_SITES.iter().position(|&s| s == q)?;
        let (num, den) = self.probabilities[i];
        Some(f64::from(num) / f64::from(den))
    }
}

/// Coherent inputs `|alpha>_hx |beta>_vy` after five steps.
pub const TABLE_II: [CoherentRow; 4] = [
    CoherentRow {
        label: "f f",
        alpha: 1.0,
        beta: 1.0,
        probabilities: [(1, 16), (1, 8), (3, 8), (3, 8), (1, 16), (0, 1)],
    },
    CoherentRow {
        label: "f -f",
        alpha: 1.0,
        beta: -1.0,
        probabilities: [(0, 1), (1, 16), (1, 8), (3, 8), (3, 8), (1, 16)],
    },
    CoherentRow {
        label: "f 0",
        alpha: 1.0,
        beta: 0.0,
        probabilities: [(1, 32), (3, 32), (3, 8), (1, 8), (11, 32), (1, 32)],
    },
    CoherentRow {
        label: "0 f",
        alpha: 0.0,
        beta: 1.0,
        probabilities: [(1, 32), (3, 32), (1, 8), (5, 8), (3, 32), (1, 32)],
    },
];

/// One listed term `coefficient * a_out` of an input annihilation operator,
/// in units of `1/(4 sqrt2)`.
#[derive(Debug, Clone, Copy)]
pub struct OperatorTerm {
    pub q: i64,
    pub coin: Coin,
    pub coefficient: i32,
}

const fn term(q: i64, coin: Coin, coefficient: i32) -> OperatorTerm {
    OperatorTerm {
        q,
        coin,
        coefficient,
    }
}

/// Five-step input operators `a_in^(0,0)` expanded over output operators.
/// Reachable output modes not listed carry coefficient zero.
pub const HEISENBERG_FIVE_STEP: [(Coin, [OperatorTerm; 16]); 4] = [
    (
        Coin::HX,
        [
            term(-5, Coin::VX, 1),
            term(-3, Coin::HY, 1),
            term(-3, Coin::VX, 1),
            term(-3, Coin::VY, -1),
            term(-1, Coin::HX, 1),
            term(-1, Coin::HY, 3),
            term(-1, Coin::VX, 1),
            term(-1, Coin::VY, 1),
            term(1, Coin::HX, 1),
            term(1, Coin::HY, 1),
            term(1, Coin::VX, 1),
            term(1, Coin::VY, -1),
            term(3, Coin::HX, -3),
            term(3, Coin::HY, -1),
            term(3, Coin::VY, 1),
            term(5, Coin::HX, 1),
        ],
    ),
    (
        Coin::HY,
        [
            term(-5, Coin::VX, -1),
            term(-3, Coin::HY, -1),
            term(-3, Coin::VX, 1),
            term(-3, Coin::VY, 1),
            term(-1, Coin::HX, -1),
            term(-1, Coin::HY, -1),
            term(-1, Coin::VX, 3),
            term(-1, Coin::VY, -3),
            term(1, Coin::HX, 1),
            term(1, Coin::HY, -1),
            term(1, Coin::VX, 1),
            term(1, Coin::VY, 1),
            term(3, Coin::HX, -1),
            term(3, Coin::HY, -1),
            term(3, Coin::VY, 1),
            term(5, Coin::HX, 1),
        ],
    ),
    (
        Coin::VX,
        [
            term(-5, Coin::VX, 1),
            term(-3, Coin::HY, 1),
            term(-3, Coin::VX, -3),
            term(-3, Coin::VY, -1),
            term(-1, Coin::HX, 1),
            term(-1, Coin::HY, -1),
            term(-1, Coin::VX, 1),
            term(-1, Coin::VY, 1),
            term(1, Coin::HX, 1),
            term(1, Coin::HY, 1),
            term(1, Coin::VX, 1),
            term(1, Coin::VY, 3),
            term(3, Coin::HX, 1),
            term(3, Coin::HY, -1),
            term(3, Coin::VY, 1),
            term(5, Coin::HX, 1),
        ],
    ),
    (
        Coin::VY,
        [
            term(-5, Coin::VX, 1),
            term(-3, Coin::HY, 1),
            term(-3, Coin::VX, -1),
            term(-3, Coin::VY, -1),
            term(-1, Coin::HX, 1),
            term(-1, Coin::HY, 1),
            term(-1, Coin::VX, 1),
            term(-1, Coin::VY, -1),
            term(1, Coin::HX, 3),
            term(1, Coin::HY, -3),
            term(1, Coin::VX, -1),
            term(1, Coin::VY, -1),
            term(3, Coin::HX, 1),
            term(3, Coin::HY, 1),
            term(3, Coin::VY, -1),
            term(5, Coin::HX, -1),
        ],
    ),
];

/// One factor `|(a alpha + b beta)/(4 sqrt2)>` of the five-step coherent
/// output for input `|alpha>_hx |beta>_vy`.
#[derive(Debug, Clone, Copy)]
pub struct CoherentTerm {
    pub q: i64,
    pub coin: Coin,
    pub alpha: i32,
    pub beta: i32,
}

const fn cterm(q: i64, coin: Coin, alpha: i32, beta: i32) -> CoherentTerm {
    CoherentTerm {
        q,
        coin,
        alpha,
        beta,
    }
}

pub const COHERENT_FIVE_STEP: [CoherentTerm; 16] = [
    cterm(-5, Coin::VX, 1, 1),
    cterm(-3, Coin::HY, 1, 1),
    cterm(-3, Coin::VX, 1, -1),
    cterm(-3, Coin::VY, -1, -1),
    cterm(-1, Coin::HX, 1, 1),
    cterm(-1, Coin::HY, 3, 1),
    cterm(-1, Coin::VX, 1, 1),
    cterm(-1, Coin::VY, 1, -1),
    cterm(1, Coin::HX, 1, 3),
    cterm(1, Coin::HY, 1, -3),
    cterm(1, Coin::VX, 1, -1),
    cterm(1, Coin::VY, -1, -1),
    cterm(3, Coin::HX, -3, 1),
    cterm(3, Coin::HY, -1, 1),
    cterm(3, Coin::VY, 1, -1),
    cterm(5, Coin::HX, 1, -1),
];
