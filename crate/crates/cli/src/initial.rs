//! Initial-state descriptors.
//!
//! * single photon: `hx`, `hy`, `vx`, `vy`, or `A+B` / `A-B` for two
//!   distinct faces (normalized by `1/sqrt2`). A trailing `_plus` or
//!   `_minus` is accepted when it repeats the sign, e.g. `hx-vy_minus`.
//! * two photons: `xx`, `xy`, `yx`, `yy`, `psi+`, `psi-`, `phi+`, `phi-`.
//! * coherent pair: `coh:ALPHA,BETA` with complex literals such as `0.1`,
//!   `-0.2i` or `0.1+0.05i`, for `|alpha>` in `hx` and `|beta>` in `vy`.

use std::fmt;
use std::str::FromStr;

use photon_walk::single::CoinState;
use photon_walk::two_photon::{BellKind, TwoPhotonInput};
use photon_walk::{Amplitude, Coin, Polarization};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    Single { descriptor: String, coin: CoinState },
    Pair(TwoPhotonInput),
    Coherent { alpha: Amplitude, beta: Amplitude },
}

impl InitialState {
    pub fn kind(&self) -> &'static str {
        match self {
            InitialState::Single { .. } => "single-photon coin",
            InitialState::Pair(_) => "two-photon input",
            InitialState::Coherent { .. } => "coherent pair",
        }
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialState::Single { descriptor, .. } => f.write_str(descriptor),
            InitialState::Pair(input) => write!(f, "{input}"),
            InitialState::Coherent { alpha, beta } => write!(f, "coh:{alpha},{beta}"),
        }
    }
}

fn fail(descriptor: &str, reason: impl Into<String>) -> CliError {
    CliError::Initial {
        descriptor: descriptor.to_string(),
        reason: reason.into(),
    }
}

fn parse_coin(token: &str, descriptor: &str) -> Result<Coin> {
    Coin::from_str(token).map_err(|_| fail(descriptor, format!("unknown coin face {token:?}")))
}

fn parse_complex(token: &str, descriptor: &str) -> Result<Amplitude> {
    let t = token.trim();
    Amplitude::from_str(t)
        .ok()
        .filter(|c| c.re.is_finite() && c.im.is_finite())
        .ok_or_else(|| fail(descriptor, format!("bad complex literal {t:?}")))
}

pub fn parse_initial(descriptor: &str) -> Result<InitialState> {
    let d = descriptor.trim();
    if let Some(rest) = d.strip_prefix("coh:") {
        let parts: Vec<&str> = rest.split(',').collect();
        let [a, b] = parts.as_slice() else {
            return Err(fail(d, "expected coh:ALPHA,BETA"));
        };
        return Ok(InitialState::Coherent {
            alpha: parse_complex(a, d)?,
            beta: parse_complex(b, d)?,
        });
    }

    let pair = match d {
        "xx" => Some(TwoPhotonInput::Separable(Polarization::X, Polarization::X)),
        "xy" => Some(TwoPhotonInput::Separable(Polarization::X, Polarization::Y)),
        "yx" => Some(TwoPhotonInput::Separable(Polarization::Y, Polarization::X)),
        "yy" => Some(TwoPhotonInput::Separable(Polarization::Y, Polarization::Y)),
        "psi+" => Some(TwoPhotonInput::Bell(BellKind::PsiPlus)),
        "psi-" => Some(TwoPhotonInput::Bell(BellKind::PsiMinus)),
        "phi+" => Some(TwoPhotonInput::Bell(BellKind::PhiPlus)),
        "phi-" => Some(TwoPhotonInput::Bell(BellKind::PhiMinus)),
        _ => None,
    };
    if let Some(input) = pair {
        return Ok(InitialState::Pair(input));
    }

    let (body, suffix) = match d.split_once('_') {
        Some((body, suffix)) => (body, Some(suffix)),
        None => (d, None),
    };
    let Some(op) = body.find(['+', '-']) else {
        if suffix.is_some() {
            return Err(fail(d, "a sign suffix needs a superposition"));
        }
        let coin = parse_coin(body, d)?;
        return Ok(InitialState::Single {
            descriptor: d.to_string(),
            coin: CoinState::basis(coin),
        });
    };
    let (a, b) = (&body[..op], &body[op + 1..]);
    let sign = if body.as_bytes()[op] == b'+' {
        1.0
    } else {
        -1.0
    };
    match (suffix, sign > 0.0) {
        (None, _) | (Some("plus"), true) | (Some("minus"), false) => {}
        (Some(s), _) => return Err(fail(d, format!("suffix {s:?} contradicts the sign"))),
    }
    let (a, b) = (parse_coin(a, d)?, parse_coin(b, d)?);
    if a == b {
        return Err(fail(d, "superposition needs two distinct faces"));
    }
    Ok(InitialState::Single {
        descriptor: d.to_string(),
        coin: CoinState::equal_superposition(a, b, sign),
    })
}
