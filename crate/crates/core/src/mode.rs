//! Mode basis shared by every walk.
//!
//! A mode is a site `q` on the line together with a coin face, i.e. a
//! propagation direction and a polarization. Modes are totally ordered by
//! `(q, dir, pol)` with `h < v` and `x < y`; all tables, pair keys and
//! serialized output use this order.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    H,
    V,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::H => Direction::V,
            Direction::V => Direction::H,
        }
    }

    /// Site displacement applied by the beam splitter to a photon leaving
    /// along this direction.
    pub fn displacement(self) -> i64 {
        match self {
            Direction::H => 1,
            Direction::V => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Direction::H => 'h',
            Direction::V => 'v',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarization {
    X,
    Y,
}

impl Polarization {
    pub fn symbol(self) -> char {
        match self {
            Polarization::X => 'x',
            Polarization::Y => 'y',
        }
    }
}

/// One face of the four-sided coin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coin {
    pub dir: Direction,
    pub pol: Polarization,
}

impl Coin {
    pub const HX: Coin = Coin::new(Direction::H, Polarization::X);
    pub const HY: Coin = Coin::new(Direction::H, Polarization::Y);
    pub const VX: Coin = Coin::new(Direction::V, Polarization::X);
    pub const VY: Coin = Coin::new(Direction::V, Polarization::Y);

    /// The four faces in canonical order.
    pub const ALL: [Coin; 4] = [Coin::HX, Coin::HY, Coin::VX, Coin::VY];

    pub const fn new(dir: Direction, pol: Polarization) -> Self {
        Coin { dir, pol }
    }

    pub fn index(self) -> usize {
        let d = match self.dir {
            Direction::H => 0,
            Direction::V => 2,
        };
        let p = match self.pol {
            Polarization::X => 0,
            Polarization::Y => 1,
        };
        d + p
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Coin::ALL.get(index).copied()
    }

    /// Same polarization, opposite direction.
    pub fn mirrored(self) -> Self {
        Coin::new(self.dir.flipped(), self.pol)
    }
}

impl fmt::Display for Coin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.dir.symbol(), self.pol.symbol())
    }
}

impl FromStr for Coin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hx" => Ok(Coin::HX),
            "hy" => Ok(Coin::HY),
            "vx" => Ok(Coin::VX),
            "vy" => Ok(Coin::VY),
            _ => Err(Error::ModeParse(s.to_string())),
        }
    }
}

/// A single-photon basis mode `|q, dir, pol>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeLabel {
    pub q: i64,
    pub dir: Direction,
    pub pol: Polarization,
}

impl ModeLabel {
    pub const fn new(q: i64, dir: Direction, pol: Polarization) -> Self {
        ModeLabel { q, dir, pol }
    }

    pub const fn at(q: i64, coin: Coin) -> Self {
        ModeLabel::new(q, coin.dir, coin.pol)
    }

    pub fn coin(&self) -> Coin {
        Coin::new(self.dir, self.pol)
    }

    /// Image under `h <-> v`, `q -> -q`.
    pub fn mirrored(&self) -> Self {
        ModeLabel::new(-self.q, self.dir.flipped(), self.pol)
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{})",
            self.q,
            self.dir.symbol(),
            self.pol.symbol()
        )
    }
}

impl FromStr for ModeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::ModeParse(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(err)?;
        let mut parts = inner.split(',').map(str::trim);
        let q = parts.next().and_then(|p| p.parse().ok()).ok_or_else(err)?;
        let dir = match parts.next() {
            Some("h") => Direction::H,
            Some("v") => Direction::V,
            _ => return Err(err()),
        };
        let pol = match parts.next() {
            Some("x") => Polarization::X,
            Some("y") => Polarization::Y,
            _ => return Err(err()),
        };
        if parts.next().is_some() {
            return Err(err());
        }
        Ok(ModeLabel::new(q, dir, pol))
    }
}

/// True iff a walker starting at the origin can occupy site `q` after `n`
/// steps.
pub fn is_reachable(n: usize, q: i64) -> bool {
    let n = n as i64;
    q.abs() <= n && (n + q).rem_euclid(2) == 0
}

/// Number of modes reachable after `n` steps.
pub fn reachable_mode_count(n: usize) -> usize {
    4 * (n + 1)
}

/// Dense index of a reachable mode, `0..4(n+1)`, in canonical order.
pub fn mode_index(m: &ModeLabel, n: usize) -> Result<usize> {
    if !is_reachable(n, m.q) {
        return Err(Error::UnreachableMode { n, q: m.q });
    }
    let site = ((m.q + n as i64) / 2) as usize;
    Ok(4 * site + m.coin().index())
}

/// Inverse of [`mode_index`].
pub fn mode_at(index: usize, n: usize) -> Result<ModeLabel> {
    if index >= reachable_mode_count(n) {
        return Err(Error::IndexOutOfRange { n, index });
    }
    let q = 2 * (index / 4) as i64 - n as i64;
    let coin = Coin::ALL[index % 4];
    Ok(ModeLabel::at(q, coin))
}

/// Reachable sites after `n` steps in ascending order.
pub fn reachable_sites(n: usize) -> impl Iterator<Item = i64> + Clone {
    let n = n as i64;
    (-n..=n).step_by(2)
}

/// Reachable modes after `n` steps in canonical order.
pub fn reachable_modes(n: usize) -> impl Iterator<Item = ModeLabel> {
    reachable_sites(n).flat_map(|q| Coin::ALL.into_iter().map(move |c| ModeLabel::at(q, c)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reachability_examples() {
        assert!(is_reachable(0, 0));
        assert!(!is_reachable(5, 4));
        assert!(is_reachable(5, -5));
        assert!(!is_reachable(5, 7));
        assert!(!is_reachable(0, 1));
    }

    #[test]
    fn index_examples() {
        let hx = ModeLabel::new(0, Direction::H, Polarization::X);
        let vy0 = ModeLabel::new(0, Direction::V, Polarization::Y);
        let vy2 = ModeLabel::new(2, Direction::V, Polarization::Y);
        assert_eq!(mode_index(&hx, 0).unwrap(), 0);
        assert_eq!(mode_index(&vy0, 0).unwrap(), 3);
        assert_eq!(mode_index(&vy2, 2).unwrap(), 11);
    }

    #[test]
    fn index_rejects_unreachable() {
        let m = ModeLabel::new(1, Direction::H, Polarization::X);
        assert_eq!(
            mode_index(&m, 2),
            Err(Error::UnreachableMode { n: 2, q: 1 })
        );
        assert!(mode_at(12, 2).is_err());
    }

    #[test]
    fn index_is_a_bijection_up_to_ten_steps() {
        for n in 0..=10 {
            let modes: Vec<_> = reachable_modes(n).collect();
            assert_eq!(modes.len(), reachable_mode_count(n));
            for (i, m) in modes.iter().enumerate() {
                assert_eq!(mode_index(m, n).unwrap(), i);
                assert_eq!(mode_at(i, n).unwrap(), *m);
            }
            assert!(modes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn canonical_order() {
        let a = ModeLabel::new(-1, Direction::V, Polarization::Y);
        let b = ModeLabel::new(0, Direction::H, Polarization::X);
        let c = ModeLabel::new(0, Direction::H, Polarization::Y);
        let d = ModeLabel::new(0, Direction::V, Polarization::X);
        assert!(a < b && b < c && c < d);
    }

    #[test]
    fn text_rendering_round_trips() {
        let m = ModeLabel::new(-3, Direction::V, Polarization::X);
        assert_eq!(m.to_string(), "(-3,v,x)");
        assert_eq!("(-3,v,x)".parse::<ModeLabel>().unwrap(), m);
        assert!("(1,q,x)".parse::<ModeLabel>().is_err());
        assert!("1,h,x".parse::<ModeLabel>().is_err());
    }

    #[test]
    fn displacement_signs() {
        assert_eq!(Direction::H.displacement(), 1);
        assert_eq!(Direction::V.displacement(), -1);
    }
}
