//! Fourier-domain solution of the single-photon walk and its large-step
//! asymptotics.
//!
//! With `psi~(k) = sum_q psi(q) e^{ikq}` one step becomes
//! `psi~(n+1, k) = M_k psi~(n, k)` with `M_k = e^{ik} M+ + e^{-ik} M-`.
//! `M_k` has eigenvalues `-1, 1, e^{-i w_k}, e^{i w_k}` where
//! `cos w_k = cos k / sqrt2` and `w_k` lies in `[pi/4, 3pi/4]`.
//!
//! Inverting the transform gives each amplitude after `n` steps as
//! `(1 + (-1)^{n+q}) / (8 pi)` times the sum of an `n`-independent integral
//! (the spike at the origin) and an oscillatory integral with phase
//! `-(n w_k + k q)`. The oscillatory part is evaluated either by quadrature
//! ([`exact_coefficients`]) or by stationary phase
//! ([`stationary_phase_coefficients`]).
//!
//! Stationary points of `phi(k) = -(w_k + k q/n)` exist for
//! `|q/n| <= 1/sqrt2`. Inside that band there are two of them, `k0` and
//! `pi - k0`, whose contributions are complex conjugates (for even `n + q`),
//! so their sum is twice the real part of the `k0` term. At the band edge
//! they merge into a single stationary point of order two at `k = -+pi/2`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

use nalgebra::{Matrix4, Vector4};
use rayon::prelude::*;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::mode::{
    is_reachable, mode_index, reachable_mode_count, reachable_sites, Coin, ModeLabel,
};
use crate::single::{CoinState, SinglePhotonState};
use crate::two_photon::{lift_pairs, TwoPhotonInput, TwoPhotonState};
use crate::Amplitude;

/// `w_k` with `cos w_k = cos k / sqrt2`, in `[pi/4, 3pi/4]`.
pub fn omega(k: f64) -> f64 {
    (k.cos() / SQRT_2).acos()
}

/// `d w_k / dk`.
pub fn omega_prime(k: f64) -> f64 {
    let s = k.sin();
    s / (1.0 + s * s).sqrt()
}

/// `d^2 w_k / dk^2`.
pub fn omega_second(k: f64) -> f64 {
    let s = k.sin();
    k.cos() / (1.0 + s * s).powf(1.5)
}

/// `Gamma(1/3)`.
pub fn gamma_one_third() -> f64 {
    gamma(1.0 / 3.0)
}

fn cis(theta: f64) -> Amplitude {
    Amplitude::from_polar(1.0, theta)
}

#[rustfmt::skip]
fn shift_plus() -> Matrix4<Amplitude> {
    let r = |x: f64| Amplitude::new(x / SQRT_2, 0.0);
    Matrix4::new(
        r(1.0), r(1.0), r(0.0), r(0.0),
        r(0.0), r(0.0), r(1.0), r(-1.0),
        r(0.0), r(0.0), r(0.0), r(0.0),
        r(0.0), r(0.0), r(0.0), r(0.0),
    )
}

#[rustfmt::skip]
fn shift_minus() -> Matrix4<Amplitude> {
    let r = |x: f64| Amplitude::new(x / SQRT_2, 0.0);
    Matrix4::new(
        r(0.0), r(0.0), r(0.0), r(0.0),
        r(0.0), r(0.0), r(0.0), r(0.0),
        r(0.0), r(0.0), r(1.0), r(1.0),
        r(1.0), r(-1.0), r(0.0), r(0.0),
    )
}

/// One-step propagator in the Fourier domain, acting on `(hx, hy, vx, vy)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierPropagator {
    pub k: f64,
    pub matrix: Matrix4<Amplitude>,
}

pub fn fourier_propagator(k: f64) -> FourierPropagator {
    let matrix = shift_plus() * cis(k) + shift_minus() * cis(-k);
    FourierPropagator { k, matrix }
}

impl FourierPropagator {
    /// Largest entry of `|M^H M - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self.matrix.adjoint() * self.matrix;
        (prod - Matrix4::identity())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

/// Closed-form eigenpairs of `M_k`, ordered `-1, 1, e^{-i w}, e^{i w}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigensystem {
    pub k: f64,
    pub omega: f64,
    pub values: [Amplitude; 4],
    pub vectors: [Vector4<Amplitude>; 4],
}

pub fn eigensystem(k: f64) -> Eigensystem {
    let w = omega(k);
    let e = cis(k);
    let em = cis(-k);
    let one = Amplitude::new(1.0, 0.0);
    let r2 = Amplitude::new(SQRT_2, 0.0);
    let c = k.cos();

    let n1 = 0.5 * ((3.0 + 2.0 * SQRT_2 * c) / (2.0 + SQRT_2 * c)).sqrt();
    let d1 = r2 + em;
    let phi1 = Vector4::new(-e / d1, (r2 + e) / d1, -em / d1, one) * Amplitude::from(n1);

    let n2 = 0.5 * ((3.0 - 2.0 * SQRT_2 * c) / (2.0 - SQRT_2 * c)).sqrt();
    let d2 = r2 - em;
    let phi2 = Vector4::new(e / d2, (r2 - e) / d2, em / d2, one) * Amplitude::from(n2);

    let n34 = 1.0 / (2.0 * (1.0 + k.sin().powi(2)).sqrt());
    let phi3 = Vector4::new(
        -one + r2 * cis(-(w - k)),
        -one,
        one - r2 * cis(-(w + k)),
        one,
    ) * Amplitude::from(n34);
    let phi4 = Vector4::new(-one + r2 * cis(w + k), -one, one - r2 * cis(w - k), one)
        * Amplitude::from(n34);

    Eigensystem {
        k,
        omega: w,
        values: [-one, one, cis(-w), cis(w)],
        vectors: [phi1, phi2, phi3, phi4],
    }
}

impl Eigensystem {
    /// `sum_m lambda_m^n |Phi_m><Phi_m|`.
    pub fn power(&self, n: u32) -> Matrix4<Amplitude> {
        let mut out = Matrix4::zeros();
        for (lambda, v) in self.values.iter().zip(&self.vectors) {
            out += v * v.adjoint() * lambda.powu(n);
        }
        out
    }

    /// Largest `|M_k Phi - lambda Phi|` over the four pairs.
    pub fn max_residual(&self, propagator: &FourierPropagator) -> f64 {
        self.values
            .iter()
            .zip(&self.vectors)
            .map(|(l, v)| (propagator.matrix * v - v * *l).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry of `|sum_m |Phi_m><Phi_m| - I|`.
    pub fn completeness_defect(&self) -> f64 {
        (self.power(0) - Matrix4::identity())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

/// Starting coin on site 0 for which coefficients are tabulated. The
/// `v` starts follow by mirror symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitialCoin {
    Hx,
    Hy,
}

impl InitialCoin {
    pub fn coin(self) -> Coin {
        match self {
            InitialCoin::Hx => Coin::HX,
            InitialCoin::Hy => Coin::HY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientMethod {
    ExactIntegral,
    StationaryPhase,
}

/// Amplitudes on `(q, hx), (q, hy), (q, vx), (q, vy)` after `n` steps.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticCoefficients {
    pub n: usize,
    pub q: i64,
    pub initial: InitialCoin,
    pub method: CoefficientMethod,
    pub values: [Amplitude; 4],
}

impl AsymptoticCoefficients {
    fn zero(n: usize, q: i64, initial: InitialCoin, method: CoefficientMethod) -> Self {
        AsymptoticCoefficients {
            n,
            q,
            initial,
            method,
            values: [Amplitude::default(); 4],
        }
    }

    pub fn probability(&self) -> f64 {
        self.values.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Composite trapezoid rule on `[-pi, pi)` for smooth periodic integrands,
/// refined by doubling until two successive estimates agree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicQuadrature {
    pub min_points: usize,
    pub points_per_step: usize,
    pub tolerance: f64,
    pub max_points: usize,
}

impl Default for PeriodicQuadrature {
    fn default() -> Self {
        PeriodicQuadrature {
            min_points: 4096,
            points_per_step: 64,
            tolerance: 1e-12,
            max_points: 1 << 22,
        }
    }
}

impl PeriodicQuadrature {
    pub fn base_points(&self, n: usize) -> usize {
        self.min_points.max(self.points_per_step * n)
    }

    /// Integrates a vector-valued integrand. Returns the refined value and
    /// the last doubling difference.
    pub fn integrate<const D: usize>(
        &self,
        n: usize,
        f: impl Fn(f64) -> [Amplitude; D],
    ) -> Result<([Amplitude; D], f64)> {
        let mut points = self.base_points(n);
        let sum_at = |offset: f64, h: f64, count: usize| {
            let mut acc = [Amplitude::default(); D];
            for i in 0..count {
                let v = f(-PI + offset + h * i as f64);
                for (a, x) in acc.iter_mut().zip(v) {
                    *a += x;
                }
            }
            acc
        };
        let h = 2.0 * PI / points as f64;
        let mut sum = sum_at(0.0, h, points);
        let mut value = sum.map(|s| s * h);
        loop {
            let h = 2.0 * PI / points as f64;
            let mid = sum_at(0.5 * h, h, points);
            for (s, m) in sum.iter_mut().zip(mid) {
                *s += m;
            }
            points *= 2;
            let refined = sum.map(|s| s * (h / 2.0));
            let estimate = refined
                .iter()
                .zip(&value)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            value = refined;
            if estimate <= self.tolerance {
                return Ok((value, estimate));
            }
            if points * 2 > self.max_points {
                return Err(Error::QuadratureNotConverged { estimate, points });
            }
        }
    }
}

fn parity_prefactor(n: usize, q: i64) -> f64 {
    if (n as i64 + q).rem_euclid(2) == 0 {
        2.0 / (8.0 * PI)
    } else {
        0.0
    }
}

/// Smallest value of `2 - sqrt2 cos k`; the static integrands are smooth.
pub const STATIC_DENOMINATOR_MIN: f64 = 2.0 - SQRT_2;

/// The `n`-independent integrands, in `hx, hy, vx, vy` order.
fn static_integrands(q: i64, initial: InitialCoin, k: f64) -> [f64; 4] {
    let d = 2.0 - SQRT_2 * k.cos();
    debug_assert!(d >= STATIC_DENOMINATOR_MIN - 1e-15);
    let cq = |shift: i64| (k * (q + shift) as f64).cos();
    match initial {
        InitialCoin::Hx => [
            cq(0) / d,
            (SQRT_2 * cq(1) - cq(0)) / d,
            cq(2) / d,
            (SQRT_2 * cq(1) - cq(2)) / d,
        ],
        InitialCoin::Hy => [
            (SQRT_2 * cq(-1) - cq(0)) / d,
            (3.0 - 2.0 * SQRT_2 * k.cos()) * cq(0) / d,
            (SQRT_2 * cq(1) - cq(2)) / d,
            (2.0 * cq(0) - 2.0 * SQRT_2 * cq(1) + cq(2)) / d,
        ],
    }
}

/// The oscillatory integrands, in `hx, hy, vx, vy` order.
fn dynamic_integrands(n: usize, q: i64, initial: InitialCoin, k: f64) -> [Amplitude; 4] {
    let w = omega(k);
    let s = 1.0 + k.sin().powi(2);
    let phase = cis(-(n as f64 * w + k * q as f64)) / s;
    let one = Amplitude::new(1.0, 0.0);
    match initial {
        InitialCoin::Hx => [
            phase * (3.0 - 2.0 * SQRT_2 * (w - k).cos()),
            phase * (one - cis(w - k) * SQRT_2),
            -phase * cis(-2.0 * k),
            phase * (cis(w - k) * SQRT_2 - one),
        ],
        InitialCoin::Hy => [
            phase * (one - cis(-(w - k)) * SQRT_2),
            phase,
            phase * (cis(-(w + k)) * SQRT_2 - one),
            -phase,
        ],
    }
}

/// Amplitudes after `n` steps from the integral representation, evaluated by
/// quadrature.
pub fn exact_coefficients(
    n: usize,
    q: i64,
    initial: InitialCoin,
) -> Result<AsymptoticCoefficients> {
    exact_coefficients_with(&PeriodicQuadrature::default(), n, q, initial)
}

pub fn exact_coefficients_with(
    rule: &PeriodicQuadrature,
    n: usize,
    q: i64,
    initial: InitialCoin,
) -> Result<AsymptoticCoefficients> {
    if n == 0 {
        return Err(Error::ZeroSteps);
    }
    let method = CoefficientMethod::ExactIntegral;
    let pre = parity_prefactor(n, q);
    if pre == 0.0 {
        return Ok(AsymptoticCoefficients::zero(n, q, initial, method));
    }
    let (integral, _) = rule.integrate(n, |k| {
        let st = static_integrands(q, initial, k);
        let dy = dynamic_integrands(n, q, initial, k);
        [0, 1, 2, 3].map(|i| dy[i] + st[i])
    })?;
    Ok(AsymptoticCoefficients {
        n,
        q,
        initial,
        method,
        values: integral.map(|v| v * pre),
    })
}

/// `w * e^{-i((n + dn) w_k + (q + dq) k)} / (1 + sin^2 k)`: the oscillatory
/// integrands written as sums of shifted plane waves.
#[derive(Debug, Clone, Copy)]
struct PhaseTerm {
    weight: f64,
    dn: i64,
    dq: i64,
}

const fn pt(weight: f64, dn: i64, dq: i64) -> PhaseTerm {
    PhaseTerm { weight, dn, dq }
}

const HX_TERMS: [&[PhaseTerm]; 4] = [
    &[pt(3.0, 0, 0), pt(-SQRT_2, -1, 1), pt(-SQRT_2, 1, -1)],
    &[pt(1.0, 0, 0), pt(-SQRT_2, -1, 1)],
    &[pt(-1.0, 0, 2)],
    &[pt(SQRT_2, -1, 1), pt(-1.0, 0, 0)],
];

const HY_TERMS: [&[PhaseTerm]; 4] = [
    &[pt(1.0, 0, 0), pt(-SQRT_2, 1, -1)],
    &[pt(1.0, 0, 0)],
    &[pt(SQRT_2, 1, 1), pt(-1.0, 0, 0)],
    &[pt(-1.0, 0, 0)],
];

/// Number of interior stationary points (`k0` and `pi - k0`), whose
/// contributions are complex conjugates.
const INTERIOR_STATIONARY_POINTS: f64 = 2.0;

/// `|q/n|` is treated as the band edge `1/sqrt2` within this tolerance.
pub const BAND_EDGE_TOLERANCE: f64 = 1e-12;

/// Prefactor `(6/n)^{1/3} sqrt2 Gamma(1/3) / sqrt3` of an order-two
/// stationary point.
pub fn band_edge_prefactor(n: usize) -> f64 {
    (6.0 / n as f64).cbrt() * SQRT_2 * gamma_one_third() / 3f64.sqrt()
}

/// The cached `n`-independent integrals for one `(q, initial)`.
fn static_integrals(q: i64, initial: InitialCoin) -> Result<[f64; 4]> {
    let rule = PeriodicQuadrature::default();
    let (v, _) = rule.integrate(0, |k| {
        static_integrands(q, initial, k).map(|x| Amplitude::new(x, 0.0))
    })?;
    Ok(v.map(|c| c.re))
}

/// Large-`n` approximation of the amplitudes: the static integral by
/// quadrature plus the stationary-phase value of the oscillatory integral.
/// Zero outside `|q/n| <= 1/sqrt2` and for odd `n + q`.
pub fn stationary_phase_coefficients(
    n: usize,
    q: i64,
    initial: InitialCoin,
) -> Result<AsymptoticCoefficients> {
    if n == 0 {
        return Err(Error::ZeroSteps);
    }
    let method = CoefficientMethod::StationaryPhase;
    let pre = parity_prefactor(n, q);
    let alpha = q as f64 / n as f64;
    let edge = std::f64::consts::FRAC_1_SQRT_2;
    let at_edge = (alpha.abs() - edge).abs() <= BAND_EDGE_TOLERANCE;
    if pre == 0.0 || (alpha.abs() > edge && !at_edge) {
        return Ok(AsymptoticCoefficients::zero(n, q, initial, method));
    }

    let terms = match initial {
        InitialCoin::Hx => HX_TERMS,
        InitialCoin::Hy => HY_TERMS,
    };
    let static_part = static_integrals(q, initial)?;
    let (nf, qf) = (n as f64, q as f64);

    let dynamic: [Amplitude; 4] = if at_edge {
        let k_edge = -FRAC_PI_2 * alpha.signum();
        let w_edge = omega(k_edge);
        let scale = band_edge_prefactor(n) / (1.0 + k_edge.sin().powi(2));
        terms.map(|list| {
            list.iter()
                .map(|t| {
                    let theta = (nf + t.dn as f64) * w_edge + (qf + t.dq as f64) * k_edge;
                    cis(-theta) * (t.weight * scale)
                })
                .sum()
        })
    } else {
        let k0 = (-alpha / (1.0 - alpha * alpha).sqrt()).asin();
        let w0 = omega(k0);
        let curvature = omega_second(k0).abs();
        debug_assert!(
            (omega_prime(k0) + alpha).abs() < 1e-9,
            "k0 is not stationary"
        );
        debug_assert!(curvature > 0.0);
        let scale = INTERIOR_STATIONARY_POINTS * (2.0 * PI / (nf * curvature)).sqrt()
            / (1.0 + k0.sin().powi(2));
        let c =
            |dn: i64, dq: i64| ((nf + dn as f64) * w0 + (qf + dq as f64) * k0 + FRAC_PI_4).cos();
        terms.map(|list| {
            let v: f64 = list.iter().map(|t| t.weight * c(t.dn, t.dq)).sum();
            Amplitude::new(v * scale, 0.0)
        })
    };

    let values = [0, 1, 2, 3].map(|i| (dynamic[i] + static_part[i]) * pre);
    Ok(AsymptoticCoefficients {
        n,
        q,
        initial,
        method,
        values,
    })
}

/// Coefficients for every site `-n..=n` (zeros included), in parallel.
pub fn coefficient_table(
    n: usize,
    initial: InitialCoin,
    method: CoefficientMethod,
) -> Result<Vec<AsymptoticCoefficients>> {
    let sites: Vec<i64> = (-(n as i64)..=n as i64).collect();
    sites
        .par_iter()
        .map(|&q| match method {
            CoefficientMethod::ExactIntegral => exact_coefficients(n, q, initial),
            CoefficientMethod::StationaryPhase => stationary_phase_coefficients(n, q, initial),
        })
        .collect()
}

/// Walker state for a basis coin on site 0 assembled from a coefficient
/// table; the `v` faces use the mirror image of the `h` tables.
pub fn basis_state_from_table(
    n: usize,
    coin: Coin,
    method: CoefficientMethod,
) -> Result<SinglePhotonState> {
    let (initial, mirror) = match coin {
        Coin::HX => (InitialCoin::Hx, false),
        Coin::HY => (InitialCoin::Hy, false),
        Coin::VX => (InitialCoin::Hx, true),
        Coin::VY => (InitialCoin::Hy, true),
    };
    let mut amplitudes = BTreeMap::new();
    for row in coefficient_table(n, initial, method)? {
        if !is_reachable(n, row.q) {
            continue;
        }
        for (face, value) in Coin::ALL.iter().zip(row.values) {
            let mode = ModeLabel::at(row.q, *face);
            let mode = if mirror { mode.mirrored() } else { mode };
            amplitudes.insert(mode, value);
        }
    }
    SinglePhotonState::from_raw(n, amplitudes)
}

/// Approximate single-photon state after `n` steps for an arbitrary coin
/// on site 0. The result is not renormalized.
pub fn approx_single_state(n: usize, coin: &CoinState) -> Result<SinglePhotonState> {
    let mut total = SinglePhotonState::empty(n);
    for face in Coin::ALL {
        let c = coin.coefficient(face);
        if c == Amplitude::default() {
            continue;
        }
        let part = basis_state_from_table(n, face, CoefficientMethod::StationaryPhase)?;
        total = total.plus(&part.scaled(c))?;
    }
    Ok(total)
}

fn dense(state: &SinglePhotonState) -> Vec<Amplitude> {
    let n = state.steps();
    let mut v = vec![Amplitude::default(); reachable_mode_count(n)];
    for (m, c) in state.amplitudes() {
        v[mode_index(m, n).expect("reachable")] = *c;
    }
    v
}

/// Approximate two-photon state: the symmetrized product of approximate
/// single-photon states for each separable component of the input. The
/// result is not renormalized.
pub fn approx_two_photon_state(n: usize, input: TwoPhotonInput) -> Result<TwoPhotonState> {
    let mut columns: BTreeMap<Coin, Vec<Amplitude>> = BTreeMap::new();
    for (_, a, b) in input.terms() {
        for face in [a, b] {
            if let std::collections::btree_map::Entry::Vacant(slot) = columns.entry(face) {
                let s = basis_state_from_table(n, face, CoefficientMethod::StationaryPhase)?;
                slot.insert(dense(&s));
            }
        }
    }
    let terms = input.terms();
    let pairs = terms.iter().map(|(w, a, b)| {
        (
            Amplitude::new(*w, 0.0),
            false,
            columns[a].as_slice(),
            columns[b].as_slice(),
        )
    });
    TwoPhotonState::from_raw(n, lift_pairs(n, pairs))
}

/// `(1/2) sum |p - r|` over the union of keys.
pub fn total_variation<K: Ord + Copy>(p: &BTreeMap<K, f64>, r: &BTreeMap<K, f64>) -> f64 {
    let mut keys: Vec<K> = p.keys().chain(r.keys()).copied().collect();
    keys.sort();
    keys.dedup();
    0.5 * keys
        .iter()
        .map(|k| (p.get(k).copied().unwrap_or(0.0) - r.get(k).copied().unwrap_or(0.0)).abs())
        .sum::<f64>()
}

/// One row of an exact-versus-approximate position distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub q: i64,
    pub exact: f64,
    pub approx: f64,
    pub abs_diff: f64,
}

/// Exact and stationary-phase `P(q)` side by side over reachable sites.
pub fn compare_single(n: usize, coin: &CoinState) -> Result<Vec<ComparisonRow>> {
    let exact = coin.to_state().evolve(n).position_distribution();
    let approx = approx_single_state(n, coin)?.position_distribution();
    Ok(reachable_sites(n)
        .map(|q| {
            let e = exact.get(&q).copied().unwrap_or(0.0);
            let a = approx.get(&q).copied().unwrap_or(0.0);
            ComparisonRow {
                q,
                exact: e,
                approx: a,
                abs_diff: (e - a).abs(),
            }
        })
        .collect())
}
