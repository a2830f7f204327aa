//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use photon_walk::asymptotics::{
    approx_single_state, approx_two_photon_state, exact_coefficients, total_variation, InitialCoin,
};
use photon_walk::coherent::{evolve_coherent, CoherentField};
use photon_walk::golden::{COHERENT_FIVE_STEP, TABLE_I, TABLE_III, TABLE_SITES, TABLE_STEPS};
use photon_walk::mode::{reachable_modes, reachable_sites};
use photon_walk::single::{CoinState, SinglePhotonState};
use photon_walk::transform::{build_mode_matrix, verify_heisenberg_table};
use photon_walk::two_photon::{BellKind, PairKey, TwoPhotonInput, TwoPhotonState};
use photon_walk::{Amplitude, Coin, Direction, ModeLabel, Polarization};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within_budget(elapsed: Duration, limit: Duration, outcome: Outcome) -> Outcome {
    let detail = match &outcome {
        Ok(d) | Err(d) => d.clone(),
    };
    if elapsed > limit {
        return Err(format!("{detail}; took {elapsed:.2?}, budget {limit:.0?}"));
    }
    outcome
}

/// Small deterministic generator for sampled inputs.
struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    fn complex(&mut self) -> Amplitude {
        Amplitude::new(2.0 * self.next() - 1.0, 2.0 * self.next() - 1.0)
    }
}

fn joint_table_deviation(tables: &[photon_walk::golden::JointTable]) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for table in tables {
        let out = table.input.state().evolve(TABLE_STEPS);
        let joint = out.joint_probability();
        let margins = joint.marginal_at_least_one();
        for &q1 in &TABLE_SITES {
            for &q2 in &TABLE_SITES {
                let want = table.probability(q1, q2).unwrap();
                worst = worst.max((joint.get(q1, q2) - want).abs());
            }
            let got = margins.get(&q1).copied().unwrap_or(0.0);
            worst = worst.max((got - table.margin(q1).unwrap()).abs());
        }
    }
    Ok(worst)
}

fn table_i() -> Outcome {
    let worst = joint_table_deviation(&TABLE_I)?;
    let xx = TwoPhotonInput::Separable(Polarization::X, Polarization::X)
        .state()
        .evolve(5);
    let j = xx.joint_probability();
    let m = j.marginal_at_least_one();
    let spot = (j.get(-5, -5) - 0.25 / 128.0)
        .abs()
        .max((j.get(-3, -1) - 18.0 / 128.0).abs())
        .max((m[&-5] - 7.75 / 128.0).abs());
    let worst = worst.max(spot);
    check(
        worst < 1e-10,
        format!("max deviation {worst:.2e} over 4 tables"),
    )
}

fn table_iii() -> Outcome {
    let worst = joint_table_deviation(&TABLE_III)?;
    let psi_plus = TwoPhotonInput::Bell(BellKind::PsiPlus)
        .state()
        .evolve(5)
        .joint_probability();
    let psi_minus = TwoPhotonInput::Bell(BellKind::PsiMinus)
        .state()
        .evolve(5)
        .joint_probability();
    let spot = (psi_plus.get(-1, 1) - 34.0 / 128.0)
        .abs()
        .max((psi_plus.marginal_at_least_one()[&-1] - 71.0 / 128.0).abs())
        .max((psi_minus.get(-5, -5) - 0.5 / 128.0).abs());
    let worst = worst.max(spot);
    check(
        worst < 1e-10,
        format!("max deviation {worst:.2e} over 4 tables"),
    )
}

fn table_ii() -> Outcome {
    let reports = photon_walk::coherent::weak_field_report();
    let worst = reports.iter().map(|r| r.max_deviation).fold(0.0, f64::max);
    let f = Amplitude::new(1.0, 0.0);
    let z = Amplitude::new(0.0, 0.0);
    let ff = CoherentField::hx_vy(f, f)
        .evolve(5)
        .normalized_detection()
        .map_err(|e| e.to_string())?;
    let f0 = CoherentField::hx_vy(f, z)
        .evolve(5)
        .normalized_detection()
        .map_err(|e| e.to_string())?;
    let spot = (ff[&-1] - 3.0 / 8.0)
        .abs()
        .max((f0[&3] - 11.0 / 32.0).abs());
    let worst = worst.max(spot);
    check(
        worst < 1e-12,
        format!("max deviation {worst:.2e} over {} rows", reports.len()),
    )
}

fn heisenberg() -> Outcome {
    let report = verify_heisenberg_table(&build_mode_matrix(5)).map_err(|e| e.to_string())?;
    check(
        report.max_deviation < 1e-12,
        format!("max deviation {:.2e}", report.max_deviation),
    )
}

fn coherent_amplitudes() -> Outcome {
    let mut rng = Lcg(2024);
    let unit = 1.0 / (4.0 * SQRT_2);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let (alpha, beta) = (rng.complex(), rng.complex());
        let out = evolve_coherent(&CoherentField::hx_vy(alpha, beta), 5);
        for t in COHERENT_FIVE_STEP {
            let want = (alpha * f64::from(t.alpha) + beta * f64::from(t.beta)) * unit;
            worst = worst.max((out.amplitude(&ModeLabel::at(t.q, t.coin)) - want).norm());
        }
        let listed: Vec<_> = COHERENT_FIVE_STEP
            .iter()
            .map(|t| ModeLabel::at(t.q, t.coin))
            .collect();
        for m in reachable_modes(5).filter(|m| !listed.contains(m)) {
            worst = worst.max(out.amplitude(&m).norm());
        }
    }
    check(
        worst < 1e-12,
        format!("max deviation {worst:.2e} over 10 random (alpha, beta)"),
    )
}

fn fourier_exact() -> Outcome {
    let mut worst = 0.0f64;
    for n in [6, 11, 20] {
        for initial in [InitialCoin::Hx, InitialCoin::Hy] {
            let direct = SinglePhotonState::basis(initial.coin()).evolve(n);
            for q in reachable_sites(n) {
                let c = exact_coefficients(n, q, initial).map_err(|e| e.to_string())?;
                for (face, v) in Coin::ALL.iter().zip(c.values) {
                    worst = worst.max((v - direct.amplitude(&ModeLabel::at(q, *face))).norm());
                }
            }
        }
    }
    check(worst < 1e-6, format!("max amplitude deviation {worst:.2e}"))
}

fn argmax_above(p: &BTreeMap<i64, f64>, lo: i64, hi: i64) -> i64 {
    p.iter()
        .filter(|(q, _)| (lo..=hi).contains(*q))
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(q, _)| *q)
        .unwrap()
}

fn stationary_single() -> Outcome {
    let n = 50;
    let coins = [
        ("hx+vy", Coin::HX, Coin::VY, 1.0),
        ("hx-vy", Coin::HX, Coin::VY, -1.0),
        ("hy+vx", Coin::HY, Coin::VX, 1.0),
        ("hy-vx", Coin::HY, Coin::VX, -1.0),
    ];
    let mut parts = Vec::new();
    let mut ok = true;
    for (label, a, b, sign) in coins {
        let coin = CoinState::equal_superposition(a, b, sign);
        let exact = coin.to_state().evolve(n).position_distribution();
        let approx = approx_single_state(n, &coin)
            .map_err(|e| e.to_string())?
            .position_distribution();
        let tv = total_variation(&exact, &approx);
        ok &= tv < 0.1;
        parts.push(format!("{label} TV {tv:.3}"));
        if label == "hx-vy" {
            let target = (n as f64 * FRAC_1_SQRT_2).round() as i64;
            let peak_exact = argmax_above(&exact, 10, n as i64);
            let peak_approx = argmax_above(&approx, 10, n as i64);
            ok &= (peak_exact - target).abs() <= 4 && (peak_approx - target).abs() <= 4;
            parts.push(format!(
                "side peak exact {peak_exact}, approx {peak_approx}"
            ));
        }
    }
    check(ok, parts.join(", "))
}

fn stationary_two_photon() -> Outcome {
    let n = 25;
    let mut parts = Vec::new();
    let mut ok = true;
    for input in [
        TwoPhotonInput::Separable(Polarization::X, Polarization::Y),
        TwoPhotonInput::Bell(BellKind::PsiPlus),
    ] {
        let exact: BTreeMap<_, _> = input.state().evolve(n).joint_probability().iter().collect();
        let approx: BTreeMap<_, _> = approx_two_photon_state(n, input)
            .map_err(|e| e.to_string())?
            .joint_probability()
            .iter()
            .collect();
        let tv = total_variation(&exact, &approx);
        ok &= tv < 0.15;
        parts.push(format!("{input} TV {tv:.3}"));
    }
    check(ok, parts.join(", "))
}

fn invariants() -> Outcome {
    let mut failures = Vec::new();

    let mut worst_norm = 0.0f64;
    let mut parity_ok = true;
    let mut worst_mirror = 0.0f64;
    for coin in [
        CoinState::basis(Coin::HX),
        CoinState::basis(Coin::VY),
        CoinState::equal_superposition(Coin::HY, Coin::VX, -1.0),
    ] {
        let mut s = coin.to_state();
        let mut m = s.mirrored();
        for n in 1..=100usize {
            s = s.step();
            m = m.step();
            worst_norm = worst_norm.max((s.norm_sqr() - 1.0).abs());
            parity_ok &= s
                .amplitudes()
                .keys()
                .all(|k| (n as i64 + k.q) % 2 == 0 && k.q.abs() <= n as i64);
            let mm = s.mirrored();
            for (k, v) in m.amplitudes() {
                worst_mirror = worst_mirror.max((mm.amplitude(k) - v).norm());
            }
        }
    }
    if worst_norm >= 1e-10 {
        failures.push(format!("norm {worst_norm:.1e}"));
    }
    if !parity_ok {
        failures.push("parity support".into());
    }
    if worst_mirror >= 1e-10 {
        failures.push(format!("mirror {worst_mirror:.1e}"));
    }

    let mut worst_sum = 0.0f64;
    for input in TwoPhotonInput::ALL {
        for n in [0usize, 1, 3, 8, 15] {
            let out = input.state().evolve(n);
            let joint = out.joint_probability();
            let margin: f64 = joint.marginal_at_least_one().values().sum();
            let diagonal: f64 = joint
                .iter()
                .filter(|((a, b), _)| a == b)
                .map(|(_, p)| p)
                .sum();
            worst_sum = worst_sum
                .max((joint.total() - 1.0).abs())
                .max((margin + diagonal - 2.0).abs())
                .max((out.norm_sqr() - 1.0).abs());
        }
    }
    if worst_sum >= 1e-10 {
        failures.push(format!("two-photon sums {worst_sum:.1e}"));
    }

    let field = CoherentField::hx_vy(Amplitude::new(0.1, 0.0), Amplitude::new(0.1, 0.0)).evolve(7);
    let mut worst_sigma = 0.0f64;
    for q1 in reachable_sites(7) {
        for q2 in reachable_sites(7).filter(|&q2| q2 != q1) {
            worst_sigma = worst_sigma.max(field.joint_detection(q1, q2, 1.0).sigma.abs());
        }
    }
    if worst_sigma >= 1e-12 {
        failures.push(format!("coherent sigma {worst_sigma:.1e}"));
    }

    let mut min_corr = f64::INFINITY;
    let mut ranks = Vec::new();
    for input in &TwoPhotonInput::ALL[..4] {
        let out = input.state().evolve(5);
        min_corr = min_corr.min(out.joint_probability().max_abs_correlation());
        ranks.push(out.schmidt_rank(1e-10));
    }
    if min_corr <= 0.05 {
        failures.push(format!("max|sigma| {min_corr:.3}"));
    }
    if ranks.iter().any(|&r| r <= 1) {
        failures.push(format!("Schmidt ranks {ranks:?}"));
    }

    let detail = format!(
        "norm {worst_norm:.1e}, mirror {worst_mirror:.1e}, sums {worst_sum:.1e}, \
         coherent sigma {worst_sigma:.1e}, min max|sigma| {min_corr:.3}, ranks {ranks:?}"
    );
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; failed: {}", failures.join(", ")))
    }
}

fn bell_marginals() -> Outcome {
    let n = 100;
    let mut p0 = BTreeMap::new();
    let mut ok = true;
    let mut worst_asym = 0.0f64;
    for kind in BellKind::ALL {
        let m = TwoPhotonInput::Bell(kind)
            .state()
            .evolve(n)
            .joint_probability()
            .marginal_at_least_one();
        for (q, p) in &m {
            worst_asym = worst_asym.max((p - m.get(&-q).copied().unwrap_or(0.0)).abs());
        }
        let peak = argmax_above(&m, -(n as i64), n as i64);
        let centre = m[&0];
        let next = m
            .iter()
            .filter(|(q, _)| q.abs() >= 4)
            .map(|(_, p)| *p)
            .fold(0.0, f64::max);
        ok &= peak == 0 && centre > 2.0 * next;
        p0.insert(kind.label(), centre);
    }
    ok &= worst_asym < 1e-10;
    let psi = p0["psi+"].min(p0["psi-"]);
    let phi = p0["phi+"].max(p0["phi-"]);
    ok &= psi > phi;
    check(
        ok,
        format!(
            "asymmetry {worst_asym:.1e}, P(0): psi+ {:.3} psi- {:.3} phi+ {:.3} phi- {:.3}",
            p0["psi+"], p0["psi-"], p0["phi+"], p0["phi-"]
        ),
    )
}

/// Creation-operator monomials `a_A^dag a_B^dag` with `A <= B`, rewritten
/// factor by factor with the one-step rules.
mod oracle {
    use super::*;

    pub type Op = (i64, u8, u8); // (site, 0 = h / 1 = v, 0 = x / 1 = y)
    pub type Poly = BTreeMap<(Op, Op), Amplitude>;

    pub fn step_op((q, d, p): Op) -> [(f64, Op); 2] {
        let s = FRAC_1_SQRT_2;
        match (d, p) {
            (0, 0) => [(s, (q + 1, 0, 0)), (s, (q - 1, 1, 1))],
            (0, 1) => [(s, (q + 1, 0, 0)), (-s, (q - 1, 1, 1))],
            (1, 0) => [(s, (q - 1, 1, 0)), (s, (q + 1, 0, 1))],
            _ => [(s, (q - 1, 1, 0)), (-s, (q + 1, 0, 1))],
        }
    }

    pub fn step(poly: &Poly) -> Poly {
        let mut out = Poly::new();
        for ((a, b), c) in poly {
            for (wa, oa) in step_op(*a) {
                for (wb, ob) in step_op(*b) {
                    let key = if oa <= ob { (oa, ob) } else { (ob, oa) };
                    *out.entry(key).or_default() += c * wa * wb;
                }
            }
        }
        out
    }

    pub fn input(label: &str) -> Poly {
        let (hx, hy, vx, vy) = ((0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1));
        let r = FRAC_1_SQRT_2;
        let terms: Vec<(f64, Op, Op)> = match label {
            "xx" => vec![(1.0, hx, vx)],
            "xy" => vec![(1.0, hx, vy)],
            "yy" => vec![(1.0, hy, vy)],
            "yx" => vec![(1.0, hy, vx)],
            "psi+" => vec![(r, hx, vy), (r, hy, vx)],
            "psi-" => vec![(r, hx, vy), (-r, hy, vx)],
            "phi+" => vec![(r, hx, vx), (r, hy, vy)],
            "phi-" => vec![(r, hx, vx), (-r, hy, vy)],
            other => panic!("unknown input {other}"),
        };
        let mut poly = Poly::new();
        for (w, a, b) in terms {
            let key = if a <= b { (a, b) } else { (b, a) };
            *poly.entry(key).or_default() += Amplitude::new(w, 0.0);
        }
        poly
    }

    pub fn label((q, d, p): Op) -> ModeLabel {
        let dir = if d == 0 { Direction::H } else { Direction::V };
        let pol = if p == 0 {
            Polarization::X
        } else {
            Polarization::Y
        };
        ModeLabel::new(q, dir, pol)
    }

    /// Amplitude on the normalized Fock state: `(a^dag)^2 |0> = sqrt2 |2>`.
    pub fn fock_amplitudes(poly: &Poly) -> BTreeMap<PairKey, Amplitude> {
        poly.iter()
            .map(|((a, b), c)| {
                let c = if a == b { c * SQRT_2 } else { *c };
                (PairKey::new(label(*a), label(*b)), c)
            })
            .collect()
    }
}

fn brute_force_oracle() -> Outcome {
    let mut worst = 0.0f64;
    for input in TwoPhotonInput::ALL {
        let mut poly = oracle::input(&input.label());
        let start: TwoPhotonState = input.state();
        for n in 0..=4usize {
            if n > 0 {
                poly = oracle::step(&poly);
            }
            let lifted = start.evolve(n);
            let want = oracle::fock_amplitudes(&poly);
            for (k, c) in &want {
                worst = worst.max((lifted.amplitude(k.first(), k.second()) - c).norm());
            }
            for (k, c) in lifted.amplitudes() {
                let w = want.get(k).copied().unwrap_or_default();
                worst = worst.max((c - w).norm());
            }
        }
    }
    check(
        worst < 1e-12,
        format!("max deviation {worst:.2e} over 8 inputs, n <= 4"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (
            "Table I separable joint probabilities",
            table_i,
            Some(Duration::from_secs(1)),
        ),
        (
            "Table III Bell joint probabilities",
            table_iii,
            Some(Duration::from_secs(1)),
        ),
        ("Table II weak-field coherent rows", table_ii, None),
        ("five-step Heisenberg transform", heisenberg, None),
        (
            "five-step coherent output amplitudes",
            coherent_amplitudes,
            None,
        ),
        ("Fourier integrals vs time stepping", fourier_exact, None),
        (
            "stationary-phase single photon n=50",
            stationary_single,
            Some(Duration::from_secs(10)),
        ),
        (
            "approximate two-photon states n=25",
            stationary_two_photon,
            None,
        ),
        ("invariant suite", invariants, None),
        (
            "Bell marginals n=100",
            bell_marginals,
            Some(Duration::from_secs(60)),
        ),
        ("brute-force operator oracle n<=4", brute_force_oracle, None),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let elapsed = t.elapsed();
        let outcome = match budget {
            Some(limit) => within_budget(elapsed, *limit, outcome),
            None => outcome,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
