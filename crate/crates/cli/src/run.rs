//! Experiment drivers and artifact writing.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use photon_walk::asymptotics::{approx_two_photon_state, compare_single, total_variation};
use photon_walk::coherent::{weak_field_report, CoherentField};
use photon_walk::golden::{JointTable, TABLE_I, TABLE_III, TABLE_SCALE, TABLE_SITES, TABLE_STEPS};
use photon_walk::mode::reachable_sites;
use photon_walk::two_photon::{JointDistribution, TwoPhotonInput};

use crate::config::{Experiment, ExperimentConfig, Format, TableSelection};
use crate::error::{CliError, Result};
use crate::initial::InitialState;
use crate::svg::{heatmap, line_plot, Series};

/// Tolerance for the joint-probability tables.
pub const JOINT_TABLE_TOLERANCE: f64 = 1e-10;
/// Tolerance for the weak-field coherent table.
pub const COHERENT_TABLE_TOLERANCE: f64 = 1e-12;

/// Files written and one summary line per result.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Manifest {
    pub artifacts: Vec<PathBuf>,
    pub summary: Vec<String>,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    experiment: &'a str,
    steps: usize,
    initial: &'a str,
    data: T,
}

#[derive(Debug, Clone, Serialize)]
pub struct SiteRow {
    pub q: i64,
    #[serde(rename = "P")]
    pub p: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairRow {
    pub q1: i64,
    pub q2: i64,
    #[serde(rename = "P")]
    pub p: f64,
}

#[derive(Debug, Clone, Serialize)]
struct ComparisonRow {
    q: i64,
    #[serde(rename = "P_exact")]
    exact: f64,
    #[serde(rename = "P_approx")]
    approx: f64,
    abs_diff: f64,
}

#[derive(Debug, Clone, Serialize)]
struct PairComparisonRow {
    q1: i64,
    q2: i64,
    #[serde(rename = "P_exact")]
    exact: f64,
    #[serde(rename = "P_approx")]
    approx: f64,
    abs_diff: f64,
}

#[derive(Debug, Clone, Serialize)]
struct TablePairRow {
    q1: i64,
    q2: i64,
    #[serde(rename = "P")]
    p: f64,
    #[serde(rename = "P_x128")]
    p_x128: f64,
    expected_x128: f64,
    abs_diff: f64,
}

#[derive(Debug, Clone, Serialize)]
struct TableMarginRow {
    q: i64,
    #[serde(rename = "P")]
    p: f64,
    #[serde(rename = "P_x128")]
    p_x128: f64,
    expected_x128: f64,
    abs_diff: f64,
}

#[derive(Debug, Clone, Serialize)]
struct CoherentTableRow {
    row: &'static str,
    q: i64,
    #[serde(rename = "P")]
    p: f64,
    expected: f64,
    abs_diff: f64,
}

/// Comparison of one computed table against its reference values.
#[derive(Debug, Clone, PartialEq)]
pub struct TableReport {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }

    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        format!(
            "{status} {}: max deviation {:.3e} (tolerance {:.0e})",
            self.name, self.max_deviation, self.tolerance
        )
    }
}

/// Error listing every failed table, if any.
pub fn check_reports(reports: &[TableReport]) -> Result<()> {
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.name.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::GoldenMismatch(failed.join(", ")))
    }
}

/// Lower-case file-name fragment: `+` and `-` are spelled out.
pub fn slug(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        match c {
            '+' => out.push_str("_plus_"),
            '-' => out.push_str("_minus_"),
            c if c.is_ascii_alphanumeric() => out.push(c),
            _ => out.push('_'),
        }
    }
    let parts: Vec<&str> = out.split('_').filter(|p| !p.is_empty()).collect();
    parts.join("_")
}

struct Writer<'a> {
    dir: &'a Path,
    formats: &'a [Format],
    manifest: Manifest,
}

impl<'a> Writer<'a> {
    fn new(dir: &'a Path, formats: &'a [Format]) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Writer {
            dir,
            formats,
            manifest: Manifest::default(),
        })
    }

    fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    fn write(&mut self, file: String, contents: &[u8]) -> Result<()> {
        let path = self.dir.join(file);
        fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
        self.manifest.artifacts.push(path);
        Ok(())
    }

    fn csv<R: Serialize>(&mut self, stem: &str, rows: &[R]) -> Result<()> {
        if !self.wants(Format::Csv) {
            return Ok(());
        }
        let path = self.dir.join(format!("{stem}.csv"));
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        for r in rows {
            w.serialize(r).map_err(|e| CliError::io(&path, e.into()))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::io(&path, e.into_error()))?;
        self.write(format!("{stem}.csv"), &bytes)
    }

    fn json<T: Serialize>(
        &mut self,
        stem: &str,
        experiment: &str,
        steps: usize,
        initial: &str,
        data: T,
    ) -> Result<()> {
        if !self.wants(Format::Json) {
            return Ok(());
        }
        let envelope = Envelope {
            experiment,
            steps,
            initial,
            data,
        };
        let mut text = serde_json::to_string_pretty(&envelope).expect("plain data serializes");
        text.push('\n');
        self.write(format!("{stem}.json"), text.as_bytes())
    }

    fn svg(&mut self, stem: &str, contents: impl FnOnce() -> String) -> Result<()> {
        if !self.wants(Format::Svg) {
            return Ok(());
        }
        self.write(format!("{stem}.svg"), contents().as_bytes())
    }
}

pub fn run(config: &ExperimentConfig) -> Result<Manifest> {
    let mut w = Writer::new(&config.output_dir, &config.formats)?;
    let n = config.steps;
    let experiment = config.experiment;
    let initial_text = config
        .initial
        .as_ref()
        .map(|i| i.to_string())
        .unwrap_or_default();
    let stem = format!(
        "{}_n{n}_{}",
        experiment.name().replace('-', "_"),
        slug(&initial_text)
    );

    let mismatch = match (experiment, &config.initial) {
        (Experiment::Single, Some(InitialState::Single { coin, .. })) => {
            let p = coin.to_state().evolve(n).position_distribution();
            let rows = site_rows(n, &p);
            let total: f64 = rows.iter().map(|r| r.p).sum();
            w.manifest.summary.push(format!("sum P(q) = {total:.15}"));
            w.csv(&stem, &rows)?;
            w.json(&stem, experiment.name(), n, &initial_text, &rows)?;
            w.svg(&stem, || {
                line_plot(
                    &format!("{initial_text}, n = {n}"),
                    "q",
                    "P(q)",
                    &[series("P", &rows)],
                )
            })?;
            Ok(())
        }
        (Experiment::TwoPhoton, Some(InitialState::Pair(input))) => {
            let joint = input.state().evolve(n).joint_probability();
            write_joint(&mut w, &stem, n, &initial_text, &joint)?;
            Ok(())
        }
        (Experiment::Coherent, Some(InitialState::Coherent { alpha, beta })) => {
            let field = CoherentField::hx_vy(*alpha, *beta).evolve(n);
            let p = field.normalized_detection()?;
            let rows = site_rows(n, &p);
            w.manifest.summary.push(format!(
                "mean photon number {:.15}",
                field.mean_photon_number()
            ));
            w.csv(&stem, &rows)?;
            #[derive(Serialize)]
            struct Data<'r> {
                mean_photon_number: f64,
                distribution: &'r [SiteRow],
            }
            let data = Data {
                mean_photon_number: field.mean_photon_number(),
                distribution: &rows,
            };
            w.json(&stem, experiment.name(), n, &initial_text, data)?;
            w.svg(&stem, || {
                line_plot(
                    &format!("coherent {initial_text}, n = {n}"),
                    "q",
                    "P(q)",
                    &[series("P", &rows)],
                )
            })?;
            Ok(())
        }
        (Experiment::AsymptoticCompare, Some(InitialState::Single { coin, .. })) => {
            let rows: Vec<ComparisonRow> = compare_single(n, coin)?
                .into_iter()
                .map(|r| ComparisonRow {
                    q: r.q,
                    exact: r.exact,
                    approx: r.approx,
                    abs_diff: r.abs_diff,
                })
                .collect();
            let tv = 0.5 * rows.iter().map(|r| r.abs_diff).sum::<f64>();
            w.manifest.summary.push(format!("total variation {tv:.6}"));
            w.csv(&stem, &rows)?;
            #[derive(Serialize)]
            struct Data<'r> {
                total_variation: f64,
                rows: &'r [ComparisonRow],
            }
            w.json(
                &stem,
                experiment.name(),
                n,
                &initial_text,
                Data {
                    total_variation: tv,
                    rows: &rows,
                },
            )?;
            w.svg(&stem, || {
                let exact = Series {
                    name: "exact",
                    points: rows.iter().map(|r| (r.q as f64, r.exact)).collect(),
                };
                let approx = Series {
                    name: "stationary phase",
                    points: rows.iter().map(|r| (r.q as f64, r.approx)).collect(),
                };
                line_plot(
                    &format!("{initial_text}, n = {n}"),
                    "q",
                    "P(q)",
                    &[exact, approx],
                )
            })?;
            Ok(())
        }
        (Experiment::AsymptoticCompare, Some(InitialState::Pair(input))) => {
            compare_pair(&mut w, &stem, n, *input)?;
            Ok(())
        }
        (Experiment::Tables, _) => run_tables(&mut w, config.which),
        _ => Err(CliError::Usage(format!(
            "{experiment} does not accept {initial_text:?}"
        ))),
    };
    match mismatch {
        Ok(()) => Ok(w.manifest),
        Err(e @ CliError::GoldenMismatch(_)) => {
            for line in &w.manifest.summary {
                eprintln!("{line}");
            }
            Err(e)
        }
        Err(e) => Err(e),
    }
}

fn site_rows(n: usize, p: &BTreeMap<i64, f64>) -> Vec<SiteRow> {
    reachable_sites(n)
        .map(|q| SiteRow {
            q,
            p: p.get(&q).copied().unwrap_or(0.0),
        })
        .collect()
}

fn series<'a>(name: &'a str, rows: &[SiteRow]) -> Series<'a> {
    Series {
        name,
        points: rows.iter().map(|r| (r.q as f64, r.p)).collect(),
    }
}

fn pair_rows(n: usize, joint: &JointDistribution) -> Vec<PairRow> {
    let sites: Vec<i64> = reachable_sites(n).collect();
    let mut rows = Vec::new();
    for &q1 in &sites {
        for &q2 in sites.iter().filter(|&&q2| q2 <= q1) {
            rows.push(PairRow {
                q1,
                q2,
                p: joint.get(q1, q2),
            });
        }
    }
    rows
}

fn dense(n: usize, get: impl Fn(i64, i64) -> f64) -> (Vec<i64>, Vec<Vec<f64>>) {
    let sites: Vec<i64> = reachable_sites(n).collect();
    let matrix = sites
        .iter()
        .map(|&a| sites.iter().map(|&b| get(a, b)).collect())
        .collect();
    (sites, matrix)
}

fn write_joint(
    w: &mut Writer,
    stem: &str,
    n: usize,
    initial: &str,
    joint: &JointDistribution,
) -> Result<()> {
    let rows = pair_rows(n, joint);
    let marginal = site_rows(n, &joint.marginal_at_least_one());
    w.manifest.summary.push(format!(
        "sum P(q1,q2) = {:.15}, max |sigma| = {:.6}",
        joint.total(),
        joint.max_abs_correlation()
    ));
    w.csv(stem, &rows)?;
    w.csv(&format!("{stem}_marginal"), &marginal)?;
    let (sites, matrix) = dense(n, |a, b| joint.get(a, b));
    #[derive(Serialize)]
    struct Data<'r> {
        sites: &'r [i64],
        matrix: &'r [Vec<f64>],
        pairs: &'r [PairRow],
        marginal: &'r [SiteRow],
    }
    w.json(
        stem,
        Experiment::TwoPhoton.name(),
        n,
        initial,
        Data {
            sites: &sites,
            matrix: &matrix,
            pairs: &rows,
            marginal: &marginal,
        },
    )?;
    w.svg(stem, || {
        heatmap(&format!("P(q1, q2), {initial}, n = {n}"), &sites, &matrix)
    })?;
    Ok(())
}

fn compare_pair(w: &mut Writer, stem: &str, n: usize, input: TwoPhotonInput) -> Result<()> {
    let exact = input.state().evolve(n).joint_probability();
    let approx = approx_two_photon_state(n, input)?.joint_probability();
    let tv = total_variation(&exact.iter().collect(), &approx.iter().collect());
    w.manifest.summary.push(format!("total variation {tv:.6}"));
    let rows: Vec<PairComparisonRow> = pair_rows(n, &exact)
        .into_iter()
        .map(|r| {
            let a = approx.get(r.q1, r.q2);
            PairComparisonRow {
                q1: r.q1,
                q2: r.q2,
                exact: r.p,
                approx: a,
                abs_diff: (r.p - a).abs(),
            }
        })
        .collect();
    w.csv(stem, &rows)?;
    #[derive(Serialize)]
    struct Data<'r> {
        total_variation: f64,
        rows: &'r [PairComparisonRow],
    }
    w.json(
        stem,
        Experiment::AsymptoticCompare.name(),
        n,
        &input.label(),
        Data {
            total_variation: tv,
            rows: &rows,
        },
    )?;
    let label = input.label();
    w.svg(&format!("{stem}_exact"), || {
        let (sites, m) = dense(n, |a, b| exact.get(a, b));
        heatmap(&format!("exact P(q1, q2), {label}, n = {n}"), &sites, &m)
    })?;
    w.svg(&format!("{stem}_approx"), || {
        let (sites, m) = dense(n, |a, b| approx.get(a, b));
        heatmap(
            &format!("stationary phase P(q1, q2), {label}, n = {n}"),
            &sites,
            &m,
        )
    })?;
    Ok(())
}

fn run_tables(w: &mut Writer, which: TableSelection) -> Result<()> {
    let mut reports = Vec::new();
    let joint_sets: Vec<&[JointTable]> = match which {
        TableSelection::One => vec![&TABLE_I],
        TableSelection::Three => vec![&TABLE_III],
        TableSelection::All => vec![&TABLE_I, &TABLE_III],
        TableSelection::Two => vec![],
    };
    for table in joint_sets.into_iter().flatten() {
        reports.push(joint_table(w, table)?);
    }
    if matches!(which, TableSelection::Two | TableSelection::All) {
        reports.push(coherent_table(w)?);
    }
    for r in &reports {
        w.manifest.summary.push(r.line());
    }
    check_reports(&reports)
}

fn joint_table(w: &mut Writer, table: &JointTable) -> Result<TableReport> {
    let joint = table.input.state().evolve(TABLE_STEPS).joint_probability();
    let margins = joint.marginal_at_least_one();
    let mut pairs = Vec::new();
    let mut worst = 0.0f64;
    for &q1 in TABLE_SITES.iter().rev() {
        for &q2 in TABLE_SITES.iter().rev().filter(|&&q2| q2 <= q1) {
            let p = joint.get(q1, q2);
            let want = table.probability(q1, q2).expect("table site");
            worst = worst.max((p - want).abs());
            pairs.push(TablePairRow {
                q1,
                q2,
                p,
                p_x128: p * TABLE_SCALE,
                expected_x128: want * TABLE_SCALE,
                abs_diff: (p - want).abs(),
            });
        }
    }
    let mut margin_rows = Vec::new();
    for &q in &TABLE_SITES {
        let p = margins.get(&q).copied().unwrap_or(0.0);
        let want = table.margin(q).expect("table site");
        worst = worst.max((p - want).abs());
        margin_rows.push(TableMarginRow {
            q,
            p,
            p_x128: p * TABLE_SCALE,
            expected_x128: want * TABLE_SCALE,
            abs_diff: (p - want).abs(),
        });
    }
    let name = format!("{} {}", table.label, table.input);
    let stem = format!("table_{}_{}", slug(table.label), slug(&table.input.label()));
    w.csv(&stem, &pairs)?;
    w.csv(&format!("{stem}_margins"), &margin_rows)?;
    #[derive(Serialize)]
    struct Data<'r> {
        table: &'static str,
        max_deviation: f64,
        pass: bool,
        pairs: &'r [TablePairRow],
        margins: &'r [TableMarginRow],
    }
    let report = TableReport {
        name,
        max_deviation: worst,
        tolerance: JOINT_TABLE_TOLERANCE,
    };
    let data = Data {
        table: table.label,
        max_deviation: worst,
        pass: report.passed(),
        pairs: &pairs,
        margins: &margin_rows,
    };
    w.json(
        &stem,
        Experiment::Tables.name(),
        TABLE_STEPS,
        &table.input.label(),
        data,
    )?;
    w.svg(&stem, || {
        let sites = TABLE_SITES.to_vec();
        let m: Vec<Vec<f64>> = sites
            .iter()
            .map(|&a| sites.iter().map(|&b| joint.get(a, b)).collect())
            .collect();
        heatmap(
            &format!("Table {} ({}), P(q1, q2)", table.label, table.input),
            &sites,
            &m,
        )
    })?;
    Ok(report)
}

fn coherent_table(w: &mut Writer) -> Result<TableReport> {
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    let reports = weak_field_report();
    for r in &reports {
        worst = worst.max(r.max_deviation);
        for (i, &q) in TABLE_SITES.iter().enumerate() {
            rows.push(CoherentTableRow {
                row: r.label,
                q,
                p: r.computed[i],
                expected: r.expected[i],
                abs_diff: (r.computed[i] - r.expected[i]).abs(),
            });
        }
    }
    let stem = "table_II";
    w.csv(stem, &rows)?;
    let report = TableReport {
        name: "II coherent".into(),
        max_deviation: worst,
        tolerance: COHERENT_TABLE_TOLERANCE,
    };
    #[derive(Serialize)]
    struct Data<'r> {
        max_deviation: f64,
        pass: bool,
        rows: &'r [CoherentTableRow],
    }
    w.json(
        stem,
        Experiment::Tables.name(),
        TABLE_STEPS,
        "coh",
        Data {
            max_deviation: worst,
            pass: report.passed(),
            rows: &rows,
        },
    )?;
    w.svg(stem, || {
        let series: Vec<Series> = reports
            .iter()
            .map(|r| Series {
                name: r.label,
                points: TABLE_SITES
                    .iter()
                    .zip(r.computed)
                    .map(|(q, p)| (*q as f64, p))
                    .collect(),
            })
            .collect();
        line_plot("Table II, weak-field coherent inputs", "q", "P(q)", &series)
    })?;
    Ok(report)
}
