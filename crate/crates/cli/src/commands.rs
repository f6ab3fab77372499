//! Command implementations. Each returns the process exit code on success.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use rayon::prelude::*;
use rotsym::geometry::RotSymManifold;
use rotsym::io::write_embedding_csv;
use rotsym::{
    deep_well_profile, sharp_turn_profile, tube_comparison, validate_profile, CertifyOptions,
    ComparisonOptions, ComparisonSetup, DistanceBounds, DistortionReport, Error, GeometryOptions,
    Manifold, Profile, ProfileDocument, ValidationOptions,
};
use serde::Serialize;

use crate::{Cli, ExampleKind};

/// Rows of the cylinder part in the appended embedding table.
const CYLINDER_ROWS: usize = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The mathematics rejected the input.
    #[error("{0}")]
    Domain(Error),
    /// Unreadable, unparsable or structurally malformed input, or an output failure.
    #[error("{0}")]
    Input(String),
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::Parse(_) | Error::Io(_) | Error::MalformedPieces(_) => {
                CliError::Input(err.to_string())
            }
            other => CliError::Domain(other),
        }
    }
}

fn io_error(path: &Path, err: io::Error) -> CliError {
    CliError::Input(format!("{}: {err}", path.display()))
}

type CliResult<V> = std::result::Result<V, CliError>;

fn geometry_options(cli: &Cli) -> GeometryOptions<f64> {
    GeometryOptions {
        quad_tol: cli.tol,
        ..Default::default()
    }
}

fn comparison_options(cli: &Cli) -> ComparisonOptions<f64> {
    ComparisonOptions {
        rdelta_exponent: cli.rdelta_exponent,
    }
}

fn certify_options(cli: &Cli) -> CertifyOptions {
    CertifyOptions {
        seed: cli.seed,
        ..Default::default()
    }
}

fn read_profile(path: &Path) -> CliResult<Profile> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    Ok(ProfileDocument::from_json(&text)?.to_profile()?)
}

/// Writes to `path`, or to stdout when absent.
fn open_output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    match path {
        Some(p) => Ok(Box::new(BufWriter::new(
            File::create(p).map_err(|e| io_error(p, e))?,
        ))),
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn emit_json<V: Serialize>(value: &V, path: Option<&Path>) -> CliResult<()> {
    let mut out = open_output(path)?;
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Input(e.to_string()))?;
    writeln!(out, "{text}")
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Input(e.to_string()))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| io_error(path, e))
}

/// `dir/stem{suffix}.ext`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}{suffix}"),
    };
    path.with_file_name(name)
}

fn parse_list<V: std::str::FromStr>(text: &str, flag: &str) -> CliResult<Vec<V>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| CliError::Input(format!("{flag}: cannot parse '{s}'")))
        })
        .collect()
}

fn check_delta(delta: f64) -> CliResult<()> {
    if (0.0..1.0).contains(&delta) {
        Ok(())
    } else {
        Err(CliError::Domain(Error::DeltaOutOfRange { delta }))
    }
}

pub fn validate(cli: &Cli) -> CliResult<ExitCode> {
    let path = cli
        .profile
        .as_deref()
        .ok_or_else(|| CliError::Input("validate needs --profile".into()))?;
    let profile = read_profile(path)?;
    let report = validate_profile(&profile, &ValidationOptions::default());
    emit_json(&report, cli.out.as_deref())?;
    Ok(if report.valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[derive(Serialize)]
struct CompareReport {
    n: usize,
    m0: f64,
    r0: f64,
    r1: f64,
    r_delta: f64,
    a_delta: f64,
    rdelta_exponent: f64,
    #[serde(flatten)]
    distortion: DistortionReport,
    bounds: Option<DistanceBounds>,
}

/// The manifold named by `--profile`, or the deep well built from `--n/--A0/--A1/--L/--delta`.
fn input_manifold(cli: &Cli) -> CliResult<Manifold> {
    let profile = match (&cli.profile, cli.delta) {
        (Some(_), Some(_)) => {
            return Err(CliError::Input(
                "give either --profile or --delta, not both".into(),
            ))
        }
        (Some(path), None) => read_profile(path)?,
        (None, Some(delta)) => {
            check_delta(delta)?;
            deep_well_profile(
                cli.n,
                cli.a0_or_default(),
                cli.a1_or_default(),
                cli.l,
                delta,
            )?
            .profile
        }
        (None, None) => return Err(CliError::Input("need --profile or --delta".into())),
    };
    Ok(RotSymManifold::new(profile, geometry_options(cli))?)
}

pub fn compare(cli: &Cli) -> CliResult<ExitCode> {
    let manifold = input_manifold(cli)?;
    let setup = ComparisonSetup::new(manifold, comparison_options(cli))?;
    let distortion = setup.certify(&certify_options(cli))?;
    let a0 = cli.a0.unwrap_or_else(|| setup.manifold().boundary_area());
    let bounds = match (
        cli.d,
        cli.a1
            .or(cli.profile.is_none().then(|| cli.a1_or_default())),
    ) {
        (Some(d), Some(a1)) => Some(tube_comparison(&setup, a0, a1, d)?),
        (Some(_), None) => {
            return Err(CliError::Input(
                "tube bounds need --A1 together with --D".into(),
            ))
        }
        _ => None,
    };
    if let Some(path) = &cli.csv {
        write_embeddings(&setup, path)?;
    }
    let report = CompareReport {
        n: setup.n(),
        m0: setup.m0,
        r0: setup.r0,
        r1: setup.r1,
        r_delta: setup.r_delta,
        a_delta: setup.a_delta,
        rdelta_exponent: setup.rdelta_exponent,
        distortion,
        bounds,
    };
    emit_json(&report, cli.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

/// Embedding tables of `M` (heights in the common frame) and of `M_Sch(m₀, L)`.
fn write_embeddings(setup: &ComparisonSetup, path: &Path) -> CliResult<()> {
    let mut rows = setup.manifold().embedding_rows()?;
    for row in &mut rows {
        row.z += setup.z_anchor;
    }
    let file = File::create(path).map_err(|e| io_error(path, e))?;
    write_embedding_csv(BufWriter::new(file), &rows)?;
    let appended_path = sibling(path, "_appended");
    let appended = setup.model().embedding_rows(CYLINDER_ROWS)?;
    let file = File::create(&appended_path).map_err(|e| io_error(&appended_path, e))?;
    write_embedding_csv(BufWriter::new(file), &appended)?;
    Ok(())
}

const SWEEP_HEADER: [&str; 14] = [
    "delta",
    "depth",
    "lip_bound",
    "ifd_lipschitz",
    "ifd_filling",
    "D1",
    "D2",
    "V1",
    "V2",
    "A1",
    "A2",
    "max_ratio",
    "min_ratio",
    "error",
];

/// Default tube radius of sweep rows.
const SWEEP_D: f64 = 2.0;

fn sweep_row(
    cli: &Cli,
    delta: f64,
) -> std::result::Result<(DistortionReport, DistanceBounds), Error> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::DeltaOutOfRange { delta });
    }
    let (a0, a1) = (cli.a0_or_default(), cli.a1_or_default());
    let well = deep_well_profile(cli.n, a0, a1, cli.l, delta)?;
    let manifold = RotSymManifold::new(well.profile, geometry_options(cli))?;
    let setup = ComparisonSetup::new(manifold, comparison_options(cli))?;
    let report = setup.certify(&certify_options(cli))?;
    let bounds = tube_comparison(&setup, a0, a1, cli.d.unwrap_or(SWEEP_D))?;
    Ok((report, bounds))
}

pub fn sweep(cli: &Cli) -> CliResult<ExitCode> {
    let deltas: Vec<f64> = parse_list(&cli.sweep, "--sweep")?;
    let rows: Vec<Vec<String>> = deltas
        .par_iter()
        .map(|&delta| match sweep_row(cli, delta) {
            Ok((r, b)) => {
                let i = &b.inputs;
                let values = [
                    delta,
                    r.depth,
                    r.lip_bound,
                    b.ifd_lipschitz,
                    b.ifd_filling,
                    i.d1,
                    i.d2,
                    i.v1,
                    i.v2,
                    i.a1,
                    i.a2,
                    r.max_ratio,
                    r.min_ratio,
                ];
                values
                    .iter()
                    .map(|v| format!("{v:e}"))
                    .chain([String::new()])
                    .collect()
            }
            Err(err) => {
                let mut row = vec![format!("{delta:e}")];
                row.extend(std::iter::repeat_n(String::new(), SWEEP_HEADER.len() - 2));
                row.push(err.to_string());
                row
            }
        })
        .collect();

    let mut writer = csv::Writer::from_writer(open_output(cli.out.as_deref())?);
    let csv_error = |e: csv::Error| CliError::Input(e.to_string());
    writer.write_record(SWEEP_HEADER).map_err(csv_error)?;
    for row in &rows {
        writer.write_record(row).map_err(csv_error)?;
    }
    writer.flush().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct DeepWellSummary {
    kind: &'static str,
    n: usize,
    delta: f64,
    requested_depth: f64,
    epsilon: f64,
    r0: f64,
    r_lower: f64,
    r_upper: f64,
    r1: f64,
    separation_bound: f64,
    /// Distance from the boundary to the sphere of area `A1`.
    measured_separation: f64,
}

#[derive(Serialize)]
struct SharpTurnEntry {
    j: f64,
    slope: f64,
    m_j: f64,
    sup_scalar_curvature: f64,
    sup_at_r: f64,
    max_ratio: f64,
    lip_bound: f64,
    depth: f64,
}

#[derive(Serialize)]
struct SharpTurnSummary {
    kind: &'static str,
    n: usize,
    m0: f64,
    sequence: Vec<SharpTurnEntry>,
}

pub fn example(cli: &Cli, kind: ExampleKind, j: &str, m0: f64) -> CliResult<ExitCode> {
    match kind {
        ExampleKind::DeepWell => {
            let delta = cli.delta.unwrap_or(0.02);
            check_delta(delta)?;
            let (a0, a1) = (cli.a0_or_default(), cli.a1_or_default());
            let well = deep_well_profile(cli.n, a0, a1, cli.l, delta)?;
            if let Some(path) = &cli.out {
                write_file(
                    path,
                    &ProfileDocument::from_profile(&well.profile).to_json_pretty(),
                )?;
            }
            let r0 = well.profile.r0();
            let manifold = RotSymManifold::new(well.profile, geometry_options(cli))?;
            let summary = DeepWellSummary {
                kind: "deep-well",
                n: cli.n,
                delta,
                requested_depth: cli.l,
                epsilon: well.epsilon,
                r0,
                r_lower: well.r_lower,
                r_upper: well.r_upper,
                r1: well.r1,
                separation_bound: well.separation_bound,
                measured_separation: manifold.sphere_distance(a0, a1)?,
            };
            emit_json(&summary, None)?;
        }
        ExampleKind::SharpTurn => {
            let indices: Vec<f64> = parse_list(j, "--j")?;
            if indices.iter().any(|&j| j.is_nan() || j <= 0.0) {
                return Err(CliError::Input("--j values must be positive".into()));
            }
            let sequence = indices
                .par_iter()
                .map(|&j| -> CliResult<(SharpTurnEntry, Profile)> {
                    let (slope, m_j) = (10.0 * j, m0 * (1.0 + 0.1 / j));
                    let profile = sharp_turn_profile(cli.n, m0, m_j, slope)?;
                    let manifold = RotSymManifold::new(profile.clone(), geometry_options(cli))?;
                    let (sup_at_r, sup) = manifold.max_scalar_curvature(2001)?;
                    let setup = ComparisonSetup::new(manifold, comparison_options(cli))?;
                    let report = setup.certify(&certify_options(cli))?;
                    let entry = SharpTurnEntry {
                        j,
                        slope,
                        m_j,
                        sup_scalar_curvature: sup,
                        sup_at_r,
                        max_ratio: report.max_ratio,
                        lip_bound: report.lip_bound,
                        depth: setup.depth,
                    };
                    Ok((entry, profile))
                })
                .collect::<CliResult<Vec<_>>>()?;
            if let Some(path) = &cli.out {
                for (entry, profile) in &sequence {
                    let text = ProfileDocument::from_profile(profile).to_json_pretty();
                    write_file(&sibling(path, &format!("_j{}", entry.j)), &text)?;
                }
            }
            let summary = SharpTurnSummary {
                kind: "sharp-turn",
                n: cli.n,
                m0,
                sequence: sequence.into_iter().map(|(entry, _)| entry).collect(),
            };
            emit_json(&summary, None)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
