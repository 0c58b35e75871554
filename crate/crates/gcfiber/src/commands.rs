use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use gcfiber_core::fiber::{momentum_drift, sample_fiber};
use gcfiber_core::fixtures::standard_corpus;
use gcfiber_core::pattern::{analyze, PatternAnalysis};
use gcfiber_core::symplectic::full_report;
use gcfiber_core::{Seed, ToleranceConfig};

use crate::document::{Expected, LoadedTriangle, TriangleDocument};
use crate::error::{CliError, Diagnostic, ExitCode};
use crate::output::write_atomic;
use crate::report::*;

/// Largest corpus size accepted by `corpus`.
pub const MAX_CORPUS_N: usize = 8;
pub const DEFAULT_SAMPLES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Flags shared by every command.
#[derive(Clone, Debug)]
pub struct Settings {
    pub format: Format,
    pub seed: Option<u64>,
    pub tol_iso: Option<f64>,
    pub samples: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            format: Format::Json,
            seed: None,
            tol_iso: None,
            samples: DEFAULT_SAMPLES,
        }
    }
}

impl Settings {
    /// Flag, then document, then the library default.
    fn seed_for(&self, input: &LoadedTriangle) -> u64 {
        self.seed
            .or(input.document.seed)
            .unwrap_or(Seed::default().0)
    }

    fn tolerances_for(
        &self,
        input: &LoadedTriangle,
        path: &Path,
    ) -> Result<ToleranceConfig, CliError> {
        let mut cfg = input.tolerances(ToleranceConfig::default());
        if let Some(t) = self.tol_iso {
            cfg.eps_iso = t;
        }
        cfg.validate().map_err(|_| {
            CliError::parse(path, "tolerances must be positive with eps_rank > eps_spec")
        })?;
        Ok(cfg)
    }
}

/// Text to emit plus the exit status it implies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub exit: ExitCode,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            exit: ExitCode::Success,
        }
    }
}

fn display_name(input: &LoadedTriangle, path: &Path) -> String {
    input
        .document
        .name
        .clone()
        .unwrap_or_else(|| path.display().to_string())
}

fn analyze_loaded(input: &LoadedTriangle, path: &Path) -> Result<PatternAnalysis, CliError> {
    analyze(&input.triangle).map_err(|e| CliError::Invalid {
        path: path.into(),
        diagnostics: vec![Diagnostic {
            message: e.to_string(),
        }],
    })
}

fn collect<T: serde::Serialize>(items: &[T], format: Format, single: bool) -> String {
    match format {
        Format::Csv => to_csv(items),
        Format::Json if single => to_json(&items[0]),
        Format::Json => to_json(items),
    }
}

pub fn analyze_files(paths: &[PathBuf], s: &Settings) -> Result<Outcome, CliError> {
    let mut json = Vec::new();
    let mut rows = Vec::new();
    for path in paths {
        let input = LoadedTriangle::load(path)?;
        let a = analyze_loaded(&input, path)?;
        rows.push(AnalyzeRow {
            name: display_name(&input, path),
            n: input.triangle.n(),
            dimension: a.dimension,
            regular_dimension: a.regular_dimension,
            classification: a.classification.kind.as_str().into(),
            lagrangian: a.classification.lagrangian,
            chains: a.chains.len(),
            topology: a.topology.to_string(),
            certified: a.topology.certified,
        });
        json.push(PatternJson::new(&input, &a));
    }
    let text = match s.format {
        Format::Csv => to_csv(&rows),
        Format::Json => collect(&json, Format::Json, paths.len() == 1),
    };
    Ok(Outcome::ok(text))
}

pub fn sample_file(
    path: &Path,
    count: usize,
    steps: usize,
    s: &Settings,
) -> Result<Outcome, CliError> {
    let input = LoadedTriangle::load(path)?;
    let cfg = s.tolerances_for(&input, path)?;
    let seed = s.seed_for(&input);
    let construction = |source| CliError::Construction {
        path: path.into(),
        source,
    };
    let points =
        sample_fiber(&input.triangle, count, steps, Seed(seed), &cfg).map_err(construction)?;
    let mut drift: f64 = 0.0;
    for p in &points {
        drift = drift.max(momentum_drift(p, &input.triangle).map_err(construction)?);
    }
    let text = match s.format {
        Format::Json => to_json(&SampleDump {
            version: VERSION,
            seed,
            count,
            steps,
            triangle: TriangleJson::new(&input, &input.triangle),
            max_momentum_drift: drift,
            samples: points.iter().map(matrix_json).collect(),
        }),
        Format::Csv => {
            let mut rows = Vec::new();
            for (idx, p) in points.iter().enumerate() {
                let m = p.matrix();
                for r in 0..m.nrows() {
                    for c in 0..m.ncols() {
                        rows.push(SampleRow {
                            sample: idx,
                            row: r + 1,
                            col: c + 1,
                            re: m[(r, c)].re,
                            im: m[(r, c)].im,
                        });
                    }
                }
            }
            to_csv(&rows)
        }
    };
    Ok(Outcome::ok(text))
}

/// Report for one file; also used directly by the acceptance run.
pub fn verify_one(path: &Path, s: &Settings) -> Result<FiberReportJson, CliError> {
    let input = LoadedTriangle::load(path)?;
    let a = analyze_loaded(&input, path)?;
    let cfg = s.tolerances_for(&input, path)?;
    let seed = s.seed_for(&input);
    let r = full_report(&input.triangle, s.samples, &cfg, Seed(seed)).map_err(|source| {
        CliError::Construction {
            path: path.into(),
            source,
        }
    })?;
    Ok(FiberReportJson::new(
        &input,
        &a,
        &r,
        seed,
        s.samples,
        cfg.eps_iso,
    ))
}

/// Runs `verify_one` over all paths on a few threads, keeping input order.
pub fn verify_many(paths: &[PathBuf], s: &Settings) -> Vec<Result<FiberReportJson, CliError>> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(paths.len())
        .max(1);
    let next = AtomicUsize::new(0);
    let mut slots: Vec<Option<Result<FiberReportJson, CliError>>> =
        (0..paths.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let idx = next.fetch_add(1, Ordering::Relaxed);
                        if idx >= paths.len() {
                            break done;
                        }
                        done.push((idx, verify_one(&paths[idx], s)));
                    }
                })
            })
            .collect();
        for h in handles {
            for (idx, r) in h.join().expect("verify worker panicked") {
                slots[idx] = Some(r);
            }
        }
    });
    slots
        .into_iter()
        .map(|r| r.expect("every path visited"))
        .collect()
}

pub fn verify_files(paths: &[PathBuf], s: &Settings) -> Result<Outcome, CliError> {
    let reports = verify_many(paths, s)
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let exit = if reports.iter().all(FiberReportJson::passed) {
        ExitCode::Success
    } else {
        ExitCode::Inconsistent
    };
    let text = match s.format {
        Format::Json => collect(&reports, Format::Json, paths.len() == 1),
        Format::Csv => {
            let rows: Vec<VerifyRow> = reports
                .iter()
                .zip(paths)
                .map(|(r, p)| VerifyRow {
                    name: r
                        .pattern
                        .name
                        .clone()
                        .unwrap_or_else(|| p.display().to_string()),
                    n: r.triangle.lambda.len(),
                    dim_combinatorial: r.dim_combinatorial,
                    dim_groups: r.dim_groups,
                    dim_numeric: r.dim_numeric,
                    classification: r.pattern.classification.clone(),
                    lagrangian: r.pattern.lagrangian,
                    isotropy_residual: r.isotropy_residual,
                    g_dims: join(&r.g_dims),
                    h_prime_dims: join(&r.h_prime_dims),
                    consistent: r.consistent,
                    expected_match: r.expected_match.map_or(String::new(), |b| b.to_string()),
                })
                .collect();
            to_csv(&rows)
        }
    };
    Ok(Outcome { text, exit })
}

/// Writes one annotated file per corpus triangle and returns an index.
pub fn write_corpus(n_max: usize, out_dir: &Path, s: &Settings) -> Result<Outcome, CliError> {
    if !(2..=MAX_CORPUS_N).contains(&n_max) {
        return Err(CliError::Usage(format!(
            "--n-max must be between 2 and {MAX_CORPUS_N}"
        )));
    }
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let seed = s.seed.unwrap_or(Seed::default().0);
    let mut index = Vec::new();
    for f in standard_corpus(n_max, Seed(seed)) {
        let a = analyze(&f.triangle).map_err(|source| CliError::Construction {
            path: out_dir.into(),
            source,
        })?;
        let mut doc = TriangleDocument::from_triangle(&f.triangle)
            .ok_or_else(|| CliError::Usage(format!("{}: non-finite value", f.name)))?;
        doc.name = Some(f.name.clone());
        doc.family = Some(f.family.label().to_string());
        doc.expected = Some(Expected {
            dimension: a.dimension,
            classification: a.classification.kind.as_str().into(),
        });
        let file = format!("{}.json", f.name);
        write_atomic(&out_dir.join(&file), doc.to_json().as_bytes())?;
        index.push(CorpusEntry {
            file,
            family: f.family.label().into(),
            n: f.triangle.n(),
            dimension: a.dimension,
            classification: a.classification.kind.as_str().into(),
        });
    }
    let text = match s.format {
        Format::Json => to_json(&index),
        Format::Csv => to_csv(&index),
    };
    Ok(Outcome::ok(text))
}
