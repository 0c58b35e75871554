//! JSON and CSV shapes of the command outputs.

use gcfiber_core::linalg::Hermitian;
use gcfiber_core::pattern::{PatternAnalysis, TopologyDescriptor};
use gcfiber_core::symplectic::FiberReport;
use gcfiber_core::GcTriangle;
use serde::Serialize;

use crate::document::LoadedTriangle;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct ChainJson {
    pub value: String,
    pub rows: Vec<usize>,
    pub row_counts: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TopologyJson {
    pub su: Vec<usize>,
    pub torus: usize,
    pub certified: bool,
    pub descriptor: String,
}

impl From<&TopologyDescriptor> for TopologyJson {
    fn from(t: &TopologyDescriptor) -> Self {
        TopologyJson {
            su: t.su_factors.clone(),
            torus: t.torus_dim,
            certified: t.certified,
            descriptor: t.to_string(),
        }
    }
}

/// Combinatorial summary of one triangle.
#[derive(Clone, Debug, Serialize)]
pub struct PatternJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dimension: usize,
    #[serde(rename = "N")]
    pub regular_dimension: usize,
    pub classification: String,
    pub lagrangian: bool,
    pub chains: Vec<ChainJson>,
    pub topology: TopologyJson,
}

impl PatternJson {
    pub fn new(input: &LoadedTriangle, a: &PatternAnalysis) -> Self {
        PatternJson {
            name: input.document.name.clone(),
            dimension: a.dimension,
            regular_dimension: a.regular_dimension,
            classification: a.classification.kind.as_str().to_string(),
            lagrangian: a.classification.lagrangian,
            chains: a
                .chains
                .iter()
                .map(|c| ChainJson {
                    value: input.decimal_of(c.value()),
                    rows: (c.first_row()..=c.last_row()).collect(),
                    row_counts: c.row_counts().to_vec(),
                })
                .collect(),
            topology: (&a.topology).into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TriangleJson {
    pub lambda: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl TriangleJson {
    pub fn new(input: &LoadedTriangle, t: &GcTriangle) -> Self {
        let conv = |r: &[f64]| r.iter().map(|&x| input.decimal_of(x)).collect();
        TriangleJson {
            lambda: conv(t.lambda()),
            rows: (1..t.n()).map(|k| conv(t.row(k))).collect(),
        }
    }
}

/// Verification result: the pattern summary plus the three dimension ledgers.
#[derive(Clone, Debug, Serialize)]
pub struct FiberReportJson {
    pub version: &'static str,
    pub seed: u64,
    pub samples: usize,
    pub triangle: TriangleJson,
    #[serde(flatten)]
    pub pattern: PatternJson,
    pub dim_combinatorial: usize,
    pub dim_groups: i64,
    pub dim_numeric: usize,
    pub isotropy_residual: f64,
    pub eps_iso: f64,
    pub h_prime_dims: Vec<usize>,
    pub g_dims: Vec<usize>,
    pub consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_match: Option<bool>,
}

impl FiberReportJson {
    pub fn new(
        input: &LoadedTriangle,
        analysis: &PatternAnalysis,
        r: &FiberReport,
        seed: u64,
        samples: usize,
        eps_iso: f64,
    ) -> Self {
        let expected_match = input.document.expected.as_ref().map(|e| {
            e.dimension == r.dim_combinatorial && e.classification == r.classification.kind.as_str()
        });
        FiberReportJson {
            version: VERSION,
            seed,
            samples,
            triangle: TriangleJson::new(input, &r.triangle),
            pattern: PatternJson::new(input, analysis),
            dim_combinatorial: r.dim_combinatorial,
            dim_groups: r.dim_groups,
            dim_numeric: r.dim_numeric,
            isotropy_residual: r.isotropy_residual,
            eps_iso,
            h_prime_dims: r.h_prime_dims.clone(),
            g_dims: r.g_dims.clone(),
            consistent: r.consistent,
            expected_match,
        }
    }

    /// Consistent, and matching any expectation carried by the input.
    pub fn passed(&self) -> bool {
        self.consistent && self.expected_match != Some(false)
    }
}

/// Matrix as rows of `[re, im]` pairs.
pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_json(a: &Hermitian) -> MatrixJson {
    let m = a.matrix();
    (0..m.nrows())
        .map(|r| {
            (0..m.ncols())
                .map(|c| [m[(r, c)].re, m[(r, c)].im])
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleDump {
    pub version: &'static str,
    pub seed: u64,
    pub count: usize,
    pub steps: usize,
    pub triangle: TriangleJson,
    pub max_momentum_drift: f64,
    pub samples: Vec<MatrixJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeRow {
    pub name: String,
    pub n: usize,
    pub dimension: usize,
    #[serde(rename = "N")]
    pub regular_dimension: usize,
    pub classification: String,
    pub lagrangian: bool,
    pub chains: usize,
    pub topology: String,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyRow {
    pub name: String,
    pub n: usize,
    pub dim_combinatorial: usize,
    pub dim_groups: i64,
    pub dim_numeric: usize,
    pub classification: String,
    pub lagrangian: bool,
    pub isotropy_residual: f64,
    pub g_dims: String,
    pub h_prime_dims: String,
    pub consistent: bool,
    pub expected_match: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleRow {
    pub sample: usize,
    pub row: usize,
    pub col: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusEntry {
    pub file: String,
    pub family: String,
    pub n: usize,
    pub dimension: usize,
    pub classification: String,
}

pub fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(";")
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("csv row serializes");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}
