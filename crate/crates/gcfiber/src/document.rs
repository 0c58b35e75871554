//! Triangle files: decimal strings parsed to exact rationals, checked exactly,
//! then converted to floats for the numeric side.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use gcfiber_core::{GcTriangle, ToleranceConfig, TrianglePosition};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CliError, Diagnostic};

/// Largest decimal exponent accepted, to keep rationals small.
const MAX_EXPONENT: i64 = 400;

/// An exact decimal number.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Decimal(BigRational);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecimalError(String);

impl fmt::Display for DecimalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a decimal number: {:?}", self.0)
    }
}

impl std::error::Error for DecimalError {}

impl Decimal {
    pub fn value(&self) -> &BigRational {
        &self.0
    }

    /// Shortest decimal that rounds back to `x`.
    pub fn from_f64(x: f64) -> Option<Decimal> {
        x.is_finite().then(|| format!("{x}").parse().ok()).flatten()
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.0.to_f64().filter(|x| x.is_finite())
    }
}

fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), e as usize)
}

impl FromStr for Decimal {
    type Err = DecimalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DecimalError(s.to_string());
        let t = s.trim();
        let (negative, body) = match t.as_bytes().first() {
            Some(b'-') => (true, &t[1..]),
            Some(b'+') => (false, &t[1..]),
            _ => (false, t),
        };
        let (mantissa, exponent) = match body.find(['e', 'E']) {
            Some(p) => (&body[..p], body[p + 1..].parse::<i64>().map_err(|_| bad())?),
            None => (body, 0),
        };
        let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        let digits_ok = |d: &str| d.bytes().all(|b| b.is_ascii_digit());
        if int_part.len() + frac_part.len() == 0 || !digits_ok(int_part) || !digits_ok(frac_part) {
            return Err(bad());
        }
        let scale = exponent - frac_part.len() as i64;
        if exponent.abs() > MAX_EXPONENT || scale.abs() > 2 * MAX_EXPONENT {
            return Err(bad());
        }
        let mut n: BigInt = format!("{int_part}{frac_part}")
            .parse()
            .map_err(|_| bad())?;
        if negative {
            n = -n;
        }
        let r = if scale >= 0 {
            BigRational::from_integer(n * pow10(scale as u32))
        } else {
            BigRational::new(n, pow10((-scale) as u32))
        };
        Ok(Decimal(r))
    }
}

impl fmt::Display for Decimal {
    /// Plain decimal when the denominator divides a power of ten, `p/q` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.0;
        let mut d = r.denom().clone();
        let mut twos = 0u32;
        let mut fives = 0u32;
        let two = BigInt::from(2u32);
        let five = BigInt::from(5u32);
        while (&d % &two).is_zero() {
            d /= &two;
            twos += 1;
        }
        while (&d % &five).is_zero() {
            d /= &five;
            fives += 1;
        }
        if !d.is_one() {
            return write!(f, "{}/{}", r.numer(), r.denom());
        }
        let places = twos.max(fives);
        let scaled = (r * BigRational::from_integer(pow10(places))).to_integer();
        let digits = scaled.abs().to_string();
        let sign = if scaled.is_negative() { "-" } else { "" };
        if places == 0 {
            return write!(f, "{sign}{digits}");
        }
        let p = places as usize;
        let padded = format!("{digits:0>width$}", width = p + 1);
        let (int, frac) = padded.split_at(padded.len() - p);
        write!(f, "{sign}{int}.{frac}")
    }
}

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Decimal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(serde_json::Number),
        }
        let text = match Raw::deserialize(d)? {
            Raw::Text(s) => s,
            Raw::Number(n) => n.to_string(),
        };
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Partial overrides of the numeric tolerances.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_eq: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_spec: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_rank: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_iso: Option<f64>,
}

impl ToleranceOverrides {
    pub fn apply(&self, mut cfg: ToleranceConfig) -> ToleranceConfig {
        cfg.eps_eq = self.eps_eq.unwrap_or(cfg.eps_eq);
        cfg.eps_spec = self.eps_spec.unwrap_or(cfg.eps_spec);
        cfg.eps_rank = self.eps_rank.unwrap_or(cfg.eps_rank);
        cfg.eps_iso = self.eps_iso.unwrap_or(cfg.eps_iso);
        cfg
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub dimension: usize,
    pub classification: String,
}

/// On-disk triangle: `lambda` is row `n`, `rows` holds rows `1..n-1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub lambda: Vec<Decimal>,
    pub rows: Vec<Vec<Decimal>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceOverrides>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

impl TriangleDocument {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text).map_err(|e| CliError::parse(path, e.to_string()))
    }

    /// Document for a float triangle, each value written as its shortest
    /// round-trip decimal so equalities and order survive exactly.
    pub fn from_triangle(t: &GcTriangle) -> Option<Self> {
        let conv = |row: &[f64]| {
            row.iter()
                .map(|&x| Decimal::from_f64(x))
                .collect::<Option<Vec<_>>>()
        };
        let n = t.n();
        Some(TriangleDocument {
            name: None,
            family: None,
            lambda: conv(t.lambda())?,
            rows: (1..n).map(|k| conv(t.row(k))).collect::<Option<_>>()?,
            tolerances: None,
            seed: None,
            expected: None,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    /// All rows `1..=n` as exact values, after checking the shape.
    pub fn exact_rows(&self) -> Result<Vec<Vec<Decimal>>, String> {
        let n = self.lambda.len();
        if n == 0 {
            return Err("lambda is empty".into());
        }
        if self.rows.len() != n - 1 {
            return Err(format!(
                "expected {} rows above lambda, found {}",
                n - 1,
                self.rows.len()
            ));
        }
        for (idx, row) in self.rows.iter().enumerate() {
            if row.len() != idx + 1 {
                return Err(format!(
                    "row {} has {} entries, expected {}",
                    idx + 1,
                    row.len(),
                    idx + 1
                ));
            }
        }
        let mut rows = self.rows.clone();
        rows.push(self.lambda.clone());
        Ok(rows)
    }
}

fn position_name(p: TrianglePosition) -> String {
    format!("(i={}, k={})", p.i, p.k)
}

/// Every violated row-order or interlacing inequality, checked exactly.
pub fn exact_violations(rows: &[Vec<Decimal>]) -> Vec<Diagnostic> {
    let n = rows.len();
    let at = |p: TrianglePosition| &rows[p.k - 1][p.i - 1];
    let mut out = Vec::new();
    let mut check = |lower: TrianglePosition, upper: TrianglePosition, what: &str| {
        let (lo, hi) = (at(lower), at(upper));
        if lo > hi {
            let gap = Decimal(lo.value() - hi.value());
            out.push(Diagnostic {
                message: format!(
                    "{what}: entry {} = {lo} exceeds entry {} = {hi} by {gap}",
                    position_name(lower),
                    position_name(upper)
                ),
            });
        }
    };
    for k in 1..=n {
        for i in 1..k {
            check(
                TrianglePosition::new(i + 1, k),
                TrianglePosition::new(i, k),
                "row order",
            );
        }
        if k < n {
            for i in 1..=k {
                let here = TrianglePosition::new(i, k);
                check(here, TrianglePosition::new(i, k + 1), "interlacing");
                check(TrianglePosition::new(i + 1, k + 1), here, "interlacing");
            }
        }
    }
    out
}

/// A checked triangle with both its exact and its float form.
#[derive(Clone, Debug)]
pub struct LoadedTriangle {
    pub document: TriangleDocument,
    pub triangle: GcTriangle,
    decimals: HashMap<u64, Decimal>,
}

impl LoadedTriangle {
    pub fn from_document(document: TriangleDocument, path: &Path) -> Result<Self, CliError> {
        let rows = document
            .exact_rows()
            .map_err(|m| CliError::parse(path, m))?;
        let diagnostics = exact_violations(&rows);
        if !diagnostics.is_empty() {
            return Err(CliError::Invalid {
                path: path.into(),
                diagnostics,
            });
        }
        // Distinct exact values must stay distinct as floats.
        let mut by_float: BTreeMap<u64, Decimal> = BTreeMap::new();
        let mut float_rows = Vec::with_capacity(rows.len());
        for row in &rows {
            let mut fr = Vec::with_capacity(row.len());
            for d in row {
                let x = d
                    .to_f64()
                    .ok_or_else(|| CliError::parse(path, format!("{d} is out of range")))?;
                let x = if x == 0.0 { 0.0 } else { x };
                match by_float.get(&x.to_bits()) {
                    Some(prev) if prev != d => {
                        return Err(CliError::parse(
                            path,
                            format!("{prev} and {d} are distinct but round to the same double {x}"),
                        ))
                    }
                    Some(_) => {}
                    None => {
                        by_float.insert(x.to_bits(), d.clone());
                    }
                }
                fr.push(x);
            }
            float_rows.push(fr);
        }
        let triangle =
            GcTriangle::new(float_rows).map_err(|e| CliError::parse(path, e.to_string()))?;
        Ok(LoadedTriangle {
            document,
            triangle,
            decimals: by_float.into_iter().collect(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::from_document(TriangleDocument::read(path)?, path)
    }

    /// The input decimal for a triangle value, or its shortest float form.
    pub fn decimal_of(&self, x: f64) -> String {
        let x = if x == 0.0 { 0.0 } else { x };
        match self.decimals.get(&x.to_bits()) {
            Some(d) => d.to_string(),
            None => format!("{x}"),
        }
    }

    pub fn tolerances(&self, base: ToleranceConfig) -> ToleranceConfig {
        match &self.document.tolerances {
            Some(o) => o.apply(base),
            None => base,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Decimal {
        s.parse().unwrap()
    }

    #[test]
    fn parses_decimal_forms() {
        assert_eq!(d("2.50"), d("2.5"));
        assert_eq!(d("25e-1"), d("2.5"));
        assert_eq!(d("-0.125").to_string(), "-0.125");
        assert_eq!(d("+3").to_string(), "3");
        assert_eq!(d(".5").to_string(), "0.5");
        assert_eq!(d("1.").to_string(), "1");
        assert_eq!(d("1E3").to_string(), "1000");
        assert_eq!(d("0.0").to_string(), "0");
        for bad in [
            "", "-", ".", "1.2.3", "abc", "1e", "0x10", "1e100000", "nan", "inf",
        ] {
            assert!(bad.parse::<Decimal>().is_err(), "{bad}");
        }
    }

    #[test]
    fn exact_comparison_beats_floats() {
        // 0.1 + 0.2 != 0.3 in doubles, but these are separate literals.
        assert!(d("0.30000000000000004") > d("0.3"));
        assert_eq!(d("0.1").to_f64(), Some(0.1));
    }

    #[test]
    fn shortest_round_trip() {
        for x in [2.137, -0.001, 1e-7, 123456.789, 0.1 + 0.2] {
            let dec = Decimal::from_f64(x).unwrap();
            assert_eq!(dec.to_f64(), Some(x));
        }
    }

    #[test]
    fn shape_errors() {
        let doc: TriangleDocument =
            serde_json::from_str(r#"{"lambda":["3","2","1"],"rows":[["2"]]}"#).unwrap();
        assert!(doc.exact_rows().is_err());
        let doc: TriangleDocument =
            serde_json::from_str(r#"{"lambda":["3","2"],"rows":[["2","1"]]}"#).unwrap();
        assert!(doc.exact_rows().is_err());
    }

    #[test]
    fn names_violated_positions() {
        let doc: TriangleDocument =
            serde_json::from_str(r#"{"lambda":["3","1"],"rows":[["4"]]}"#).unwrap();
        let v = exact_violations(&doc.exact_rows().unwrap());
        assert_eq!(v.len(), 1);
        assert!(v[0].message.contains("(i=1, k=1) = 4"));
        assert!(v[0].message.contains("(i=1, k=2) = 3"));
    }

    #[test]
    fn numbers_are_accepted() {
        let doc: TriangleDocument =
            serde_json::from_str(r#"{"lambda":[3, 1.5],"rows":[[2]]}"#).unwrap();
        assert_eq!(doc.lambda[1], d("1.5"));
    }

    #[test]
    fn collision_is_rejected() {
        let text = r#"{"lambda":["1.00000000000000000001","1"],"rows":[["1"]]}"#;
        let doc = TriangleDocument::from_json(text).unwrap();
        let err = LoadedTriangle::from_document(doc, Path::new("x")).unwrap_err();
        assert!(matches!(err, CliError::Parse { .. }));
    }

    proptest::proptest! {
        #[test]
        fn float_decimals_keep_value_and_order(x in -1e6f64..1e6, y in -1e6f64..1e6) {
            let (dx, dy) = (Decimal::from_f64(x).unwrap(), Decimal::from_f64(y).unwrap());
            proptest::prop_assert_eq!(dx.to_f64(), Some(x));
            proptest::prop_assert_eq!(dx.cmp(&dy), x.partial_cmp(&y).unwrap());
            proptest::prop_assert_eq!(dx.to_string().parse::<Decimal>().unwrap(), dx);
        }
    }
}
