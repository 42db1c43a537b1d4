use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::TestFunction;
use crate::error::{Error, Result};
use crate::padic::{Ball, BallJson};
use crate::scalars::{format_rational, parse_rational, CyclotomicScalar, ExtScalar};

/// One ball term: `{"center": [...], "gamma": g, "coeff": {"1": [[k, "q"]], "s": ...}}`.
///
/// Coefficient keys name the basis element multiplying each cyclotomic part:
/// `"1"`, `"s"` (σ_p), and on input also `"r"` (√p) and `"sr"` (σ_p√p).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub center: Vec<String>,
    pub gamma: i64,
    pub coeff: BTreeMap<String, Vec<(u64, String)>>,
}

/// Whole-file wire format. Exponents `k` in coefficients refer to
/// `ζ_{p^level}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunctionFile {
    pub prime: u64,
    pub dim: usize,
    #[serde(default)]
    pub level: u32,
    pub terms: Vec<TermJson>,
}

fn encode_cyc(c: &CyclotomicScalar, level: u32) -> Vec<(u64, String)> {
    c.terms_at_level(level)
        .into_iter()
        .map(|(k, q)| (k as u64, format_rational(&q)))
        .collect()
}

fn decode_cyc(p: u64, level: u32, raw: &[(u64, String)]) -> Result<CyclotomicScalar> {
    let terms = raw
        .iter()
        .map(|(k, q)| Ok((*k, parse_rational(q)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CyclotomicScalar::from_powers(p, level, terms))
}

impl TestFunction<ExtScalar> {
    pub fn to_file(&self) -> TestFunctionFile {
        let level = self.raw_terms().values().map(ExtScalar::level).max().unwrap_or(0);
        let terms = self
            .terms()
            .map(|(ball, c)| {
                let BallJson { center, gamma } = ball.to_json();
                let coeff = c
                    .tagged_components()
                    .into_iter()
                    .map(|(tag, part)| (tag.to_string(), encode_cyc(part, level)))
                    .collect();
                TermJson { center, gamma, coeff }
            })
            .collect();
        TestFunctionFile {
            prime: self.prime(),
            dim: self.dim(),
            level,
            terms,
        }
    }

    pub fn from_file(file: &TestFunctionFile, depth_bound: u32) -> Result<Self> {
        let p = file.prime;
        crate::quadform::check_odd_prime(p)?;
        let mut raw = Vec::with_capacity(file.terms.len());
        for term in &file.terms {
            if term.center.len() != file.dim {
                return Err(Error::DimensionMismatch(file.dim, term.center.len()));
            }
            let ball = Ball::from_json(
                p,
                &BallJson {
                    center: term.center.clone(),
                    gamma: term.gamma,
                },
            )?;
            let mut parts: [CyclotomicScalar; 4] = std::array::from_fn(|_| CyclotomicScalar::zero(p));
            for (key, value) in &term.coeff {
                let slot = match key.as_str() {
                    "1" => 0,
                    "s" => 1,
                    "r" => 2,
                    "sr" => 3,
                    other => return Err(Error::Invalid(format!("unknown coefficient key {other:?}"))),
                };
                parts[slot] = &parts[slot] + &decode_cyc(p, file.level, value)?;
            }
            let [a, b, c, d] = parts;
            raw.push((ball, ExtScalar::from_components(a, b, c, d)?));
        }
        Self::from_terms(p, file.dim, raw, depth_bound)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    pub fn from_json_str(s: &str, depth_bound: u32) -> Result<Self> {
        let file: TestFunctionFile =
            serde_json::from_str(s).map_err(|e| Error::Invalid(format!("test-function JSON: {e}")))?;
        Self::from_file(&file, depth_bound)
    }

    pub fn load(path: &Path, depth_bound: u32) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text, depth_bound)
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use crate::scalars::ExtScalar;

    #[test]
    fn parses_documented_example() {
        let text = r#"{"prime":5,"dim":4,"terms":[{"center":["1/5","0","0","0"],"gamma":-1,"coeff":{"1":[[0,"3/2"]]}}]}"#;
        let f = TestFunction::<ExtScalar>::from_json_str(text, 64).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.integral().as_rational().unwrap(), &crate::scalars::rat(3, 1250));
    }

    #[test]
    fn round_trip_with_phases() {
        let p = 3;
        for f in [lizorkin0(p, 2), random_phi(p, 2, 4).fourier(), shifted_box(p, 3).fourier()] {
            let g = f.scale(&ExtScalar::sigma(p));
            for h in [f, g] {
                let back = TestFunction::<ExtScalar>::from_json_str(&h.to_json_string(), 64).unwrap();
                assert_eq!(back, h);
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let bad_dim = r#"{"prime":5,"dim":2,"terms":[{"center":["0"],"gamma":0,"coeff":{"1":[[0,"1"]]}}]}"#;
        assert!(TestFunction::<ExtScalar>::from_json_str(bad_dim, 64).is_err());
        let bad_key = r#"{"prime":5,"dim":1,"terms":[{"center":["0"],"gamma":0,"coeff":{"x":[[0,"1"]]}}]}"#;
        assert!(TestFunction::<ExtScalar>::from_json_str(bad_key, 64).is_err());
        let even = r#"{"prime":2,"dim":1,"terms":[]}"#;
        assert!(TestFunction::<ExtScalar>::from_json_str(even, 64).is_err());
    }
}
