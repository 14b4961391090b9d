//! Plain-text curvature scenarios.
//!
//! ```text
//! # unit sphere, rotation about the poles
//! n = 2
//! a = 0
//! angles = 0.7
//! R 1 2 1 2 -1
//! ```
//!
//! Indices are 1-based. Each `R` line sets the symmetry orbit of the given
//! component. Values are integers, `p/q` rationals or decimals.

use super::curvature::CurvatureTensor;
use super::isometry::IsometryNormalForm;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub n: usize,
    pub a: usize,
    pub angles: Vec<f64>,
    /// 0-based indices with the value text as written.
    pub entries: Vec<(usize, usize, usize, usize, String)>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let mut n = None;
        let mut a = None;
        let mut angles = Vec::new();
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line: lineno + 1, message };
            if let Some(rest) = line.strip_prefix("R ") {
                let fields: Vec<&str> = rest.split_whitespace().collect();
                if fields.len() != 5 {
                    return Err(err(format!("expected `R i j k l value`, got `{line}`")));
                }
                let mut idx = [0usize; 4];
                for (slot, f) in idx.iter_mut().zip(&fields[..4]) {
                    let v: usize = f.parse().map_err(|_| err(format!("bad index `{f}`")))?;
                    if v == 0 {
                        return Err(err("indices are 1-based".into()));
                    }
                    *slot = v - 1;
                }
                entries.push((idx[0], idx[1], idx[2], idx[3], fields[4].to_string()));
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let value = value.trim();
            match key.trim() {
                "n" => n = Some(value.parse().map_err(|_| err(format!("bad n `{value}`")))?),
                "a" => a = Some(value.parse().map_err(|_| err(format!("bad a `{value}`")))?),
                "angles" => {
                    angles = value
                        .split([',', ' '])
                        .filter(|s| !s.is_empty())
                        .map(|s| s.parse::<f64>().map_err(|_| err(format!("bad angle `{s}`"))))
                        .collect::<Result<_>>()?;
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        let n = n.ok_or(Error::Parse { line: 0, message: "missing `n`".into() })?;
        let a = a.unwrap_or(n);
        Ok(Self { n, a, angles, entries })
    }

    pub fn curvature<S: Scalar>(&self) -> Result<CurvatureTensor<S>> {
        let entries = self
            .entries
            .iter()
            .map(|(i, j, k, l, v)| {
                S::parse_text(v)
                    .map(|x| (*i, *j, *k, *l, x))
                    .ok_or_else(|| Error::Parse { line: 0, message: format!("bad value `{v}`") })
            })
            .collect::<Result<Vec<_>>>()?;
        CurvatureTensor::from_entries(self.n, &entries)
    }

    pub fn isometry(&self) -> Result<IsometryNormalForm<f64>> {
        IsometryNormalForm::from_angles(self.n, self.a, &self.angles)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn parses_sphere_scenario() {
        let s = Scenario::parse("# comment\nn = 2\na = 0\nangles = 0.7\nR 1 2 1 2 -1\n").unwrap();
        assert_eq!(s.n, 2);
        assert_eq!(s.a, 0);
        assert_eq!(s.angles, vec![0.7]);
        let r: CurvatureTensor<Rational> = s.curvature().unwrap();
        assert_eq!(r, CurvatureTensor::round_sphere(2));
        assert!(s.isometry().is_ok());
    }

    #[test]
    fn reports_line_numbers() {
        let e = Scenario::parse("n = 2\nR 1 2 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = Scenario::parse("n = 2\nR 0 1 0 1 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(Scenario::parse("a = 2\n").is_err());
    }

    #[test]
    fn rational_values_in_both_backends() {
        let s = Scenario::parse("n = 2\na = 2\nR 1 2 1 2 -1/2\n").unwrap();
        let exact: CurvatureTensor<Rational> = s.curvature().unwrap();
        let float: CurvatureTensor<f64> = s.curvature().unwrap();
        assert_eq!(float, exact.to_f64());
        assert_eq!(*float.get(0, 1, 0, 1), -0.5);
    }
}
