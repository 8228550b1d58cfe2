//! File formats: variety specs, zeta functions, local factors.
//!
//! Unbounded integers travel as decimal strings and rationals as
//! `"num/den"` strings. Plain JSON integers are accepted on input wherever a
//! decimal string is expected.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use weillab_core::geometry::{MPoly, Model, VarietySpec};
use weillab_core::poly::ZPoly;
use weillab_core::{PrimePower, ZetaFunction};

use crate::error::{Error, Result};

/// On-disk variety description. Each polynomial is a list of terms
/// `[coeff, e_1, .., e_n]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarietyFile {
    pub p: u64,
    #[serde(default = "one")]
    pub a: u32,
    pub model: String,
    pub vars: Vec<String>,
    pub polys: Vec<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multidegree: Option<Vec<u32>>,
}

fn one() -> u32 {
    1
}

pub fn parse_bigint(v: &Value) -> Option<BigInt> {
    match v {
        Value::String(s) => s.trim().parse().ok(),
        Value::Number(n) => n.as_i64().map(BigInt::from).or_else(|| n.as_u64().map(BigInt::from)),
        _ => None,
    }
}

pub fn parse_rational(v: &Value) -> Option<BigRational> {
    match v {
        Value::String(s) => {
            let r: BigRational = s.trim().parse().ok()?;
            Some(r)
        }
        Value::Number(_) => parse_bigint(v).map(BigRational::from_integer),
        _ => None,
    }
}

pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

impl VarietyFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Read { path: path.into(), source })?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        serde_json::from_str(text).map_err(|source| Error::Json { path: origin.into(), source })
    }

    pub fn model(&self) -> Result<Model> {
        match self.model.as_str() {
            "affine" => Ok(Model::Affine),
            "projective" => Ok(Model::Projective),
            other => Err(Error::input(format!("model must be \"affine\" or \"projective\", got {other:?}"))),
        }
    }

    pub fn base(&self) -> Result<PrimePower> {
        Ok(PrimePower::new(self.p, self.a)?)
    }

    fn poly(&self, index: usize, terms: &[Vec<Value>]) -> Result<MPoly> {
        let n = self.vars.len();
        let parsed = terms
            .iter()
            .enumerate()
            .map(|(t, term)| {
                let bad = || Error::input(format!("polynomial {index}, term {t}: expected [coeff, e_1, .., e_{n}]"));
                let (c, exps) = term.split_first().ok_or_else(bad)?;
                let c = parse_bigint(c).ok_or_else(bad)?;
                let exps = exps
                    .iter()
                    .map(|e| e.as_u64().and_then(|e| u32::try_from(e).ok()))
                    .collect::<Option<Vec<u32>>>()
                    .ok_or_else(bad)?;
                Ok((c, exps))
            })
            .collect::<Result<Vec<_>>>()?;
        MPoly::from_integer_terms(self.p as u32, n, &parsed)
            .map_err(|t| Error::input(format!("polynomial {index}, term {t}: needs {n} exponents")))
    }

    pub fn to_spec(&self) -> Result<VarietySpec> {
        let base = self.base()?;
        let polys = self.polys.iter().enumerate().map(|(i, f)| self.poly(i, f)).collect::<Result<Vec<_>>>()?;
        let mut spec = VarietySpec::new(base, self.model()?, self.vars.clone(), polys)?;
        if let Some(d) = self.dim {
            spec = spec.with_dim(d);
        }
        if let Some(m) = &self.multidegree {
            spec = spec.with_multidegree(m.clone());
        }
        Ok(spec)
    }

    /// Canonical form of a parsed spec: reduced coefficients as strings.
    pub fn from_spec(spec: &VarietySpec) -> Self {
        let polys = spec
            .polys()
            .iter()
            .map(|f| {
                f.terms()
                    .iter()
                    .map(|t| {
                        let mut v = vec![Value::String(t.coeff.to_string())];
                        v.extend(t.exps.iter().map(|&e| Value::from(e)));
                        v
                    })
                    .collect()
            })
            .collect();
        VarietyFile {
            p: spec.base().p() as u64,
            a: spec.base().k(),
            model: spec.model().as_str().to_owned(),
            vars: spec.vars().to_vec(),
            polys,
            dim: spec.declared_dim(),
            multidegree: spec.declared_multidegree().map(<[u32]>::to_vec),
        }
    }
}

/// `{"P": [...], "Q": [...], "q": "..."}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaJson {
    #[serde(rename = "P")]
    pub numerator: Vec<String>,
    #[serde(rename = "Q")]
    pub denominator: Vec<String>,
    pub q: String,
}

impl ZetaJson {
    pub fn from_zeta(z: &ZetaFunction) -> Self {
        ZetaJson {
            numerator: strings(z.numerator().coeffs()),
            denominator: strings(z.denominator().coeffs()),
            q: z.q().q().to_string(),
        }
    }

    /// Inverse of [`Self::from_zeta`]; `q` must be a prime power.
    pub fn to_zeta(&self) -> Result<ZetaFunction> {
        let parse = |v: &[String]| -> Result<ZPoly> {
            v.iter()
                .map(|s| s.parse::<BigInt>().map_err(|_| Error::input(format!("not an integer: {s:?}"))))
                .collect::<Result<Vec<_>>>()
                .map(ZPoly::new)
        };
        let q: u64 = self.q.parse().map_err(|_| Error::input(format!("q must be an integer, got {:?}", self.q)))?;
        let base = prime_power_of(q).ok_or_else(|| Error::input(format!("{q} is not a prime power")))?;
        Ok(ZetaFunction::new(base, parse(&self.numerator)?, parse(&self.denominator)?))
    }
}

fn prime_power_of(q: u64) -> Option<PrimePower> {
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut k = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then(|| PrimePower::new(p, k).ok()).flatten()
}

/// A local factor as read from a positivity input file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorJson {
    pub poly: Vec<Value>,
    #[serde(default = "one")]
    pub deg_x: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityFile {
    pub p: u64,
    #[serde(default = "one")]
    pub a: u32,
    pub factors: Vec<FactorJson>,
}

impl PositivityFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Read { path: path.into(), source })?;
        serde_json::from_str(&text).map_err(|source| Error::Json { path: path.into(), source })
    }

    pub fn factor_polys(&self) -> Result<Vec<(Vec<BigRational>, u32)>> {
        self.factors
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let poly = f
                    .poly
                    .iter()
                    .map(parse_rational)
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::input(format!("factor {i}: coefficients must be \"num/den\" strings")))?;
                Ok((poly, f.deg_x))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variety_round_trip() {
        let text = r#"{"p":5,"a":1,"model":"projective","vars":["x","y","z"],
            "polys":[[["1",0,2,1],["-1",3,0,0],[1,1,0,2]]],"dim":1,"multidegree":[3]}"#;
        let file = VarietyFile::parse(text, Path::new("inline")).unwrap();
        let spec = file.to_spec().unwrap();
        assert_eq!(spec.polys()[0].terms().len(), 3);
        let again = VarietyFile::from_spec(&spec).to_spec().unwrap();
        assert_eq!(again, spec);
    }

    #[test]
    fn rejects_short_terms_and_bad_models() {
        let text = r#"{"p":5,"model":"projective","vars":["x","y"],"polys":[[["1",2]]]}"#;
        let err = VarietyFile::parse(text, Path::new("inline")).unwrap().to_spec().unwrap_err();
        assert!(err.to_string().contains("needs 2 exponents"));
        let text = r#"{"p":5,"model":"weighted","vars":["x"],"polys":[]}"#;
        assert!(VarietyFile::parse(text, Path::new("inline")).unwrap().to_spec().is_err());
    }

    #[test]
    fn zeta_json_round_trip() {
        let z = ZetaFunction::new(
            PrimePower::new(3, 2).unwrap(),
            ZPoly::from_i64(&[1, 2, 9]),
            ZPoly::from_i64(&[1, -10, 9]),
        );
        let j = ZetaJson::from_zeta(&z);
        assert_eq!(j.q, "9");
        assert_eq!(j.to_zeta().unwrap(), z);
    }

    #[test]
    fn rationals_use_num_den() {
        let r = parse_rational(&Value::String("-6/4".into())).unwrap();
        assert_eq!(rational_string(&r), "-3/2");
        assert_eq!(rational_string(&parse_rational(&Value::from(2)).unwrap()), "2/1");
    }
}
