//! JSON records for forms and scalars. Every field value is a `"p/q"` string.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chamber::ChamberScalar;
use crate::classify::{Certificate, DiagramRecord};
use crate::error::{Error, Result};
use crate::exterior::{KForm, MultiIndex, Vector};
use crate::invariant::{ChamberForm, Monomial};
use crate::linalg::Matrix;
use crate::scalar::{format_rational, parse_rational, FieldScalar};

/// `a + b√2 + c√3 + d√6`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarRecord {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
}

impl From<&FieldScalar> for ScalarRecord {
    fn from(x: &FieldScalar) -> Self {
        let [a, b, c, d] = x.parts().map(format_rational);
        ScalarRecord { a, b, c, d }
    }
}

impl TryFrom<&ScalarRecord> for FieldScalar {
    type Error = Error;
    fn try_from(r: &ScalarRecord) -> Result<Self> {
        Ok(FieldScalar::from_parts(
            parse_rational(&r.a)?,
            parse_rational(&r.b)?,
            parse_rational(&r.c)?,
            parse_rational(&r.d)?,
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KTermRecord {
    pub indices: Vec<usize>,
    pub coeff: ScalarRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KFormRecord {
    pub degree: usize,
    pub terms: Vec<KTermRecord>,
}

impl From<&KForm> for KFormRecord {
    fn from(f: &KForm) -> Self {
        KFormRecord {
            degree: f.degree(),
            terms: f
                .terms()
                .map(|(m, c)| KTermRecord {
                    indices: m.indices().collect(),
                    coeff: c.into(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&KFormRecord> for KForm {
    type Error = Error;
    fn try_from(r: &KFormRecord) -> Result<Self> {
        let mut prev: Option<MultiIndex> = None;
        let mut terms = Vec::with_capacity(r.terms.len());
        for t in &r.terms {
            let m = MultiIndex::from_sorted(&t.indices)?;
            if m.len() != r.degree {
                return Err(Error::Parse(format!(
                    "term {:?} does not have degree {}",
                    t.indices, r.degree
                )));
            }
            if prev.is_some_and(|p| p >= m) {
                return Err(Error::Parse("terms must be sorted and distinct".into()));
            }
            prev = Some(m);
            let c = FieldScalar::try_from(&t.coeff)?;
            terms.push((t.indices.clone(), c));
        }
        KForm::from_terms(r.degree, terms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberTermRecord {
    pub s_exp: u32,
    pub w_exp: i32,
    pub coeff: ScalarRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberScalarRecord {
    pub terms: Vec<ChamberTermRecord>,
}

impl From<&ChamberScalar> for ChamberScalarRecord {
    fn from(x: &ChamberScalar) -> Self {
        ChamberScalarRecord {
            terms: x
                .terms()
                .iter()
                .map(|(s, w, c)| ChamberTermRecord {
                    s_exp: *s,
                    w_exp: *w,
                    coeff: c.into(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&ChamberScalarRecord> for ChamberScalar {
    type Error = Error;
    fn try_from(r: &ChamberScalarRecord) -> Result<Self> {
        let terms: Result<Vec<_>> = r
            .terms
            .iter()
            .map(|t| Ok((t.s_exp, t.w_exp, FieldScalar::try_from(&t.coeff)?)))
            .collect();
        Ok(ChamberScalar::from_terms(terms?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberMonomialRecord {
    pub generators: Vec<String>,
    pub coefficient: ChamberScalarRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberFormRecord {
    pub terms: Vec<ChamberMonomialRecord>,
}

impl From<&ChamberForm> for ChamberFormRecord {
    fn from(f: &ChamberForm) -> Self {
        ChamberFormRecord {
            terms: f
                .terms()
                .map(|(m, c)| ChamberMonomialRecord {
                    generators: m.names().into_iter().map(String::from).collect(),
                    coefficient: c.into(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&ChamberFormRecord> for ChamberForm {
    type Error = Error;
    fn try_from(r: &ChamberFormRecord) -> Result<Self> {
        let mut out = ChamberForm::zero();
        let mut prev: Option<Monomial> = None;
        for t in &r.terms {
            let names: Vec<&str> = t.generators.iter().map(String::as_str).collect();
            let (m, sign) = Monomial::from_names(&names)?
                .ok_or_else(|| Error::Parse(format!("repeated generator in {names:?}")))?;
            if sign < 0 {
                return Err(Error::Parse(format!(
                    "generators {names:?} are not in canonical order"
                )));
            }
            if prev.is_some_and(|p| p >= m) {
                return Err(Error::Parse("terms must be sorted and distinct".into()));
            }
            prev = Some(m);
            out = out.add(&ChamberForm::from_terms([(
                m,
                ChamberScalar::try_from(&t.coefficient)?,
            )]));
        }
        Ok(out)
    }
}

pub fn vector_record(v: &Vector) -> Vec<ScalarRecord> {
    v.0.iter().map(ScalarRecord::from).collect()
}

pub fn matrix_record(m: &Matrix) -> Vec<Vec<ScalarRecord>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(ScalarRecord::from).collect())
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PairRecord {
    pub u: Vec<ScalarRecord>,
    pub v: Vec<ScalarRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<[String; 2]>,
}

/// One row of the classification report.
#[derive(Clone, Debug, Serialize)]
pub struct DiagramReportRecord {
    pub diagram: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<&'static str>,
    pub dim_kernel: usize,
    pub verdict: &'static str,
    pub pair: Option<PairRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u128>,
}

pub fn certificate_pair_record(c: &Certificate) -> Option<PairRecord> {
    c.pair.as_ref().map(|p| PairRecord {
        u: vector_record(&p.u),
        v: vector_record(&p.v),
        labels: p.labels.map(|(a, b)| [a.to_string(), b.to_string()]),
    })
}

pub fn diagram_record(r: &DiagramRecord, timings: bool) -> DiagramReportRecord {
    DiagramReportRecord {
        diagram: r.diagram.parts().to_vec(),
        label: r.diagram.gamma_label(),
        dim_kernel: r.dim_kernel,
        verdict: r.certificate.verdict.as_str(),
        pair: certificate_pair_record(&r.certificate),
        millis: timings.then_some(r.millis),
    }
}

/// Canonical pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_kform(path: &Path, f: &KForm) -> Result<()> {
    std::fs::write(path, to_json(&KFormRecord::from(f))?)?;
    Ok(())
}

pub fn read_kform(path: &Path) -> Result<KForm> {
    let rec: KFormRecord = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    KForm::try_from(&rec)
}

pub fn write_chamber_form(path: &Path, f: &ChamberForm) -> Result<()> {
    std::fs::write(path, to_json(&ChamberFormRecord::from(f))?)?;
    Ok(())
}

pub fn read_chamber_form(path: &Path) -> Result<ChamberForm> {
    let rec: ChamberFormRecord = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    ChamberForm::try_from(&rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley;
    use crate::invariant::build_bryant_salamon;

    #[test]
    fn kform_round_trip() {
        let om = cayley::omega();
        let rec = KFormRecord::from(om);
        assert_eq!(rec.terms.len(), 14);
        assert_eq!(rec.terms[0].indices, vec![1, 2, 3, 4]);
        assert_eq!(rec.terms[0].coeff.a, "1/1");
        let json = to_json(&rec).unwrap();
        let back: KFormRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(&KForm::try_from(&back).unwrap(), om);
    }

    #[test]
    fn irrational_coefficients_round_trip() {
        let x = &(&FieldScalar::sqrt2() * &FieldScalar::from_ratio(-3, 7)) + &FieldScalar::sqrt6();
        let f = KForm::from_terms(2, [(vec![1, 8], x)]).unwrap();
        let back = KForm::try_from(&KFormRecord::from(&f)).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn rejects_unsorted_input() {
        let rec = KFormRecord {
            degree: 2,
            terms: vec![KTermRecord {
                indices: vec![2, 1],
                coeff: ScalarRecord::from(&FieldScalar::from_int(1)),
            }],
        };
        assert!(KForm::try_from(&rec).is_err());
    }

    #[test]
    fn chamber_form_round_trip() {
        let phi = build_bryant_salamon().phi;
        let rec = ChamberFormRecord::from(&phi);
        assert_eq!(rec.terms[0].generators, ["ds", "A4", "A5", "A6"]);
        let t = &rec.terms[0].coefficient.terms[0];
        assert_eq!((t.s_exp, t.w_exp, t.coeff.a.as_str()), (3, -4, "-16/1"));
        assert_eq!(ChamberForm::try_from(&rec).unwrap(), phi);
    }
}
