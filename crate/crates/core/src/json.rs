//! Structured-text (JSON) encoding shared by every module and the CLI.
//!
//! A form is `{"dim": n, "degree": k, "terms": [{"idx": [i, …], "num": p,
//! "den": q}]}` with 1-based indices. Exact rationals are integer pairs
//! (numbers, or decimal strings when they exceed 64 bits); floats are
//! decimal strings under the key `"value"`. Derived fields of structures are
//! never read back: they are recomputed from the defining forms on load.

use num::{BigInt, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exterior::{Form, Metric};
use crate::linalg::Matrix;
use crate::scalar::{Scalar, Q};
use crate::spin7::torsion::JetPoint;
use crate::spin7::Spin7Data;
use crate::su3::{make_su3, SU3Structure};

/// Scalars with a structured-text encoding.
pub trait JsonScalar: Scalar {
    /// Writes the scalar into `obj` (`num`/`den` or `value`).
    fn write(&self, obj: &mut Map<String, Value>);
    fn read(obj: &Map<String, Value>) -> Result<Self>;
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn big_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn big_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| parse_err(format!("{n} is not an integer"))),
        Value::String(s) => s.parse().map_err(|_| parse_err(format!("{s:?} is not an integer"))),
        _ => Err(parse_err(format!("expected an integer, got {v}"))),
    }
}

impl JsonScalar for Q {
    fn write(&self, obj: &mut Map<String, Value>) {
        obj.insert("num".into(), big_to_json(self.numer()));
        obj.insert("den".into(), big_to_json(self.denom()));
    }

    fn read(obj: &Map<String, Value>) -> Result<Self> {
        let num = big_from_json(obj.get("num").ok_or_else(|| parse_err("missing \"num\""))?)?;
        let den = match obj.get("den") {
            Some(d) => big_from_json(d)?,
            None => BigInt::from(1),
        };
        if den.is_zero() {
            return Err(parse_err("zero denominator"));
        }
        Ok(Q::new(num, den))
    }
}

impl JsonScalar for f64 {
    fn write(&self, obj: &mut Map<String, Value>) {
        obj.insert("value".into(), json!(format!("{self:e}")));
    }

    fn read(obj: &Map<String, Value>) -> Result<Self> {
        if let Some(v) = obj.get("value") {
            return match v {
                Value::String(s) => s.trim().parse().map_err(|_| parse_err(format!("{s:?} is not a decimal"))),
                Value::Number(n) => n.as_f64().ok_or_else(|| parse_err("bad number")),
                _ => Err(parse_err("\"value\" must be a decimal string")),
            };
        }
        <Q as JsonScalar>::read(obj).map(|x| Scalar::to_f64(&x))
    }
}

/// A standalone scalar as an object.
pub fn scalar_to_json<S: JsonScalar>(x: &S) -> Value {
    let mut m = Map::new();
    x.write(&mut m);
    Value::Object(m)
}

pub fn scalar_from_json<S: JsonScalar>(v: &Value) -> Result<S> {
    match v {
        Value::Object(m) => S::read(m),
        Value::Number(n) if n.is_i64() => Ok(S::from_i64(n.as_i64().unwrap_or_default())),
        _ => Err(parse_err(format!("expected a scalar object, got {v}"))),
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing field {key:?}")))
}

fn usize_field(v: &Value, key: &str) -> Result<usize> {
    field(v, key)?.as_u64().map(|x| x as usize).ok_or_else(|| parse_err(format!("{key:?} must be a nonnegative integer")))
}

pub fn form_to_json<S: JsonScalar>(f: &Form<S>) -> Value {
    let terms: Vec<Value> = f
        .terms()
        .into_iter()
        .map(|(idx, c)| {
            let mut m = Map::new();
            m.insert("idx".into(), json!(idx));
            c.write(&mut m);
            Value::Object(m)
        })
        .collect();
    json!({"dim": f.dim(), "degree": f.degree(), "terms": terms})
}

pub fn form_from_json<S: JsonScalar>(v: &Value) -> Result<Form<S>> {
    let dim = usize_field(v, "dim")?;
    let degree = usize_field(v, "degree")?;
    if dim == 0 || dim > 8 || degree > dim {
        return Err(parse_err(format!("unsupported form shape: dim {dim}, degree {degree}")));
    }
    let terms = field(v, "terms")?.as_array().ok_or_else(|| parse_err("\"terms\" must be an array"))?;
    let mut out = Form::zero(dim, degree);
    for t in terms {
        let obj = t.as_object().ok_or_else(|| parse_err("each term must be an object"))?;
        let idx: Vec<usize> = obj
            .get("idx")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err("term without \"idx\" array"))?
            .iter()
            .map(|i| i.as_u64().map(|i| i as usize).filter(|&i| (1..=dim).contains(&i)))
            .collect::<Option<_>>()
            .ok_or_else(|| parse_err(format!("indices must lie in 1..={dim}")))?;
        if idx.len() != degree {
            return Err(parse_err(format!("term {idx:?} does not have degree {degree}")));
        }
        let mut sorted = idx.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != degree {
            return Err(parse_err(format!("repeated index in {idx:?}")));
        }
        out = &out + &Form::from_terms(dim, degree, &[(&idx, S::read(obj)?)]);
    }
    Ok(out)
}

pub fn metric_to_json<S: JsonScalar>(g: &Metric<S>) -> Value {
    let n = g.dim();
    let rows: Vec<Value> = (0..n).map(|i| Value::Array((0..n).map(|j| scalar_to_json(&g.matrix()[(i, j)])).collect())).collect();
    json!({"dim": n, "matrix": rows})
}

pub fn metric_from_json<S: JsonScalar>(v: &Value) -> Result<Metric<S>> {
    let n = usize_field(v, "dim")?;
    let rows = field(v, "matrix")?.as_array().ok_or_else(|| parse_err("\"matrix\" must be an array"))?;
    if rows.len() != n {
        return Err(parse_err(format!("metric has {} rows, expected {n}", rows.len())));
    }
    let mut m = Matrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().filter(|r| r.len() == n).ok_or_else(|| parse_err(format!("row {i} must have {n} entries")))?;
        for (j, x) in row.iter().enumerate() {
            m[(i, j)] = scalar_from_json(x)?;
        }
    }
    Metric::new(m)
}

pub fn su3_to_json<S: JsonScalar>(s: &SU3Structure<S>) -> Value {
    json!({"omega": form_to_json(&s.omega), "re_omega": form_to_json(&s.re_omega)})
}

/// Rebuilds the structure from `omega` and `re_omega` through [`make_su3`].
pub fn su3_from_json<S: JsonScalar>(v: &Value) -> Result<SU3Structure<S>> {
    make_su3(&form_from_json(field(v, "omega")?)?, &form_from_json(field(v, "re_omega")?)?)
}

pub fn spin7_to_json<S: JsonScalar>(d: &Spin7Data<S>) -> Value {
    json!({
        "su3": su3_to_json(&d.su3),
        "eta": form_to_json(&d.eta),
        "theta": form_to_json(&d.theta),
        "p": scalar_to_json(&d.p),
        "q": scalar_to_json(&d.q),
        "r": scalar_to_json(&d.r),
    })
}

pub fn spin7_from_json<S: JsonScalar>(v: &Value) -> Result<Spin7Data<S>> {
    Spin7Data::new(
        su3_from_json(field(v, "su3")?)?,
        form_from_json(field(v, "eta")?)?,
        form_from_json(field(v, "theta")?)?,
        scalar_from_json(field(v, "p")?)?,
        scalar_from_json(field(v, "q")?)?,
        scalar_from_json(field(v, "r")?)?,
    )
}

const JET_FIELDS: [&str; 8] = ["d_omega", "d_re", "d_im", "d_eta", "d_theta", "dp", "dq", "dr"];

pub fn jet_to_json<S: JsonScalar>(j: &JetPoint<S>) -> Value {
    let mut m = Map::new();
    m.insert("data".into(), spin7_to_json(&j.data));
    let forms = [&j.d_omega, &j.d_re, &j.d_im, &j.d_eta, &j.d_theta, &j.dp, &j.dq, &j.dr];
    for (name, f) in JET_FIELDS.iter().zip(forms) {
        m.insert((*name).into(), form_to_json(f));
    }
    Value::Object(m)
}

/// Reads a jet; missing derivative fields default to zero.
pub fn jet_from_json<S: JsonScalar>(v: &Value) -> Result<JetPoint<S>> {
    let mut j = JetPoint::flat(spin7_from_json(field(v, "data")?)?);
    let slots = [&mut j.d_omega, &mut j.d_re, &mut j.d_im, &mut j.d_eta, &mut j.d_theta, &mut j.dp, &mut j.dq, &mut j.dr];
    for (name, slot) in JET_FIELDS.iter().zip(slots) {
        if let Some(f) = v.get(*name) {
            *slot = form_from_json(f)?;
        }
    }
    if !j.is_well_formed() {
        return Err(parse_err("jet derivatives have the wrong dimension or degree"));
    }
    Ok(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::scalar::q;

    #[test]
    fn documented_layout() {
        let f = Form::from_terms(6, 2, &[(&[1, 2], q(1, 2)), (&[3, 4], q(-3, 1))]);
        let v = form_to_json(&f);
        assert_eq!(
            v,
            json!({"dim": 6, "degree": 2, "terms": [
                {"idx": [1, 2], "num": 1, "den": 2},
                {"idx": [3, 4], "num": -3, "den": 1}
            ]})
        );
        assert_eq!(form_from_json::<Q>(&v).unwrap(), f);
    }

    #[test]
    fn unordered_indices_carry_their_sign() {
        let v = json!({"dim": 4, "degree": 2, "terms": [{"idx": [2, 1], "num": 1, "den": 1}]});
        assert_eq!(form_from_json::<Q>(&v).unwrap(), Form::from_terms(4, 2, &[(&[1, 2], q(-1, 1))]));
    }

    #[test]
    fn floats_are_decimal_strings() {
        let f = Form::from_terms(3, 1, &[(&[2], 0.1f64)]);
        let v = form_to_json(&f);
        assert!(v["terms"][0]["value"].is_string());
        assert_eq!(form_from_json::<f64>(&v).unwrap(), f);
    }

    #[test]
    fn big_rationals_survive() {
        let x = Q::new(BigInt::from(10).pow(30), BigInt::from(7));
        assert_eq!(scalar_from_json::<Q>(&scalar_to_json(&x)).unwrap(), x);
    }

    #[test]
    fn malformed_forms_are_rejected() {
        for v in [
            json!({"dim": 4, "degree": 2, "terms": [{"idx": [1, 1], "num": 1, "den": 1}]}),
            json!({"dim": 4, "degree": 2, "terms": [{"idx": [1, 5], "num": 1, "den": 1}]}),
            json!({"dim": 4, "degree": 2, "terms": [{"idx": [1], "num": 1, "den": 1}]}),
            json!({"dim": 4, "degree": 2, "terms": [{"idx": [1, 2], "num": 1, "den": 0}]}),
            json!({"dim": 9, "degree": 2, "terms": []}),
            json!({"degree": 2, "terms": []}),
        ] {
            assert!(matches!(form_from_json::<Q>(&v), Err(Error::Parse(_))), "{v}");
        }
    }

    #[test]
    fn structures_round_trip() {
        let mut rng = random::rng(11);
        let a = random::gl_plus(&mut rng, 6, 3);
        let s = crate::su3::pullback_su3(&a, &crate::su3::standard::<Q>()).unwrap();
        let back: SU3Structure<Q> = su3_from_json(&su3_to_json(&s)).unwrap();
        assert_eq!(back.omega, s.omega);
        assert_eq!(back.im_omega, s.im_omega);
        assert_eq!(back.metric.matrix(), s.metric.matrix());

        let d = Spin7Data::<Q>::standard();
        let back = spin7_from_json::<Q>(&spin7_to_json(&d)).unwrap();
        assert_eq!((back.eta, back.theta, back.p), (d.eta.clone(), d.theta.clone(), d.p.clone()));

        let g = metric_to_json(&s.metric);
        assert_eq!(metric_from_json::<Q>(&g).unwrap().matrix(), s.metric.matrix());
    }

    #[test]
    fn derived_fields_are_recomputed() {
        let mut v = su3_to_json(&crate::su3::standard::<Q>());
        v["im_omega"] = json!({"dim": 6, "degree": 3, "terms": []});
        let s: SU3Structure<Q> = su3_from_json(&v).unwrap();
        assert_eq!(s.im_omega, crate::su3::im_omega0());
    }

    #[test]
    fn jets_round_trip() {
        let mut j = JetPoint::flat(Spin7Data::<Q>::standard());
        j.dp = Form::from_terms(6, 1, &[(&[3], q(2, 5))]);
        let back = jet_from_json::<Q>(&jet_to_json(&j)).unwrap();
        assert_eq!(back.flatten(), j.flatten());
        let mut bad = jet_to_json(&j);
        bad["dq"] = json!({"dim": 6, "degree": 2, "terms": []});
        assert!(jet_from_json::<Q>(&bad).is_err());
    }
}
