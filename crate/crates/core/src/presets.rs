//! Input files shipped with the crate, and the parser for the topology input
//! format they share with user-supplied files.
//!
//! Integer entries of a topology file may be affine expressions in the
//! file's parameter, such as `"p"`, `"2p-1"` or `"k"`.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::Q;
use crate::spin7::torsion::{parametrized_jet, JetPoint};
use crate::spin7::Spin7Data;
use crate::exterior::Form;
use crate::topology::admissibility::LinkData;
use crate::topology::lattice::{IntersectionLattice, KahlerVector};

pub const CAP: &str = include_str!("../presets/cAp.json");
pub const DP6: &str = include_str!("../presets/dP6.json");
pub const DP7: &str = include_str!("../presets/dP7.json");
pub const WP112K: &str = include_str!("../presets/wp112k.json");
pub const JET_TORSION_FREE: &str = include_str!("../presets/jet_torsion_free.json");

pub const TOPOLOGY_PRESETS: [&str; 4] = ["cAp", "dP6", "dP7", "wp112k"];

/// Text of a shipped topology preset.
pub fn builtin(name: &str) -> Option<&'static str> {
    match name {
        "cAp" => Some(CAP),
        "dP6" => Some(DP6),
        "dP7" => Some(DP7),
        "wp112k" => Some(WP112K),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GysinStage {
    pub label: String,
    pub ranks: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GysinPreset {
    pub name: String,
    pub description: String,
    /// `(name, value)` of the parameter the file was instantiated with.
    pub parameter: Option<(String, i64)>,
    pub base_betti: Vec<i64>,
    pub stages: Vec<GysinStage>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticePreset {
    pub name: String,
    pub description: String,
    pub parameter: Option<(String, i64)>,
    pub lattice: IntersectionLattice,
    pub kahler: KahlerVector,
    pub link: LinkData,
    /// `(coordinate, k)` of a Seifert smoothness condition.
    pub seifert: Option<(usize, i64)>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Preset {
    Gysin(GysinPreset),
    Lattice(LatticePreset),
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

struct Param<'a> {
    name: &'a str,
    value: i64,
}

/// Evaluates `a·x + b` written as e.g. `"2p-1"`, `"-k"`, `"3"`.
fn eval_affine(s: &str, param: Option<&Param>) -> Result<i64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(parse_err("empty expression"));
    }
    let mut total: i64 = 0;
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'+' => (1, &rest[1..]),
            b'-' => (-1, &rest[1..]),
            _ => (1, rest),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        let digits_end = term.find(|c: char| !c.is_ascii_digit()).unwrap_or(term.len());
        let (digits, sym) = term.split_at(digits_end);
        let sym = sym.strip_prefix('*').unwrap_or(sym);
        let coeff: i64 = if digits.is_empty() { 1 } else { digits.parse().map_err(|_| parse_err(format!("bad number in {s:?}")))? };
        let value = if sym.is_empty() {
            if digits.is_empty() {
                return Err(parse_err(format!("empty term in {s:?}")));
            }
            coeff
        } else {
            match param {
                Some(p) if p.name == sym => coeff.checked_mul(p.value).ok_or(Error::Overflow)?,
                _ => return Err(parse_err(format!("unknown symbol {sym:?} in {s:?}"))),
            }
        };
        total = total.checked_add(sign * value).ok_or(Error::Overflow)?;
    }
    Ok(total)
}

fn int(v: &Value, param: Option<&Param>) -> Result<i64> {
    match v {
        Value::Number(n) => n.as_i64().ok_or_else(|| parse_err(format!("{n} is not an integer"))),
        Value::String(s) => eval_affine(s, param),
        _ => Err(parse_err(format!("expected an integer or expression, got {v}"))),
    }
}

fn int_list(v: &Value, param: Option<&Param>) -> Result<Vec<i64>> {
    v.as_array().ok_or_else(|| parse_err(format!("expected an array, got {v}")))?.iter().map(|x| int(x, param)).collect()
}

fn rational(v: &Value, param: Option<&Param>) -> Result<Q> {
    match v {
        Value::Object(m) => {
            let num = int(m.get("num").ok_or_else(|| parse_err("rational without \"num\""))?, param)?;
            let den = m.get("den").map(|d| int(d, param)).transpose()?.unwrap_or(1);
            if den == 0 {
                return Err(parse_err("zero denominator"));
            }
            Ok(Q::new(num.into(), den.into()))
        }
        _ => Ok(Q::from_integer(int(v, param)?.into())),
    }
}

fn strings(v: Option<&Value>) -> Vec<String> {
    v.and_then(Value::as_array)
        .map(|a| a.iter().filter_map(|s| s.as_str().map(String::from)).collect())
        .unwrap_or_default()
}

fn text(v: &Value, key: &str) -> String {
    v.get(key).and_then(Value::as_str).unwrap_or_default().to_string()
}

/// Parses a topology input file, instantiating its parameter with `value`
/// (or the file's default when `None`).
pub fn parse(text_in: &str, value: Option<i64>) -> Result<Preset> {
    let v: Value = serde_json::from_str(text_in).map_err(|e| parse_err(e.to_string()))?;
    let param = match v.get("parameter") {
        None | Some(Value::Null) => {
            if value.is_some() {
                return Err(parse_err("this input takes no parameter"));
            }
            None
        }
        Some(p) => {
            let name = p.get("name").and_then(Value::as_str).ok_or_else(|| parse_err("parameter without a name"))?;
            let default = p.get("default").map(|d| int(d, None)).transpose()?;
            let value = value.or(default).ok_or_else(|| parse_err(format!("parameter {name} needs a value")))?;
            if let Some(min) = p.get("min").map(|m| int(m, None)).transpose()? {
                if value < min {
                    return Err(parse_err(format!("parameter {name} = {value} is below the minimum {min}")));
                }
            }
            Some(Param { name, value })
        }
    };
    let p = param.as_ref();
    let parameter = param.as_ref().map(|p| (p.name.to_string(), p.value));
    let name = text(&v, "name");
    let description = text(&v, "description");
    let notes = strings(v.get("notes"));
    let field = |k: &str| v.get(k).ok_or_else(|| parse_err(format!("missing field {k:?}")));
    match v.get("kind").and_then(Value::as_str) {
        Some("gysin") => {
            let base_betti = int_list(field("base_betti")?, p)?;
            let stages = field("stages")?
                .as_array()
                .ok_or_else(|| parse_err("\"stages\" must be an array"))?
                .iter()
                .map(|s| {
                    Ok(GysinStage {
                        label: text(s, "label"),
                        ranks: int_list(s.get("ranks").ok_or_else(|| parse_err("stage without \"ranks\""))?, p)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Preset::Gysin(GysinPreset { name, description, parameter, base_betti, stages, notes }))
        }
        Some("lattice") => {
            let form = field("form")?
                .as_array()
                .ok_or_else(|| parse_err("\"form\" must be an array of rows"))?
                .iter()
                .map(|row| {
                    row.as_array().ok_or_else(|| parse_err("form rows must be arrays"))?.iter().map(|x| rational(x, p)).collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let lattice = IntersectionLattice::new(form, strings(v.get("labels")))?;
            let kahler = KahlerVector::new(int_list(field("kahler")?, p)?)?;
            if kahler.as_slice().len() != lattice.rank() {
                return Err(parse_err(format!("Kahler vector has length {}, lattice rank is {}", kahler.as_slice().len(), lattice.rank())));
            }
            let link = field("link")?;
            let link = LinkData {
                b2_link: int(link.get("b2").ok_or_else(|| parse_err("link without \"b2\""))?, p)?,
                h5_base: int(link.get("h5").ok_or_else(|| parse_err("link without \"h5\""))?, p)?,
            };
            let seifert = match v.get("seifert") {
                None | Some(Value::Null) => None,
                Some(s) => {
                    let coord = s.get("coordinate").and_then(Value::as_u64).ok_or_else(|| parse_err("seifert without \"coordinate\""))? as usize;
                    if coord >= lattice.rank() {
                        return Err(parse_err(format!("seifert coordinate {coord} out of range")));
                    }
                    Some((coord, int(s.get("weight").ok_or_else(|| parse_err("seifert without \"weight\""))?, p)?))
                }
            };
            Ok(Preset::Lattice(LatticePreset { name, description, parameter, lattice, kahler, link, seifert, notes }))
        }
        other => Err(parse_err(format!("unknown input kind {other:?}, expected \"gysin\" or \"lattice\""))),
    }
}

/// Loads a shipped topology preset.
pub fn load(name: &str, value: Option<i64>) -> Result<Preset> {
    let text = builtin(name).ok_or_else(|| parse_err(format!("unknown preset {name:?}; known: {}", TOPOLOGY_PRESETS.join(", "))))?;
    parse(text, value)
}

/// The jet behind [`JET_TORSION_FREE`]: standard data at `p = 2, q = 3,
/// r = 1/2` with tilted `η, θ` and fixed rational first derivatives, pushed
/// through the torsion-free parametrization.
pub fn torsion_free_jet() -> JetPoint<Q> {
    let su3 = crate::su3::standard::<Q>();
    let q = crate::scalar::q;
    let eta_h = Form::one_form(&[q(1, 3), q(0, 1), q(-1, 2), q(0, 1), q(0, 1), q(1, 4)]);
    let theta_h = Form::one_form(&[q(0, 1), q(2, 5), q(0, 1), q(1, 1), q(-1, 3), q(0, 1)]);
    let data = Spin7Data::from_horizontal(su3, &eta_h, &theta_h, q(2, 1), q(3, 1), q(1, 2)).expect("admissible constants");
    let b8 = data.su3.lambda28_basis();
    let combo = |cs: &[i64]| b8.iter().zip(cs).fold(Form::zero(6, 2), |acc, (b, &c)| &acc + &b.scale(&q(c, 1)));
    let deta8 = combo(&[1, 0, -1, 2, 0, 0, 1, 0]);
    let dtheta8 = combo(&[0, 3, 0, 0, -1, 1, 0, 2]);
    let dp = Form::one_form(&[q(1, 1), q(0, 1), q(0, 1), q(-2, 1), q(0, 1), q(1, 3)]);
    let dq = Form::one_form(&[q(0, 1), q(1, 2), q(1, 1), q(0, 1), q(0, 1), q(0, 1)]);
    let dr = Form::one_form(&[q(0, 1), q(0, 1), q(0, 1), q(1, 1), q(-1, 1), q(0, 1)]);
    parametrized_jet(&data, &deta8, &dtheta8, &dp, &dq, &dr)
}

/// Human-readable form of an instantiated parameter.
pub fn describe_parameter(p: &Option<(String, i64)>) -> String {
    match p {
        Some((n, v)) => format!("{n} = {v}"),
        None => "none".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::json::{jet_from_json, jet_to_json};
    use crate::spin7::torsion::torsion_residuals;
    use crate::topology::gysin::gysin_tower;

    #[test]
    fn affine_expressions() {
        let p = Param { name: "p", value: 7 };
        for (s, want) in [("p", 7), ("2p-1", 13), ("-p+3", -4), ("3", 3), ("2*p", 14), (" p - 2 ", 5)] {
            assert_eq!(eval_affine(s, Some(&p)).unwrap(), want, "{s}");
        }
        for s in ["", "q", "p+", "2x"] {
            assert!(eval_affine(s, Some(&p)).is_err(), "{s}");
        }
        assert!(eval_affine("p", None).is_err());
    }

    #[test]
    fn every_builtin_parses() {
        for name in TOPOLOGY_PRESETS {
            load(name, None).unwrap();
        }
        assert!(load("nope", None).is_err());
    }

    #[test]
    fn cap_preset_instantiates() {
        let Preset::Gysin(g) = load("cAp", Some(4)).unwrap() else { panic!("kind") };
        assert_eq!(g.base_betti, vec![1, 0, 4, 0, 0, 0, 0]);
        let top = gysin_tower(g.base_betti, &g.stages.iter().map(|s| s.ranks.clone()).collect::<Vec<_>>()).unwrap();
        assert_eq!((top[1].get(2), top[1].get(3)), (2, 7));
        assert!(load("cAp", Some(1)).is_err());
    }

    #[test]
    fn orbifold_preset_uses_the_weight() {
        let Preset::Lattice(l) = load("wp112k", Some(5)).unwrap() else { panic!("kind") };
        assert_eq!(l.lattice.clearing_factor().unwrap(), 5);
        assert_eq!(l.kahler.as_slice(), &[5, 1, 1]);
        assert_eq!(l.seifert, Some((0, 5)));
    }

    #[test]
    fn parameter_rules() {
        assert!(load("dP6", Some(3)).is_err());
        assert!(parse(r#"{"kind": "other"}"#, None).is_err());
        assert!(parse("not json", None).is_err());
    }

    #[test]
    fn shipped_jet_matches_its_construction() {
        let built = torsion_free_jet();
        assert!(torsion_residuals(&built).system_is_negligible(0.0));
        let shipped: Value = serde_json::from_str(JET_TORSION_FREE).unwrap();
        if std::env::var_os("CAYLEY_REGENERATE_PRESETS").is_some() {
            let path = concat!(env!("CARGO_MANIFEST_DIR"), "/presets/jet_torsion_free.json");
            std::fs::write(path, serde_json::to_string_pretty(&jet_to_json(&built)).unwrap() + "\n").unwrap();
            return;
        }
        let loaded = jet_from_json::<Q>(&shipped).unwrap();
        assert_eq!(loaded.flatten(), built.flatten());
        assert!(!loaded.flatten().iter().all(num::Zero::is_zero));
    }
}
