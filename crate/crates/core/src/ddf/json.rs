//! JSON form of a [`Ddf`]:
//!
//! ```text
//! {"kind":"unit-step","param":0.3}          ("param":"inf" for ε_∞)
//! {"kind":"exp-simple","param":1.0}
//! {"kind":"table","breakpoints":[[0.5,0.2],[1.0,1.0]],"interp":"step"}
//! {"kind":"mixture","components":[{"weight":0.5,"ddf":{...}}, ...]}
//! ```

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Ddf, Interp, Shape};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Param {
    Number(f64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
struct Component {
    weight: f64,
    ddf: Ddf,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Repr {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    param: Option<Param>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    breakpoints: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    interp: Option<Interp>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    components: Option<Vec<Component>>,
}

impl Serialize for Ddf {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let empty = Repr {
            kind: String::new(),
            param: None,
            breakpoints: None,
            interp: None,
            components: None,
        };
        let repr = match &self.shape {
            Shape::UnitStep(p) => Repr {
                kind: "unit-step".into(),
                param: Some(if p.is_finite() {
                    Param::Number(*p)
                } else {
                    Param::Text("inf".into())
                }),
                ..empty
            },
            Shape::ExpSimple(c) => Repr {
                kind: "exp-simple".into(),
                param: Some(Param::Number(*c)),
                ..empty
            },
            Shape::Table { points, interp } => Repr {
                kind: "table".into(),
                breakpoints: Some(points.iter().map(|&(x, v)| [x, v]).collect()),
                interp: Some(*interp),
                ..empty
            },
            Shape::Mixture(parts) => Repr {
                kind: "mixture".into(),
                components: Some(
                    parts
                        .iter()
                        .map(|(w, f)| Component {
                            weight: *w,
                            ddf: f.clone(),
                        })
                        .collect(),
                ),
                ..empty
            },
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Ddf {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = Repr::deserialize(deserializer)?;
        let param = |required: &str| -> Result<f64, D::Error> {
            match &repr.param {
                Some(Param::Number(v)) => Ok(*v),
                Some(Param::Text(t)) if t == "inf" || t == "infinity" => Ok(f64::INFINITY),
                Some(Param::Text(t)) => Err(D::Error::custom(format!("bad param `{t}`"))),
                None => Err(D::Error::custom(format!("`{required}` needs `param`"))),
            }
        };
        let built = match repr.kind.as_str() {
            "unit-step" => Ddf::unit_step(param("unit-step")?),
            "exp-simple" => Ddf::exp_simple(param("exp-simple")?),
            "table" => {
                let pts = repr
                    .breakpoints
                    .as_ref()
                    .ok_or_else(|| D::Error::custom("`table` needs `breakpoints`"))?;
                Ddf::table(
                    pts.iter().map(|p| (p[0], p[1])).collect(),
                    repr.interp.unwrap_or(Interp::Step),
                )
            }
            "mixture" => {
                let comps = repr
                    .components
                    .ok_or_else(|| D::Error::custom("`mixture` needs `components`"))?;
                Ddf::mixture(comps.into_iter().map(|c| (c.weight, c.ddf)).collect())
            }
            other => return Err(D::Error::custom(format!("unknown ddf kind `{other}`"))),
        };
        built.map_err(D::Error::custom)
    }
}
