//! JSON body descriptions, e.g. `{"type": "ellipsoid", "dim": 2, "axes": [2, 1]}`.

use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Body, Ellipsoid};
use crate::error::{Error, Result};
use crate::geom::{self, AffineMap, Point, Polytope};

fn one() -> f64 {
    1.0
}

/// Exponent of an ℓ_p ball: a number ≥ 1 or the string "inf".
fn de_exponent<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Exp {
        Num(f64),
        Text(String),
    }
    match Exp::deserialize(d)? {
        Exp::Num(p) => Ok(p),
        Exp::Text(s) if matches!(s.as_str(), "inf" | "infinity" | "∞") => Ok(f64::INFINITY),
        Exp::Text(s) => Err(serde::de::Error::custom(format!("bad exponent {s:?}"))),
    }
}

fn ser_exponent<S: Serializer>(p: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if p.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*p)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    Ball {
        dim: usize,
        #[serde(default = "one")]
        radius: f64,
    },
    Box {
        dim: usize,
        half_widths: Vec<f64>,
    },
    /// Either `axes` (semi-axes, axis aligned) or a full `shape` matrix A.
    Ellipsoid {
        dim: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        axes: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        shape: Option<Vec<Vec<f64>>>,
    },
    Lp {
        dim: usize,
        #[serde(deserialize_with = "de_exponent", serialize_with = "ser_exponent")]
        p: f64,
        #[serde(default = "one")]
        radius: f64,
    },
    Polytope {
        dim: usize,
        vertices: Vec<Vec<f64>>,
    },
    Transformed {
        dim: usize,
        linear: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        translation: Option<Vec<f64>>,
        body: Box<BodySpec>,
    },
}

fn point(v: &[f64], dim: usize) -> Result<Point> {
    if v.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Config("non-finite coordinate".into()));
    }
    Ok(Point::new(v))
}

fn matrix(rows: &[Vec<f64>], dim: usize) -> Result<DMatrix<f64>> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Config(format!("expected a {dim}×{dim} matrix")));
    }
    Ok(DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
}

impl BodySpec {
    pub fn dim(&self) -> usize {
        match self {
            BodySpec::Ball { dim, .. }
            | BodySpec::Box { dim, .. }
            | BodySpec::Ellipsoid { dim, .. }
            | BodySpec::Lp { dim, .. }
            | BodySpec::Polytope { dim, .. }
            | BodySpec::Transformed { dim, .. } => *dim,
        }
    }

    pub fn from_json(text: &str) -> Result<BodySpec> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("body spec: {e}")))
    }

    pub fn build(&self) -> Result<Body> {
        let dim = self.dim();
        geom::check_ambient_dim(dim)?;
        match self {
            BodySpec::Ball { radius, .. } => Body::ball(dim, *radius),
            BodySpec::Box { half_widths, .. } => {
                point(half_widths, dim)?;
                Body::boxed(half_widths)
            }
            BodySpec::Ellipsoid { center, axes, shape, .. } => {
                let c = match center {
                    Some(c) => point(c, dim)?,
                    None => Point::zeros(dim),
                };
                let e = match (axes, shape) {
                    (Some(a), None) => {
                        point(a, dim)?;
                        Ellipsoid::axis_aligned(c, a)?
                    }
                    (None, Some(s)) => Ellipsoid::new(c, matrix(s, dim)?)?,
                    _ => return Err(Error::Config("ellipsoid needs exactly one of `axes`, `shape`".into())),
                };
                Ok(Body::Ellipsoid(e))
            }
            BodySpec::Lp { p, radius, .. } => Body::lp_ball(dim, *p, *radius),
            BodySpec::Polytope { vertices, .. } => {
                let pts = vertices.iter().map(|v| point(v, dim)).collect::<Result<Vec<_>>>()?;
                Body::polytope(Polytope::hull(&pts)?)
            }
            BodySpec::Transformed { linear, translation, body, .. } => {
                let t = match translation {
                    Some(t) => point(t, dim)?,
                    None => Point::zeros(dim),
                };
                let inner = body.build()?;
                let map = AffineMap::new(matrix(linear, dim)?, t)
                    .map_err(|_| Error::Config("transformed body needs a nonsingular linear part".into()))?;
                Body::transformed(&map, &inner)
            }
        }
    }

    /// Family name, used as the body id in records.
    pub fn kind(&self) -> &'static str {
        match self {
            BodySpec::Ball { .. } => "ball",
            BodySpec::Box { .. } => "box",
            BodySpec::Ellipsoid { .. } => "ellipsoid",
            BodySpec::Lp { .. } => "lp",
            BodySpec::Polytope { .. } => "polytope",
            BodySpec::Transformed { .. } => "transformed",
        }
    }
}
