//! JSON snapshot format for curves and serde helpers shared by the reports.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::error::{Error, Result};

/// Conjugate-symmetry tolerance applied when reading snapshots.
pub const SNAPSHOT_SYMMETRY_TOLERANCE: f64 = 1e-12;

/// `{ "n_modes": N, "coeffs": [[re_x, im_x, re_y, im_y], ...] }` for
/// `k = -N..N`. Unknown fields are ignored on read.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSnapshot {
    pub n_modes: usize,
    pub coeffs: Vec<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
}

impl CurveSnapshot {
    pub fn from_curve(c: &Curve) -> Self {
        let coeffs = c
            .vector_coeffs()
            .iter()
            .map(|[x, y]| [x.re, x.im, y.re, y.im])
            .collect();
        Self {
            n_modes: c.n_modes(),
            coeffs,
            config_hash: None,
        }
    }

    pub fn to_curve(&self) -> Result<Curve> {
        if self.coeffs.len() != 2 * self.n_modes + 1 {
            return Err(Error::Parse(format!(
                "n_modes = {} requires {} coefficient rows, found {}",
                self.n_modes,
                2 * self.n_modes + 1,
                self.coeffs.len()
            )));
        }
        let coeffs: Vec<[Complex64; 2]> = self
            .coeffs
            .iter()
            .map(|r| [Complex64::new(r[0], r[1]), Complex64::new(r[2], r[3])])
            .collect();
        Curve::from_vector_coeffs(&coeffs, SNAPSHOT_SYMMETRY_TOLERANCE)
    }
}

pub fn curve_to_json(c: &Curve, config_hash: Option<&str>) -> String {
    let mut snap = CurveSnapshot::from_curve(c);
    snap.config_hash = config_hash.map(str::to_owned);
    serde_json::to_string_pretty(&snap).expect("snapshot serialises")
}

pub fn curve_from_json(text: &str) -> Result<Curve> {
    serde_json::from_str::<CurveSnapshot>(text)
        .map_err(json_error)?
        .to_curve()
}

/// Maps a serde_json error to `Error::Parse` with its line and column.
pub fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
}

/// Writes non-finite floats as the strings `"inf"`, `"-inf"` or `"nan"`,
/// since JSON has no literal for them.
pub mod float_or_inf {
    use serde::de::{self, Deserializer, Visitor};
    use serde::Serializer;
    use std::fmt;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = f64;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or one of \"inf\", \"-inf\", \"nan\"")
            }
            fn visit_f64<E>(self, v: f64) -> Result<f64, E> {
                Ok(v)
            }
            fn visit_i64<E>(self, v: i64) -> Result<f64, E> {
                Ok(v as f64)
            }
            fn visit_u64<E>(self, v: u64) -> Result<f64, E> {
                Ok(v as f64)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
                match v {
                    "inf" => Ok(f64::INFINITY),
                    "-inf" => Ok(f64::NEG_INFINITY),
                    "nan" => Ok(f64::NAN),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(V)
    }
}
