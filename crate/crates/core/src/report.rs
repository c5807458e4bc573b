//! Number formatting and JSON helpers shared by the run artifacts.
//!
//! Every floating-point value written to disk uses 17 significant digits
//! in scientific notation, which round-trips `f64` exactly.

use serde::Serializer;
use serde_json::value::RawValue;

/// `x` with 17 significant digits, e.g. `-1.2434002340000000e-1`.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// `serialize_with` adaptor writing an `f64` as a raw 17-digit JSON number.
/// Non-finite values become `null`.
pub fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        let raw = RawValue::from_string(fmt17(*x)).map_err(serde::ser::Error::custom)?;
        s.serialize_some(&raw)
    } else {
        s.serialize_none()
    }
}

/// `serialize_with` adaptor for `Option<f64>`.
pub fn ser_opt_f64<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => ser_f64(v, s),
        None => s.serialize_none(),
    }
}

/// `serialize_with` adaptor for a list of `f64`.
pub fn ser_vec_f64<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        let raw = RawValue::from_string(fmt17(*x)).map_err(serde::ser::Error::custom)?;
        seq.serialize_element(&raw)?;
    }
    seq.end()
}

/// Pretty JSON text with a trailing newline.
pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(serde::Serialize)]
    struct Probe {
        #[serde(serialize_with = "ser_f64")]
        a: f64,
        #[serde(serialize_with = "ser_f64")]
        b: f64,
        #[serde(serialize_with = "ser_opt_f64")]
        c: Option<f64>,
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, -0.12434, 1.0 / 3.0, 6.02e23, 5e-324, 0.0] {
            let s = fmt17(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
        assert_eq!(fmt17(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn json_numbers_are_raw() {
        let j = to_json(&Probe {
            a: 0.25,
            b: f64::NAN,
            c: None,
        });
        let v: serde_json::Value = serde_json::from_str(&j).unwrap();
        assert_eq!(v["a"].as_f64(), Some(0.25));
        assert!(v["b"].is_null());
        assert!(j.contains("2.5000000000000000e-1"));
    }
}
