//! Number rendering for reports, and JSON handling of infinite t values.

/// Fixed 6 decimals; empty for `None`.
pub fn fixed6(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

/// Fixed 3 decimals, or "−" for `None` as in printed result tables.
pub fn table3(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.3}")).unwrap_or_else(|| "−".to_string())
}

/// Scientific with a 6-decimal mantissa, for p-values and thresholds.
pub fn sci6(x: f64) -> String {
    format!("{x:.6e}")
}

/// JSON has no infinity; non-finite values travel as the strings "inf",
/// "-inf" and "nan".
pub mod nonfinite {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

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

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(D::Error::custom(format!("expected a number, got `{other}`"))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(serde::Serialize, serde::Deserialize, PartialEq, Debug)]
    struct Wrap(#[serde(with = "nonfinite")] f64);

    #[test]
    fn infinities_survive_json() {
        for v in [1.5, f64::INFINITY, f64::NEG_INFINITY] {
            let s = serde_json::to_string(&Wrap(v)).unwrap();
            assert_eq!(serde_json::from_str::<Wrap>(&s).unwrap(), Wrap(v));
        }
        assert_eq!(serde_json::to_string(&Wrap(f64::INFINITY)).unwrap(), "\"inf\"");
    }

    #[test]
    fn formats() {
        assert_eq!(fixed6(Some(0.05)), "0.050000");
        assert_eq!(fixed6(None), "");
        assert_eq!(table3(Some(-0.0234)), "-0.023");
        assert_eq!(table3(None), "−");
        assert_eq!(sci6(0.05 / 438.0), "1.141553e-4");
    }
}
