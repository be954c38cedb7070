//! JSON result records with every number written to 17 significant digits.

use serde::Serialize;
use serde_json::value::RawValue;

use crate::geometry::SpherePoint;
use crate::robin::RobinResult;
use crate::solver::fmt_f64;

/// A JSON number token with 17 significant digits; non-finite values become `null`.
pub fn json_number(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() {
        fmt_f64(x)
    } else {
        "null".to_string()
    };
    RawValue::from_string(text).expect("formatted float is valid JSON")
}

/// `"infinity"` or `[re, im]`.
pub fn json_point(p: SpherePoint) -> Box<RawValue> {
    let text = match p {
        SpherePoint::Infinity => "\"infinity\"".to_string(),
        SpherePoint::Finite(z) => format!("[{},{}]", fmt_f64(z.re), fmt_f64(z.im)),
    };
    RawValue::from_string(text).expect("point is valid JSON")
}

#[derive(Debug, Serialize)]
pub struct RobinRecord {
    pub domain: String,
    pub gamma: String,
    pub pole: Box<RawValue>,
    pub radius: Box<RawValue>,
    pub capacity: Box<RawValue>,
    pub h: Box<RawValue>,
    pub richardson_estimate: Option<Box<RawValue>>,
}

impl RobinRecord {
    pub fn new(domain: &str, gamma: &str, result: &RobinResult) -> Self {
        RobinRecord {
            domain: domain.to_string(),
            gamma: gamma.to_string(),
            pole: json_point(result.pole),
            radius: json_number(result.radius),
            capacity: json_number(result.capacity),
            h: json_number(result.h),
            richardson_estimate: result.richardson_estimate.map(json_number),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn numbers_keep_seventeen_digits() {
        assert_eq!(json_number(0.1).get(), "1.0000000000000001e-1");
        assert_eq!(json_number(f64::NAN).get(), "null");
        let v: serde_json::Value =
            serde_json::from_str(json_point(Complex64::new(1.0, -2.0).into()).get()).unwrap();
        assert_eq!(v[1].as_f64(), Some(-2.0));
    }
}
