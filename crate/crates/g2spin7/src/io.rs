//! The Form file format.
//!
//! ```json
//! {"dim": 8, "grade": 2, "terms": [{"indices": [0, 1], "coef": "3/2"}]}
//! ```
//!
//! Indices are axis labels (1..7 in dimension 7, 0..n-1 otherwise) and
//! must be strictly increasing. Rational-string coefficients force exact
//! mode, numeric literals float mode; mixing the two in one file is
//! rejected. Repeated index tuples accumulate.

use crate::error::Error;
use crate::fm::section::{parse_coef, CoefValue, Mode};
use crate::form::{axis_from_label, Form};
use crate::scalar::Scalar;
use serde::Deserialize;

#[derive(Deserialize)]
struct RawTerm {
    indices: Vec<usize>,
    coef: CoefValue,
}

#[derive(Deserialize)]
struct RawForm {
    dim: usize,
    grade: usize,
    terms: Vec<RawTerm>,
}

/// Reads the coefficient mode of a form file without committing to a
/// scalar type.
pub fn infer_form_mode(json: &str) -> Result<Mode, Error> {
    let raw: RawForm = serde_json::from_str(json)?;
    let mut mode = None;
    for t in &raw.terms {
        let this = match t.coef {
            CoefValue::Str(_) => Mode::Exact,
            CoefValue::Num(_) => Mode::Float,
        };
        match mode {
            None => mode = Some(this),
            Some(m) if m != this => return Err(Error::MixedModes),
            _ => {}
        }
    }
    Ok(mode.unwrap_or(Mode::Exact))
}

/// Parses a form file. The scalar mode must match what
/// [`infer_form_mode`] reports for the same input.
pub fn load_form<S: Scalar>(json: &str) -> Result<Form<S>, Error> {
    let raw: RawForm = serde_json::from_str(json)?;
    if !(4..=8).contains(&raw.dim) {
        return Err(Error::Invalid(format!("dim {} is outside 4..=8", raw.dim)));
    }
    if raw.grade > raw.dim {
        return Err(Error::Invalid(format!(
            "grade {} exceeds dim {}",
            raw.grade, raw.dim
        )));
    }
    let mut f: Form<S> = Form::zero(raw.dim, raw.grade);
    for t in &raw.terms {
        if t.indices.len() != raw.grade {
            return Err(Error::Invalid(format!(
                "term {:?} does not have grade {}",
                t.indices, raw.grade
            )));
        }
        if t.indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid(format!(
                "indices {:?} are not strictly increasing",
                t.indices
            )));
        }
        let mut mask = 0u8;
        for &l in &t.indices {
            let axis = axis_from_label(raw.dim, l).ok_or_else(|| {
                Error::Invalid(format!("index {l} is not an axis label in dim {}", raw.dim))
            })?;
            mask |= 1 << axis;
        }
        let c: S = parse_coef(&t.coef)?;
        let prev = f.coeff(mask).clone();
        *f.coeff_mut(mask) = prev + c;
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    #[test]
    fn parses_labels_and_accumulates() {
        let json = r#"{"dim": 7, "grade": 2,
            "terms": [{"indices": [1, 4], "coef": "1/2"},
                      {"indices": [1, 4], "coef": "1/2"},
                      {"indices": [2, 5], "coef": "-1"}]}"#;
        assert_eq!(infer_form_mode(json).unwrap(), Mode::Exact);
        let f: Form<Exact> = load_form(json).unwrap();
        assert_eq!(*f.coeff_labeled(&[1, 4]), Exact::one());
        assert_eq!(*f.coeff_labeled(&[2, 5]), -Exact::one());
    }

    #[test]
    fn rejects_malformed_input() {
        let unsorted = r#"{"dim": 8, "grade": 2, "terms": [{"indices": [1, 0], "coef": 1.0}]}"#;
        assert!(matches!(load_form::<f64>(unsorted), Err(Error::Invalid(_))));
        let bad_label = r#"{"dim": 7, "grade": 1, "terms": [{"indices": [0], "coef": "1"}]}"#;
        assert!(matches!(load_form::<Exact>(bad_label), Err(Error::Invalid(_))));
        let bad_dim = r#"{"dim": 9, "grade": 1, "terms": []}"#;
        assert!(matches!(load_form::<Exact>(bad_dim), Err(Error::Invalid(_))));
        let mixed = r#"{"dim": 8, "grade": 2,
            "terms": [{"indices": [0, 1], "coef": "1"}, {"indices": [2, 3], "coef": 0.5}]}"#;
        assert!(matches!(infer_form_mode(mixed), Err(Error::MixedModes)));
        let float_in_exact = r#"{"dim": 8, "grade": 2, "terms": [{"indices": [0, 1], "coef": 0.5}]}"#;
        assert!(load_form::<Exact>(float_in_exact).is_err());
    }
}
