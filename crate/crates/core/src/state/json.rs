//! JSON representation of states:
//! `{ "n": int, "mode": "exact"|"float", "amplitudes": [ { "index": "0011", "re": …, "im": … } ] }`
//! where exact-mode re/im are rational strings like "-2/3" and float-mode
//! re/im are plain numbers. Either form is accepted on input in either mode.

use crate::error::{Error, Result};
use crate::scalar::Coeff;
use crate::state::parse::parse_rational;
use crate::state::{AnyState, MultiIndex, PureState};
use num::{BigRational, Complex, One};
use serde::{Deserialize, Serialize};

/// A JSON scalar that is either a number or a rational/decimal string.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(untagged)]
pub enum NumOrStr {
    Num(f64),
    Str(String),
}

impl NumOrStr {
    pub fn to_f64(&self) -> Result<f64> {
        match self {
            NumOrStr::Num(v) => Ok(*v),
            NumOrStr::Str(s) => Ok(Coeff::to_f64(&parse_rational(s)?)),
        }
    }

    pub fn to_rational(&self) -> Result<BigRational> {
        match self {
            NumOrStr::Num(v) => BigRational::from_float(*v).ok_or_else(|| {
                Error::param(format!("non-finite number {v} in exact-mode state"))
            }),
            NumOrStr::Str(s) => parse_rational(s),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct AmpJson {
    pub index: String,
    pub re: NumOrStr,
    pub im: NumOrStr,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct StateJson {
    pub n: usize,
    pub mode: String,
    pub amplitudes: Vec<AmpJson>,
}

fn rational_str(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn state_to_json(state: &AnyState) -> StateJson {
    match state {
        AnyState::Exact(s) => StateJson {
            n: s.n(),
            mode: "exact".into(),
            amplitudes: s
                .iter()
                .map(|(idx, z)| AmpJson {
                    index: MultiIndex::new(s.n(), idx).expect("stored index valid").to_string(),
                    re: NumOrStr::Str(rational_str(&z.re)),
                    im: NumOrStr::Str(rational_str(&z.im)),
                })
                .collect(),
        },
        AnyState::Float(s) => StateJson {
            n: s.n(),
            mode: "float".into(),
            amplitudes: s
                .iter()
                .map(|(idx, z)| AmpJson {
                    index: MultiIndex::new(s.n(), idx).expect("stored index valid").to_string(),
                    re: NumOrStr::Num(z.re),
                    im: NumOrStr::Num(z.im),
                })
                .collect(),
        },
    }
}

pub fn state_from_json(json: &StateJson) -> Result<AnyState> {
    let n = json.n;
    let index_of = |text: &str| -> Result<u64> {
        let idx = MultiIndex::from_bit_str(text)?;
        if idx.n() != n {
            return Err(Error::QubitCountMismatch {
                left: idx.n(),
                right: n,
            });
        }
        Ok(idx.linear())
    };
    match json.mode.as_str() {
        "exact" => {
            let mut terms = Vec::with_capacity(json.amplitudes.len());
            for a in &json.amplitudes {
                terms.push((
                    index_of(&a.index)?,
                    Complex::new(a.re.to_rational()?, a.im.to_rational()?),
                ));
            }
            Ok(AnyState::Exact(PureState::from_amplitudes(n, terms)?))
        }
        "float" => {
            let mut terms = Vec::with_capacity(json.amplitudes.len());
            for a in &json.amplitudes {
                terms.push((index_of(&a.index)?, Complex::new(a.re.to_f64()?, a.im.to_f64()?)));
            }
            Ok(AnyState::Float(PureState::from_amplitudes(n, terms)?))
        }
        other => Err(Error::param(format!(
            "mode must be \"exact\" or \"float\", found {other:?}"
        ))),
    }
}

/// Parse a state from JSON text.
pub fn parse_state_json(text: &str) -> Result<AnyState> {
    let json: StateJson = serde_json::from_str(text)?;
    state_from_json(&json)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::parse::parse_state;

    #[test]
    fn exact_round_trip_through_json() {
        let state = parse_state("(1/3,-2/5)|01> - 2|10>").unwrap();
        let json = state_to_json(&state);
        assert_eq!(json.mode, "exact");
        let text = serde_json::to_string(&json).unwrap();
        let back = parse_state_json(&text).unwrap();
        match (state, back) {
            (AnyState::Exact(a), AnyState::Exact(b)) => assert_eq!(a, b),
            _ => panic!("mode changed in round trip"),
        }
    }

    #[test]
    fn float_round_trip_through_json() {
        let state = parse_state("1/sqrt(2)|00> - 1/sqrt(3)|11>").unwrap();
        let json = state_to_json(&state);
        assert_eq!(json.mode, "float");
        let text = serde_json::to_string(&json).unwrap();
        let back = parse_state_json(&text).unwrap();
        match (state, back) {
            (AnyState::Float(a), AnyState::Float(b)) => assert_eq!(a, b),
            _ => panic!("mode changed in round trip"),
        }
    }

    #[test]
    fn rejects_bad_index_and_mode() {
        let text = r#"{"n":2,"mode":"exact","amplitudes":[{"index":"011","re":"1","im":"0"}]}"#;
        assert!(parse_state_json(text).is_err());
        let text = r#"{"n":2,"mode":"symbolic","amplitudes":[{"index":"01","re":"1","im":"0"}]}"#;
        assert!(parse_state_json(text).is_err());
    }
}
