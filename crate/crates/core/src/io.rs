//! JSON encodings of states, matrices and channels.
//!
//! A matrix is a row-major list of `[re, im]` pairs. States are
//! `{"kind":"density"|"pure","dim":d,"data":[...]}` and channels
//! `{"dim_in":d,"dim_out":d,"kraus":[<matrix>,...]}`. Numbers are written
//! with 17 significant digits so that reading and re-writing a file is
//! byte-identical.

use serde::Deserialize;

use crate::channels::{validate_icptp, KrausChannel};
use crate::error::{Error, Result};
use crate::scalar::{CMatrix, CVector, C};
use crate::statespace::{pure_to_density, validate_density, DensityMatrix, PureState};

/// A state file's content.
#[derive(Debug, Clone, PartialEq)]
pub enum StateData {
    Density(DensityMatrix<f64>),
    Pure(PureState<f64>),
}

impl StateData {
    pub fn dim(&self) -> usize {
        match self {
            StateData::Density(rho) => rho.dim(),
            StateData::Pure(psi) => psi.dim(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix<f64> {
        match self {
            StateData::Density(rho) => rho.clone(),
            StateData::Pure(psi) => pure_to_density(psi),
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            StateData::Density(rho) => density_to_json(rho),
            StateData::Pure(psi) => pure_to_json(psi),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    kind: String,
    dim: usize,
    data: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<Vec<[f64; 2]>>,
}

fn to_complex(data: &[[f64; 2]]) -> Result<Vec<C<f64>>> {
    data.iter()
        .map(|&[re, im]| {
            if re.is_finite() && im.is_finite() {
                Ok(C::new(re, im))
            } else {
                Err(Error::NonFinite)
            }
        })
        .collect()
}

fn check_len(got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(Error::Parse(format!(
            "expected {expected} entries, found {got}"
        )));
    }
    Ok(())
}

fn parse_json<'a, D: Deserialize<'a>>(text: &'a str) -> Result<D> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Parses and validates a state file; `tol` bounds the Hermiticity, trace,
/// positivity and normalization deviations.
pub fn parse_state(text: &str, tol: f64) -> Result<StateData> {
    let raw: RawState = parse_json(text)?;
    if raw.dim == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let d = raw.dim;
    let entries = to_complex(&raw.data)?;
    match raw.kind.as_str() {
        "density" => {
            check_len(entries.len(), d * d)?;
            let m = CMatrix::from_row_slice(d, d, &entries);
            Ok(StateData::Density(validate_density(m, tol)?))
        }
        "pure" => {
            check_len(entries.len(), d)?;
            Ok(StateData::Pure(PureState::new(
                CVector::from_vec(entries),
                tol,
            )?))
        }
        other => Err(Error::Parse(format!("unknown state kind '{other}'"))),
    }
}

fn push_number(out: &mut String, x: f64) {
    out.push_str(&format!("{x:.16e}"));
}

fn push_entries<'a>(out: &mut String, entries: impl Iterator<Item = &'a C<f64>>) {
    out.push('[');
    for (i, z) in entries.enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push('[');
        push_number(out, z.re);
        out.push(',');
        push_number(out, z.im);
        out.push(']');
    }
    out.push(']');
}

/// Row-major `[[re,im],...]` encoding of a matrix.
pub fn matrix_to_json(m: &CMatrix<f64>) -> String {
    let mut out = String::new();
    let rows = m.nrows();
    let row_major: Vec<C<f64>> = (0..rows)
        .flat_map(|r| m.row(r).iter().copied().collect::<Vec<_>>())
        .collect();
    push_entries(&mut out, row_major.iter());
    out
}

pub fn density_to_json(rho: &DensityMatrix<f64>) -> String {
    format!(
        "{{\"kind\":\"density\",\"dim\":{},\"data\":{}}}\n",
        rho.dim(),
        matrix_to_json(rho.matrix())
    )
}

pub fn pure_to_json(psi: &PureState<f64>) -> String {
    let mut data = String::new();
    push_entries(&mut data, psi.amplitudes().iter());
    format!(
        "{{\"kind\":\"pure\",\"dim\":{},\"data\":{}}}\n",
        psi.dim(),
        data
    )
}

/// Parses a channel file and validates completeness within `tol`.
pub fn parse_channel(text: &str, tol: f64) -> Result<KrausChannel<f64>> {
    let raw: RawChannel = parse_json(text)?;
    if raw.dim_in == 0 || raw.dim_out == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if raw.kraus.is_empty() {
        return Err(Error::Parse("channel has no Kraus operators".into()));
    }
    let kraus = raw
        .kraus
        .iter()
        .map(|k| {
            let entries = to_complex(k)?;
            check_len(entries.len(), raw.dim_in * raw.dim_out)?;
            Ok(CMatrix::from_row_slice(raw.dim_out, raw.dim_in, &entries))
        })
        .collect::<Result<Vec<_>>>()?;
    validate_icptp(kraus, tol)
}

pub fn channel_to_json(ch: &KrausChannel<f64>) -> String {
    let kraus: Vec<String> = ch.kraus().iter().map(matrix_to_json).collect();
    format!(
        "{{\"dim_in\":{},\"dim_out\":{},\"kraus\":[{}]}}\n",
        ch.dim_in(),
        ch.dim_out(),
        kraus.join(",")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{cnot_gate, random_incoherent_channel};
    use crate::statespace::{maximally_coherent_state, random_density, random_pure};

    #[test]
    fn density_round_trip_is_byte_identical() {
        let rho = random_density::<f64>(3, 2, 17).unwrap();
        let text = density_to_json(&rho);
        let back = parse_state(&text, 1e-8).unwrap();
        assert_eq!(back, StateData::Density(rho));
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn pure_round_trip_is_byte_identical() {
        let psi = random_pure::<f64>(4, 3);
        let text = pure_to_json(&psi);
        let back = parse_state(&text, 1e-8).unwrap();
        assert_eq!(back.to_json(), text);
        assert_eq!(back.dim(), 4);
    }

    #[test]
    fn number_format() {
        let text = pure_to_json(&maximally_coherent_state(2).unwrap());
        assert_eq!(
            text,
            "{\"kind\":\"pure\",\"dim\":2,\"data\":[[7.0710678118654746e-1,0.0000000000000000e0],[7.0710678118654746e-1,0.0000000000000000e0]]}\n"
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_state("{", 1e-8), Err(Error::Parse(_))));
        assert!(matches!(
            parse_state(r#"{"kind":"pure","dim":2,"data":[[NaN,0],[1,0]]}"#, 1e-8),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_state(r#"{"kind":"pure","dim":2,"data":[[1e999,0],[1,0]]}"#, 1e-8),
            Err(Error::Parse(_)) | Err(Error::NonFinite)
        ));
        assert!(matches!(
            parse_state(r#"{"kind":"pure","dim":2,"data":[[1,0]]}"#, 1e-8),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_state(r#"{"kind":"mixed","dim":1,"data":[[1,0]]}"#, 1e-8),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_state(r#"{"kind":"pure","dim":2,"data":[[1,0],[1,0]]}"#, 1e-8),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            parse_state(
                r#"{"kind":"density","dim":2,"data":[[1,0],[0,0],[0,0],[1,0]]}"#,
                1e-8
            ),
            Err(Error::TraceNotOne { .. })
        ));
        assert!(matches!(
            parse_state(r#"{"kind":"pure","dim":1,"data":[[1,0]],"extra":1}"#, 1e-8),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn channel_round_trip() {
        let ch = random_incoherent_channel::<f64>(3, 2, 4).unwrap();
        let text = channel_to_json(&ch);
        let back = parse_channel(&text, 1e-10).unwrap();
        assert!(back.is_incoherent());
        assert_eq!(channel_to_json(&back), text);
        let cnot = parse_channel(&channel_to_json(&cnot_gate()), 1e-10).unwrap();
        assert_eq!(cnot.dim_in(), 4);
    }

    #[test]
    fn incomplete_channel_is_rejected() {
        let text = r#"{"dim_in":2,"dim_out":2,"kraus":[[[1,0],[0,0],[0,0],[0,0]]]}"#;
        assert!(matches!(
            parse_channel(text, 1e-10),
            Err(Error::NotComplete { .. })
        ));
        let text = r#"{"dim_in":2,"dim_out":2,"kraus":[[[1,0],[0,0],[0,0]]]}"#;
        assert!(matches!(parse_channel(text, 1e-10), Err(Error::Parse(_))));
    }
}
