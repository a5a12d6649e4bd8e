use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_qubits, StateVector};
use crate::error::{Error, Result};
use crate::tolerances;

/// On-disk state formats. Both are accepted on load; dense is written.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "format", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateFile {
    Dense { n: usize, amplitudes: Vec<[f64; 2]> },
    Sparse { n: usize, entries: Vec<SparseEntry> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SparseEntry {
    pub i: usize,
    pub re: f64,
    pub im: f64,
}

impl StateFile {
    pub fn dense(s: &StateVector) -> Self {
        StateFile::Dense {
            n: s.n(),
            amplitudes: s.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    /// Nonzero amplitudes only.
    pub fn sparse(s: &StateVector) -> Self {
        StateFile::Sparse {
            n: s.n(),
            entries: s
                .amplitudes()
                .iter()
                .enumerate()
                .filter(|(_, a)| a.re != 0.0 || a.im != 0.0)
                .map(|(i, a)| SparseEntry {
                    i,
                    re: a.re,
                    im: a.im,
                })
                .collect(),
        }
    }

    pub fn into_state(self, max_qubits: usize) -> Result<StateVector> {
        let finite = |re: f64, im: f64| {
            if re.is_finite() && im.is_finite() {
                Ok(Complex64::new(re, im))
            } else {
                Err(Error::Format("non-finite amplitude".into()))
            }
        };
        match self {
            StateFile::Dense { n, amplitudes } => {
                check_qubits(n, max_qubits)?;
                let amps = amplitudes
                    .into_iter()
                    .map(|[re, im]| finite(re, im))
                    .collect::<Result<Vec<_>>>()?;
                StateVector::with_cap(n, amps, max_qubits)
            }
            StateFile::Sparse { n, entries } => {
                check_qubits(n, max_qubits)?;
                let dim = 1usize << n;
                let mut amps = vec![Complex64::new(0.0, 0.0); dim];
                let mut seen = vec![false; dim];
                for e in entries {
                    if e.i >= dim {
                        return Err(Error::Format(format!("index {} >= 2^{n}", e.i)));
                    }
                    if std::mem::replace(&mut seen[e.i], true) {
                        return Err(Error::Format(format!("index {} listed twice", e.i)));
                    }
                    amps[e.i] = finite(e.re, e.im)?;
                }
                StateVector::with_cap(n, amps, max_qubits)
            }
        }
    }
}

pub fn read_state<R: Read>(reader: R, max_qubits: usize) -> Result<StateVector> {
    let file: StateFile =
        serde_json::from_reader(reader).map_err(|e| Error::Format(e.to_string()))?;
    file.into_state(max_qubits)
}

pub fn write_state<W: Write>(mut writer: W, s: &StateVector) -> Result<()> {
    serde_json::to_writer(&mut writer, &StateFile::dense(s))?;
    writer.write_all(b"\n")?;
    Ok(())
}

pub fn load_state(path: impl AsRef<Path>) -> Result<StateVector> {
    load_state_capped(path, tolerances::DEFAULT_MAX_QUBITS)
}

pub fn load_state_capped(path: impl AsRef<Path>, max_qubits: usize) -> Result<StateVector> {
    read_state(BufReader::new(File::open(path)?), max_qubits)
}

pub fn store_state(path: impl AsRef<Path>, s: &StateVector) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_state(&mut w, s)?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statekit::{dicke_state, DickeSpec};

    #[test]
    fn dense_round_trip_is_bit_exact() {
        let s = dicke_state(DickeSpec::new(4, 2).unwrap());
        let mut buf = Vec::new();
        write_state(&mut buf, &s).unwrap();
        let back = read_state(buf.as_slice(), 24).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn short_dense_file_rejected() {
        let amps = vec![[0.25, 0.0]; 15];
        let json = serde_json::json!({"n": 4, "format": "dense", "amplitudes": amps});
        let err = read_state(json.to_string().as_bytes(), 24).unwrap_err();
        assert!(matches!(
            err,
            Error::Dimension {
                expected: 16,
                got: 15
            }
        ));
    }

    #[test]
    fn sparse_file_expands_with_zeros() {
        let json = r#"{"n": 3, "format": "sparse", "entries": [
            {"i": 0, "re": 0.6, "im": 0.0}, {"i": 7, "re": 0.0, "im": 0.8}]}"#;
        let s = read_state(json.as_bytes(), 24).unwrap();
        assert_eq!(s.dim(), 8);
        assert_eq!(s.amplitude(0), Complex64::new(0.6, 0.0));
        assert_eq!(s.amplitude(7), Complex64::new(0.0, 0.8));
        assert_eq!(s.support(), vec![0, 7]);
    }

    #[test]
    fn malformed_inputs() {
        for bad in [
            r#"{"n": 2, "format": "dense"}"#,
            r#"{"n": 2, "format": "blob", "amplitudes": []}"#,
            r#"{"n": 2, "format": "sparse", "entries": [{"i": 4, "re": 1, "im": 0}]}"#,
            r#"{"n": 2, "format": "sparse", "entries": [{"i": 1, "re": 1, "im": 0}, {"i": 1, "re": 1, "im": 0}]}"#,
            r#"{"n": 2, "format": "dense", "amplitudes": [[1e999, 0], [0, 0], [0, 0], [0, 0]]}"#,
            "not json",
        ] {
            assert!(read_state(bad.as_bytes(), 24).is_err(), "{bad}");
        }
        let big = r#"{"n": 30, "format": "sparse", "entries": []}"#;
        assert!(matches!(
            read_state(big.as_bytes(), 24),
            Err(Error::QubitCount { .. })
        ));
    }
}
