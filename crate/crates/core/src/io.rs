//! JSON file formats for matrices, states, subspaces and channels.
//!
//! A matrix is `{"rows": r, "cols": c, "data": [[re, im], ...]}` in row-major
//! order. A channel is `{"dim": d, "kraus": [<matrix>, ...]}`. A subspace file
//! is a matrix whose columns span the subspace; it is orthonormalized on load.

use serde::{Deserialize, Serialize};

use crate::channels::QuantumChannel;
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, C64};
use crate::states::DensityMatrix;
use crate::subspaces::Subspace;

/// Rank tolerance used when loading a subspace.
pub const SUBSPACE_RANK_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: m.to_row_major().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let data = self
            .data
            .iter()
            .map(|[re, im]| C64::new(*re, *im))
            .collect();
        ComplexMatrix::from_row_major(self.rows, self.cols, data)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelJson {
    pub dim: usize,
    pub kraus: Vec<MatrixJson>,
}

impl From<&QuantumChannel> for ChannelJson {
    fn from(ch: &QuantumChannel) -> Self {
        Self {
            dim: ch.dim(),
            kraus: ch.kraus().iter().map(MatrixJson::from).collect(),
        }
    }
}

impl ChannelJson {
    pub fn to_channel(&self) -> Result<QuantumChannel> {
        let kraus = self
            .kraus
            .iter()
            .map(MatrixJson::to_matrix)
            .collect::<Result<Vec<_>>>()?;
        if let Some(k) = kraus
            .iter()
            .find(|k| k.rows() != self.dim || k.cols() != self.dim)
        {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: k.rows().max(k.cols()),
            });
        }
        QuantumChannel::new(kraus)
    }
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    from_json::<MatrixJson>(text)?.to_matrix()
}

pub fn parse_density(text: &str) -> Result<DensityMatrix> {
    DensityMatrix::new(parse_matrix(text)?)
}

pub fn parse_subspace(text: &str) -> Result<Subspace> {
    Subspace::from_columns(&parse_matrix(text)?, SUBSPACE_RANK_TOL)
}

pub fn parse_channel(text: &str) -> Result<QuantumChannel> {
    from_json::<ChannelJson>(text)?.to_channel()
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixJson::from(m)).expect("finite matrix serializes")
}

pub fn channel_to_json(ch: &QuantumChannel) -> String {
    serde_json::to_string(&ChannelJson::from(ch)).expect("finite channel serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{random_density, random_unitary};
    use proptest::prelude::*;

    #[test]
    fn parses_the_documented_layout() {
        let text = r#"{"rows": 2, "cols": 2, "data": [[0.7, 0], [0, 0], [0, 0], [0.3, 0]]}"#;
        let rho = parse_density(text).unwrap();
        assert!(
            rho.matrix()
                .max_abs_diff(&ComplexMatrix::from_diagonal(&[0.7, 0.3]))
                < 1e-15
        );

        let off = r#"{"rows": 1, "cols": 2, "data": [[1, 0], [0, 2]]}"#;
        let m = parse_matrix(off).unwrap();
        assert_eq!(m[(0, 1)], C64::new(0.0, 2.0));
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(parse_matrix("{"), Err(Error::Json(_))));
        let short = r#"{"rows": 2, "cols": 2, "data": [[1, 0]]}"#;
        assert!(matches!(parse_matrix(short), Err(Error::Shape { .. })));
        let trace = r#"{"rows": 2, "cols": 2, "data": [[0.7, 0], [0, 0], [0, 0], [0.4, 0]]}"#;
        assert!(matches!(parse_density(trace), Err(Error::Trace { .. })));
        let extra = r#"{"rows": 1, "cols": 1, "data": [[1, 0]], "x": 1}"#;
        assert!(matches!(parse_matrix(extra), Err(Error::Json(_))));
        let ch = r#"{"dim": 2, "kraus": [{"rows": 1, "cols": 1, "data": [[1, 0]]}]}"#;
        assert!(matches!(
            parse_channel(ch),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn subspace_is_orthonormalized() {
        let text = r#"{"rows": 3, "cols": 2, "data": [[1,0],[2,0],[1,0],[2,0],[0,0],[0,0]]}"#;
        let s = parse_subspace(text).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.ambient_dim(), 3);
    }

    #[test]
    fn channel_roundtrip() {
        let u = random_unitary(3, 2);
        let ch = QuantumChannel::unitary(u).unwrap();
        let back = parse_channel(&channel_to_json(&ch)).unwrap();
        assert_eq!(back, ch);
    }

    proptest! {
        #[test]
        fn matrix_roundtrip(seed in any::<u64>(), d in 1usize..6) {
            let m = random_density(d, d, seed).unwrap().into_matrix();
            prop_assert_eq!(parse_matrix(&matrix_to_json(&m)).unwrap(), m);
        }
    }
}
