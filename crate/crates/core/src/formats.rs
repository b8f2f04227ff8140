//! On-disk formats: the matrix file and the 1D problem file.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::schrodinger::Grid1D;

/// `{"dim": N, "re": [[...]], "im": [[...]]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.re.len() != self.dim || self.im.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: if self.re.len() != self.dim {
                    self.re.len()
                } else {
                    self.im.len()
                },
            });
        }
        ComplexMatrix::from_parts(&self.re, &self.im)
    }
}

impl From<&ComplexMatrix> for MatrixFile {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            dim: m.dim(),
            re: m.re_rows(),
            im: m.im_rows(),
        }
    }
}

/// A 1D bound-state problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub potential: String,
    pub xmin: f64,
    pub xmax: f64,
    pub npoints: usize,
    pub mass: f64,
    pub num_states: usize,
}

impl ProblemFile {
    pub fn grid(&self) -> Result<Grid1D> {
        Grid1D::new(self.xmin, self.xmax, self.npoints)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_file_parses_exact_field_names() {
        let text = r#"{"dim": 2, "re": [[1, 3], [3, 1]], "im": [[0, 4], [-4, 0]]}"#;
        let file: MatrixFile = serde_json::from_str(text).unwrap();
        let m = file.to_matrix().unwrap();
        assert_eq!(m.get(0, 1).im, 4.0);
        assert_eq!(MatrixFile::from(&m), file);

        let extra = r#"{"dim": 1, "re": [[1]], "im": [[0]], "scale": 2}"#;
        assert!(serde_json::from_str::<MatrixFile>(extra).is_err());
    }

    #[test]
    fn matrix_file_dimension_is_checked() {
        let file = MatrixFile {
            dim: 3,
            re: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            im: vec![vec![0.0; 2]; 2],
        };
        assert!(matches!(file.to_matrix(), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn problem_file_round_trips() {
        let text = r#"{"potential": "0.5*x^2", "xmin": -12, "xmax": 12, "npoints": 1201, "mass": 1, "num_states": 4}"#;
        let p: ProblemFile = serde_json::from_str(text).unwrap();
        assert_eq!(p.npoints, 1201);
        assert_eq!(p.grid().unwrap().spacing(), 0.02);
    }
}
