//! Matrix files: JSON documents `{"n": .., "m": .., "re": [[..]], "im": [[..]]}`
//! holding an `n × m` complex matrix as row-major real and imaginary parts.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::linalg::{c, ComplexMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub m: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(a: &ComplexMatrix) -> Self {
        let rows = |f: fn(&num_complex::Complex64) -> f64| {
            (0..a.nrows())
                .map(|i| (0..a.ncols()).map(|j| f(&a[(i, j)])).collect())
                .collect()
        };
        Self {
            n: a.nrows(),
            m: a.ncols(),
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    /// Checks shapes and finiteness; errors name the offending field.
    pub fn to_matrix(&self) -> Result<ComplexMatrix, String> {
        for (name, part) in [("re", &self.re), ("im", &self.im)] {
            if part.len() != self.n {
                return Err(format!(
                    "field `{name}`: {} rows, expected n = {}",
                    part.len(),
                    self.n
                ));
            }
            for (i, row) in part.iter().enumerate() {
                if row.len() != self.m {
                    return Err(format!(
                        "field `{name}`: row {i} has {} entries, expected m = {}",
                        row.len(),
                        self.m
                    ));
                }
                if let Some(j) = row.iter().position(|x| !x.is_finite()) {
                    return Err(format!("field `{name}`: entry [{i}][{j}] is not finite"));
                }
            }
        }
        Ok(ComplexMatrix::from_fn(self.n, self.m, |i, j| {
            c(self.re[i][j], self.im[i][j])
        }))
    }

    pub fn parse(text: &str) -> Result<ComplexMatrix, String> {
        let file: MatrixFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        file.to_matrix()
    }
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    MatrixFile::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn write_matrix(path: &Path, a: &ComplexMatrix) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(&MatrixFile::from_matrix(a))?;
    text.push('\n');
    fs::write(path, text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let a = ComplexMatrix::from_fn(2, 3, |i, j| c(i as f64 + 0.1, j as f64 - 1.0 / 3.0));
        let text = serde_json::to_string(&MatrixFile::from_matrix(&a)).unwrap();
        assert_eq!(MatrixFile::parse(&text).unwrap(), a);
    }

    #[test]
    fn shape_errors_name_the_field() {
        let e = MatrixFile::parse(r#"{"n":2,"m":1,"re":[[1],[2]],"im":[[0]]}"#).unwrap_err();
        assert!(e.contains("`im`"), "{e}");
        let e = MatrixFile::parse(r#"{"n":1,"m":2,"re":[[1]],"im":[[0,0]]}"#).unwrap_err();
        assert!(e.contains("row 0"), "{e}");
    }

    #[test]
    fn rejects_non_finite_and_garbage() {
        assert!(MatrixFile::parse(r#"{"n":1,"m":1,"re":[[NaN]],"im":[[0]]}"#).is_err());
        assert!(MatrixFile::parse(r#"{"n":1,"m":1,"re":[[1e999]],"im":[[0]]}"#).is_err());
        let e = MatrixFile::parse("{\"n\":1,\n\"m\":1,\n\"re\":[[1]]}").unwrap_err();
        assert!(e.contains("im") && e.contains("line"), "{e}");
    }
}
