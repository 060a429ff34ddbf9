//! Serde adapters for complex matrices.
//!
//! Matrices serialize as `{ rows, cols, entries }` with `entries` holding
//! `[re, im]` pairs in row-major order, so files stay readable and carry no
//! binary layout assumptions.

use nalgebra::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::CMat;

#[derive(Serialize, Deserialize)]
struct ComplexMatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

pub(crate) fn serialize<S: Serializer>(m: &CMat, ser: S) -> Result<S::Ok, S::Error> {
    let repr = ComplexMatrixRepr {
        rows: m.nrows(),
        cols: m.ncols(),
        entries: (0..m.nrows())
            .flat_map(|r| (0..m.ncols()).map(move |c| (r, c)))
            .map(|(r, c)| [m[(r, c)].re, m[(r, c)].im])
            .collect(),
    };
    repr.serialize(ser)
}

pub(crate) fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<CMat, D::Error> {
    let repr = ComplexMatrixRepr::deserialize(de)?;
    if repr.entries.len() != repr.rows * repr.cols {
        return Err(serde::de::Error::custom(format!(
            "complex matrix expects {} entries, got {}",
            repr.rows * repr.cols,
            repr.entries.len()
        )));
    }
    let mut m = CMat::zeros(repr.rows, repr.cols);
    for (k, [re, im]) in repr.entries.into_iter().enumerate() {
        m[(k / repr.cols.max(1), k % repr.cols.max(1))] = Complex::new(re, im);
    }
    Ok(m)
}
