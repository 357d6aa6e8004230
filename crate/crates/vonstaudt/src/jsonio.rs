//! Canonical JSON helpers and the string-entry matrix exchange format.
//!
//! All file formats use canonical JSON: objects with sorted keys, field
//! elements rendered as strings in the field's own grammar, and no floating
//! point anywhere.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::exactalg::{
    BlockMatrix, ExactAlgError, Field, FieldSpec, Matrix, PrimeField, RatFuncField, Rationals,
};

/// Serializes any value to canonical JSON: sorted object keys, two-space
/// indentation, trailing newline.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    // Round-tripping through `Value` sorts object keys (serde_json's map is
    // ordered by key).
    let v = serde_json::to_value(value).expect("serializable");
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

pub fn from_json_str<T: DeserializeOwned>(s: &str) -> Result<T, serde_json::Error> {
    serde_json::from_str(s)
}

/// Wire form of a block matrix: entries as strings in the field's grammar.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockMatrixJson {
    pub field: FieldSpec,
    pub block_size: usize,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

/// Encodes a block matrix into its wire form.
pub fn encode_block_matrix<F: Field>(bm: &BlockMatrix<F>) -> BlockMatrixJson {
    let base = bm.base();
    let field = base.field();
    let entries = (0..base.rows())
        .map(|r| {
            (0..base.cols())
                .map(|c| field.format_elem(base.get(r, c)))
                .collect()
        })
        .collect();
    BlockMatrixJson {
        field: field.spec(),
        block_size: bm.block_size(),
        rows: base.rows(),
        cols: base.cols(),
        entries,
    }
}

/// Decodes the entry grid against a concrete field.
pub fn decode_matrix<F: Field>(
    field: F,
    rows: usize,
    cols: usize,
    entries: &[Vec<String>],
) -> Result<Matrix<F>, ExactAlgError> {
    if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
        return Err(ExactAlgError::DimensionMismatch(format!(
            "entry grid does not match declared {rows}x{cols}"
        )));
    }
    let mut parsed = Vec::with_capacity(rows);
    for row in entries {
        let mut out = Vec::with_capacity(cols);
        for e in row {
            out.push(field.parse_elem(e)?);
        }
        parsed.push(out);
    }
    Matrix::from_rows(field, parsed)
}

/// A block matrix over whichever of the three fields a file declares.
#[derive(Debug, Clone)]
pub enum AnyBlockMatrix {
    Rationals(BlockMatrix<Rationals>),
    Prime(BlockMatrix<PrimeField>),
    RationalFunctions(BlockMatrix<RatFuncField>),
}

pub fn decode_block_matrix(json: &BlockMatrixJson) -> Result<AnyBlockMatrix, ExactAlgError> {
    json.field.validate()?;
    Ok(match &json.field {
        FieldSpec::Rationals => AnyBlockMatrix::Rationals(BlockMatrix::new(
            decode_matrix(Rationals, json.rows, json.cols, &json.entries)?,
            json.block_size,
        )?),
        FieldSpec::Prime { p } => AnyBlockMatrix::Prime(BlockMatrix::new(
            decode_matrix(PrimeField::new(*p), json.rows, json.cols, &json.entries)?,
            json.block_size,
        )?),
        FieldSpec::RationalFunctions { p, vars } => {
            let field = RatFuncField::new(*p, [vars[0].as_str(), vars[1].as_str()]);
            AnyBlockMatrix::RationalFunctions(BlockMatrix::new(
                decode_matrix(field, json.rows, json.cols, &json.entries)?,
                json.block_size,
            )?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_matrix_json_round_trip() {
        let f = RatFuncField::new(2, ["l", "m"]);
        let l = f.var_first();
        let one = f.one();
        let base = Matrix::from_rows(
            f.clone(),
            vec![vec![one.clone(), l.clone()], vec![l, one]],
        )
        .unwrap();
        let bm = BlockMatrix::new(base, 2).unwrap();
        let json = encode_block_matrix(&bm);
        let text = canonical_json(&json);
        let parsed: BlockMatrixJson = from_json_str(&text).unwrap();
        match decode_block_matrix(&parsed).unwrap() {
            AnyBlockMatrix::RationalFunctions(back) => assert_eq!(back, bm),
            other => panic!("wrong field decoded: {other:?}"),
        }
    }

    #[test]
    fn canonical_json_sorts_keys() {
        #[derive(Serialize)]
        struct Demo {
            zebra: u32,
            apple: u32,
        }
        let s = canonical_json(&Demo { zebra: 1, apple: 2 });
        let apple = s.find("apple").unwrap();
        let zebra = s.find("zebra").unwrap();
        assert!(apple < zebra);
    }
}
