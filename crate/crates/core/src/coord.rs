//! Coordinate arrays: the level-wise binary expansion of an integer
//! vector, least significant row first, with two's-complement handling of
//! negatives so the mapping stays bijective.

use alloc::vec::Vec;

use crate::error::Error;

/// The first r binary rows of the coordinate array of an integer vector,
/// plus the integer residual z with lambda = sum 2^{l-1} row_l + 2^r z.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateArray {
    pub rows: Vec<Vec<u8>>,
    pub residual: Vec<i64>,
}

impl CoordinateArray {
    pub fn levels(&self) -> usize {
        self.rows.len()
    }
}

/// Split lambda into r binary rows and a residual. Row l holds the
/// 2^{l-1}'s bit of lambda mod 2^r (negatives via the +2^r rule).
pub fn coordinate_array(lambda: &[i64], r: usize) -> CoordinateArray {
    assert!(r >= 1 && r < 63, "level count out of range");
    let modulus = 1i64 << r;
    let rows: Vec<Vec<u8>> = (0..r)
        .map(|l| lambda.iter().map(|&v| ((v.rem_euclid(modulus)) >> l) as u8 & 1).collect())
        .collect();
    let residual = lambda
        .iter()
        .map(|&v| {
            let low = v.rem_euclid(modulus);
            (v - low) >> r
        })
        .collect();
    CoordinateArray { rows, residual }
}

/// Exact inverse of [`coordinate_array`].
pub fn integer_from_array(arr: &CoordinateArray) -> Result<Vec<i64>, Error> {
    let r = arr.rows.len();
    let n = arr.residual.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = arr.residual[i] << r;
        for (l, row) in arr.rows.iter().enumerate() {
            let bit = row[i];
            if bit > 1 {
                return Err(Error::NonBinaryRow);
            }
            v += (bit as i64) << l;
        }
        out.push(v);
    }
    Ok(out)
}
