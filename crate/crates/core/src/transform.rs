//! The polar transform G_N = [[1,0],[1,1]]^{(x)n} in natural row order,
//! over F_2 and lifted to the integers, plus its exact integer inverse.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;

pub(crate) fn log2_exact(n: usize) -> Result<usize, Error> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    Ok(n.trailing_zeros() as usize)
}

/// u * G_N over F_2, in place. O(N log N) butterfly; its own inverse.
pub fn polar_transform_f2_in_place(u: &mut [u8]) -> Result<(), Error> {
    log2_exact(u.len())?;
    let n = u.len();
    let mut h = n / 2;
    while h >= 1 {
        let mut b = 0;
        while b < n {
            for j in b..b + h {
                u[j] ^= u[j + h];
            }
            b += 2 * h;
        }
        h /= 2;
    }
    Ok(())
}

/// u * G_N over F_2.
pub fn polar_transform_f2(u: &[u8]) -> Result<Vec<u8>, Error> {
    let mut x = u.to_vec();
    polar_transform_f2_in_place(&mut x)?;
    Ok(x)
}

/// v * G_N over the integers (G_N lifted to Z), in place.
pub(crate) fn transform_int_in_place(v: &mut [i64]) {
    let n = v.len();
    debug_assert!(n.is_power_of_two());
    let mut h = n / 2;
    while h >= 1 {
        let mut b = 0;
        while b < n {
            for j in b..b + h {
                v[j] += v[j + h];
            }
            b += 2 * h;
        }
        h /= 2;
    }
}

/// w * G_N^{-1} over the integers, in place. Inverse of the lifted butterfly.
pub(crate) fn inverse_transform_int_in_place(w: &mut [i128]) {
    let n = w.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        let mut b = 0;
        while b < n {
            for j in b..b + h {
                w[j] -= w[j + h];
            }
            b += 2 * h;
        }
        h *= 2;
    }
}

/// Row `i` (0-based) of G_N as a 0/1 vector: entry (i,j) is 1 iff the
/// binary support of j is contained in that of i.
pub(crate) fn gn_row(n: usize, i: usize) -> Vec<i64> {
    let mut row = vec![0i64; n];
    for (j, e) in row.iter_mut().enumerate() {
        if j & !i == 0 {
            *e = 1;
        }
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_maps_to_zero() {
        assert_eq!(polar_transform_f2(&[0, 0, 0, 0]).unwrap(), vec![0, 0, 0, 0]);
    }

    #[test]
    fn n2_second_row() {
        assert_eq!(polar_transform_f2(&[0, 1]).unwrap(), vec![1, 1]);
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(polar_transform_f2(&[0, 1, 0]).is_err());
    }

    #[test]
    fn int_inverse_round_trip() {
        let v: Vec<i64> = vec![3, -1, 4, 1, -5, 9, 2, -6];
        let mut x = v.clone();
        transform_int_in_place(&mut x);
        let mut w: Vec<i128> = x.iter().map(|&a| a as i128).collect();
        inverse_transform_int_in_place(&mut w);
        let back: Vec<i64> = w.iter().map(|&a| a as i64).collect();
        assert_eq!(back, v);
    }
}
