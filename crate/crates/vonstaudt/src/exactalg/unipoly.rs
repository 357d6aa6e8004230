//! Univariate polynomials over `F_p`, used as coefficients by the bivariate
//! gcd (content/primitive-part recursion on one variable).
//!
//! Coefficients are ascending; the invariant is "no trailing zeros", so the
//! zero polynomial is the empty vector.

use super::{Field, PrimeField};

pub(crate) type UniPoly = Vec<u64>;

pub(crate) fn trim(mut a: UniPoly) -> UniPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn is_zero(a: &UniPoly) -> bool {
    a.is_empty()
}

pub(crate) fn deg(a: &UniPoly) -> usize {
    debug_assert!(!a.is_empty());
    a.len() - 1
}

pub(crate) fn add(fp: &PrimeField, a: &UniPoly, b: &UniPoly) -> UniPoly {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] = *c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = fp.add(&out[i], c);
    }
    trim(out)
}

pub(crate) fn neg(fp: &PrimeField, a: &UniPoly) -> UniPoly {
    a.iter().map(|c| fp.neg(c)).collect()
}

pub(crate) fn sub(fp: &PrimeField, a: &UniPoly, b: &UniPoly) -> UniPoly {
    add(fp, a, &neg(fp, b))
}

pub(crate) fn mul(fp: &PrimeField, a: &UniPoly, b: &UniPoly) -> UniPoly {
    if is_zero(a) || is_zero(b) {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = fp.add(&out[i + j], &fp.mul(x, y));
        }
    }
    trim(out)
}

pub(crate) fn scale(fp: &PrimeField, a: &UniPoly, s: u64) -> UniPoly {
    if s == 0 {
        return Vec::new();
    }
    a.iter().map(|c| fp.mul(c, &s)).collect()
}

/// Euclidean division: returns `(q, r)` with `a = q*b + r`, `deg r < deg b`.
pub(crate) fn divmod(fp: &PrimeField, a: &UniPoly, b: &UniPoly) -> (UniPoly, UniPoly) {
    assert!(!is_zero(b), "division by the zero polynomial");
    if is_zero(a) || a.len() < b.len() {
        return (Vec::new(), a.clone());
    }
    let mut rem = a.clone();
    let mut quot = vec![0u64; a.len() - b.len() + 1];
    let lead_inv = fp.inv(b.last().unwrap()).expect("leading coeff nonzero");
    while !is_zero(&rem) && rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let coef = fp.mul(rem.last().unwrap(), &lead_inv);
        quot[shift] = coef;
        for (i, c) in b.iter().enumerate() {
            let t = fp.mul(c, &coef);
            rem[shift + i] = fp.sub(&rem[shift + i], &t);
        }
        rem = trim(rem);
    }
    (trim(quot), rem)
}

/// Monic gcd via the Euclidean algorithm; gcd(0, 0) = 0.
pub(crate) fn gcd(fp: &PrimeField, a: &UniPoly, b: &UniPoly) -> UniPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !is_zero(&y) {
        let (_, r) = divmod(fp, &x, &y);
        x = y;
        y = r;
    }
    if is_zero(&x) {
        return x;
    }
    let inv = fp.inv(x.last().unwrap()).unwrap();
    scale(fp, &x, inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> PrimeField {
        PrimeField::new(5)
    }

    #[test]
    fn division_with_remainder() {
        let fp = f5();
        // (x^2 + 1) = (x + 2)(x + 3) + 0 mod 5? (x+2)(x+3) = x^2 + 5x + 6 = x^2 + 1. Yes.
        let a = vec![1, 0, 1];
        let b = vec![2, 1];
        let (q, r) = divmod(&fp, &a, &b);
        assert_eq!(q, vec![3, 1]);
        assert!(is_zero(&r));
    }

    #[test]
    fn gcd_of_products() {
        let fp = f5();
        let f = vec![1, 1]; // x + 1
        let g = vec![2, 0, 1]; // x^2 + 2
        let h = vec![3, 1]; // x + 3
        let fg = mul(&fp, &f, &g);
        let fh = mul(&fp, &f, &h);
        assert_eq!(gcd(&fp, &fg, &fh), f);
    }

    #[test]
    fn gcd_with_zero() {
        let fp = f5();
        let f = vec![2, 4]; // 2 + 4x, gcd normalizes monic
        assert_eq!(gcd(&fp, &f, &Vec::new()), vec![3, 1]);
        assert!(is_zero(&gcd(&fp, &Vec::new(), &Vec::new())));
    }
}
