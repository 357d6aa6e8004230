//! Bivariate polynomials over `F_p`, the numerators and denominators of the
//! rational-function field.
//!
//! Terms are kept in a `BTreeMap` from exponent pairs `(i, j)` (first
//! variable, second variable) to nonzero coefficients in `[1, p)`, so equal
//! polynomials are structurally equal. The monomial order used for leading
//! terms and for canonical formatting is graded lexicographic: compare total
//! degree, then the exponent of the first variable.

use std::collections::BTreeMap;

use super::unipoly::{self, UniPoly};
use super::{ExactAlgError, Field, PrimeField};

/// A polynomial in two variables over `F_p`. The modulus lives in the
/// surrounding [`PrimeField`]; all operations take it explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), u64>,
}

/// Graded-lex comparison key for an exponent pair.
fn grlex(e: (u32, u32)) -> (u32, u32) {
    (e.0 + e.1, e.0)
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(fp: &PrimeField, c: u64) -> Self {
        Self::monomial(fp, (0, 0), c)
    }

    pub fn one(fp: &PrimeField) -> Self {
        Self::constant(fp, 1)
    }

    /// The first variable (exponent pair `(1, 0)`).
    pub fn var_first(fp: &PrimeField) -> Self {
        Self::monomial(fp, (1, 0), 1)
    }

    /// The second variable (exponent pair `(0, 1)`).
    pub fn var_second(fp: &PrimeField) -> Self {
        Self::monomial(fp, (0, 1), 1)
    }

    pub fn monomial(fp: &PrimeField, exp: (u32, u32), coeff: u64) -> Self {
        let mut terms = BTreeMap::new();
        let c = fp.reduce(coeff);
        if c != 0 {
            terms.insert(exp, c);
        }
        BiPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)) == Some(&1)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&(0, 0)))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &u64)> {
        self.terms.iter()
    }

    /// Total degree; zero polynomial reports 0.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.0 + e.1).max().unwrap_or(0)
    }

    /// Leading term under graded lex; `None` for the zero polynomial.
    pub fn leading_term(&self) -> Option<((u32, u32), u64)> {
        self.terms
            .iter()
            .max_by_key(|(e, _)| grlex(**e))
            .map(|(e, c)| (*e, *c))
    }

    pub fn add(&self, other: &Self, fp: &PrimeField) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(*e).or_insert(0);
            *entry = fp.add(entry, c);
            if *entry == 0 {
                terms.remove(e);
            }
        }
        BiPoly { terms }
    }

    pub fn neg(&self, fp: &PrimeField) -> Self {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, fp.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self, fp: &PrimeField) -> Self {
        self.add(&other.neg(fp), fp)
    }

    pub fn mul(&self, other: &Self, fp: &PrimeField) -> Self {
        let mut terms: BTreeMap<(u32, u32), u64> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = (ea.0 + eb.0, ea.1 + eb.1);
                let c = fp.mul(ca, cb);
                let entry = terms.entry(e).or_insert(0);
                *entry = fp.add(entry, &c);
                if *entry == 0 {
                    terms.remove(&e);
                }
            }
        }
        BiPoly { terms }
    }

    pub fn scale(&self, s: u64, fp: &PrimeField) -> Self {
        let s = fp.reduce(s);
        if s == 0 {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, fp.mul(c, &s)))
                .collect(),
        }
    }

    /// Exact division: `Some(q)` with `self = q * d` if `d` divides `self`.
    ///
    /// Works by cancelling graded-lex leading terms; when `d` genuinely
    /// divides `self` every intermediate leading term stays divisible, so the
    /// loop terminates with remainder zero.
    pub fn exact_div(&self, d: &Self, fp: &PrimeField) -> Option<Self> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = BiPoly::zero();
        let (de, dc) = d.leading_term().unwrap();
        let dc_inv = fp.inv(&dc).unwrap();
        while !rem.is_zero() {
            let (re, rc) = rem.leading_term().unwrap();
            if re.0 < de.0 || re.1 < de.1 {
                return None;
            }
            let qe = (re.0 - de.0, re.1 - de.1);
            let qc = fp.mul(&rc, &dc_inv);
            let t = BiPoly::monomial(fp, qe, qc);
            quot = quot.add(&t, fp);
            rem = rem.sub(&t.mul(d, fp), fp);
        }
        Some(quot)
    }

    /// Substitutes values for the two variables.
    pub fn eval(&self, a: u64, b: u64, fp: &PrimeField) -> u64 {
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let t = fp.mul(&fp.pow(a, e.0 as u64), &fp.pow(b, e.1 as u64));
            acc = fp.add(&acc, &fp.mul(c, &t));
        }
        acc
    }

    /// Makes the graded-lex leading coefficient 1 (no-op on zero).
    pub fn monic(&self, fp: &PrimeField) -> Self {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(fp.inv(&c).unwrap(), fp),
        }
    }

    // --- view as a polynomial in the second variable with coefficients in
    //     F_p[first]; used by the gcd recursion ---

    fn to_coeffs_in_second(&self) -> Vec<UniPoly> {
        let dm = self.terms.keys().map(|e| e.1).max().unwrap_or(0) as usize;
        let mut out = vec![Vec::new(); dm + 1];
        for (e, c) in &self.terms {
            let coeff = &mut out[e.1 as usize];
            let il = e.0 as usize;
            if coeff.len() <= il {
                coeff.resize(il + 1, 0);
            }
            coeff[il] = *c;
        }
        out.into_iter().map(unipoly::trim).collect()
    }

    fn from_coeffs_in_second(coeffs: Vec<UniPoly>) -> Self {
        let mut terms = BTreeMap::new();
        for (j, coeff) in coeffs.into_iter().enumerate() {
            for (i, c) in coeff.into_iter().enumerate() {
                if c != 0 {
                    terms.insert((i as u32, j as u32), c);
                }
            }
        }
        BiPoly { terms }
    }

    fn from_unipoly_in_first(u: &UniPoly) -> Self {
        let mut terms = BTreeMap::new();
        for (i, c) in u.iter().enumerate() {
            if *c != 0 {
                terms.insert((i as u32, 0), *c);
            }
        }
        BiPoly { terms }
    }
}

/// Degree in the second variable, `None` for zero.
fn deg_second(coeffs: &[UniPoly]) -> Option<usize> {
    coeffs.iter().rposition(|c| !unipoly::is_zero(c))
}

/// Drops trailing zero coefficients so the vector length is `deg + 1`.
fn trim_seconds(mut coeffs: Vec<UniPoly>) -> Vec<UniPoly> {
    while coeffs.last().map_or(false, |c| unipoly::is_zero(c)) {
        coeffs.pop();
    }
    coeffs
}

/// Content with respect to the second variable: the monic gcd (in `F_p[x]`)
/// of the coefficient polynomials.
fn content_second(fp: &PrimeField, coeffs: &[UniPoly]) -> UniPoly {
    let mut g: UniPoly = Vec::new();
    for c in coeffs {
        g = unipoly::gcd(fp, &g, c);
        if !g.is_empty() && unipoly::deg(&g) == 0 && g[0] == 1 {
            break;
        }
    }
    g
}

fn divide_coeffs(fp: &PrimeField, coeffs: &[UniPoly], d: &UniPoly) -> Vec<UniPoly> {
    coeffs
        .iter()
        .map(|c| {
            let (q, r) = unipoly::divmod(fp, c, d);
            debug_assert!(unipoly::is_zero(&r), "content division must be exact");
            q
        })
        .collect()
}

/// Pseudo-remainder of `a` by `b` in the second variable.
fn prem_second(fp: &PrimeField, a: &[UniPoly], b: &[UniPoly]) -> Vec<UniPoly> {
    let b = trim_seconds(b.to_vec());
    let db = deg_second(&b).expect("pseudo-division by zero");
    let lb = b[db].clone();
    let mut r = trim_seconds(a.to_vec());
    loop {
        let Some(dr) = deg_second(&r) else { return r };
        if dr < db {
            return r;
        }
        // r := lb * r - lead(r) * y^(dr-db) * b
        let lr = r[dr].clone();
        let mut out = vec![Vec::new(); r.len()];
        for (j, c) in r.iter().enumerate() {
            out[j] = unipoly::mul(fp, &lb, c);
        }
        for (j, c) in b.iter().enumerate() {
            let t = unipoly::mul(fp, &lr, c);
            let idx = j + dr - db;
            out[idx] = unipoly::sub(fp, &out[idx], &t);
        }
        r = trim_seconds(out);
    }
}

/// A greatest common divisor in `F_p[x, y]`, normalized so the graded-lex
/// leading coefficient is 1. Errors when both inputs are zero.
pub fn gcd_bipoly(a: &BiPoly, b: &BiPoly, fp: &PrimeField) -> Result<BiPoly, ExactAlgError> {
    if a.is_zero() && b.is_zero() {
        return Err(ExactAlgError::GcdOfZeros);
    }
    if a.is_zero() {
        return Ok(b.monic(fp));
    }
    if b.is_zero() {
        return Ok(a.monic(fp));
    }

    let ca = a.to_coeffs_in_second();
    let cb = b.to_coeffs_in_second();
    let cont_a = content_second(fp, &ca);
    let cont_b = content_second(fp, &cb);
    let cont_gcd = unipoly::gcd(fp, &cont_a, &cont_b);

    let da = deg_second(&ca).unwrap();
    let db = deg_second(&cb).unwrap();

    let pp_gcd = if da == 0 || db == 0 {
        // One operand is free of the second variable, so the primitive parts
        // are coprime as polynomials in it.
        vec![vec![1u64]]
    } else {
        let mut f = divide_coeffs(fp, &ca, &cont_a);
        let mut g = divide_coeffs(fp, &cb, &cont_b);
        if deg_second(&f) < deg_second(&g) {
            std::mem::swap(&mut f, &mut g);
        }
        loop {
            let r = prem_second(fp, &f, &g);
            match deg_second(&r) {
                None => {
                    // g divides f up to content.
                    let cont_g = content_second(fp, &g);
                    break divide_coeffs(fp, &g, &cont_g);
                }
                Some(0) => break vec![vec![1u64]],
                Some(_) => {
                    let cont_r = content_second(fp, &r);
                    f = g;
                    g = divide_coeffs(fp, &r, &cont_r);
                }
            }
        }
    };

    let result = BiPoly::from_coeffs_in_second(pp_gcd)
        .mul(&BiPoly::from_unipoly_in_first(&cont_gcd), fp);
    Ok(result.monic(fp))
}

// --- canonical text form ---

impl BiPoly {
    /// Canonical string form: terms in descending graded-lex order, joined by
    /// `+`; coefficients are reduced residues, so no minus signs appear.
    pub fn format(&self, fp: &PrimeField, vars: &[String; 2]) -> String {
        let _ = fp;
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(e, _)| std::cmp::Reverse(grlex(**e)));
        let mut out = String::new();
        for (idx, (e, c)) in terms.into_iter().enumerate() {
            if idx > 0 {
                out.push('+');
            }
            let mut factors: Vec<String> = Vec::new();
            if *c != 1 || (e.0 == 0 && e.1 == 0) {
                factors.push(c.to_string());
            }
            for (v, exp) in [(0usize, e.0), (1usize, e.1)] {
                match exp {
                    0 => {}
                    1 => factors.push(vars[v].clone()),
                    k => factors.push(format!("{}^{}", vars[v], k)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Parses the canonical polynomial grammar: terms joined by `+`/`-`, a
    /// term being an optional coefficient and `*`-separated variable powers.
    pub fn parse(s: &str, fp: &PrimeField, vars: &[String; 2]) -> Result<Self, ExactAlgError> {
        let err = || ExactAlgError::ElemParse(s.to_string(), format!("F{}[..]", fp.modulus()));
        let mut out = BiPoly::zero();
        let chars: Vec<char> = s.chars().collect();
        let mut pos = 0usize;
        let n = chars.len();
        let mut first = true;
        while pos < n {
            while pos < n && chars[pos].is_whitespace() {
                pos += 1;
            }
            if pos >= n {
                break;
            }
            let mut negative = false;
            if chars[pos] == '+' || chars[pos] == '-' {
                negative = chars[pos] == '-';
                pos += 1;
            } else if !first {
                return Err(err());
            }
            first = false;
            // one term: factors joined by '*'
            let mut coeff = 1u64;
            let mut exps = (0u32, 0u32);
            let mut any_factor = false;
            loop {
                while pos < n && chars[pos].is_whitespace() {
                    pos += 1;
                }
                let start = pos;
                if pos < n && chars[pos].is_ascii_digit() {
                    while pos < n && chars[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let num: u64 = chars[start..pos]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .map_err(|_| err())?;
                    coeff = fp.mul(&coeff, &fp.reduce(num));
                } else if pos < n && (chars[pos].is_alphabetic() || chars[pos] == '_') {
                    while pos < n
                        && (chars[pos].is_alphanumeric() || chars[pos] == '_' || chars[pos] == '\'')
                    {
                        pos += 1;
                    }
                    let name: String = chars[start..pos].iter().collect();
                    let var = if name == vars[0] {
                        0
                    } else if name == vars[1] {
                        1
                    } else {
                        return Err(err());
                    };
                    let mut exp = 1u32;
                    while pos < n && chars[pos].is_whitespace() {
                        pos += 1;
                    }
                    if pos < n && chars[pos] == '^' {
                        pos += 1;
                        while pos < n && chars[pos].is_whitespace() {
                            pos += 1;
                        }
                        let es = pos;
                        while pos < n && chars[pos].is_ascii_digit() {
                            pos += 1;
                        }
                        if es == pos {
                            return Err(err());
                        }
                        exp = chars[es..pos]
                            .iter()
                            .collect::<String>()
                            .parse()
                            .map_err(|_| err())?;
                    }
                    if var == 0 {
                        exps.0 += exp;
                    } else {
                        exps.1 += exp;
                    }
                } else {
                    return Err(err());
                }
                any_factor = true;
                while pos < n && chars[pos].is_whitespace() {
                    pos += 1;
                }
                if pos < n && chars[pos] == '*' {
                    pos += 1;
                    continue;
                }
                break;
            }
            if !any_factor {
                return Err(err());
            }
            if negative {
                coeff = fp.neg(&coeff);
            }
            out = out.add(&BiPoly::monomial(fp, exps, coeff), fp);
        }
        Ok(out)
    }
}
