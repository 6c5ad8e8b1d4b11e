//! Univariate polynomials over a finite field, coefficients lowest degree first.

use crate::gf::{Elem, Field};

pub type Poly = Vec<Elem>;

pub fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Degree, or `None` for the zero polynomial.
pub fn degree(p: &[Elem]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn add(f: &Field, a: &[Elem], b: &[Elem]) -> Poly {
    let mut out: Poly = (0..a.len().max(b.len()))
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(Elem::ZERO);
            let y = b.get(i).copied().unwrap_or(Elem::ZERO);
            f.add(x, y)
        })
        .collect();
    trim(&mut out);
    out
}

pub fn sub(f: &Field, a: &[Elem], b: &[Elem]) -> Poly {
    let neg: Poly = b.iter().map(|&c| f.neg(c)).collect();
    add(f, a, &neg)
}

pub fn mul(f: &Field, a: &[Elem], b: &[Elem]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Elem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder. Panics on division by the zero polynomial.
pub fn div_rem(f: &Field, a: &[Elem], b: &[Elem]) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = f.inv(b[db]).expect("leading coefficient is nonzero");
    let mut rem: Poly = a.to_vec();
    trim(&mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Elem::ZERO; rem.len() - db];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = f.mul(rem[dr], lead_inv);
        let shift = dr - db;
        quot[shift] = c;
        for (j, &bj) in b[..=db].iter().enumerate() {
            rem[shift + j] = f.sub(rem[shift + j], f.mul(c, bj));
        }
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

pub fn eval(f: &Field, p: &[Elem], x: Elem) -> Elem {
    p.iter()
        .rev()
        .fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
}

/// Product of `(x - a)` over the given points.
pub fn from_roots(f: &Field, roots: &[Elem]) -> Poly {
    roots.iter().fold(vec![Elem::ONE], |acc, &a| {
        mul(f, &acc, &[f.neg(a), Elem::ONE])
    })
}

/// Lagrange interpolation through `(xs[i], ys[i])`; the points must be distinct.
pub fn interpolate(f: &Field, xs: &[Elem], ys: &[Elem]) -> Poly {
    let full = from_roots(f, xs);
    let mut out: Poly = Vec::new();
    for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
        if yi.is_zero() {
            continue;
        }
        let (basis, _) = div_rem(f, &full, &[f.neg(xi), Elem::ONE]);
        let denom = xs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(Elem::ONE, |acc, (_, &xj)| f.mul(acc, f.sub(xi, xj)));
        let scale = f.div(yi, denom).expect("distinct interpolation points");
        let term: Poly = basis.iter().map(|&c| f.mul(c, scale)).collect();
        out = add(f, &out, &term);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_round_trip() {
        let f = Field::new(13, 1).unwrap();
        let p: Poly = [3, 0, 5, 1].iter().map(|&v| Elem(v)).collect();
        let xs: Vec<Elem> = (1..=6).map(Elem).collect();
        let ys: Vec<Elem> = xs.iter().map(|&x| eval(&f, &p, x)).collect();
        assert_eq!(interpolate(&f, &xs, &ys), p);
    }

    #[test]
    fn division_identity() {
        let f = Field::new(2, 8).unwrap();
        let a: Poly = [7, 1, 99, 4, 200, 3].iter().map(|&v| Elem(v)).collect();
        let b: Poly = [5, 17, 2].iter().map(|&v| Elem(v)).collect();
        let (q, r) = div_rem(&f, &a, &b);
        assert!(degree(&r).is_none_or(|d| d < 2));
        assert_eq!(add(&f, &mul(&f, &q, &b), &r), a);
    }
}
