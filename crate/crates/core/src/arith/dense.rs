//! Ordinary polynomials over ℚ(i) as coefficient vectors, lowest power first.
//! Vectors are kept trimmed: the last entry is nonzero, and the zero polynomial is empty.

use num_traits::{One, Zero};

use super::GaussianRational as G;

pub(crate) type Dense = Vec<G>;

pub(crate) fn trim(p: &mut Dense) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn degree(p: &[G]) -> Option<usize> {
    p.len().checked_sub(1)
}

pub(crate) fn mul(a: &[G], b: &[G]) -> Dense {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![G::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += &(x * y);
            }
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn sub(a: &[G], b: &[G]) -> Dense {
    let mut out: Dense = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), G::zero());
    }
    for (o, y) in out.iter_mut().zip(b) {
        *o -= y;
    }
    trim(&mut out);
    out
}

pub(crate) fn scale(a: &[G], c: &G) -> Dense {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x * c).collect()
}

pub(crate) fn make_monic(a: &[G]) -> Dense {
    match a.last() {
        None => Vec::new(),
        Some(lc) if lc.is_one() => a.to_vec(),
        Some(lc) => {
            let inv = lc.inv().expect("nonzero leading coefficient");
            scale(a, &inv)
        }
    }
}

/// Euclidean division `a = q·b + r` with `deg r < deg b`. `b` must be nonzero.
pub(crate) fn div_rem(a: &[G], b: &[G]) -> (Dense, Dense) {
    let db = degree(b).expect("division by zero polynomial");
    let mut r: Dense = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lc_inv = b[db].inv().expect("nonzero leading coefficient");
    let monic_b = lc_inv.is_one();
    let mut q = vec![G::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let lead = r.last().unwrap().clone();
        let c = if monic_b { lead } else { &lead * &lc_inv };
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                r[shift + j] -= &(&c * bj);
            }
        }
        // The leading term cancels exactly.
        r.pop();
        trim(&mut r);
        q[shift] = c;
    }
    trim(&mut q);
    (q, r)
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub(crate) fn gcd(a: &[G], b: &[G]) -> Dense {
    let mut x: Dense = make_monic(a);
    let mut y: Dense = make_monic(b);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = make_monic(&r);
    }
    make_monic(&x)
}

pub(crate) fn derivative(a: &[G]) -> Dense {
    let mut out: Dense = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * &G::from(k as i64))
        .collect();
    trim(&mut out);
    out
}

/// Exact quotient of `a` by `b`, or `None` if `b` does not divide `a`.
pub(crate) fn exact_div(a: &[G], b: &[G]) -> Option<Dense> {
    let (q, r) = div_rem(a, b);
    r.is_empty().then_some(q)
}

/// `z^m mod g` by repeated squaring, for monic nonconstant `g`.
pub(crate) fn pow_z_mod(m: u64, g: &[G]) -> Dense {
    let mut result: Dense = vec![G::one()];
    let mut base: Dense = div_rem(&[G::zero(), G::one()], g).1;
    let mut e = m;
    while e > 0 {
        if e & 1 == 1 {
            result = div_rem(&mul(&result, &base), g).1;
        }
        e >>= 1;
        if e > 0 {
            base = div_rem(&mul(&base, &base), g).1;
        }
    }
    let (_, r) = div_rem(&result, g);
    r
}

/// Monic `gcd(g, z^m − 1)`.
pub(crate) fn gcd_with_z_pow_minus_one(g: &[G], m: u64) -> Dense {
    let g = make_monic(g);
    if degree(&g).unwrap_or(0) == 0 {
        return vec![G::one()];
    }
    let r = pow_z_mod(m, &g);
    let r1 = sub(&r, &[G::one()]);
    gcd(&g, &r1)
}
