//! Arithmetic in small finite fields GF(p^k), used by the projective-plane
//! incidence construction. Elements are dense indices 0..q encoding
//! base-p coefficient vectors; multiplication reduces modulo the
//! lexicographically first monic irreducible polynomial of degree k.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Gf {
    p: usize,
    k: usize,
    /// Coefficients of the reduction polynomial x^k = red[0] + red[1] x + ...
    red: Vec<usize>,
}

pub fn factor_prime_power(q: usize) -> Option<(usize, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
    let mut k = 0;
    let mut m = q;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1 && is_prime(p)).then_some((p, k))
}

pub fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

impl Gf {
    pub fn new(q: usize) -> Result<Gf> {
        let (p, k) = factor_prime_power(q)
            .ok_or_else(|| Error::invalid(format!("{q} is not a prime power")))?;
        let red = if k == 1 {
            vec![0]
        } else {
            find_irreducible(p, k).ok_or_else(|| {
                Error::internal(format!("no irreducible polynomial found for GF({q})"))
            })?
        };
        Ok(Gf { p, k, red })
    }

    fn to_coeffs(&self, x: usize) -> Vec<usize> {
        let mut c = vec![0; self.k];
        let mut x = x;
        for item in c.iter_mut() {
            *item = x % self.p;
            x /= self.p;
        }
        c
    }

    fn encode(&self, c: &[usize]) -> usize {
        c.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (ca, cb) = (self.to_coeffs(a), self.to_coeffs(b));
        let sum: Vec<usize> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&sum)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let (ca, cb) = (self.to_coeffs(a), self.to_coeffs(b));
        // Schoolbook product, then reduce degree by degree using
        // x^k = red (repeatedly for the top coefficient).
        let mut prod = vec![0usize; 2 * self.k - 1];
        for (i, &x) in ca.iter().enumerate() {
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        for deg in (self.k..prod.len()).rev() {
            let top = prod[deg];
            if top == 0 {
                continue;
            }
            prod[deg] = 0;
            for (i, &r) in self.red.iter().enumerate() {
                prod[deg - self.k + i] = (prod[deg - self.k + i] + top * r) % self.p;
            }
        }
        prod.truncate(self.k);
        self.encode(&prod)
    }
}

/// Finds the lexicographically first monic irreducible polynomial of degree
/// `k` over F_p, returned as the coefficients of x^k expressed back in lower
/// degrees (i.e. x^k = c_0 + c_1 x + ...).
fn find_irreducible(p: usize, k: usize) -> Option<Vec<usize>> {
    let total = p.pow(k as u32);
    'candidates: for code in 0..total {
        // Candidate f(x) = x^k + sum c_i x^i with c encoded base p.
        let mut c = vec![0usize; k];
        let mut x = code;
        for item in c.iter_mut() {
            *item = x % p;
            x /= p;
        }
        // Trial division by every monic polynomial of degree 1..=k/2.
        for deg in 1..=k / 2 {
            let dtotal = p.pow(deg as u32);
            for dcode in 0..dtotal {
                let mut d = vec![0usize; deg + 1];
                let mut y = dcode;
                for item in d.iter_mut().take(deg) {
                    *item = y % p;
                    y /= p;
                }
                d[deg] = 1;
                if divides(p, &d, &c, k) {
                    continue 'candidates;
                }
            }
        }
        // Negate: reduction expresses x^k = -c_0 - c_1 x - ...
        return Some(c.iter().map(|&v| (p - v) % p).collect());
    }
    None
}

/// Whether monic `d` divides x^k + c (poly arithmetic over F_p).
fn divides(p: usize, d: &[usize], c: &[usize], k: usize) -> bool {
    let mut rem = vec![0usize; k + 1];
    rem[k] = 1;
    for (i, &v) in c.iter().enumerate() {
        rem[i] = v;
    }
    let dd = d.len() - 1;
    for deg in (dd..=k).rev() {
        let coef = rem[deg];
        if coef == 0 {
            continue;
        }
        for (i, &dv) in d.iter().enumerate() {
            let idx = deg - dd + i;
            rem[idx] = (rem[idx] + p * p - (coef * dv) % p) % p;
        }
    }
    rem.iter().all(|&v| v == 0)
}
