//! Generator for the bipartite Lubotzky-Phillips-Sarnak Cayley graphs
//! X^{p,q}.
//!
//! Vertices are the elements of PGL(2, F_q), represented canonically by
//! scaling each matrix so its first nonzero entry is 1. The p+1 generators
//! come from the integer solutions of a^2+b^2+c^2+d^2 = p with a odd and
//! positive and b, c, d even, mapped to matrices
//! [[a+ib, c+id], [-c+id, a-ib]] over F_q, where i is a square root of -1
//! mod q. Edges are taken by right multiplication. Only the bipartite
//! branch (Legendre(q|p) = -1) is implemented; the non-bipartite branch is
//! rejected as unsupported.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

use super::gf::is_prime;

const DEFAULT_MAX_N: u64 = 200_000;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LpsParams {
    pub p: u32,
    pub q: u32,
}

impl LpsParams {
    /// Validates primality, the 1 mod 4 congruences, q > sqrt(p), and the
    /// Legendre condition (q|p) = -1.
    pub fn new(p: u32, q: u32) -> Result<LpsParams> {
        if !is_prime(p as usize) {
            return Err(Error::invalid(format!("p={p} is not prime")));
        }
        if !is_prime(q as usize) {
            return Err(Error::invalid(format!("q={q} is not prime")));
        }
        if p % 4 != 1 {
            return Err(Error::invalid(format!("p={p} is not 1 mod 4")));
        }
        if q % 4 != 1 {
            return Err(Error::invalid(format!("q={q} is not 1 mod 4")));
        }
        if (q as u64) * (q as u64) <= p as u64 {
            return Err(Error::invalid(format!("q={q} must exceed sqrt(p={p})")));
        }
        if q == p {
            return Err(Error::invalid("p and q must be distinct"));
        }
        match legendre(q as u64, p as u64) {
            -1 => Ok(LpsParams { p, q }),
            _ => Err(Error::invalid(format!(
                "Legendre({q}|{p}) != -1: only the bipartite branch is supported"
            ))),
        }
    }

    pub fn degree(&self) -> usize {
        self.p as usize + 1
    }

    pub fn expected_n(&self) -> u64 {
        let q = self.q as u64;
        q * (q * q - 1)
    }
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Legendre symbol via Euler's criterion; `p` must be an odd prime.
fn legendre(a: u64, p: u64) -> i32 {
    match mod_pow(a % p, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    mod_pow(a, p - 2, p)
}

fn sqrt_minus_one(q: u64) -> u64 {
    (2..q)
        .find(|&x| x * x % q == q - 1)
        .expect("q = 1 mod 4 guarantees a square root of -1")
}

/// 2x2 matrix over F_q in row-major order, canonical iff its first nonzero
/// entry is 1.
type Mat = [u64; 4];

fn canonical(m: Mat, q: u64) -> Mat {
    let lead = m.iter().copied().find(|&x| x != 0).expect("zero matrix");
    let inv = mod_inv(lead, q);
    [
        m[0] * inv % q,
        m[1] * inv % q,
        m[2] * inv % q,
        m[3] * inv % q,
    ]
}

fn mat_mul(a: Mat, b: Mat, q: u64) -> Mat {
    [
        (a[0] * b[0] + a[1] * b[2]) % q,
        (a[0] * b[1] + a[1] * b[3]) % q,
        (a[2] * b[0] + a[3] * b[2]) % q,
        (a[2] * b[1] + a[3] * b[3]) % q,
    ]
}

fn det(m: Mat, q: u64) -> u64 {
    (m[0] * m[3] % q + q * q - m[1] * m[2] % q) % q
}

fn pack(m: Mat, q: u64) -> usize {
    (((m[0] * q + m[1]) * q + m[2]) * q + m[3]) as usize
}

/// Integer solutions of a^2+b^2+c^2+d^2 = p with a odd positive, b,c,d even.
fn quaternion_solutions(p: i64) -> Vec<[i64; 4]> {
    let bound = (p as f64).sqrt() as i64 + 1;
    let mut out = Vec::new();
    let mut a = 1;
    while a * a <= p {
        for b in (-bound..=bound).filter(|b| b % 2 == 0) {
            for c in (-bound..=bound).filter(|c| c % 2 == 0) {
                for d in (-bound..=bound).filter(|d| d % 2 == 0) {
                    if a * a + b * b + c * c + d * d == p {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
        a += 2;
    }
    out
}

pub fn lps_graph(params: &LpsParams) -> Result<Graph> {
    lps_graph_with_cap(params, DEFAULT_MAX_N)
}

pub fn lps_graph_with_cap(params: &LpsParams, max_n: u64) -> Result<Graph> {
    let expected_n = params.expected_n();
    if expected_n > max_n {
        return Err(Error::Resource {
            what: format!("LPS graph on q(q^2-1) = {expected_n} vertices"),
            required: expected_n as u128,
            budget: max_n as u128,
        });
    }
    let p = params.p as i64;
    let q = params.q as u64;

    let sols = quaternion_solutions(p);
    if sols.len() != params.degree() {
        return Err(Error::internal(format!(
            "expected {} quaternion solutions for p={p}, found {}",
            params.degree(),
            sols.len()
        )));
    }

    let i = sqrt_minus_one(q);
    let to_fq = |x: i64| x.rem_euclid(q as i64) as u64;
    let generators: Vec<Mat> = sols
        .iter()
        .map(|&[a, b, c, d]| {
            canonical(
                [
                    (to_fq(a) + i * to_fq(b)) % q,
                    (to_fq(c) + i * to_fq(d)) % q,
                    (to_fq(-c) + i * to_fq(d)) % q,
                    (to_fq(a) + (q - 1) * (i * to_fq(b) % q)) % q,
                ],
                q,
            )
        })
        .collect();
    for g in &generators {
        if det(*g, q) == 0 {
            return Err(Error::internal("singular generator matrix"));
        }
    }

    // Enumerate PGL(2,q): canonical invertible matrices, in packed order.
    let mut id_of = vec![u32::MAX; (q * q * q * q) as usize];
    let mut elements: Vec<Mat> = Vec::with_capacity(expected_n as usize);
    for m0 in 0..q {
        for m1 in 0..q {
            for m2 in 0..q {
                for m3 in 0..q {
                    let m = [m0, m1, m2, m3];
                    let lead = m.iter().copied().find(|&x| x != 0);
                    if lead != Some(1) || det(m, q) == 0 {
                        continue;
                    }
                    id_of[pack(m, q)] = elements.len() as u32;
                    elements.push(m);
                }
            }
        }
    }
    if elements.len() as u64 != expected_n {
        return Err(Error::internal(format!(
            "PGL(2,{q}) enumeration produced {} elements, expected {expected_n}",
            elements.len()
        )));
    }

    let mut edges = Vec::with_capacity(elements.len() * params.degree() / 2);
    for (id, &m) in elements.iter().enumerate() {
        for &s in &generators {
            let t = canonical(mat_mul(m, s, q), q);
            let tid = id_of[pack(t, q)];
            if tid == u32::MAX {
                return Err(Error::internal("generator product left PGL(2,q)"));
            }
            if (id as u32) < tid {
                edges.push((id as u32, tid));
            }
        }
    }
    let g = Graph::from_edges(elements.len(), &edges)?;
    if g.is_regular() != Some(params.degree()) {
        return Err(Error::internal(format!(
            "LPS construction is not {}-regular",
            params.degree()
        )));
    }
    Ok(g)
}

/// Structural facts verified on a generated instance, emitted alongside it.
#[derive(Debug, Clone, Serialize)]
pub struct LpsReport {
    pub p: u32,
    pub q: u32,
    pub n: usize,
    pub degree: usize,
    pub bipartite: bool,
    pub connected: bool,
    pub girth: u32,
    /// Girth lower bound 4 log q / log p - 1.
    pub girth_bound: f64,
    pub lambda2: f64,
    pub lambda2_residual: f64,
    pub ramanujan: bool,
    /// The q > sqrt(p) condition as enforced (stricter variants exist in
    /// the literature).
    pub q_gt_sqrt_p: bool,
}

pub fn lps_provenance(params: &LpsParams, tol: f64) -> Result<(Graph, LpsReport)> {
    let g = lps_graph(params)?;
    let spectral = crate::spectral::second_eigenvalue(&g, tol)?;
    let girth = g
        .girth()
        .ok_or_else(|| Error::internal("LPS graph is acyclic"))?;
    let report = LpsReport {
        p: params.p,
        q: params.q,
        n: g.n(),
        degree: params.degree(),
        bipartite: g.bipartition().is_some(),
        connected: g.is_connected(),
        girth,
        girth_bound: 4.0 * (params.q as f64).ln() / (params.p as f64).ln() - 1.0,
        lambda2: spectral.lambda2,
        lambda2_residual: spectral.residual,
        ramanujan: spectral.ramanujan,
        q_gt_sqrt_p: (params.q as f64) > (params.p as f64).sqrt(),
    };
    Ok((g, report))
}
