use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::cartier::localize;
use crate::error::{Error, Result};
use crate::gf::GaloisField;
use crate::ratfield::{embed_t, Place};

use super::union_find::WeightedUnionFind;
use super::zp::x_family_zp;

/// `c_0, ..., c_{len-1}`: the `[t]`-expansion coefficients of
/// `x_N - x_K`, as residues mod `p`.
pub fn zp_difference_coefficients(field: &GaloisField, n: u32, k: u32, len: usize) -> Result<Vec<u32>> {
    if !field.is_prime_field() {
        return Err(Error::InvalidArgument("the x_N family lives over F_p".into()));
    }
    let diff = x_family_zp(field, n).sub(&x_family_zp(field, k))?;
    let emb = embed_t(field, &Place::t(field), len as i64)?;
    let s = localize(&diff, &emb, len as i64)?;
    let s = s.local_coeff()?;
    Ok((0..len as i64)
        .map(|i| field.as_prime(s.coeff(i)).expect("prime field"))
        .collect())
}

/// An inconsistent combination of the constraints
/// `a_{n-1} - a_{pn-1} = c_{n-1}` under `a_i = a_{i+P}` for `i ≥ L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    #[serde(rename = "P")]
    pub period: usize,
    #[serde(rename = "L")]
    pub offset: usize,
    /// `(n, sign)`: the signed sum of the cited constraints cancels every
    /// unknown but has nonzero right-hand side.
    pub chain: Vec<(usize, i8)>,
}

impl Refutation {
    fn class(&self, i: usize) -> usize {
        (i - self.offset) % self.period
    }

    /// Re-evaluates the cited constraints against `c`.
    pub fn verify(&self, p: u32, c: &[u32]) -> bool {
        if self.chain.is_empty() || self.period == 0 {
            return false;
        }
        let p = p as i64;
        let mut weights = vec![0i64; self.period];
        let mut rhs = 0i64;
        for &(n, s) in &self.chain {
            if n == 0 || n - 1 < self.offset || n > c.len() {
                return false;
            }
            let s = s as i64;
            weights[self.class(n - 1)] += s;
            weights[self.class(p as usize * n - 1)] -= s;
            rhs += s * c[n - 1] as i64;
        }
        weights.iter().all(|w| w.rem_euclid(p) == 0) && rhs.rem_euclid(p) != 0
    }
}

/// Refutations of eventual periodicity with period `P ≤ Pmax` from index
/// `L ≤ Lmax` for the `[t]`-expansion of any `a` with `q(a) = x_N - x_K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicityCertificate {
    pub p: u32,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "K")]
    pub k: u32,
    #[serde(rename = "Pmax")]
    pub pmax: usize,
    #[serde(rename = "Lmax")]
    pub lmax: usize,
    /// Number of constraints scanned per `(P, L)`.
    pub bound: Vec<usize>,
    pub refutations: Vec<Refutation>,
    /// `(P, L)` pairs left unrefuted within the scanned window.
    pub inconclusive: Vec<(usize, usize)>,
}

impl PeriodicityCertificate {
    pub fn is_complete(&self) -> bool {
        self.inconclusive.is_empty() && self.refutations.len() == self.pmax * (self.lmax + 1)
    }

    /// Re-verifies every refutation against freshly expanded coefficients.
    pub fn verify(&self) -> Result<bool> {
        let field = GaloisField::prime(self.p as u64)?;
        let need = self
            .refutations
            .iter()
            .flat_map(|r| r.chain.iter().map(|&(n, _)| n))
            .max()
            .unwrap_or(0);
        let c = zp_difference_coefficients(&field, self.n, self.k, need + 1)?;
        Ok(self.refutations.iter().all(|r| r.verify(self.p, &c)))
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Constraints for `n` with `n - 1 ≥ L` depend only on `n` modulo
/// `lcm(P, (p-1)^K)`, so twice that many consecutive `n` exhaust them.
fn window(period: usize, e: usize) -> usize {
    2 * period / gcd(period, e) * e
}

/// For every `1 ≤ P ≤ Pmax`, `0 ≤ L ≤ Lmax`, propagates the recursion over
/// `F_p` with weighted union-find and records an inconsistent chain.
pub fn nonperiodicity_certificate(
    p: u32,
    n: u32,
    k: u32,
    pmax: usize,
    lmax: usize,
) -> Result<PeriodicityCertificate> {
    if k <= n {
        return Err(Error::InvalidArgument(format!("need K > N, got N={n}, K={k}")));
    }
    if pmax == 0 {
        return Err(Error::InvalidArgument("Pmax must be positive".into()));
    }
    let field = GaloisField::prime(p as u64)?;
    let e = (p as usize - 1).pow(k);
    let max_window = (1..=pmax).map(|per| window(per, e)).max().unwrap_or(0);
    let c = zp_difference_coefficients(&field, n, k, lmax + max_window + 1)?;

    let mut refutations = Vec::new();
    let mut inconclusive = Vec::new();
    let mut bound = Vec::new();
    for period in 1..=pmax {
        let w = window(period, e);
        bound.push(w);
        for offset in 0..=lmax {
            match refute(p, period, offset, w, &c) {
                Some(chain) => refutations.push(Refutation { period, offset, chain }),
                None => inconclusive.push((period, offset)),
            }
        }
    }
    Ok(PeriodicityCertificate {
        p,
        n,
        k,
        pmax,
        lmax,
        bound,
        refutations,
        inconclusive,
    })
}

fn refute(p: u32, period: usize, offset: usize, w: usize, c: &[u32]) -> Option<Vec<(usize, i8)>> {
    let class = |i: usize| (i - offset) % period;
    let mut uf = WeightedUnionFind::new(period, p);
    // Spanning-forest edges: (neighbor, constraint n, sign as seen from here).
    let mut adj: Vec<Vec<(usize, usize, i8)>> = vec![Vec::new(); period];
    for n in offset + 1..=offset + w {
        let (x, y) = (class(n - 1), class(p as usize * n - 1));
        match uf.relate(x, y, c[n - 1]) {
            Ok(true) => {
                adj[x].push((y, n, 1));
                adj[y].push((x, n, -1));
            }
            Ok(false) => {}
            Err(_) => {
                let mut chain = vec![(n, 1)];
                chain.extend(forest_path(&adj, y, x));
                return Some(chain);
            }
        }
    }
    None
}

/// The signed constraints along the forest path from `from` to `to`, each
/// contributing `x_here - x_next`.
fn forest_path(adj: &[Vec<(usize, usize, i8)>], from: usize, to: usize) -> Vec<(usize, i8)> {
    let mut prev: Vec<Option<(usize, usize, i8)>> = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for &(w, n, s) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                prev[w] = Some((v, n, s));
                queue.push_back(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut v = to;
    while let Some((u, n, s)) = prev[v] {
        path.push((n, s));
        v = u;
    }
    path.reverse();
    path
}

/// The telescoped identity `a_{Me-1} - a_{Mep^s-1} = Σ_j c_{Mep^j-1}` for
/// `e = (p-1)^N`, with the sum evaluated from the expansion and compared
/// with its closed form `s·(1 - [(p-1)^{K-N} | M])`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TelescopingCheck {
    pub from_index: usize,
    pub to_index: usize,
    pub sum: u32,
    pub expected: u32,
}

impl TelescopingCheck {
    pub fn holds(&self) -> bool {
        self.sum == self.expected
    }
}

pub fn telescoping_check(p: u32, n: u32, k: u32, m: usize, s: u32) -> Result<TelescopingCheck> {
    if k <= n || m == 0 {
        return Err(Error::InvalidArgument("need K > N and M > 0".into()));
    }
    let field = GaloisField::prime(p as u64)?;
    let e = (p as usize - 1).pow(n);
    let ratio = (p as usize - 1).pow(k - n);
    let top = m * e * (p as usize).pow(s);
    let c = zp_difference_coefficients(&field, n, k, top)?;
    let sum = (0..s)
        .map(|j| c[m * e * (p as usize).pow(j) - 1])
        .sum::<u32>()
        % p;
    let expected = if m.is_multiple_of(ratio) { 0 } else { s % p };
    Ok(TelescopingCheck {
        from_index: m * e - 1,
        to_index: top - 1,
        sum,
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn period_one_from_zero() {
        let cert = nonperiodicity_certificate(3, 0, 1, 1, 0).unwrap();
        assert_eq!(cert.refutations.len(), 1);
        assert_eq!(cert.refutations[0].chain, vec![(1, 1)]);
        assert!(cert.verify().unwrap());
    }

    #[test]
    fn full_certificate_small() {
        let cert = nonperiodicity_certificate(3, 0, 1, 12, 12).unwrap();
        assert!(cert.is_complete());
        assert!(cert.verify().unwrap());
    }

    #[test]
    fn tampered_refutation_fails() {
        let cert = nonperiodicity_certificate(3, 0, 2, 6, 3).unwrap();
        let c = zp_difference_coefficients(&GaloisField::prime(3).unwrap(), 0, 2, 400).unwrap();
        let mut r = cert.refutations.last().unwrap().clone();
        assert!(r.verify(3, &c));
        r.chain[0].1 = -r.chain[0].1;
        assert!(!r.verify(3, &c) || r.chain.len() == 1);
    }

    #[test]
    fn telescoping() {
        for (n, k) in [(0, 1), (0, 2), (1, 3)] {
            let chk = telescoping_check(3, n, k, 1, 4).unwrap();
            assert!(chk.holds());
            assert_eq!(chk.sum, 1);
        }
        let chk = telescoping_check(3, 0, 1, 2, 3).unwrap();
        assert!(chk.holds());
        assert_eq!(chk.sum, 0);
    }
}
