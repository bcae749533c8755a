//! Closed-form principal-value integrals of resolvent chains.
//!
//! Working in the eigenbasis of a Hermitian H, the contour-free spectral
//! calculus used by the commutator-equation and super-adiabatic machinery
//! reduces to integrals
//!
//!   I(u_0,…,u_{m−1}) = PV ∫_ℝ Π_i (u_i − ix)^{−1} dx,   u_i ∈ ℝ∖{0},
//!
//! with u_i = λ_{a_i} − E_j. Partial fractions (∫(u−ix)^{−p}dx = 0 for p ≥ 2,
//! PV ∫(u−ix)^{−1}dx = π·sign u) collapse I to
//!
//!   I = π·(−1)^{m−1}·Δ[sign](u_0,…,u_{m−1}),
//!
//! the (confluent) divided difference of sign(·) over the nodes. Because the
//! nodes at opposite signs are separated by the spectral gap while divided
//! differences over same-sign nodes vanish identically, the recursive
//! evaluation is stable for arbitrarily close (or equal) same-sign nodes.

use crate::{C64, CMat};

/// Divided difference of sign(·) over `us` (any order, confluent-safe).
/// `us` need not be sorted.
pub fn dd_sign(us: &[f64]) -> f64 {
    let mut v = us.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    dd_sorted(&v)
}

fn dd_sorted(v: &[f64]) -> f64 {
    let m = v.len();
    if m == 1 {
        return v[0].signum();
    }
    // all nodes on one side: every higher difference of a constant vanishes
    if v[0].signum() == v[m - 1].signum() {
        return 0.0;
    }
    // mixed signs ⇒ the extreme nodes straddle zero and are well separated
    (dd_sorted(&v[1..]) - dd_sorted(&v[..m - 1])) / (v[m - 1] - v[0])
}

/// PV ∫ Π (u_i − ix)^{−1} dx.
pub fn chain_integral(us: &[f64]) -> f64 {
    let m = us.len();
    assert!(m >= 1);
    let sgn = if (m - 1) % 2 == 0 { 1.0 } else { -1.0 };
    std::f64::consts::PI * sgn * dd_sign(us)
}

/// Signed two-endpoint combination (1/2π)·Σ_{j=1,2} (−1)^j I(λ−E_j) used by
/// the spectral calculus: j=1 enters with −, j=2 with +.
fn endpoint_weight(lams: &[f64], e1: f64, e2: f64) -> f64 {
    let u1: Vec<f64> = lams.iter().map(|&l| l - e1).collect();
    let u2: Vec<f64> = lams.iter().map(|&l| l - e2).collect();
    (chain_integral(&u2) - chain_integral(&u1)) / (2.0 * std::f64::consts::PI)
}

/// Kernel of the two-resolvent calculus in the eigenbasis:
/// w2(a,b) = (1/2π)Σ_j(−1)^j I₂(λ_a−E_j, λ_b−E_j)
///         = (χ_in(a) − χ_in(b))/(λ_a − λ_b),
/// with χ_in the indicator of [e1, e2]. Exact for all pairs (same side ⇒ 0).
pub fn two_resolvent_kernel(lam: &[f64], e1: f64, e2: f64) -> ndarray::Array2<f64> {
    let n = lam.len();
    let inside: Vec<bool> = lam.iter().map(|&l| l >= e1 && l <= e2).collect();
    let mut k = ndarray::Array2::<f64>::zeros((n, n));
    for a in 0..n {
        for b in 0..n {
            if inside[a] != inside[b] {
                let xa = if inside[a] { 1.0 } else { 0.0 };
                let xb = if inside[b] { 1.0 } else { 0.0 };
                k[(a, b)] = (xa - xb) / (lam[a] - lam[b]);
            }
        }
    }
    k
}

/// Apply the two-resolvent calculus elementwise:
/// out = (1/2π)Σ_j(−1)^j ∫ R A R dx  (in the eigenbasis).
pub fn chain2_apply(a_eig: &CMat, lam: &[f64], e1: f64, e2: f64) -> CMat {
    let k = two_resolvent_kernel(lam, e1, e2);
    let mut out = a_eig.clone();
    for ((i, j), v) in out.indexed_iter_mut() {
        *v *= C64::new(k[(i, j)], 0.0);
    }
    out
}

/// Three-resolvent contraction in the eigenbasis:
///
///  out(a,b) = Σ_c M1(a,c)·M2(c,b)·w3(λ_a, λ_c, λ_b),
///  w3 = (1/2π)Σ_j(−1)^j I₃(λ−E_j),
///
/// i.e. the eigenbasis form of (1/2π)Σ_j(−1)^j ∫ R M1 R M2 R dx. The weight
/// vanishes unless the triple mixes inside/outside of [e1,e2], so the sum is
/// pruned by blocks: cost O(k·n²) with k the number of eigenvalues inside.
pub fn chain3_contract(m1: &CMat, m2: &CMat, lam: &[f64], e1: f64, e2: f64) -> CMat {
    let n = lam.len();
    let inside: Vec<bool> = lam.iter().map(|&l| l >= e1 && l <= e2).collect();
    let in_idx: Vec<usize> = (0..n).filter(|&i| inside[i]).collect();
    let mut out = CMat::zeros((n, n));
    let w3 = |a: usize, c: usize, b: usize| -> f64 {
        endpoint_weight(&[lam[a], lam[c], lam[b]], e1, e2)
    };
    for a in 0..n {
        for b in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            if !inside[a] && !inside[b] {
                // weight vanishes unless c lies inside
                for &c in &in_idx {
                    acc += m1[(a, c)] * m2[(c, b)] * C64::new(w3(a, c, b), 0.0);
                }
            } else {
                for c in 0..n {
                    let w = w3(a, c, b);
                    if w != 0.0 {
                        acc += m1[(a, c)] * m2[(c, b)] * C64::new(w, 0.0);
                    }
                }
            }
            out[(a, b)] = acc;
        }
    }
    out
}

/// General chain contraction by brute force over index tuples, with the
/// same-sign pruning. Exponential in chain length; used for chains of four or
/// more resolvents (small systems) and as the oracle for the pruned paths.
pub fn chain_contract_scalar(mats: &[&CMat], lam: &[f64], e1: f64, e2: f64) -> CMat {
    let n = lam.len();
    let m = mats.len() + 1;
    let mut out = CMat::zeros((n, n));
    let mut idx = vec![0usize; m];
    loop {
        let mut prod = C64::new(1.0, 0.0);
        for (i, mat) in mats.iter().enumerate() {
            prod *= mat[(idx[i], idx[i + 1])];
            if prod.norm_sqr() == 0.0 {
                break;
            }
        }
        if prod.norm_sqr() != 0.0 {
            let lams: Vec<f64> = idx.iter().map(|&i| lam[i]).collect();
            let w = endpoint_weight(&lams, e1, e2);
            if w != 0.0 {
                out[(idx[0], idx[m - 1])] += prod * C64::new(w, 0.0);
            }
        }
        let mut pos = 0;
        loop {
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
            pos += 1;
            if pos == m {
                return out;
            }
        }
    }
}
