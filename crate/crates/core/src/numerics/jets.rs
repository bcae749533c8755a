//! Truncated Taylor jets: exact derivatives of scalar profiles.
//!
//! A `Jet` holds f(s), f'(s), …, f^{(K)}(s) and propagates them through
//! arithmetic and `exp` by truncated power-series algebra. Used to evaluate
//! smooth switching profiles and their derivatives without symbolic work or
//! finite differencing.

/// Taylor coefficients a_k = f^{(k)}(s)/k! up to a fixed truncation order.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    /// Taylor coefficients (not derivatives): coeffs[k] = f^{(k)}/k!.
    pub coeffs: Vec<f64>,
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Jet { coeffs }
    }

    /// The identity jet s ↦ s at the point `value`.
    pub fn variable(value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        if order >= 1 {
            coeffs[1] = 1.0;
        }
        Jet { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// k-th derivative f^{(k)} = k!·a_k.
    pub fn derivative(&self, k: usize) -> f64 {
        if k >= self.coeffs.len() {
            return 0.0;
        }
        self.coeffs[k] * factorial(k)
    }

    pub fn add(&self, other: &Jet) -> Jet {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![0.0; n];
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c = self.coeffs.get(k).copied().unwrap_or(0.0)
                + other.coeffs.get(k).copied().unwrap_or(0.0);
        }
        Jet { coeffs }
    }

    pub fn scale(&self, a: f64) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        let n = self.order().min(other.order());
        let mut coeffs = vec![0.0; n + 1];
        for k in 0..=n {
            for j in 0..=k {
                coeffs[k] += self.coeffs[j] * other.coeffs[k - j];
            }
        }
        Jet { coeffs }
    }

    /// Reciprocal 1/f, requires f(s) ≠ 0.
    pub fn recip(&self) -> Jet {
        let n = self.order();
        let a0 = self.coeffs[0];
        assert!(a0 != 0.0, "jet reciprocal at zero");
        let mut coeffs = vec![0.0; n + 1];
        coeffs[0] = 1.0 / a0;
        for k in 1..=n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += self.coeffs[j] * coeffs[k - j];
            }
            coeffs[k] = -acc / a0;
        }
        Jet { coeffs }
    }

    /// exp(f) by the series ODE (exp f)' = f'·exp f.
    pub fn exp(&self) -> Jet {
        let n = self.order();
        let mut coeffs = vec![0.0; n + 1];
        coeffs[0] = self.coeffs[0].exp();
        for k in 1..=n {
            // k·b_k = Σ_{j=1..k} j·a_j·b_{k−j}
            let mut acc = 0.0;
            for j in 1..=k {
                acc += (j as f64) * self.coeffs[j] * coeffs[k - j];
            }
            coeffs[k] = acc / k as f64;
        }
        Jet { coeffs }
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// C^∞ bump building block Φ(s) = exp(−1/s) for s > 0, zero otherwise,
/// with all derivatives at the evaluation point.
pub fn phi_jet(s: f64, order: usize) -> Jet {
    if s <= 0.0 {
        return Jet::constant(0.0, order);
    }
    let x = Jet::variable(s, order);
    x.recip().scale(-1.0).exp()
}

/// Smooth switch f(s) = Φ(s)/(Φ(s)+Φ(1−s)): 0 for s ≤ 0, 1 for s ≥ 1, with
/// all derivatives vanishing at both endpoints.
pub fn smooth_switch_jet(s: f64, order: usize) -> Jet {
    if s <= 0.0 {
        return Jet::constant(0.0, order);
    }
    if s >= 1.0 {
        return Jet::constant(1.0, order);
    }
    let phi = phi_jet(s, order);
    // Φ(1−s) via composition: inner derivative −1 flips odd coefficients.
    let mut phi_m = phi_jet(1.0 - s, order);
    for (k, c) in phi_m.coeffs.iter_mut().enumerate() {
        if k % 2 == 1 {
            *c = -*c;
        }
    }
    phi.mul(&phi.add(&phi_m).recip())
}
